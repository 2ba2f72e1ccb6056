#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pvcsp/formula.hpp"
#include "pvcsp/polymorphism.hpp"
#include "pvcsp/weighting.hpp"

namespace pvcsp {

/// A total function {-1,1}^N -> {-1,1} with N = {0, ..., arity-1}. Inputs
/// are ranked big-endian with coordinate 0 most significant; digit 0 encodes
/// +1 and digit 1 encodes -1. A rank is a *representative* iff the value at
/// coordinate 0 is +1, i.e. iff rank < 2^(arity-1); the representative of a
/// rank is itself or its negation, whichever qualifies.
struct PmFunction {
  int arity = 0;
  std::vector<int> table;  // size 2^arity, entries in {-1, +1}

  void validate() const;
};

/// The +-1 value of coordinate `coord` in the input of the given rank.
int pm_coord_value(int arity, std::int64_t rank, int coord);
/// Rank of the negated input (every coordinate flipped).
std::int64_t pm_negate(int arity, std::int64_t rank);
/// True iff the rank's input has value +1 at coordinate 0.
bool pm_is_representative(int arity, std::int64_t rank);
/// Rank of the representative of the given rank's input.
std::int64_t pm_representative(int arity, std::int64_t rank);

/// proj_coord as a PmFunction.
PmFunction pm_projection(int arity, int coord);
/// The character chi_I as a PmFunction (I given as a coordinate bitmask).
PmFunction pm_chi(int arity, std::uint32_t subset);
/// chi_I evaluated at an input rank: +1 or -1.
int chi_sign(int arity, std::uint32_t subset, std::int64_t rank);

/// Table-lexicographic index of f among all functions of its arity (the
/// enumeration order of FnSpace::for_each_function, and the sort order of
/// Minion), and its inverse.
std::uint64_t pm_index(const PmFunction& f);
PmFunction pm_from_index(int arity, std::uint64_t index);

/// Conversions to the NaryFunction encoding over the two-element domain of
/// hastad_template (element 0 = "1", element 1 = "-1").
NaryFunction pm_to_nary(const PmFunction& f);
PmFunction pm_from_nary(const NaryFunction& f);

/// Fourier coefficients of a PmFunction, indexed by coordinate subsets
/// I given as bitmasks (bit n set iff coordinate n is in I).
struct FourierExpansion {
  int arity = 0;
  std::vector<Rat> coef;  // size 2^arity, coef[I] = <f, chi_I>

  const Rat& at(std::uint32_t subset) const { return coef[subset]; }
};

/// Exact Fourier expansion: coef[I] = 2^(-arity) * sum_a f(a) chi_I(a).
/// Throws ResourceLimitError when arity exceeds lim.fourier_arity.
FourierExpansion fourier_expand(const PmFunction& f, const Limits& lim = {});

/// The folding of f: agrees with f on representatives and is negated on
/// their negations. Folded functions satisfy f(-a) = -f(a) for all a.
PmFunction fold(const PmFunction& f);
bool is_folded(const PmFunction& f);

/// The coordinate distribution of f: fold, expand, then give coordinate d
/// the mass sum over subsets I containing d of coef[I]^2 / |I|. A genuine
/// probability distribution for every f of positive arity.
Distribution lambda_dist(const PmFunction& f, const Limits& lim = {});

/// The odd-preimage image of a subset under pi: coordinate n' is in the
/// result iff pi^{-1}(n') meets the subset in an odd number of coordinates.
std::uint32_t oddim(const std::vector<int>& pi, std::uint32_t subset);

/// Parameters of the long-code verification over disjoint coordinate sets
/// D = {0,...,d_size-1} and E = {0,...,e_size-1}.
struct HastadConfig {
  int d_size = 0;
  int e_size = 0;
  Rat delta;

  Rat c() const { return Rat(1) - 2 * delta; }
  Rat s() const { return 2 * delta; }
  Rat epsilon() const { return 16 * delta * delta * delta; }
  Rat gamma(const Rat& r) const { return 16 * delta * delta * (r - delta); }

  /// Checks 0 < delta <= 1/4 and positive sizes; throws ConfigError.
  void validate() const;
};

/// The rescaled two-symbol template on the domain {1, -1}: ternary symbols
/// "phi-1" and "phi1" with value i * a1 * a2 * a3 for i = -1 resp. +1, both
/// sides equal, thresholds c = 1 - 2 delta and s = 2 delta.
ValuedTemplate hastad_template(const Rat& delta);

/// The label-cover template with thresholds (1, epsilon): sorts "d" and
/// "e" with d_size resp. e_size elements, one binary symbol "pi.<images>"
/// per map pi: D -> E (odometer order), value 1 where pi(u) = v and 0
/// elsewhere, both sides equal.
ValuedTemplate glc_template(int d_size, int e_size, const Rat& epsilon);

/// The long-code test formula for a map pi: D -> E, over one variable per
/// representative of {-1,1}^D (named "D.<signs>", first) and {-1,1}^E
/// (named "E.<signs>"), with exact aggregated weights summing to 1. The
/// formula carries the signature of hastad_template. Throws
/// ResourceLimitError when 2^(e_size + 2 d_size) exceeds
/// lim.max_assignments.
PayoffFormula build_phi_pi(const HastadConfig& cfg, const std::vector<int>& pi,
                           const Limits& lim = {});

/// The assignment to build_phi_pi's variables induced by a function pair:
/// each representative variable takes the element index of the function
/// value at its rank.
Tuple phi_assignment(const HastadConfig& cfg, const PmFunction& f_d,
                     const PmFunction& f_e);

/// Value of a long-code test formula at a function pair, over the given
/// interpretation side (finite for the hastad structures).
Rat evaluate_phi(const PayoffFormula& phi, const ValuedStructure& str,
                 const HastadConfig& cfg, const PmFunction& f_d,
                 const PmFunction& f_e);

/// The closed form sum over subsets K of D of
///   p̂_K^2 * q̂_{oddim(K)} * (1 - 2 delta)^|K|,   p = fold(f_d), q = fold(f_e);
/// equal to the value of build_phi_pi at the same pair.
Rat phi_closed_form(const HastadConfig& cfg, const std::vector<int>& pi,
                    const PmFunction& f_d, const PmFunction& f_e,
                    const Limits& lim = {});

/// Result of the exhaustive verification of the two long-code reduction
/// conditions at a configuration.
struct GlcReport {
  bool ok = false;
  int maps_checked = 0;
  std::int64_t pairs_checked = 0;
  bool condition1_ok = true;
  bool condition2_ok = true;
  /// Minimum over maps and coordinates of the formula value at
  /// (proj_d, proj_{pi(d)}); condition 1 requires >= c.
  Rat condition1_min;
  /// Minimum over maps and function pairs of
  ///   E_{d,e} [pi(d) = e] - gamma(closed form);  condition 2 requires >= 0.
  Rat condition2_min_margin;
  int violation_count = 0;
  std::vector<std::string> violations;  // capped at kMaxGlcViolations
};

inline constexpr int kMaxGlcViolations = 100;

/// Exhaustively verifies, for every map pi: D -> E, condition 1 on the
/// built formula at projection pairs and condition 2 via the closed form and
/// the coordinate distributions, over all function pairs.
GlcReport verify_glc_conditions(const HastadConfig& cfg,
                                const Limits& lim = {});

/// Builds the tabulated minion homomorphism from the function minion on
/// {-1,1} to the polymorphisms of glc_template, given choice tables
/// lambda_d (indexed by pm_index over d_size-ary functions, values in D)
/// and lambda_e (likewise for E): an N-ary f maps to the pair (p_D, p_E)
/// with p_D(t) = lambda_d[index of the minor of f along t] and similarly
/// p_E, for every arity N <= k.
MinionHomTable xi_from_lambda(const HastadConfig& cfg,
                              const std::vector<int>& lambda_d,
                              const std::vector<int>& lambda_e, int k,
                              const Limits& lim = {});

/// The factorized expectation E_{f ~ out} sum_{d'} P_f(d') Q_f(pi(d'))
/// where P_f is the coordinate distribution of the minor of f along
/// d_tuple and Q_f the one of the minor along e_tuple; the right-hand side
/// of the simplified homomorphism condition.
Rat glc_pair_expectation(const HastadConfig& cfg, const std::vector<int>& pi,
                         const Weighting& omega,
                         const std::vector<int>& d_tuple,
                         const std::vector<int>& e_tuple,
                         const Limits& lim = {});

}  // namespace pvcsp
