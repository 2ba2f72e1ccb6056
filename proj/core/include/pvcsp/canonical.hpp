#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pvcsp/formula.hpp"
#include "pvcsp/lp.hpp"
#include "pvcsp/weighting.hpp"

namespace pvcsp {

/// Target payoffs for one canonical-formula family: alpha over the arity's
/// coordinates and beta over the arity's feasibility polymorphisms, dense in
/// enumeration order.
struct CanonicalFamily {
  int arity = 0;
  std::vector<Rat> alpha;
  std::vector<Rat> beta;
};

/// The four systems solvable by `synthesize`.
///  - Baby: one family; formula payoffs tied to (c, s).
///  - Thresholds: one family; inequalities relaxed to (c', s').
///  - Improved: any number of families with shared scaling gamma and
///    free-sign per-family shifts whose sums must be nonnegative.
///  - ConstantFactor: one family, unshifted payoffs, slope kappa an input.
enum class CanonicalMode { Baby, Thresholds, Improved, ConstantFactor };

/// Baby/Thresholds/Improved require a Standard template; ConstantFactor
/// requires a constant-factor template and takes its slope from it.
struct CanonicalRequest {
  ValuedTemplate tmpl;
  CanonicalMode mode = CanonicalMode::Baby;
  std::vector<CanonicalFamily> families;
  Rat c_prime = 0;  // Thresholds only
  Rat s_prime = 0;  // Thresholds only
};

/// A synthesized formula with its mode-specific shifts.
struct SynthFormula {
  PayoffFormula formula;
  Rat delta_in = 0;   // Improved
  Rat delta_out = 0;  // Improved
  Rat delta = 0;      // ConstantFactor
};

/// Either formulas (one per family) or a dual witness (one weighting per
/// family plus a slope). The assembled system and raw solver output are
/// always included for inspection.
struct CanonicalResult {
  bool is_formulas = false;
  std::vector<SynthFormula> formulas;
  Rat gamma = 0;  // Improved scaling factor
  Rat kappa = 0;  // witness slope (derived, or the request's in CF mode)
  std::vector<Weighting> omegas;
  LPSystem lp;
  LPResult lp_result;
};

/// Layout of the canonical variable set over dom^arity: one variable per
/// sort t and per rank of a row in (dom_t)^arity, named by the row's element
/// ids joined with commas. Row ranks match FnSpace's row ranking.
struct CanonicalLayout {
  SortedSet vars;
  int arity = 0;
  std::vector<std::int64_t> rows;  // per sort: |dom_t|^arity
  std::vector<int> offset;         // per sort: index of its first variable

  int index(int t, std::int64_t rank) const {
    return offset[t] + static_cast<int>(rank);
  }
};
CanonicalLayout canonical_layout(const SortedSet& dom, int arity);
SortedSet canonical_vars(const SortedSet& dom, int arity);

/// Assignment (element index per canonical variable) induced by an N-ary
/// function into `cod`: variable (t, r) takes the value f_t(r).
Tuple assignment_of_function(const SortedSet& dom, int arity,
                             const NaryFunction& f);
/// Assignment induced by the n-th projection: variable (t, r) takes the
/// n-th coordinate of its own row.
Tuple assignment_of_projection(const SortedSet& dom, int arity, int n);

/// The crisp canonical conjunction over dom(a)^arity: one weight-1 atom per
/// relation-matrix pair of a at that arity, in enumeration order.
PayoffFormula build_crisp_canonical(const ValuedStructure& a, int arity,
                                    const Limits& lim = {});

/// Extends a formula over the canonical variables of dom(a)^arity so that it
/// carries an atom for every relation-matrix pair (zero weight where the
/// input had none); weights of matching atoms are preserved.
PayoffFormula completed_formula(const PayoffFormula& pruned,
                                const ValuedStructure& a, int arity,
                                const Limits& lim = {});

/// Solves the requested system exactly. Feasible systems yield complete
/// canonical formulas (an atom for every relation-matrix pair); infeasible
/// ones yield a dual witness decoded from the Farkas certificate. Every
/// result is re-verified before being returned.
CanonicalResult synthesize(const CanonicalRequest& req, const Limits& lim = {});

/// Independently re-derives every claim of a result: formula inequalities
/// (projection and polymorphism payoffs, shift-sum signs, feasibility-set
/// equality) or witness validity (kappa-polymorphism property plus the
/// violated inequality). On failure *why (if given) explains.
bool verify_canonical_result(const CanonicalRequest& req,
                             const CanonicalResult& res,
                             const Limits& lim = {},
                             std::string* why = nullptr);

/// Verdict of the arity-1 template check: valid templates come with a
/// witnessing unary weighting and its slope; invalid ones with a
/// counter-formula whose identity payoff meets the completeness bound while
/// every unary map stays below the soundness bound.
struct CheckTemplateResult {
  bool valid = false;
  Rat kappa = 0;
  std::optional<Weighting> witness;
  std::optional<PayoffFormula> counter;
  LPSystem lp;
  LPResult lp_result;
};

/// Decides whether (A, B, c, s) is a promise template, i.e. whether a unary
/// polymorphism exists, by solving the Baby system with alpha = c and
/// beta = s - 1. Standard templates only.
CheckTemplateResult check_template(const ValuedTemplate& tmpl,
                                   const Limits& lim = {});

}  // namespace pvcsp
