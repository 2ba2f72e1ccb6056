#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "pvcsp/polymorphism.hpp"

namespace pvcsp {

/// A sparse probability distribution over integer keys (indices into some
/// externally defined carrier). Stored entries are positive and sum to 1.
struct Distribution {
  std::vector<std::pair<int, Rat>> entries;  // sorted by key

  void validate(int carrier_size) const;
  Rat prob(int key) const;
  static Distribution point_mass(int key);
  /// Expectation of a dense table over the carrier.
  Rat expect(const std::vector<Rat>& table) const;
};

/// A weighting: an input distribution over the coordinates of an arity and
/// an output distribution over feasibility polymorphisms of that arity.
struct Weighting {
  int arity = 0;
  Distribution in;                    // keys: coordinates 0..arity-1
  std::vector<NaryFunction> support;  // sorted, unique
  Distribution out;                   // keys: indices into support

  /// Checks distribution invariants and that every support function is a
  /// feasibility polymorphism of (a, b).
  void validate(const ValuedStructure& a, const ValuedStructure& b,
                const Limits& lim = {}) const;
};

/// A family of weightings sharing one witness slope.
struct Plurimorphism {
  std::vector<Weighting> members;
  Rat kappa;
};

/// The payoff point of a weighting against one relation-matrix pair:
/// (E_{n~in} phi^A(col_n M), E_{f~out} phi^B(f rows M)). Throws
/// ContractError on an infeasible column or output tuple.
std::pair<Rat, Rat> payoff_point(const Weighting& w,
                                 const RelationMatrixPair& pair,
                                 const ValuedTemplate& tmpl);

/// True iff every payoff point (x, y) over Mat(A, arity) satisfies
/// y - s >= kappa (x - c); for constant-factor templates, y >= kappa x.
bool is_kappa_polymorphism(const Weighting& w, const Rat& kappa,
                           const ValuedTemplate& tmpl, const Limits& lim = {});

/// Minimal kappa >= 0 placing all points in {y - s >= kappa (x - c)}, when
/// one exists: the maximum slope over points with x < c, y < s, validated
/// against the points with x >= c. Absent iff some point lies in
/// {x >= c, y < s} or the validation fails.
std::optional<Rat> polymorphism_slope(
    const std::vector<std::pair<Rat, Rat>>& points, const Rat& c,
    const Rat& s);

/// Collects every payoff point of every family member over its Mat and
/// searches for a shared slope. Standard templates only.
std::optional<Plurimorphism> plurimorphism_check(
    const std::vector<Weighting>& family, const ValuedTemplate& tmpl,
    const Limits& lim = {});

/// The minor of a weighting along pi: pushforward of the input distribution
/// and of the output distribution under f -> f^(pi).
Weighting weighting_minor(const Weighting& w, const std::vector<int>& pi,
                          int new_arity, const SortedSet& a,
                          const SortedSet& b);

/// Union of the out-distribution supports per arity, closed under minors up
/// to arity bound k; functions added by the closure (not present in any
/// support) are listed separately.
struct SupportMinion {
  std::vector<Minion> levels;            // levels[n-1]: arity n
  std::vector<Minion> added_by_closure;  // same layout
};
SupportMinion support_minion(const std::vector<Weighting>& family,
                             const SortedSet& a, const SortedSet& b, int k);

/// E_{n~in} alpha(n) for a dense alpha over coordinates.
Rat expect_in(const Weighting& w, const std::vector<Rat>& alpha);
/// E_{f~out} beta(f) for a dense beta over the minion's function order.
/// Throws ContractError when a support function is not in the minion.
Rat expect_out(const Weighting& w, const Minion& minion,
               const std::vector<Rat>& beta);

}  // namespace pvcsp
