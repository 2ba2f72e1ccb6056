#pragma once

#include <memory>
#include <vector>

#include "pvcsp/structure.hpp"

namespace pvcsp {

/// One weighted atom w * sym(args) of a payoff formula. Args are indices
/// into the formula's variable set.
struct Atom {
  Rat w;
  int symbol = 0;
  std::vector<int> args;

  friend bool operator==(const Atom& a, const Atom& b) {
    return a.w == b.w && a.symbol == b.symbol && a.args == b.args;
  }
};

/// A payoff formula: a sorted variable set and a nonnegative-weighted sum of
/// atoms. A zero-weight atom still constrains feasibility: an infeasible
/// atom value forces the whole formula to -inf regardless of its weight.
struct PayoffFormula {
  std::shared_ptr<const Signature> sig;
  SortedSet vars;
  std::vector<Atom> atoms;

  /// Sum of atom weights.
  Rat weight() const;
  /// Checks sorts of args against symbol arities and weights >= 0.
  void validate() const;
};

/// Value of the formula under a sort-respecting assignment (element index
/// per variable). Any atom evaluating to -inf makes the result -inf.
Ext evaluate_formula(const PayoffFormula& phi, const ValuedStructure& str,
                     const Tuple& assignment);

/// Rescales all weights by 1/weight() so the total weight is exactly 1.
/// Throws ConfigError when the total weight is zero.
PayoffFormula normalize_formula(const PayoffFormula& phi);

/// Canonical atom order: atoms sorted by (symbol, args), duplicates merged
/// by summing weights. Zero-weight atoms are kept (they gate feasibility).
PayoffFormula merge_atoms(const PayoffFormula& phi);

/// Maximum of the formula over all assignments, with one maximizing
/// assignment. Enumerates the full assignment space; throws
/// ResourceLimitError past `max_assignments`.
struct MaxResult {
  Ext value;
  Tuple argmax;
};
MaxResult brute_force_max(const PayoffFormula& phi, const ValuedStructure& str,
                          std::uint64_t max_assignments);

/// Tuple space of sort-respecting assignments to the formula's variables.
TupleSpace assignment_space(const PayoffFormula& phi,
                            const ValuedStructure& str);

}  // namespace pvcsp
