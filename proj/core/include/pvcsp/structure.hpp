#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "pvcsp/rational.hpp"
#include "pvcsp/sorted.hpp"

namespace pvcsp {

/// Interpretation of one symbol: a dense table of extended-rational values
/// over the symbol's tuple space, in rank order.
struct Interp {
  TupleSpace space;
  std::vector<Ext> table;
};

/// A valued structure: a multi-sorted domain plus one valued relation per
/// signature symbol. The feasible set of every relation must be nonempty.
class ValuedStructure {
 public:
  ValuedStructure() = default;
  ValuedStructure(std::shared_ptr<const Signature> sig, SortedSet dom,
                  std::vector<std::vector<Ext>> tables);

  const Signature& sig() const { return *sig_; }
  std::shared_ptr<const Signature> sig_ptr() const { return sig_; }
  const SortedSet& dom() const { return dom_; }
  const Interp& interp(int sym) const { return interps_[sym]; }

  Ext value(int sym, const Tuple& t) const {
    return interps_[sym].table[interps_[sym].space.rank(t)];
  }

  /// Feasible tuples of symbol `sym`, in rank order.
  const std::vector<Tuple>& feas(int sym) const { return feas_[sym]; }

  /// Largest finite value over all relations.
  const Rat& max_finite() const { return max_finite_; }
  /// True iff every finite value of every relation is <= c.
  bool leq(const Rat& c) const { return max_finite_ <= c; }
  /// True iff every value lies in {-inf, 0}.
  bool crisp() const;

 private:
  std::shared_ptr<const Signature> sig_;
  SortedSet dom_;
  std::vector<Interp> interps_;
  std::vector<std::vector<Tuple>> feas_;
  Rat max_finite_;
};

/// The feasibility structure of A: same domain, each value mapped to 0 if
/// finite and -inf otherwise.
ValuedStructure feasibility_structure(const ValuedStructure& a);

/// A symbol paired with a matrix over A: `columns` holds N tuples, each a
/// feasible tuple of the symbol's relation in A. Row z of the matrix is the
/// N-vector of z-th entries of the columns.
struct RelationMatrixPair {
  int symbol = 0;
  std::vector<Tuple> columns;

  int n_cols() const { return static_cast<int>(columns.size()); }
  /// Row z as an N-vector of domain elements (all of the same sort).
  std::vector<int> row(int z) const;
  int n_rows() const { return columns.empty() ? 0 : static_cast<int>(columns[0].size()); }
};

/// The canonical matrix of symbol `sym` over A: one column per feasible
/// tuple of sym in A, in rank order; entry (z, a) = a(z).
RelationMatrixPair canonical_matrix(const ValuedStructure& a, int sym);

/// Streams all pairs (symbol, matrix with n_cols columns drawn from the
/// symbol's feasible set), symbols in declaration order, column choices in
/// row-major rank order. Throws ResourceLimitError past `max_pairs`.
void for_each_mat(const ValuedStructure& a, int n_cols, std::uint64_t max_pairs,
                  const std::function<void(const RelationMatrixPair&)>& fn);

/// Materialized version of for_each_mat.
std::vector<RelationMatrixPair> enumerate_mat(const ValuedStructure& a,
                                              int n_cols,
                                              std::uint64_t max_pairs);

/// A promise template: two structures over one signature plus thresholds.
/// The constant-factor variant carries a slope instead of (c, s).
struct ValuedTemplate {
  enum class Kind { Standard, ConstantFactor };

  ValuedStructure A;
  ValuedStructure B;
  Kind kind = Kind::Standard;
  Rat c;      // Standard only
  Rat s;      // Standard only
  Rat kappa;  // ConstantFactor only

  void validate() const;
};

}  // namespace pvcsp
