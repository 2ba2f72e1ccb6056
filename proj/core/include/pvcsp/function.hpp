#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <vector>

#include "pvcsp/structure.hpp"

namespace pvcsp {

/// An N-ary function from one multi-sorted set to another with the same
/// sorts: one component per sort, acting coordinatewise on same-sort rows.
/// tables[t] maps the rank of a row in (A_t)^N to a global B element index.
struct NaryFunction {
  int arity = 0;
  std::vector<std::vector<int>> tables;

  auto operator<=>(const NaryFunction&) const = default;
};

/// Ranking and application helpers for N-ary functions between two fixed
/// sorted sets. Row ranks are big-endian over pos_in_sort values.
class FnSpace {
 public:
  FnSpace(const SortedSet& a, const SortedSet& b, int arity);

  int arity() const { return arity_; }
  const SortedSet& dom() const { return *a_; }
  const SortedSet& cod() const { return *b_; }
  /// Number of rows in (A_t)^N.
  std::int64_t inputs(int t) const { return inputs_[t]; }

  /// Rank of a same-sort row of global A element indices.
  std::int64_t rank_row(int t, const std::vector<int>& row) const;
  std::vector<int> unrank_row(int t, std::int64_t r) const;

  int apply(const NaryFunction& f, int t, const std::vector<int>& row) const {
    return f.tables[t][rank_row(t, row)];
  }

  NaryFunction projection(int n) const;
  /// True iff f is proj_n for some n; returns n or -1.
  int as_projection(const NaryFunction& f) const;

  /// The minor f^(pi): an new_arity-ary function with
  /// f^(pi)(a) = f(a o pi), where pi maps f's coordinates to new ones.
  NaryFunction minor(const NaryFunction& f, const std::vector<int>& pi,
                     int new_arity) const;

  /// Total number of N-ary functions, saturating at uint64 max.
  std::uint64_t count_all() const;
  /// Streams every N-ary function in table-lexicographic order; throws
  /// ResourceLimitError past `max_functions`.
  void for_each_function(std::uint64_t max_functions,
                         const std::function<void(const NaryFunction&)>& fn) const;

  /// Sanity-check table shape and codomain sorts.
  void validate(const NaryFunction& f) const;

 private:
  const SortedSet* a_;
  const SortedSet* b_;
  int arity_;
  std::vector<std::int64_t> inputs_;
};

/// Applies f to the rows of a matrix over A, producing a tuple over B:
/// entry z is f evaluated (at the sort of coordinate z) on row z.
Tuple apply_rows(const FnSpace& fs, const NaryFunction& f,
                 const RelationMatrixPair& pair, const Signature& sig);

}  // namespace pvcsp
