#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "pvcsp/errors.hpp"

namespace pvcsp {

/// One named, sorted coordinate of a symbol's arity.
struct Coord {
  std::string name;
  int sort = 0;  // index into Signature::sorts
};

/// A relation symbol with an ordered list of named coordinates.
struct Symbol {
  std::string id;
  std::vector<Coord> arity;
};

/// A multi-sorted signature: sort names plus symbols. Declaration order is
/// canonical everywhere; every enumeration in the library derives from it.
struct Signature {
  std::vector<std::string> sorts;
  std::vector<Symbol> symbols;

  int sort_index(const std::string& name) const;
  int symbol_index(const std::string& id) const;

  /// Checks: sorts nonempty, names unique, symbol ids unique, coordinate
  /// sorts in range, coordinate names unique per symbol.
  void validate() const;
};

/// A finite multi-sorted set: elements in declaration order, each with a
/// sort. Element ids are unique across all sorts.
class SortedSet {
 public:
  SortedSet() = default;
  /// `elements` = (id, sort index) in declaration order.
  SortedSet(std::vector<std::pair<std::string, int>> elements, int sort_count);

  int size() const { return static_cast<int>(elems_.size()); }
  const std::string& id(int e) const { return elems_[e].first; }
  int sort_of(int e) const { return elems_[e].second; }
  /// Position of element e within its sort's declaration-order list.
  int pos_in_sort(int e) const { return pos_[e]; }
  /// Element indices of sort t in declaration order.
  const std::vector<int>& of_sort(int t) const { return by_sort_[t]; }
  int sort_count() const { return static_cast<int>(by_sort_.size()); }
  /// Index of the element with the given id, or -1.
  int index_of(const std::string& id) const;

  friend bool operator==(const SortedSet& a, const SortedSet& b) {
    return a.elems_ == b.elems_ && a.by_sort_.size() == b.by_sort_.size();
  }

 private:
  std::vector<std::pair<std::string, int>> elems_;
  std::vector<int> pos_;
  std::vector<std::vector<int>> by_sort_;
  std::map<std::string, int> index_;
};

/// A tuple over an arity: element indices (into some SortedSet), one per
/// coordinate, in coordinate order.
using Tuple = std::vector<int>;

/// Rank/unrank helper for the tuple space prod_z A_{sort(z)} of an arity over
/// a SortedSet. Ranks are big-endian mixed radix: the first coordinate is the
/// most significant, so rank order equals lexicographic order by coordinate.
class TupleSpace {
 public:
  TupleSpace() = default;
  /// `sorts` = the arity's coordinate sorts, in order.
  TupleSpace(const SortedSet& dom, const std::vector<int>& sorts);

  std::int64_t total() const { return total_; }
  int width() const { return static_cast<int>(sorts_.size()); }

  std::int64_t rank(const Tuple& t) const;
  Tuple unrank(std::int64_t r) const;

  /// Odometer step in rank order; returns false after the last tuple.
  bool next(Tuple& t) const;
  Tuple first() const;

  /// True iff every entry is an element of the right sort.
  bool sort_respecting(const Tuple& t) const;

 private:
  const SortedSet* dom_ = nullptr;
  std::vector<int> sorts_;
  std::vector<std::int64_t> stride_;
  std::int64_t total_ = 1;
};

/// The arity coordinate sorts of a symbol (convenience).
std::vector<int> arity_sorts(const Symbol& sym);

/// True iff the two signatures agree on sorts, symbol ids, and coordinate
/// sorts (coordinate names may differ).
bool same_signature(const Signature& x, const Signature& y);

}  // namespace pvcsp
