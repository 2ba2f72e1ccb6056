#include "pvcsp/sorted.hpp"

#include <set>

namespace pvcsp {

int Signature::sort_index(const std::string& name) const {
  for (int i = 0; i < static_cast<int>(sorts.size()); ++i)
    if (sorts[i] == name) return i;
  return -1;
}

int Signature::symbol_index(const std::string& id) const {
  for (int i = 0; i < static_cast<int>(symbols.size()); ++i)
    if (symbols[i].id == id) return i;
  return -1;
}

void Signature::validate() const {
  if (sorts.empty()) throw ConfigError("signature has no sorts");
  std::set<std::string> seen_sorts(sorts.begin(), sorts.end());
  if (seen_sorts.size() != sorts.size())
    throw ConfigError("duplicate sort name in signature");
  std::set<std::string> seen_syms;
  for (const auto& sym : symbols) {
    if (!seen_syms.insert(sym.id).second)
      throw ConfigError("duplicate symbol id: " + sym.id);
    std::set<std::string> seen_coords;
    for (const auto& c : sym.arity) {
      if (c.sort < 0 || c.sort >= static_cast<int>(sorts.size()))
        throw ConfigError("coordinate sort out of range in symbol " + sym.id);
      if (!seen_coords.insert(c.name).second)
        throw ConfigError("duplicate coordinate name in symbol " + sym.id);
    }
  }
}

SortedSet::SortedSet(std::vector<std::pair<std::string, int>> elements,
                     int sort_count)
    : elems_(std::move(elements)), by_sort_(sort_count) {
  pos_.reserve(elems_.size());
  for (int e = 0; e < static_cast<int>(elems_.size()); ++e) {
    int t = elems_[e].second;
    if (t < 0 || t >= sort_count)
      throw ConfigError("element sort out of range: " + elems_[e].first);
    if (!index_.emplace(elems_[e].first, e).second)
      throw ConfigError("duplicate element id: " + elems_[e].first);
    pos_.push_back(static_cast<int>(by_sort_[t].size()));
    by_sort_[t].push_back(e);
  }
}

int SortedSet::index_of(const std::string& id) const {
  auto it = index_.find(id);
  return it == index_.end() ? -1 : it->second;
}

TupleSpace::TupleSpace(const SortedSet& dom, const std::vector<int>& sorts)
    : dom_(&dom), sorts_(sorts), stride_(sorts.size()) {
  // Big-endian strides: stride of the last coordinate is 1.
  for (int z = static_cast<int>(sorts_.size()) - 1; z >= 0; --z) {
    std::int64_t radix = dom.of_sort(sorts_[z]).size();
    if (radix == 0)
      throw ConfigError("tuple space over an empty sort");
    stride_[z] = total_;
    if (total_ > (std::int64_t{1} << 62) / radix)
      throw ResourceLimitError("tuple space too large");
    total_ *= radix;
  }
}

std::int64_t TupleSpace::rank(const Tuple& t) const {
  std::int64_t r = 0;
  for (int z = 0; z < width(); ++z)
    r += stride_[z] * dom_->pos_in_sort(t[z]);
  return r;
}

Tuple TupleSpace::unrank(std::int64_t r) const {
  Tuple t(width());
  for (int z = 0; z < width(); ++z) {
    const auto& pool = dom_->of_sort(sorts_[z]);
    t[z] = pool[r / stride_[z] % pool.size()];
  }
  return t;
}

bool TupleSpace::next(Tuple& t) const {
  for (int z = width() - 1; z >= 0; --z) {
    const auto& pool = dom_->of_sort(sorts_[z]);
    int p = dom_->pos_in_sort(t[z]) + 1;
    if (p < static_cast<int>(pool.size())) {
      t[z] = pool[p];
      return true;
    }
    t[z] = pool[0];
  }
  return false;
}

Tuple TupleSpace::first() const {
  Tuple t(width());
  for (int z = 0; z < width(); ++z) t[z] = dom_->of_sort(sorts_[z])[0];
  return t;
}

bool TupleSpace::sort_respecting(const Tuple& t) const {
  if (static_cast<int>(t.size()) != width()) return false;
  for (int z = 0; z < width(); ++z) {
    if (t[z] < 0 || t[z] >= dom_->size()) return false;
    if (dom_->sort_of(t[z]) != sorts_[z]) return false;
  }
  return true;
}

std::vector<int> arity_sorts(const Symbol& sym) {
  std::vector<int> s;
  s.reserve(sym.arity.size());
  for (const auto& c : sym.arity) s.push_back(c.sort);
  return s;
}

bool same_signature(const Signature& x, const Signature& y) {
  if (x.sorts != y.sorts || x.symbols.size() != y.symbols.size())
    return false;
  for (std::size_t i = 0; i < x.symbols.size(); ++i) {
    if (x.symbols[i].id != y.symbols[i].id) return false;
    if (arity_sorts(x.symbols[i]) != arity_sorts(y.symbols[i])) return false;
  }
  return true;
}

}  // namespace pvcsp
