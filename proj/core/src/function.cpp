#include "pvcsp/function.hpp"

#include "pvcsp/errors.hpp"

namespace pvcsp {

FnSpace::FnSpace(const SortedSet& a, const SortedSet& b, int arity)
    : a_(&a), b_(&b), arity_(arity) {
  if (a.sort_count() != b.sort_count())
    throw ConfigError("function spaces need matching sort counts");
  if (arity < 0) throw ConfigError("negative arity");
  inputs_.reserve(a.sort_count());
  for (int t = 0; t < a.sort_count(); ++t) {
    std::int64_t radix = a.of_sort(t).size();
    std::int64_t n = 1;
    for (int i = 0; i < arity; ++i) {
      if (radix != 0 && n > (std::int64_t{1} << 62) / radix)
        throw ResourceLimitError("function input space too large");
      n *= radix;
    }
    inputs_.push_back(n);
  }
}

std::int64_t FnSpace::rank_row(int t, const std::vector<int>& row) const {
  std::int64_t radix = a_->of_sort(t).size();
  std::int64_t r = 0;
  for (int v : row) r = r * radix + a_->pos_in_sort(v);
  return r;
}

std::vector<int> FnSpace::unrank_row(int t, std::int64_t r) const {
  const auto& pool = a_->of_sort(t);
  std::vector<int> row(arity_);
  for (int n = arity_ - 1; n >= 0; --n) {
    row[n] = pool[r % pool.size()];
    r /= static_cast<std::int64_t>(pool.size());
  }
  return row;
}

NaryFunction FnSpace::projection(int n) const {
  if (n < 0 || n >= arity_) throw ConfigError("projection index out of range");
  NaryFunction f{arity_, {}};
  f.tables.resize(a_->sort_count());
  for (int t = 0; t < a_->sort_count(); ++t) {
    f.tables[t].resize(inputs_[t]);
    for (std::int64_t r = 0; r < inputs_[t]; ++r) {
      std::vector<int> row = unrank_row(t, r);
      int pos = a_->pos_in_sort(row[n]);
      if (pos >= static_cast<int>(b_->of_sort(t).size()))
        throw ConfigError("projection target sort too small");
      f.tables[t][r] = b_->of_sort(t)[pos];
    }
  }
  return f;
}

int FnSpace::as_projection(const NaryFunction& f) const {
  for (int n = 0; n < arity_; ++n)
    if (f == projection(n)) return n;
  return -1;
}

NaryFunction FnSpace::minor(const NaryFunction& f, const std::vector<int>& pi,
                            int new_arity) const {
  if (static_cast<int>(pi.size()) != arity_)
    throw ConfigError("minor map length must equal arity");
  for (int v : pi)
    if (v < 0 || v >= new_arity) throw ConfigError("minor map value out of range");
  NaryFunction g{new_arity, {}};
  g.tables.resize(a_->sort_count());
  std::vector<int> comp(arity_);
  for (int t = 0; t < a_->sort_count(); ++t) {
    const auto& pool = a_->of_sort(t);
    std::int64_t radix = pool.size();
    std::int64_t total = 1;
    for (int i = 0; i < new_arity; ++i) {
      if (radix != 0 && total > (std::int64_t{1} << 62) / radix)
        throw ResourceLimitError("minor input space too large");
      total *= radix;
    }
    g.tables[t].resize(total);
    std::vector<int> row(new_arity, pool.empty() ? 0 : pool[0]);
    for (std::int64_t r = 0; r < total; ++r) {
      for (int n = 0; n < arity_; ++n) comp[n] = row[pi[n]];
      g.tables[t][r] = f.tables[t][rank_row(t, comp)];
      // odometer on row, last coordinate fastest
      for (int z = new_arity - 1; z >= 0; --z) {
        int p = a_->pos_in_sort(row[z]) + 1;
        if (p < static_cast<int>(pool.size())) {
          row[z] = pool[p];
          break;
        }
        row[z] = pool[0];
      }
    }
  }
  return g;
}

std::uint64_t FnSpace::count_all() const {
  std::uint64_t total = 1;
  for (int t = 0; t < a_->sort_count(); ++t) {
    std::uint64_t base = b_->of_sort(t).size();
    for (std::int64_t i = 0; i < inputs_[t]; ++i) {
      if (base != 0 && total > UINT64_MAX / base) return UINT64_MAX;
      total *= base;
    }
  }
  return total;
}

void FnSpace::for_each_function(
    std::uint64_t max_functions,
    const std::function<void(const NaryFunction&)>& fn) const {
  std::uint64_t n = count_all();
  if (n > max_functions)
    throw ResourceLimitError("function space exceeds limit");
  NaryFunction f{arity_, {}};
  f.tables.resize(a_->sort_count());
  for (int t = 0; t < a_->sort_count(); ++t)
    f.tables[t].assign(inputs_[t], b_->of_sort(t).empty() ? 0 : b_->of_sort(t)[0]);
  for (;;) {
    fn(f);
    // odometer over all table cells, last cell of last sort fastest
    int t = a_->sort_count() - 1;
    std::int64_t r = t >= 0 ? inputs_[t] - 1 : -1;
    for (;;) {
      if (t < 0) return;
      if (r < 0) {
        --t;
        if (t >= 0) r = inputs_[t] - 1;
        continue;
      }
      const auto& pool = b_->of_sort(t);
      int p = b_->pos_in_sort(f.tables[t][r]) + 1;
      if (p < static_cast<int>(pool.size())) {
        f.tables[t][r] = pool[p];
        break;
      }
      f.tables[t][r] = pool[0];
      --r;
    }
  }
}

void FnSpace::validate(const NaryFunction& f) const {
  if (f.arity != arity_) throw ConfigError("function arity mismatch");
  if (static_cast<int>(f.tables.size()) != a_->sort_count())
    throw ConfigError("function table count mismatch");
  for (int t = 0; t < a_->sort_count(); ++t) {
    if (static_cast<std::int64_t>(f.tables[t].size()) != inputs_[t])
      throw ConfigError("function table size mismatch");
    for (int v : f.tables[t]) {
      if (v < 0 || v >= b_->size() || b_->sort_of(v) != t)
        throw ConfigError("function value has wrong sort");
    }
  }
}

Tuple apply_rows(const FnSpace& fs, const NaryFunction& f,
                 const RelationMatrixPair& pair, const Signature& sig) {
  const auto& arity = sig.symbols[pair.symbol].arity;
  Tuple out(arity.size());
  for (std::size_t z = 0; z < arity.size(); ++z)
    out[z] = fs.apply(f, arity[z].sort, pair.row(static_cast<int>(z)));
  return out;
}

}  // namespace pvcsp
