#include "pvcsp/structure.hpp"

#include "pvcsp/errors.hpp"

namespace pvcsp {

ValuedStructure::ValuedStructure(std::shared_ptr<const Signature> sig,
                                 SortedSet dom,
                                 std::vector<std::vector<Ext>> tables)
    : sig_(std::move(sig)), dom_(std::move(dom)) {
  sig_->validate();
  if (tables.size() != sig_->symbols.size())
    throw ConfigError("one table per symbol expected");
  bool any_finite = false;
  interps_.reserve(tables.size());
  feas_.resize(tables.size());
  for (int k = 0; k < static_cast<int>(tables.size()); ++k) {
    TupleSpace space(dom_, arity_sorts(sig_->symbols[k]));
    if (static_cast<std::int64_t>(tables[k].size()) != space.total())
      throw ConfigError("table size mismatch for symbol " +
                        sig_->symbols[k].id);
    Tuple t = space.first();
    for (std::int64_t r = 0; r < space.total(); ++r) {
      const Ext& v = tables[k][r];
      if (v.finite()) {
        feas_[k].push_back(t);
        if (!any_finite || v.value() > max_finite_) {
          max_finite_ = v.value();
          any_finite = true;
        }
      }
      space.next(t);
    }
    if (feas_[k].empty())
      throw ConfigError("relation " + sig_->symbols[k].id +
                        " has empty feasible set");
    interps_.push_back(Interp{std::move(space), std::move(tables[k])});
  }
}

bool ValuedStructure::crisp() const {
  for (const auto& in : interps_)
    for (const auto& v : in.table)
      if (v.finite() && v.value() != 0) return false;
  return true;
}

ValuedStructure feasibility_structure(const ValuedStructure& a) {
  std::vector<std::vector<Ext>> tables;
  tables.reserve(a.sig().symbols.size());
  for (int k = 0; k < static_cast<int>(a.sig().symbols.size()); ++k) {
    std::vector<Ext> tab;
    tab.reserve(a.interp(k).table.size());
    for (const Ext& v : a.interp(k).table)
      tab.push_back(v.finite() ? Ext(Rat(0)) : Ext::neg_infinity());
    tables.push_back(std::move(tab));
  }
  return ValuedStructure(a.sig_ptr(), a.dom(), std::move(tables));
}

std::vector<int> RelationMatrixPair::row(int z) const {
  std::vector<int> r;
  r.reserve(columns.size());
  for (const auto& col : columns) r.push_back(col[z]);
  return r;
}

RelationMatrixPair canonical_matrix(const ValuedStructure& a, int sym) {
  return RelationMatrixPair{sym, a.feas(sym)};
}

void for_each_mat(const ValuedStructure& a, int n_cols, std::uint64_t max_pairs,
                  const std::function<void(const RelationMatrixPair&)>& fn) {
  if (n_cols < 1) throw ConfigError("matrix enumeration needs a nonempty arity");
  std::uint64_t count = 0;
  for (int sym = 0; sym < static_cast<int>(a.sig().symbols.size()); ++sym) {
    std::uint64_t term = 1;
    for (int i = 0; i < n_cols; ++i) {
      term *= static_cast<std::uint64_t>(a.feas(sym).size());
      if (term > max_pairs || count + term > max_pairs)
        throw ResourceLimitError(
            "matrix pair enumeration needs more than " +
            std::to_string(max_pairs) + " pairs (symbol " +
            a.sig().symbols[sym].id + " alone contributes " +
            std::to_string(a.feas(sym).size()) + "^" + std::to_string(n_cols) +
            ")");
    }
    count += term;
  }
  for (int sym = 0; sym < static_cast<int>(a.sig().symbols.size()); ++sym) {
    const auto& pool = a.feas(sym);
    RelationMatrixPair pair{sym, std::vector<Tuple>(
                                     static_cast<std::size_t>(n_cols), pool[0])};
    std::vector<int> choice(static_cast<std::size_t>(n_cols), 0);
    for (;;) {
      fn(pair);
      int n = n_cols - 1;
      while (n >= 0 && choice[n] + 1 == static_cast<int>(pool.size())) {
        choice[n] = 0;
        pair.columns[n] = pool[0];
        --n;
      }
      if (n < 0) break;
      ++choice[n];
      pair.columns[n] = pool[choice[n]];
    }
  }
}

std::vector<RelationMatrixPair> enumerate_mat(const ValuedStructure& a,
                                              int n_cols,
                                              std::uint64_t max_pairs) {
  std::vector<RelationMatrixPair> out;
  for_each_mat(a, n_cols, max_pairs,
               [&](const RelationMatrixPair& p) { out.push_back(p); });
  return out;
}

void ValuedTemplate::validate() const {
  if (A.sig().sorts != B.sig().sorts)
    throw ConfigError("template structures disagree on sorts");
  if (A.sig().symbols.size() != B.sig().symbols.size())
    throw ConfigError("template structures disagree on symbols");
  for (std::size_t k = 0; k < A.sig().symbols.size(); ++k) {
    const auto& sa = A.sig().symbols[k];
    const auto& sb = B.sig().symbols[k];
    if (sa.id != sb.id || sa.arity.size() != sb.arity.size())
      throw ConfigError("template structures disagree on symbol " + sa.id);
    for (std::size_t z = 0; z < sa.arity.size(); ++z)
      if (sa.arity[z].sort != sb.arity[z].sort)
        throw ConfigError("template structures disagree on symbol " + sa.id);
  }
  if (kind == Kind::ConstantFactor && kappa <= 0)
    throw ConfigError("constant-factor slope must be positive");
}

}  // namespace pvcsp
