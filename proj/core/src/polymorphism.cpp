#include "pvcsp/polymorphism.hpp"

#include <algorithm>

#include "pvcsp/errors.hpp"

namespace pvcsp {

int Minion::index_of(const NaryFunction& f) const {
  auto it = std::lower_bound(fns.begin(), fns.end(), f);
  if (it == fns.end() || !(*it == f)) return -1;
  return static_cast<int>(it - fns.begin());
}

NaryFunction function_minor(const FnSpace& fs, const NaryFunction& f,
                            const std::vector<int>& pi, int new_arity) {
  return fs.minor(f, pi, new_arity);
}

bool is_polymorphism(const NaryFunction& f, const ValuedStructure& a,
                     const ValuedStructure& b, const Limits& lim) {
  if (a.sig().symbols.size() != b.sig().symbols.size())
    throw ContractError("is_polymorphism across different signatures");
  FnSpace fs(a.dom(), b.dom(), f.arity);
  fs.validate(f);
  bool ok = true;
  for_each_mat(a, f.arity, lim.max_mat_pairs,
               [&](const RelationMatrixPair& pair) {
                 if (!ok) return;
                 Tuple out = apply_rows(fs, f, pair, a.sig());
                 if (!b.value(pair.symbol, out).finite()) ok = false;
               });
  return ok;
}

namespace {

/// One relation-matrix constraint prepared for the backtracking search:
/// per row, the sort and the row's rank in (A_t)^N; checked once its last
/// cell (in assignment order) is set.
struct MatConstraint {
  int symbol;
  std::vector<std::pair<int, std::int64_t>> rows;  // (sort, row rank)
};

}  // namespace

Minion enumerate_polymorphisms(const ValuedStructure& a,
                               const ValuedStructure& b, int arity,
                               const Limits& lim) {
  if (arity < 1) throw ConfigError("polymorphism arity must be positive");
  FnSpace fs(a.dom(), b.dom(), arity);
  std::uint64_t bound = fs.count_all();
  if (bound > lim.max_minion_size)
    throw ResourceLimitError("function space has " + std::to_string(bound) +
                             " candidates, above the minion size limit of " +
                             std::to_string(lim.max_minion_size));

  const int n_sorts = a.dom().sort_count();
  std::vector<int> cell_offset(n_sorts + 1, 0);
  for (int t = 0; t < n_sorts; ++t)
    cell_offset[t + 1] = cell_offset[t] + static_cast<int>(fs.inputs(t));
  const int n_cells = cell_offset[n_sorts];

  // Feasible-rank sets of B's relations, for constant-time membership.
  std::vector<std::vector<std::int64_t>> b_feas(b.sig().symbols.size());
  for (int sym = 0; sym < static_cast<int>(b.sig().symbols.size()); ++sym)
    for (const Tuple& t : b.feas(sym))
      b_feas[sym].push_back(b.interp(sym).space.rank(t));

  // Bucket each constraint at the last cell it reads.
  std::vector<MatConstraint> constraints;
  std::vector<std::vector<int>> bucket(n_cells);
  for_each_mat(a, arity, lim.max_mat_pairs, [&](const RelationMatrixPair& p) {
    MatConstraint c{p.symbol, {}};
    int trigger = -1;
    for (int z = 0; z < p.n_rows(); ++z) {
      int t = a.sig().symbols[p.symbol].arity[z].sort;
      std::int64_t r = fs.rank_row(t, p.row(z));
      c.rows.emplace_back(t, r);
      trigger = std::max(trigger, cell_offset[t] + static_cast<int>(r));
    }
    bucket[trigger].push_back(static_cast<int>(constraints.size()));
    constraints.push_back(std::move(c));
  });

  NaryFunction f{arity, {}};
  f.tables.resize(n_sorts);
  for (int t = 0; t < n_sorts; ++t) f.tables[t].resize(fs.inputs(t));

  Minion out{arity, {}};
  Tuple tup;
  auto satisfied = [&](int ci) {
    const MatConstraint& c = constraints[ci];
    tup.clear();
    for (const auto& [t, r] : c.rows) tup.push_back(f.tables[t][r]);
    std::int64_t rank = b.interp(c.symbol).space.rank(tup);
    const auto& ranks = b_feas[c.symbol];
    return std::binary_search(ranks.begin(), ranks.end(), rank);
  };

  // Iterative backtracking: choice[c] indexes b.of_sort at each cell.
  std::vector<int> choice(n_cells, -1);
  auto sort_of_cell = [&](int c) {
    int t = 0;
    while (cell_offset[t + 1] <= c) ++t;
    return t;
  };
  int c = 0;
  while (c >= 0) {
    if (c == n_cells) {
      out.fns.push_back(f);
      if (out.fns.size() > lim.max_minion_size)
        throw ResourceLimitError("minion size limit exceeded");
      --c;
      continue;
    }
    int t = sort_of_cell(c);
    const auto& pool = b.dom().of_sort(t);
    int next = choice[c] + 1;
    if (next == static_cast<int>(pool.size())) {
      choice[c] = -1;
      --c;
      continue;
    }
    choice[c] = next;
    f.tables[t][c - cell_offset[t]] = pool[next];
    bool ok = true;
    for (int ci : bucket[c])
      if (!satisfied(ci)) {
        ok = false;
        break;
      }
    if (ok) ++c;
  }
  return out;
}

const NaryFunction& MinionHomTable::image(const NaryFunction& f) const {
  if (f.arity < 1 || f.arity > k)
    throw ContractError("function arity outside table bound");
  auto it = maps[f.arity - 1].find(f);
  if (it == maps[f.arity - 1].end())
    throw ContractError("function missing from homomorphism table");
  return it->second;
}

bool MinionHomTable::has(const NaryFunction& f) const {
  return f.arity >= 1 && f.arity <= k &&
         maps[f.arity - 1].find(f) != maps[f.arity - 1].end();
}

void for_each_map(int n, int m,
                  const std::function<void(const std::vector<int>&)>& fn) {
  if (m < 1) return;
  std::vector<int> pi(n, 0);
  for (;;) {
    fn(pi);
    int i = n - 1;
    while (i >= 0 && pi[i] + 1 == m) pi[i--] = 0;
    if (i < 0) return;
    ++pi[i];
  }
}

bool verify_minion_hom_table(const MinionHomTable& table, std::string* why) {
  auto fail = [&](const std::string& msg) {
    if (why) *why = msg;
    return false;
  };
  if (table.k < 1) return fail("arity bound must be at least 1");
  if (static_cast<int>(table.maps.size()) != table.k)
    return fail("table must cover every arity up to its bound");
  for (int n = 1; n <= table.k; ++n) {
    FnSpace src(table.src_dom, table.src_cod, n);
    FnSpace tgt(table.tgt_dom, table.tgt_cod, n);
    for (const auto& [f, img] : table.maps[n - 1]) {
      src.validate(f);
      tgt.validate(img);
      if (f.arity != n || img.arity != n)
        return fail("arity mismatch inside table level " + std::to_string(n));
    }
  }
  for (int n = 1; n <= table.k; ++n) {
    FnSpace src(table.src_dom, table.src_cod, n);
    FnSpace tgt(table.tgt_dom, table.tgt_cod, n);
    for (const auto& [f, img] : table.maps[n - 1]) {
      for (int m = 1; m <= table.k; ++m) {
        bool bad = false;
        std::string msg;
        for_each_map(n, m, [&](const std::vector<int>& pi) {
          if (bad) return;
          NaryFunction fm = src.minor(f, pi, m);
          if (!table.has(fm)) {
            bad = true;
            msg = "table domain is not minor-closed at arity " +
                  std::to_string(m);
            return;
          }
          if (!(table.image(fm) == tgt.minor(img, pi, m))) {
            bad = true;
            msg = "minor preservation fails for an arity " +
                  std::to_string(n) + " -> " + std::to_string(m) + " map";
          }
        });
        if (bad) return fail(msg);
      }
    }
  }
  return true;
}

}  // namespace pvcsp
