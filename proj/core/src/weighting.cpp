#include "pvcsp/weighting.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "pvcsp/errors.hpp"

namespace pvcsp {

void Distribution::validate(int carrier_size) const {
  Rat sum = 0;
  int prev = -1;
  for (const auto& [key, p] : entries) {
    if (key <= prev) throw ConfigError("distribution keys must be increasing");
    if (key < 0 || key >= carrier_size)
      throw ConfigError("distribution key out of carrier range");
    if (p <= 0) throw ConfigError("stored probabilities must be positive");
    sum += p;
    prev = key;
  }
  if (sum != 1) throw ConfigError("probabilities must sum to exactly 1");
}

Rat Distribution::prob(int key) const {
  auto it = std::lower_bound(
      entries.begin(), entries.end(), key,
      [](const std::pair<int, Rat>& e, int k) { return e.first < k; });
  if (it == entries.end() || it->first != key) return Rat(0);
  return it->second;
}

Distribution Distribution::point_mass(int key) {
  return Distribution{{{key, Rat(1)}}};
}

Rat Distribution::expect(const std::vector<Rat>& table) const {
  Rat e = 0;
  for (const auto& [key, p] : entries) e += p * table[key];
  return e;
}

void Weighting::validate(const ValuedStructure& a, const ValuedStructure& b,
                         const Limits& lim) const {
  if (arity < 1) throw ConfigError("weighting arity must be positive");
  in.validate(arity);
  out.validate(static_cast<int>(support.size()));
  if (!std::is_sorted(support.begin(), support.end()))
    throw ConfigError("weighting support must be sorted");
  if (std::adjacent_find(support.begin(), support.end()) != support.end())
    throw ConfigError("weighting support must not repeat functions");
  for (const auto& f : support) {
    if (f.arity != arity) throw ConfigError("support function arity mismatch");
    if (!is_polymorphism(f, a, b, lim))
      throw ConfigError(
          "weighting support contains a non-polymorphism of the feasibility "
          "template");
  }
}

std::pair<Rat, Rat> payoff_point(const Weighting& w,
                                 const RelationMatrixPair& pair,
                                 const ValuedTemplate& tmpl) {
  const ValuedStructure& a = tmpl.A;
  const ValuedStructure& b = tmpl.B;
  Rat x = 0;
  for (const auto& [n, p] : w.in.entries) {
    Ext v = a.value(pair.symbol, pair.columns[n]);
    if (!v.finite()) throw ContractError("infeasible column in payoff point");
    x += p * v.value();
  }
  FnSpace fs(a.dom(), b.dom(), w.arity);
  Rat y = 0;
  for (const auto& [fi, p] : w.out.entries) {
    Tuple t = apply_rows(fs, w.support[fi], pair, a.sig());
    Ext v = b.value(pair.symbol, t);
    if (!v.finite())
      throw ContractError("infeasible output tuple in payoff point");
    y += p * v.value();
  }
  return {x, y};
}

bool is_kappa_polymorphism(const Weighting& w, const Rat& kappa,
                           const ValuedTemplate& tmpl, const Limits& lim) {
  if (kappa < 0) throw ConfigError("slope must be nonnegative");
  bool ok = true;
  for_each_mat(tmpl.A, w.arity, lim.max_mat_pairs,
               [&](const RelationMatrixPair& pair) {
                 if (!ok) return;
                 auto [x, y] = payoff_point(w, pair, tmpl);
                 if (tmpl.kind == ValuedTemplate::Kind::ConstantFactor) {
                   if (y < kappa * x) ok = false;
                 } else {
                   if (y - tmpl.s < kappa * (x - tmpl.c)) ok = false;
                 }
               });
  return ok;
}

std::optional<Rat> polymorphism_slope(
    const std::vector<std::pair<Rat, Rat>>& points, const Rat& c,
    const Rat& s) {
  for (const auto& [x, y] : points)
    if (x >= c && y < s) return std::nullopt;
  Rat kappa = 0;
  for (const auto& [x, y] : points)
    if (x < c && y < s) {
      Rat cand = (y - s) / (x - c);
      if (cand > kappa) kappa = std::move(cand);
    }
  for (const auto& [x, y] : points)
    if (x >= c && y - s < kappa * (x - c)) return std::nullopt;
  return kappa;
}

std::optional<Plurimorphism> plurimorphism_check(
    const std::vector<Weighting>& family, const ValuedTemplate& tmpl,
    const Limits& lim) {
  if (tmpl.kind != ValuedTemplate::Kind::Standard)
    throw ConfigError("plurimorphism check requires a standard template");
  if (family.empty()) throw ConfigError("empty weighting family");
  std::vector<std::pair<Rat, Rat>> points;
  for (const auto& w : family) {
    w.validate(tmpl.A, tmpl.B, lim);
    for_each_mat(tmpl.A, w.arity, lim.max_mat_pairs,
                 [&](const RelationMatrixPair& pair) {
                   points.push_back(payoff_point(w, pair, tmpl));
                 });
  }
  auto kappa = polymorphism_slope(points, tmpl.c, tmpl.s);
  if (!kappa) return std::nullopt;
  return Plurimorphism{family, *kappa};
}

Weighting weighting_minor(const Weighting& w, const std::vector<int>& pi,
                          int new_arity, const SortedSet& a,
                          const SortedSet& b) {
  if (static_cast<int>(pi.size()) != w.arity)
    throw ConfigError("minor map length must equal weighting arity");
  Weighting out;
  out.arity = new_arity;
  std::map<int, Rat> in_probs;
  for (const auto& [n, p] : w.in.entries) in_probs[pi[n]] += p;
  for (const auto& [m, p] : in_probs) out.in.entries.emplace_back(m, p);

  FnSpace fs(a, b, w.arity);
  std::map<NaryFunction, Rat> out_probs;
  for (const auto& [fi, p] : w.out.entries)
    out_probs[fs.minor(w.support[fi], pi, new_arity)] += p;
  int idx = 0;
  for (const auto& [f, p] : out_probs) {
    out.support.push_back(f);
    out.out.entries.emplace_back(idx++, p);
  }
  return out;
}

SupportMinion support_minion(const std::vector<Weighting>& family,
                             const SortedSet& a, const SortedSet& b, int k) {
  if (k < 1) throw ConfigError("arity bound must be at least 1");
  int max_arity = k;
  for (const auto& w : family) max_arity = std::max(max_arity, w.arity);
  std::vector<std::set<NaryFunction>> base(max_arity);
  for (const auto& w : family)
    for (const auto& [fi, p] : w.out.entries)
      base[w.arity - 1].insert(w.support[fi]);
  std::vector<std::set<NaryFunction>> closed = base;
  for (int n = 1; n <= max_arity; ++n) {
    if (base[n - 1].empty()) continue;
    FnSpace fs(a, b, n);
    for (const auto& f : base[n - 1])
      for (int m = 1; m <= k; ++m)
        for_each_map(n, m, [&](const std::vector<int>& pi) {
          closed[m - 1].insert(fs.minor(f, pi, m));
        });
  }
  SupportMinion result;
  result.levels.resize(max_arity);
  result.added_by_closure.resize(max_arity);
  for (int n = 1; n <= max_arity; ++n) {
    result.levels[n - 1].arity = n;
    result.added_by_closure[n - 1].arity = n;
    for (const auto& f : closed[n - 1]) {
      result.levels[n - 1].fns.push_back(f);
      if (!base[n - 1].count(f))
        result.added_by_closure[n - 1].fns.push_back(f);
    }
  }
  return result;
}

Rat expect_in(const Weighting& w, const std::vector<Rat>& alpha) {
  return w.in.expect(alpha);
}

Rat expect_out(const Weighting& w, const Minion& minion,
               const std::vector<Rat>& beta) {
  Rat e = 0;
  for (const auto& [fi, p] : w.out.entries) {
    int idx = minion.index_of(w.support[fi]);
    if (idx < 0)
      throw ContractError("weighting support function not in the minion");
    e += p * beta[idx];
  }
  return e;
}

}  // namespace pvcsp
