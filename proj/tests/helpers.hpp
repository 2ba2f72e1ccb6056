#pragma once

#include <memory>
#include <string>
#include <vector>

#include "pvcsp/formula.hpp"
#include "pvcsp/structure.hpp"
#include "pvcsp/zoo.hpp"

namespace testutil {

using namespace pvcsp;

inline ValuedTemplate lin2_crisp() { return builtin_template("3lin2-crisp"); }

inline ValuedTemplate lin2_valued(const Rat& c, const Rat& s) {
  ZooParams p;
  p.rats["c"] = c;
  p.rats["s"] = s;
  return builtin_template("3lin2", p);
}

/// Ternary parity pair valued over {-inf, 1}: each symbol is worth 1 on its
/// satisfying triples and infeasible elsewhere, with the given thresholds.
inline ValuedTemplate lin2_sat(const Rat& c, const Rat& s) {
  auto sig = std::make_shared<Signature>();
  sig->sorts = {"x"};
  for (int i = 0; i < 2; ++i) {
    Symbol sym;
    sym.id = "phi" + std::to_string(i);
    for (int z = 0; z < 3; ++z)
      sym.arity.push_back({"z" + std::to_string(z), 0});
    sig->symbols.push_back(sym);
  }
  SortedSet dom({{"0", 0}, {"1", 0}}, 1);
  std::vector<std::vector<Ext>> tables(2);
  for (int i = 0; i < 2; ++i)
    for (int r = 0; r < 8; ++r) {
      const int parity = ((r >> 2) ^ (r >> 1) ^ r) & 1;
      tables[i].push_back(parity == i ? Ext{Rat(1)} : Ext::neg_infinity());
    }
  ValuedStructure both(sig, dom, tables);
  ValuedTemplate tmpl;
  tmpl.A = both;
  tmpl.B = std::move(both);
  tmpl.c = c;
  tmpl.s = s;
  tmpl.validate();
  return tmpl;
}

inline ValuedTemplate clique(int k) {
  ZooParams p;
  p.ints["k"] = k;
  return builtin_template("clique", p);
}

/// A Boolean formula over a ternary-parity template: `vars` single-sort
/// variable names, atoms as (weight, symbol index, arg positions).
inline PayoffFormula parity_formula(
    const ValuedTemplate& tmpl, const std::vector<std::string>& vars,
    const std::vector<std::tuple<Rat, int, std::vector<int>>>& atoms) {
  PayoffFormula phi;
  phi.sig = tmpl.A.sig_ptr();
  std::vector<std::pair<std::string, int>> elems;
  for (const std::string& v : vars) elems.emplace_back(v, 0);
  phi.vars = SortedSet(std::move(elems), 1);
  for (const auto& [w, sym, args] : atoms) phi.atoms.push_back({w, sym, args});
  phi.validate();
  return phi;
}

/// A one-sorted structure over elements {e0..e_{n-1}} with the given
/// symbols; `tables` in rank order.
inline ValuedStructure one_sorted(
    int n, const std::vector<std::pair<std::string, int>>& symbols,
    const std::vector<std::vector<Ext>>& tables) {
  auto sig = std::make_shared<Signature>();
  sig->sorts = {"x"};
  for (const auto& [id, arity] : symbols) {
    Symbol sym;
    sym.id = id;
    for (int z = 0; z < arity; ++z)
      sym.arity.push_back({"z" + std::to_string(z), 0});
    sig->symbols.push_back(sym);
  }
  std::vector<std::pair<std::string, int>> elems;
  for (int e = 0; e < n; ++e) elems.emplace_back("e" + std::to_string(e), 0);
  return ValuedStructure(sig, SortedSet(std::move(elems), 1), tables);
}

inline Ext fin(const Rat& r) { return Ext{r}; }
inline Ext ninf() { return Ext::neg_infinity(); }

}  // namespace testutil
