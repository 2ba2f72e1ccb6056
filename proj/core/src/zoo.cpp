#include "pvcsp/zoo.hpp"

#include <algorithm>
#include <bit>
#include <memory>
#include <numeric>
#include <set>
#include <utility>

#include "pvcsp/fourier.hpp"

namespace pvcsp {

namespace {

class Params {
 public:
  Params(const std::string& name, const ZooParams& p) : name_(name), p_(p) {}

  int req_int(const std::string& key) {
    used_ints_.insert(key);
    auto it = p_.ints.find(key);
    if (it == p_.ints.end())
      throw ConfigError("template '" + name_ + "' requires integer parameter '" + key + "'");
    return it->second;
  }
  Rat req_rat(const std::string& key) {
    used_rats_.insert(key);
    auto it = p_.rats.find(key);
    if (it == p_.rats.end())
      throw ConfigError("template '" + name_ + "' requires rational parameter '" + key + "'");
    return it->second;
  }
  Rat opt_rat(const std::string& key, const Rat& fallback) {
    used_rats_.insert(key);
    auto it = p_.rats.find(key);
    return it == p_.rats.end() ? fallback : it->second;
  }

  void finish() const {
    for (const auto& [key, value] : p_.ints)
      if (!used_ints_.count(key))
        throw ConfigError("template '" + name_ + "' does not take integer parameter '" + key + "'");
    for (const auto& [key, value] : p_.rats)
      if (!used_rats_.count(key))
        throw ConfigError("template '" + name_ + "' does not take rational parameter '" + key + "'");
  }

 private:
  std::string name_;
  const ZooParams& p_;
  std::set<std::string> used_ints_, used_rats_;
};

ValuedTemplate standard(ValuedStructure a, ValuedStructure b, Rat c, Rat s) {
  ValuedTemplate tmpl;
  tmpl.A = std::move(a);
  tmpl.B = std::move(b);
  tmpl.kind = ValuedTemplate::Kind::Standard;
  tmpl.c = std::move(c);
  tmpl.s = std::move(s);
  tmpl.validate();
  return tmpl;
}

/// The k-ary parity pair over {0,1}: symbols "phi0" and "phi1" with k
/// same-sort coordinates; valued tables are {0,1}, crisp ones {-inf,0}.
ValuedStructure lin2_structure(int k, bool crisp) {
  if (k < 1 || k > 20) throw ConfigError("parity arity must lie in [1, 20]");
  auto sig = std::make_shared<Signature>();
  sig->sorts = {"x"};
  for (int i = 0; i < 2; ++i) {
    Symbol sym;
    sym.id = "phi" + std::to_string(i);
    for (int z = 0; z < k; ++z) sym.arity.push_back({"z" + std::to_string(z), 0});
    sig->symbols.push_back(std::move(sym));
  }
  sig->validate();
  SortedSet dom({{"0", 0}, {"1", 0}}, 1);
  std::vector<std::vector<Ext>> tables(2);
  for (int i = 0; i < 2; ++i)
    for (std::int64_t r = 0; r < (std::int64_t{1} << k); ++r) {
      const bool match = (std::popcount(static_cast<std::uint64_t>(r)) & 1) == i;
      if (crisp)
        tables[i].push_back(match ? Ext(Rat(0)) : Ext::neg_infinity());
      else
        tables[i].push_back(Ext(Rat(match ? 1 : 0)));
    }
  return ValuedStructure(std::move(sig), dom, tables);
}

/// K_k as a structure: one binary symbol "edge"; crisp disequality or
/// payoff 1 on edges and 0 on loops.
ValuedStructure clique_structure(int k, bool crisp) {
  if (k < 2 || k > 64) throw ConfigError("clique size must lie in [2, 64]");
  auto sig = std::make_shared<Signature>();
  sig->sorts = {"v"};
  Symbol sym;
  sym.id = "edge";
  sym.arity = {{"z0", 0}, {"z1", 0}};
  sig->symbols.push_back(std::move(sym));
  sig->validate();
  std::vector<std::pair<std::string, int>> elems;
  for (int i = 0; i < k; ++i) elems.emplace_back("v" + std::to_string(i), 0);
  SortedSet dom(std::move(elems), 1);
  std::vector<std::vector<Ext>> tables(1);
  for (int a = 0; a < k; ++a)
    for (int b = 0; b < k; ++b) {
      if (a != b)
        tables[0].push_back(Ext(Rat(crisp ? 0 : 1)));
      else
        tables[0].push_back(crisp ? Ext::neg_infinity() : Ext(Rat(0)));
    }
  return ValuedStructure(std::move(sig), dom, tables);
}

/// Two-sorted map-constraint structure: sorts "d"/"e", one binary symbol
/// "pi.<images>" per listed map, value on (u, v) determined by pi(u) = v.
ValuedStructure map_structure(int d_size, int e_size,
                              const std::vector<std::vector<int>>& maps,
                              bool crisp) {
  auto sig = std::make_shared<Signature>();
  sig->sorts = {"d", "e"};
  for (const auto& pi : maps) {
    Symbol sym;
    sym.id = "pi";
    for (int img : pi) sym.id += "." + std::to_string(img);
    sym.arity = {{"u", 0}, {"v", 1}};
    sig->symbols.push_back(std::move(sym));
  }
  sig->validate();
  std::vector<std::pair<std::string, int>> elems;
  for (int i = 0; i < d_size; ++i) elems.emplace_back("d" + std::to_string(i), 0);
  for (int i = 0; i < e_size; ++i) elems.emplace_back("e" + std::to_string(i), 1);
  SortedSet dom(std::move(elems), 2);
  std::vector<std::vector<Ext>> tables(maps.size());
  for (std::size_t m = 0; m < maps.size(); ++m)
    for (int u = 0; u < d_size; ++u)
      for (int v = 0; v < e_size; ++v) {
        const bool match = maps[m][u] == v;
        if (crisp)
          tables[m].push_back(match ? Ext(Rat(0)) : Ext::neg_infinity());
        else
          tables[m].push_back(Ext(Rat(match ? 1 : 0)));
      }
  return ValuedStructure(std::move(sig), dom, tables);
}

std::vector<std::vector<int>> all_maps(int d_size, int e_size) {
  std::uint64_t count = 1;
  for (int i = 0; i < d_size; ++i) {
    count *= static_cast<std::uint64_t>(e_size);
    if (count > (std::uint64_t{1} << 16))
      throw ConfigError("label-cover map count exceeds 65536");
  }
  std::vector<std::vector<int>> maps;
  for_each_map(d_size, e_size, [&](const std::vector<int>& pi) { maps.push_back(pi); });
  return maps;
}

std::vector<std::vector<int>> all_bijections(int d_size) {
  if (d_size > 8) throw ConfigError("unique-games domain must have at most 8 elements");
  std::vector<int> perm(d_size);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<std::vector<int>> maps;
  do {
    maps.push_back(perm);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return maps;
}

/// Unary size payoff plus a binary exclusion/covering constraint on {0,1}:
/// "phi" is a or -a, "psi" forbids one diagonal pair.
ValuedStructure subset_structure(bool negate, int forbidden) {
  auto sig = std::make_shared<Signature>();
  sig->sorts = {"x"};
  Symbol phi;
  phi.id = "phi";
  phi.arity = {{"z0", 0}};
  Symbol psi;
  psi.id = "psi";
  psi.arity = {{"z0", 0}, {"z1", 0}};
  sig->symbols.push_back(std::move(phi));
  sig->symbols.push_back(std::move(psi));
  sig->validate();
  SortedSet dom({{"0", 0}, {"1", 0}}, 1);
  std::vector<std::vector<Ext>> tables(2);
  for (int a = 0; a < 2; ++a) tables[0].push_back(Ext(Rat(negate ? -a : a)));
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) {
      if (a == forbidden && b == forbidden)
        tables[1].push_back(Ext::neg_infinity());
      else
        tables[1].push_back(Ext(Rat(0)));
    }
  return ValuedStructure(std::move(sig), dom, tables);
}

}  // namespace

std::vector<std::string> zoo_names() {
  return {"3lin2",           "3lin2-crisp", "3lin2-pm",    "clique",
          "coloring",        "glc",         "independent-set",
          "klin2",           "label-cover", "unique-games", "vertex-cover"};
}

ValuedTemplate builtin_template(const std::string& name, const ZooParams& params) {
  Params p(name, params);
  if (name == "3lin2") {
    Rat c = p.opt_rat("c", Rat(1)), s = p.opt_rat("s", Rat(1));
    p.finish();
    ValuedStructure a = lin2_structure(3, /*crisp=*/false);
    return standard(a, a, std::move(c), std::move(s));
  }
  if (name == "3lin2-crisp") {
    p.finish();
    ValuedStructure a = lin2_structure(3, /*crisp=*/true);
    return standard(a, a, 0, 0);
  }
  if (name == "3lin2-pm") {
    Rat delta = p.req_rat("delta");
    p.finish();
    return hastad_template(delta);
  }
  if (name == "clique") {
    int k = p.req_int("k");
    p.finish();
    ValuedStructure a = clique_structure(k, /*crisp=*/true);
    return standard(a, a, 0, 0);
  }
  if (name == "coloring") {
    int a_size = p.req_int("a"), b_size = p.req_int("b");
    Rat c = p.opt_rat("c", Rat(1)), s = p.opt_rat("s", Rat(1));
    p.finish();
    if (a_size > b_size)
      throw ConfigError("coloring requires a <= b");
    return standard(clique_structure(a_size, /*crisp=*/false),
                    clique_structure(b_size, /*crisp=*/false), std::move(c),
                    std::move(s));
  }
  if (name == "glc") {
    int d = p.req_int("d"), e = p.req_int("e");
    Rat c = p.opt_rat("c", Rat(1)), s = p.opt_rat("s", Rat(1));
    p.finish();
    if (d < 1 || e < 1) throw ConfigError("label-cover domains must be nonempty");
    ValuedStructure a = map_structure(d, e, all_maps(d, e), /*crisp=*/false);
    return standard(a, a, std::move(c), std::move(s));
  }
  if (name == "independent-set") {
    Rat c = p.req_rat("c");
    p.finish();
    if (c <= 0 || c > 1)
      throw ConfigError("independent-set weight bound must lie in (0, 1]");
    ValuedStructure a = subset_structure(/*negate=*/false, /*forbidden=*/1);
    return standard(a, a, c, c);
  }
  if (name == "klin2") {
    int k = p.req_int("k");
    Rat c = p.opt_rat("c", Rat(1)), s = p.opt_rat("s", Rat(1));
    p.finish();
    ValuedStructure a = lin2_structure(k, /*crisp=*/false);
    return standard(a, a, std::move(c), std::move(s));
  }
  if (name == "label-cover") {
    int d = p.req_int("d"), e = p.req_int("e");
    p.finish();
    if (d < 1 || e < 1) throw ConfigError("label-cover domains must be nonempty");
    ValuedStructure a = map_structure(d, e, all_maps(d, e), /*crisp=*/true);
    return standard(a, a, 0, 0);
  }
  if (name == "unique-games") {
    int d = p.req_int("d");
    Rat c = p.opt_rat("c", Rat(1)), s = p.opt_rat("s", Rat(1));
    p.finish();
    if (d < 1) throw ConfigError("unique-games domain must be nonempty");
    ValuedStructure a = map_structure(d, d, all_bijections(d), /*crisp=*/false);
    return standard(a, a, std::move(c), std::move(s));
  }
  if (name == "vertex-cover") {
    Rat c = p.req_rat("c");
    p.finish();
    if (c <= 0 || c > 1)
      throw ConfigError("vertex-cover weight bound must lie in (0, 1]");
    ValuedStructure a = subset_structure(/*negate=*/true, /*forbidden=*/0);
    return standard(a, a, -c, -c);
  }
  throw ConfigError("unknown built-in template '" + name + "'");
}

}  // namespace pvcsp
