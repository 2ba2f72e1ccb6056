#include "pvcsp/reduction.hpp"

#include <algorithm>
#include <set>

#include "pvcsp/errors.hpp"

namespace pvcsp {

namespace {

constexpr std::int64_t kPpCellBound = 16;

std::string join_ids(const SortedSet& dom, const Tuple& t) {
  std::string s;
  for (std::size_t z = 0; z < t.size(); ++z) {
    if (z) s += ',';
    s += dom.id(t[z]);
  }
  return s;
}

/// Union-find over cell ids with minimum-root convention, so representative
/// choice is independent of union order.
struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) {
    for (int i = 0; i < n; ++i) parent[i] = i;
  }
  int find(int x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }
  void unite(int x, int y) {
    x = find(x);
    y = find(y);
    if (x == y) return;
    if (x < y)
      parent[y] = x;
    else
      parent[x] = y;
  }
};

/// One block of a glued formula: a named copy of the canonical variable set
/// of some arity, carrying atoms whose args index that block's layout.
struct Block {
  std::string name;
  int arity = 0;
  std::vector<Atom> atoms;
};

/// Glues per-variable blocks into one formula: variables are canonical-set
/// copies identified along the minor conditions, atoms keep block order.
PayoffFormula glue_blocks(const std::vector<Block>& blocks,
                          const MCInstance& mc, const ValuedStructure& a) {
  const SortedSet& dom = a.dom();
  const int n_u = static_cast<int>(mc.u_names.size());

  std::map<int, CanonicalLayout> layouts;
  auto layout_of = [&](int arity) -> const CanonicalLayout& {
    auto it = layouts.find(arity);
    if (it == layouts.end())
      it = layouts.emplace(arity, canonical_layout(dom, arity)).first;
    return it->second;
  };

  std::vector<int> off(blocks.size() + 1, 0);
  for (std::size_t b = 0; b < blocks.size(); ++b)
    off[b + 1] = off[b] + layout_of(blocks[b].arity).vars.size();
  UnionFind uf(off.back());

  for (const MinorCondition& cond : mc.conditions) {
    const CanonicalLayout& lu = layout_of(blocks[cond.u].arity);
    const CanonicalLayout& lv = layout_of(blocks[n_u + cond.v].arity);
    const int nu_ar = blocks[cond.u].arity;
    const int nv_ar = blocks[n_u + cond.v].arity;
    for (int t = 0; t < dom.sort_count(); ++t) {
      const std::int64_t base =
          static_cast<std::int64_t>(dom.of_sort(t).size());
      std::vector<int> digits(nv_ar, 0);
      bool more = base > 0;
      while (more) {
        std::int64_t rank_v = 0;
        for (int n = 0; n < nv_ar; ++n) rank_v = rank_v * base + digits[n];
        std::int64_t rank_u = 0;
        for (int n = 0; n < nu_ar; ++n)
          rank_u = rank_u * base + digits[cond.pi[n]];
        uf.unite(off[cond.u] + lu.index(t, rank_u),
                 off[n_u + cond.v] + lv.index(t, rank_v));
        more = false;
        for (int n = nv_ar - 1; n >= 0; --n) {
          if (++digits[n] < base) {
            more = true;
            break;
          }
          digits[n] = 0;
        }
      }
    }
  }

  std::vector<int> cell_var(off.back(), -1);
  std::vector<std::pair<std::string, int>> var_names;
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    const CanonicalLayout& lay = layout_of(blocks[b].arity);
    for (int i = 0; i < lay.vars.size(); ++i) {
      int cell = off[b] + i;
      if (uf.find(cell) != cell) continue;
      cell_var[cell] = static_cast<int>(var_names.size());
      var_names.emplace_back(blocks[b].name + "." + lay.vars.id(i),
                             lay.vars.sort_of(i));
    }
  }

  PayoffFormula out;
  out.sig = a.sig_ptr();
  out.vars = SortedSet(std::move(var_names), dom.sort_count());
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    for (const Atom& atom : blocks[b].atoms) {
      Atom glued;
      glued.w = atom.w;
      glued.symbol = atom.symbol;
      glued.args.reserve(atom.args.size());
      for (int arg : atom.args)
        glued.args.push_back(cell_var[uf.find(off[b] + arg)]);
      out.atoms.push_back(std::move(glued));
    }
  }
  return out;
}

/// Shared frame of pcsp_to_mc / pcsp_to_vmc: U-variables from atoms,
/// V-variables from formula variables, restricted-projection conditions.
MCInstance formula_skeleton(const PayoffFormula& phi,
                            const ValuedTemplate& tmpl, std::optional<int> k) {
  phi.validate();
  if (!phi.sig || !same_signature(*phi.sig, tmpl.A.sig()))
    throw ConfigError("formula signature does not match the template");
  const ValuedStructure& a = tmpl.A;
  const SortedSet& dom = a.dom();

  MCInstance mc;
  int needed = 0;
  for (std::size_t i = 0; i < phi.atoms.size(); ++i) {
    const auto& feas = a.feas(phi.atoms[i].symbol);
    needed = std::max(needed, static_cast<int>(feas.size()));
    mc.u_names.push_back("u" + std::to_string(i));
    std::vector<std::string> labels;
    labels.reserve(feas.size());
    for (const Tuple& t : feas) labels.push_back(join_ids(dom, t));
    mc.u_dom.push_back(std::move(labels));
  }
  for (int x = 0; x < phi.vars.size(); ++x) {
    const auto& elems = dom.of_sort(phi.vars.sort_of(x));
    needed = std::max(needed, static_cast<int>(elems.size()));
    mc.v_names.push_back("v." + phi.vars.id(x));
    std::vector<std::string> labels;
    labels.reserve(elems.size());
    for (int e : elems) labels.push_back(dom.id(e));
    mc.v_dom.push_back(std::move(labels));
  }
  mc.k = k.value_or(needed);
  if (mc.k < needed)
    throw ConfigError("arity bound " + std::to_string(mc.k) +
                      " is too small: this formula needs " +
                      std::to_string(needed));
  for (std::size_t i = 0; i < phi.atoms.size(); ++i) {
    const Atom& atom = phi.atoms[i];
    const auto& feas = a.feas(atom.symbol);
    for (std::size_t z = 0; z < atom.args.size(); ++z) {
      MinorCondition cond;
      cond.u = static_cast<int>(i);
      cond.v = atom.args[z];
      cond.pi.reserve(feas.size());
      for (const Tuple& t : feas)
        cond.pi.push_back(dom.pos_in_sort(t[z]));
      mc.conditions.push_back(std::move(cond));
    }
  }
  mc.validate();
  return mc;
}

void require_crisp_pair(const ValuedTemplate& tmpl) {
  tmpl.validate();
  if (!tmpl.A.crisp() || !tmpl.B.crisp())
    throw ConfigError("this reduction requires a crisp template pair");
}

/// Dense beta table over the polymorphism minion of one family, in minion
/// order — the shape canonical synthesis expects.
std::vector<Rat> dense_beta(const VMCInstance& inst, int u,
                            const Minion& minion) {
  std::vector<Rat> beta;
  beta.reserve(minion.fns.size());
  for (const NaryFunction& f : minion.fns) beta.push_back(inst.beta_of(u, f));
  return beta;
}

ReductionWorkspace::Key cache_key(const std::vector<CanonicalFamily>& fams) {
  ReductionWorkspace::Key key;
  key.reserve(fams.size());
  for (const auto& f : fams) key.emplace_back(f.arity, f.alpha, f.beta);
  return key;
}

/// Brute-force check that the supplied fallback really is a no-instance,
/// then package it as the reduction result.
VmcToPcspResult take_fallback(
    const std::optional<PayoffFormula>& fallback,
    const std::optional<Rat>& fallback_completeness,
    const ValuedTemplate& tmpl, const Limits& lim) {
  const bool cf = tmpl.kind == ValuedTemplate::Kind::ConstantFactor;
  if (!fallback)
    throw ConfigError(
        "the synthesis produced a dual witness and no fallback no-instance "
        "was supplied");
  fallback->validate();
  if (!fallback->sig || !same_signature(*fallback->sig, tmpl.A.sig()))
    throw ConfigError("fallback signature does not match the template");
  MaxResult best = brute_force_max(*fallback, tmpl.B, lim.max_assignments);
  if (cf) {
    if (!fallback_completeness)
      throw ConfigError(
          "the constant-factor fallback needs its completeness threshold");
    if (!(best.value < Rat(tmpl.kappa * *fallback_completeness)))
      throw ConfigError(
          "fallback is not a no-instance: its second-structure optimum "
          "reaches the scaled completeness threshold");
  } else {
    if (!(best.value < Rat(tmpl.s * fallback->weight())))
      throw ConfigError(
          "fallback is not a no-instance: its second-structure optimum "
          "reaches the soundness threshold");
  }
  VmcToPcspResult out;
  out.psi = *fallback;
  out.cf_completeness = fallback_completeness;
  out.used_fallback = true;
  return out;
}

}  // namespace

void MCInstance::validate() const {
  std::set<std::string> names;
  for (const auto& n : u_names)
    if (!names.insert(n).second)
      throw ConfigError("duplicate variable name: " + n);
  for (const auto& n : v_names)
    if (!names.insert(n).second)
      throw ConfigError("duplicate variable name: " + n);
  if (u_dom.size() != u_names.size() || v_dom.size() != v_names.size())
    throw ConfigError("domain list sizes must match the variable lists");
  for (const auto& d : u_dom)
    if (d.empty() || static_cast<int>(d.size()) > k)
      throw ConfigError("every domain must have between 1 and k coordinates");
  for (const auto& d : v_dom)
    if (d.empty() || static_cast<int>(d.size()) > k)
      throw ConfigError("every domain must have between 1 and k coordinates");
  for (const auto& c : conditions) {
    if (c.u < 0 || c.u >= static_cast<int>(u_names.size()) || c.v < 0 ||
        c.v >= static_cast<int>(v_names.size()))
      throw ConfigError("condition refers to an unknown variable");
    if (static_cast<int>(c.pi.size()) != u_arity(c.u))
      throw ConfigError("condition map must be total on the U-domain");
    for (int img : c.pi)
      if (img < 0 || img >= v_arity(c.v))
        throw ConfigError("condition map image out of range");
  }
}

const Rat& BetaTable::of(const NaryFunction& f) const {
  auto it = std::lower_bound(
      entries.begin(), entries.end(), f,
      [](const auto& e, const NaryFunction& g) { return e.first < g; });
  if (it != entries.end() && it->first == f) return it->second;
  return default_value;
}

void BetaTable::validate() const {
  for (std::size_t i = 1; i < entries.size(); ++i)
    if (!(entries[i - 1].first < entries[i].first))
      throw ConfigError("output payoff entries must be sorted and unique");
}

void VMCInstance::validate() const {
  mc.validate();
  if (alpha.size() != mc.u_names.size() || beta.size() != mc.u_names.size())
    throw ConfigError("payoff tables must cover exactly the U-variables");
  for (std::size_t u = 0; u < alpha.size(); ++u) {
    if (static_cast<int>(alpha[u].size()) != mc.u_arity(static_cast<int>(u)))
      throw ConfigError("input payoff table size must match the domain");
    beta[u].validate();
    for (const auto& e : beta[u].entries)
      if (e.first.arity != mc.u_arity(static_cast<int>(u)))
        throw ConfigError("output payoff entry has the wrong arity");
  }
  if (cert) {
    if (cert->weights.size() != mc.u_names.size() ||
        cert->symbols.size() != mc.u_names.size())
      throw ConfigError("certificate must cover exactly the U-variables");
  }
}

MCInstance pcsp_to_mc(const PayoffFormula& phi, const ValuedTemplate& tmpl,
                      std::optional<int> k, const Limits& lim) {
  (void)lim;
  require_crisp_pair(tmpl);
  return formula_skeleton(phi, tmpl, k);
}

PayoffFormula mc_to_pcsp(const MCInstance& inst, const ValuedTemplate& tmpl,
                         const Limits& lim) {
  require_crisp_pair(tmpl);
  inst.validate();
  std::vector<Block> blocks;
  std::map<int, std::vector<Atom>> atoms_of_arity;
  auto atoms_for = [&](int arity) -> const std::vector<Atom>& {
    auto it = atoms_of_arity.find(arity);
    if (it == atoms_of_arity.end())
      it = atoms_of_arity
               .emplace(arity, build_crisp_canonical(tmpl.A, arity, lim).atoms)
               .first;
    return it->second;
  };
  for (std::size_t u = 0; u < inst.u_names.size(); ++u)
    blocks.push_back(Block{inst.u_names[u], inst.u_arity(static_cast<int>(u)),
                           atoms_for(inst.u_arity(static_cast<int>(u)))});
  for (std::size_t v = 0; v < inst.v_names.size(); ++v)
    blocks.push_back(Block{inst.v_names[v], inst.v_arity(static_cast<int>(v)),
                           atoms_for(inst.v_arity(static_cast<int>(v)))});
  return glue_blocks(blocks, inst, tmpl.A);
}

VMCInstance pcsp_to_vmc(const PayoffFormula& phi, const ValuedTemplate& tmpl,
                        const std::optional<Rat>& cf_completeness,
                        std::optional<int> k, const Limits& lim) {
  tmpl.validate();
  const bool cf = tmpl.kind == ValuedTemplate::Kind::ConstantFactor;
  if (cf && !cf_completeness)
    throw ConfigError(
        "the constant-factor reduction needs an input completeness");
  if (!cf && cf_completeness)
    throw ConfigError(
        "an input completeness is only meaningful for constant-factor "
        "templates");

  VMCInstance out;
  out.mc = formula_skeleton(phi, tmpl, k);
  const Rat c_shift = cf ? Rat(0) : tmpl.c;
  const Rat s_shift = cf ? Rat(0) : tmpl.s;

  StarStarCert cert;
  cert.c = c_shift;
  cert.s = s_shift;
  for (const Atom& atom : phi.atoms) {
    cert.weights.push_back(atom.w);
    cert.symbols.push_back(atom.symbol);
    const auto& feas = tmpl.A.feas(atom.symbol);
    std::vector<Rat> av;
    av.reserve(feas.size());
    for (const Tuple& t : feas)
      av.push_back(atom.w * (tmpl.A.value(atom.symbol, t).value() - c_shift));
    out.alpha.push_back(std::move(av));

    const int arity = static_cast<int>(feas.size());
    Minion minion = enumerate_polymorphisms(tmpl.A, tmpl.B, arity, lim);
    RelationMatrixPair gm = canonical_matrix(tmpl.A, atom.symbol);
    FnSpace fs(tmpl.A.dom(), tmpl.B.dom(), arity);
    BetaTable bt;
    bt.entries.reserve(minion.fns.size());
    for (const NaryFunction& f : minion.fns) {
      Ext vb = tmpl.B.value(atom.symbol,
                            apply_rows(fs, f, gm, tmpl.A.sig()));
      if (!vb.finite())
        throw ContractError(
            "a feasibility polymorphism produced an infeasible output "
            "tuple");
      bt.entries.emplace_back(f, atom.w * (vb.value() - s_shift));
    }
    out.beta.push_back(std::move(bt));
  }

  // Off-support sentinel: any assignment that strays from the recorded
  // minion falls below every soundness threshold in use.
  Rat c_max = 0;
  for (const auto& bt : out.beta)
    for (const auto& e : bt.entries)
      if (e.second > c_max) c_max = e.second;
  Rat sentinel =
      -(c_max * static_cast<int>(out.beta.size()) + 1);
  for (auto& bt : out.beta) bt.default_value = sentinel;

  out.cf_completeness = cf_completeness;
  out.cert = std::move(cert);
  out.validate();
  return out;
}

bool verify_vmc_certificate(const VMCInstance& inst,
                            const ValuedTemplate& tmpl, const Limits& lim,
                            std::string* why) {
  inst.validate();
  tmpl.validate();
  if (!inst.cert) throw ConfigError("instance carries no certificate");
  const StarStarCert& cert = *inst.cert;
  auto fail = [&](const std::string& msg) {
    if (why) *why = msg;
    return false;
  };
  const bool cf = tmpl.kind == ValuedTemplate::Kind::ConstantFactor;
  if (cf ? (cert.c != 0 || cert.s != 0)
         : (cert.c != tmpl.c || cert.s != tmpl.s))
    return fail("certificate thresholds do not match the template");
  for (std::size_t u = 0; u < inst.mc.u_names.size(); ++u) {
    int sym = cert.symbols[u];
    if (sym < 0 || sym >= static_cast<int>(tmpl.A.sig().symbols.size()))
      return fail("certificate names an unknown symbol");
    const Rat& w = cert.weights[u];
    if (w < 0) return fail("certificate weight is negative");
    const auto& feas = tmpl.A.feas(sym);
    if (static_cast<int>(feas.size()) != inst.mc.u_arity(static_cast<int>(u)))
      return fail("certified domain size does not match the relation");
    for (std::size_t n = 0; n < feas.size(); ++n)
      if (inst.alpha[u][n] != w * (tmpl.A.value(sym, feas[n]).value() - cert.c))
        return fail("input payoff table mismatch at " + inst.mc.u_names[u]);
    const int arity = static_cast<int>(feas.size());
    Minion minion = enumerate_polymorphisms(tmpl.A, tmpl.B, arity, lim);
    RelationMatrixPair gm = canonical_matrix(tmpl.A, sym);
    FnSpace fs(tmpl.A.dom(), tmpl.B.dom(), arity);
    for (const NaryFunction& f : minion.fns) {
      Ext vb = tmpl.B.value(sym, apply_rows(fs, f, gm, tmpl.A.sig()));
      if (!vb.finite())
        return fail("a polymorphism produced an infeasible output tuple");
      if (inst.beta_of(static_cast<int>(u), f) !=
          w * (vb.value() - cert.s))
        return fail("output payoff table mismatch at " + inst.mc.u_names[u]);
    }
  }
  return true;
}

VmcToPcspResult vmc_to_pcsp(
    const VMCInstance& inst, const ValuedTemplate& tmpl,
    const std::optional<PayoffFormula>& fallback_no_instance,
    const std::optional<Rat>& fallback_completeness, ReductionWorkspace* ws,
    const Limits& lim) {
  inst.validate();
  tmpl.validate();
  const bool cf = tmpl.kind == ValuedTemplate::Kind::ConstantFactor;
  if (cf && !inst.cf_completeness)
    throw ConfigError(
        "the constant-factor reduction needs the instance completeness");
  if (!cf && inst.cf_completeness)
    throw ConfigError(
        "the instance carries a completeness but the template is standard");

  const int n_u = static_cast<int>(inst.mc.u_names.size());
  std::map<int, Minion> minions;
  auto minion_for = [&](int arity) -> const Minion& {
    auto it = minions.find(arity);
    if (it == minions.end())
      it = minions
               .emplace(arity,
                        enumerate_polymorphisms(tmpl.A, tmpl.B, arity, lim))
               .first;
    return it->second;
  };

  std::vector<CanonicalFamily> families;
  families.reserve(n_u);
  for (int u = 0; u < n_u; ++u) {
    CanonicalFamily fam;
    fam.arity = inst.mc.u_arity(u);
    fam.alpha = inst.alpha[u];
    fam.beta = dense_beta(inst, u, minion_for(fam.arity));
    families.push_back(std::move(fam));
  }

  std::vector<const PayoffFormula*> block_formulas(n_u, nullptr);
  std::vector<CanonicalResult> owned;
  Rat delta_sum = 0;

  if (!cf) {
    CanonicalRequest req;
    req.tmpl = tmpl;
    req.mode = CanonicalMode::Improved;
    req.families = families;
    const CanonicalResult* res = nullptr;
    if (ws) {
      auto key = cache_key(families);
      auto it = ws->improved_cache.find(key);
      if (it == ws->improved_cache.end())
        it = ws->improved_cache.emplace(key, synthesize(req, lim)).first;
      res = &it->second;
    } else {
      owned.push_back(synthesize(req, lim));
      res = &owned.back();
    }
    if (!res->is_formulas)
      return take_fallback(fallback_no_instance, fallback_completeness, tmpl,
                           lim);
    for (int u = 0; u < n_u; ++u)
      block_formulas[u] = &res->formulas[u].formula;
  } else {
    for (int u = 0; u < n_u; ++u) {
      CanonicalRequest req;
      req.tmpl = tmpl;
      req.mode = CanonicalMode::ConstantFactor;
      req.families = {families[u]};
      const CanonicalResult* res = nullptr;
      if (ws) {
        auto key = cache_key(req.families);
        auto it = ws->cf_cache.find(key);
        if (it == ws->cf_cache.end())
          it = ws->cf_cache.emplace(key, synthesize(req, lim)).first;
        res = &it->second;
      } else {
        owned.push_back(synthesize(req, lim));
        res = &owned.back();
      }
      if (!res->is_formulas)
        return take_fallback(fallback_no_instance, fallback_completeness,
                             tmpl, lim);
      block_formulas[u] = &res->formulas[0].formula;
      delta_sum += res->formulas[0].delta;
    }
  }

  std::vector<Block> blocks;
  blocks.reserve(inst.mc.u_names.size() + inst.mc.v_names.size());
  for (int u = 0; u < n_u; ++u)
    blocks.push_back(Block{inst.mc.u_names[u], inst.mc.u_arity(u),
                           block_formulas[u]->atoms});
  std::map<int, std::vector<Atom>> zero_atoms;
  auto zero_for = [&](int arity) -> const std::vector<Atom>& {
    auto it = zero_atoms.find(arity);
    if (it == zero_atoms.end()) {
      std::vector<Atom> atoms =
          build_crisp_canonical(tmpl.A, arity, lim).atoms;
      for (Atom& a : atoms) a.w = 0;
      it = zero_atoms.emplace(arity, std::move(atoms)).first;
    }
    return it->second;
  };
  for (std::size_t v = 0; v < inst.mc.v_names.size(); ++v)
    blocks.push_back(Block{inst.mc.v_names[v],
                           inst.mc.v_arity(static_cast<int>(v)),
                           zero_for(inst.mc.v_arity(static_cast<int>(v)))});

  VmcToPcspResult out;
  out.psi = glue_blocks(blocks, inst.mc, tmpl.A);
  if (cf) out.cf_completeness = *inst.cf_completeness + delta_sum;
  return out;
}

void ValuedMinionHom::validate() const {
  if (tables.empty())
    throw ConfigError("the homomorphism distribution must be nonempty");
  Rat total = 0;
  for (const auto& [table, p] : tables) {
    (void)table;
    if (p <= 0)
      throw ConfigError("homomorphism probabilities must be positive");
    total += p;
  }
  if (total != 1)
    throw ConfigError("homomorphism probabilities must sum to 1");
}

VMCInstance between_vmcs(const VMCInstance& inst, const ValuedMinionHom& hom,
                         const SentinelPolicy& policy) {
  inst.validate();
  hom.validate();
  VMCInstance out;
  out.mc = inst.mc;
  out.alpha = inst.alpha;
  out.cf_completeness = inst.cf_completeness;

  Rat c_max = 0;
  for (const auto& bt : inst.beta) {
    for (const auto& e : bt.entries)
      if (e.second > c_max) c_max = e.second;
    if (bt.default_value > c_max) c_max = bt.default_value;
  }
  Rat sentinel =
      policy.override_value
          ? *policy.override_value
          : Rat(-(c_max * static_cast<int>(inst.mc.u_names.size()) + 1));

  const int n_u = static_cast<int>(inst.mc.u_names.size());
  for (int u = 0; u < n_u; ++u) {
    const int arity = inst.mc.u_arity(u);
    for (const auto& [table, p] : hom.tables) {
      (void)p;
      if (static_cast<int>(table.maps.size()) < arity ||
          table.maps[arity - 1].empty())
        throw ContractError("homomorphism table is missing arity " +
                            std::to_string(arity) + " required by " +
                            inst.mc.u_names[u]);
    }
    const auto& base_keys = hom.tables.front().first.maps[arity - 1];
    for (const auto& [table, p] : hom.tables) {
      (void)p;
      const auto& m = table.maps[arity - 1];
      if (m.size() != base_keys.size())
        throw ContractError(
            "homomorphism tables disagree on their key sets at arity " +
            std::to_string(arity));
      for (const auto& [f, g] : base_keys) {
        (void)g;
        if (!m.count(f))
          throw ContractError(
              "homomorphism tables disagree on their key sets at arity " +
              std::to_string(arity));
      }
    }
    BetaTable bt;
    bt.default_value = sentinel;
    bt.entries.reserve(base_keys.size());
    for (const auto& [f, g0] : base_keys) {
      (void)g0;
      Rat val = 0;
      for (const auto& [table, p] : hom.tables)
        val += p * inst.beta_of(u, table.maps[arity - 1].at(f));
      bt.entries.emplace_back(f, std::move(val));
    }
    out.beta.push_back(std::move(bt));
  }
  out.validate();
  return out;
}

MCInstance between_mcs(const MCInstance& inst) {
  inst.validate();
  return inst;
}

PayoffFormula gadget_substitute(const PayoffFormula& phi,
                                const std::map<int, Gadget>& gadgets) {
  phi.validate();
  if (gadgets.empty())
    throw ConfigError("at least one gadget is required");
  const PayoffFormula& first_body = gadgets.begin()->second.body;
  for (const auto& [sym, g] : gadgets) {
    (void)sym;
    g.body.validate();
    if (!g.body.sig || !same_signature(*g.body.sig, *first_body.sig))
      throw ConfigError("all gadget bodies must share one signature");
    std::set<int> coords(g.coord_vars.begin(), g.coord_vars.end());
    for (int sv : g.shared_vars) {
      if (sv < 0 || sv >= g.body.vars.size())
        throw ConfigError("shared variable index out of range");
      if (coords.count(sv))
        throw ConfigError(
            "a gadget variable cannot be both a coordinate and shared");
    }
    for (int cv : g.coord_vars)
      if (cv < 0 || cv >= g.body.vars.size())
        throw ConfigError("coordinate variable index out of range");
  }

  std::vector<std::pair<std::string, int>> var_names;
  std::set<std::string> used;
  auto add_var = [&](std::string name, int sort) {
    while (used.count(name)) name += '~';
    used.insert(name);
    var_names.emplace_back(name, sort);
    return static_cast<int>(var_names.size()) - 1;
  };
  for (int x = 0; x < phi.vars.size(); ++x)
    add_var(phi.vars.id(x), phi.vars.sort_of(x));

  std::map<std::string, int> shared_index;  // shared name -> output var
  PayoffFormula out;
  out.sig = first_body.sig;

  std::vector<Atom> atoms;
  for (std::size_t i = 0; i < phi.atoms.size(); ++i) {
    const Atom& atom = phi.atoms[i];
    auto git = gadgets.find(atom.symbol);
    if (git == gadgets.end())
      throw ConfigError("no gadget for symbol " +
                        phi.sig->symbols[atom.symbol].id);
    const Gadget& g = git->second;
    if (g.coord_vars.size() != atom.args.size())
      throw ContractError("gadget arity does not match the substituted atom");
    // Output variable per body variable of this occurrence.
    std::vector<int> map(g.body.vars.size(), -1);
    for (std::size_t z = 0; z < atom.args.size(); ++z) {
      if (g.body.vars.sort_of(g.coord_vars[z]) !=
          phi.vars.sort_of(atom.args[z]))
        throw ContractError("gadget coordinate sort mismatch");
      map[g.coord_vars[z]] = atom.args[z];
    }
    for (int sv : g.shared_vars) {
      std::string name = "shared." + g.body.vars.id(sv);
      auto it = shared_index.find(name);
      if (it == shared_index.end())
        it = shared_index
                 .emplace(name, add_var(name, g.body.vars.sort_of(sv)))
                 .first;
      map[sv] = it->second;
    }
    for (int bv = 0; bv < g.body.vars.size(); ++bv)
      if (map[bv] < 0)
        map[bv] = add_var("g" + std::to_string(i) + "." + g.body.vars.id(bv),
                          g.body.vars.sort_of(bv));
    for (const Atom& ba : g.body.atoms) {
      Atom na;
      na.w = atom.w * ba.w;
      na.symbol = ba.symbol;
      na.args.reserve(ba.args.size());
      for (int arg : ba.args) na.args.push_back(map[arg]);
      atoms.push_back(std::move(na));
    }
  }

  out.vars = SortedSet(std::move(var_names),
                       std::max(phi.vars.sort_count(),
                                first_body.vars.sort_count()));
  out.atoms = std::move(atoms);
  out.validate();
  return out;
}

bool verify_gadget_hom(const MinionHomTable& xi, const ValuedTemplate& src,
                       const ValuedTemplate& tgt, const MatrixLift& lift,
                       int k, const Limits& lim, std::string* why) {
  src.validate();
  tgt.validate();
  auto fail = [&](const std::string& msg) {
    if (why) *why = msg;
    return false;
  };
  const Signature& ssig = src.A.sig();
  const Signature& tsig = tgt.A.sig();
  if (lift.symbol_map.size() != ssig.symbols.size() ||
      lift.rows.size() != ssig.symbols.size())
    throw ContractError("lift must describe every source symbol");
  for (std::size_t ps = 0; ps < ssig.symbols.size(); ++ps) {
    int pt = lift.symbol_map[ps];
    if (pt < 0 || pt >= static_cast<int>(tsig.symbols.size()))
      throw ContractError("lift maps a symbol out of range");
    const auto& tarity = tsig.symbols[pt].arity;
    if (lift.rows[ps].size() != tarity.size())
      throw ContractError("lift row count must match the target arity");
    for (std::size_t r = 0; r < tarity.size(); ++r) {
      const LiftRow& lr = lift.rows[ps][r];
      if (lr.is_const) {
        if (lr.const_elem < 0 || lr.const_elem >= tgt.A.dom().size() ||
            tgt.A.dom().sort_of(lr.const_elem) != tarity[r].sort)
          throw ContractError("constant lift row element has the wrong sort");
      } else {
        if (lr.src_row < 0 ||
            lr.src_row >= static_cast<int>(ssig.symbols[ps].arity.size()))
          throw ContractError("lift row index out of range");
        if (ssig.symbols[ps].arity[lr.src_row].sort != tarity[r].sort)
          throw ContractError("lift row sort mismatch");
      }
    }
  }
  if (!(xi.src_dom == tgt.A.dom()) || !(xi.src_cod == tgt.B.dom()) ||
      !(xi.tgt_dom == src.A.dom()) || !(xi.tgt_cod == src.B.dom()))
    throw ContractError(
        "homomorphism table domains do not match the templates");

  auto lift_tuple = [&](std::size_t ps, const Tuple& t) {
    const auto& rows = lift.rows[ps];
    Tuple lifted(rows.size());
    for (std::size_t r = 0; r < rows.size(); ++r)
      lifted[r] = rows[r].is_const ? rows[r].const_elem : t[rows[r].src_row];
    return lifted;
  };

  // First-structure identity over every tuple of every source relation.
  for (std::size_t ps = 0; ps < ssig.symbols.size(); ++ps) {
    TupleSpace space(src.A.dom(), arity_sorts(ssig.symbols[ps]));
    Tuple t = space.first();
    if (space.total() == 0) continue;
    do {
      if (src.A.value(static_cast<int>(ps), t) !=
          tgt.A.value(lift.symbol_map[ps], lift_tuple(ps, t)))
        return fail("first-structure values differ at " +
                    ssig.symbols[ps].id + "(" + join_ids(src.A.dom(), t) +
                    ")");
    } while (space.next(t));
  }

  // Second-structure pointwise identity for every tabulated function.
  for (int n = 1; n <= k; ++n) {
    if (static_cast<int>(xi.maps.size()) < n || xi.maps[n - 1].empty())
      throw ContractError("homomorphism table is missing arity " +
                          std::to_string(n));
    FnSpace tfs(tgt.A.dom(), tgt.B.dom(), n);
    FnSpace sfs(src.A.dom(), src.B.dom(), n);
    bool ok = true;
    std::string msg;
    for (const auto& [f, g] : xi.maps[n - 1]) {
      if (!ok) break;
      tfs.validate(f);
      sfs.validate(g);
      for_each_mat(src.A, n, lim.max_mat_pairs,
                   [&](const RelationMatrixPair& pair) {
                     if (!ok) return;
                     RelationMatrixPair lifted;
                     lifted.symbol = lift.symbol_map[pair.symbol];
                     lifted.columns.reserve(pair.columns.size());
                     for (const Tuple& col : pair.columns)
                       lifted.columns.push_back(
                           lift_tuple(static_cast<std::size_t>(pair.symbol),
                                      col));
                     Ext vs = src.B.value(pair.symbol,
                                          apply_rows(sfs, g, pair, ssig));
                     Ext vt = tgt.B.value(lifted.symbol,
                                          apply_rows(tfs, f, lifted, tsig));
                     if (vs != vt) {
                       ok = false;
                       msg = "second-structure values differ at " +
                             ssig.symbols[pair.symbol].id + " under an arity-" +
                             std::to_string(n) + " function";
                     }
                   });
    }
    if (!ok) return fail(msg);
  }
  return true;
}

namespace {

void check_pp_target(const PPTarget& target, const ValuedTemplate& tmpl) {
  for (int s : target.coord_sorts)
    if (s < 0 || s >= tmpl.A.dom().sort_count())
      throw ConfigError("target coordinate sort out of range");
  TupleSpace sa(tmpl.A.dom(), target.coord_sorts);
  TupleSpace sb(tmpl.B.dom(), target.coord_sorts);
  if (static_cast<std::int64_t>(target.table_a.size()) != sa.total() ||
      static_cast<std::int64_t>(target.table_b.size()) != sb.total())
    throw ConfigError("target tables must cover the full tuple spaces");
}

/// Fiber maxima of the formula payoff over one structure: for every target
/// tuple rank, the best payoff over assignments projecting to it.
std::vector<Ext> fiber_maxima(const PPDefinition& defn, const PPTarget& target,
                              const ValuedStructure& str, const Limits& lim) {
  TupleSpace proj_space(str.dom(), target.coord_sorts);
  std::vector<Ext> best(static_cast<std::size_t>(proj_space.total()),
                        Ext::neg_infinity());
  TupleSpace asg = assignment_space(defn.formula, str);
  if (asg.total() > static_cast<std::int64_t>(lim.max_assignments))
    throw ResourceLimitError(
        "assignment space has " + std::to_string(asg.total()) +
        " points, above the limit of " + std::to_string(lim.max_assignments));
  if (asg.total() == 0) return best;
  Tuple t = asg.first();
  Tuple proj(target.coord_sorts.size());
  do {
    Ext val = evaluate_formula(defn.formula, str, t);
    if (!val.finite()) continue;
    for (std::size_t z = 0; z < defn.iota.size(); ++z) proj[z] = t[defn.iota[z]];
    std::size_t r = static_cast<std::size_t>(proj_space.rank(proj));
    if (val > best[r]) best[r] = val;
  } while (asg.next(t));
  return best;
}

}  // namespace

bool verify_pp_definition(const PPDefinition& defn, const PPTarget& target,
                          const ValuedTemplate& tmpl, PPMode mode,
                          const Rat& c_prime, const Rat& s_prime,
                          const Limits& lim, std::string* why) {
  tmpl.validate();
  check_pp_target(target, tmpl);
  defn.formula.validate();
  auto fail = [&](const std::string& msg) {
    if (why) *why = msg;
    return false;
  };
  if (!defn.formula.sig || !same_signature(*defn.formula.sig, tmpl.A.sig()))
    return fail("definition signature does not match the template");
  if (defn.iota.size() != target.coord_sorts.size())
    return fail("coordinate map must be total on the target arity");
  for (std::size_t z = 0; z < defn.iota.size(); ++z) {
    if (defn.iota[z] < 0 || defn.iota[z] >= defn.formula.vars.size())
      return fail("coordinate map image out of range");
    if (defn.formula.vars.sort_of(defn.iota[z]) != target.coord_sorts[z])
      return fail("coordinate map sort mismatch");
  }

  std::vector<Ext> best_a = fiber_maxima(defn, target, tmpl.A, lim);
  std::vector<Ext> best_b = fiber_maxima(defn, target, tmpl.B, lim);

  if (mode == PPMode::Crisp) {
    for (std::size_t r = 0; r < target.table_a.size(); ++r)
      if (target.table_a[r].finite() && !best_a[r].finite())
        return fail("a feasible target tuple has no feasible extension");
    for (std::size_t r = 0; r < target.table_b.size(); ++r)
      if (best_b[r].finite() && !target.table_b[r].finite())
        return fail(
            "a feasible assignment projects outside the target relation");
    return true;
  }

  const Rat w = defn.formula.weight();
  for (std::size_t r = 0; r < target.table_a.size(); ++r) {
    if (!target.table_a[r].finite()) continue;
    if (!best_a[r].finite() ||
        best_a[r].value() - tmpl.c * w < target.table_a[r].value() - c_prime)
      return fail("first-structure threshold inequality fails");
  }
  for (std::size_t r = 0; r < target.table_b.size(); ++r) {
    if (!best_b[r].finite()) continue;
    if (!target.table_b[r].finite() ||
        target.table_b[r].value() - s_prime < best_b[r].value() - tmpl.s * w)
      return fail("second-structure threshold inequality fails");
  }
  return true;
}

std::optional<PPDefinition> synthesize_pp_definition(
    const PPTarget& target, const ValuedTemplate& tmpl, PPMode mode,
    const Rat& c_prime, const Rat& s_prime, const Limits& lim) {
  tmpl.validate();
  check_pp_target(target, tmpl);
  if (mode == PPMode::Valued &&
      tmpl.kind != ValuedTemplate::Kind::Standard)
    throw ConfigError("valued definitions need a standard template");

  TupleSpace space_a(tmpl.A.dom(), target.coord_sorts);
  std::vector<Tuple> feas;
  for (std::int64_t r = 0; r < space_a.total(); ++r)
    if (target.table_a[static_cast<std::size_t>(r)].finite())
      feas.push_back(space_a.unrank(r));
  if (feas.empty())
    throw ConfigError("target has no feasible tuple on the first side");
  const int arity = static_cast<int>(feas.size());

  std::int64_t cells = 0;
  for (int t = 0; t < tmpl.A.dom().sort_count(); ++t) {
    std::int64_t rows = 1;
    for (int n = 0; n < arity; ++n)
      rows *= static_cast<std::int64_t>(tmpl.A.dom().of_sort(t).size());
    cells += rows;
  }
  if (cells > kPpCellBound)
    throw ResourceLimitError(
        "definition synthesis needs " + std::to_string(cells) +
        " canonical variables, above the practical bound of " +
        std::to_string(kPpCellBound));

  CanonicalLayout lay = canonical_layout(tmpl.A.dom(), arity);
  FnSpace fs(tmpl.A.dom(), tmpl.B.dom(), arity);
  std::vector<int> iota(target.coord_sorts.size());
  std::vector<std::vector<int>> gm_rows(target.coord_sorts.size());
  for (std::size_t z = 0; z < target.coord_sorts.size(); ++z) {
    std::vector<int> row(arity);
    for (int n = 0; n < arity; ++n) row[n] = feas[n][z];
    iota[z] = lay.index(target.coord_sorts[z],
                        fs.rank_row(target.coord_sorts[z], row));
    gm_rows[z] = std::move(row);
  }

  if (mode == PPMode::Crisp) {
    PPDefinition defn;
    defn.formula = build_crisp_canonical(tmpl.A, arity, lim);
    defn.iota = iota;
    if (!verify_pp_definition(defn, target, tmpl, PPMode::Crisp, 0, 0, lim))
      return std::nullopt;
    return defn;
  }

  // Side condition of the changed-thresholds synthesis: when the first
  // structure is bounded by c, targets exceeding c' are not definable.
  if (tmpl.A.leq(tmpl.c)) {
    for (const Tuple& t : feas)
      if (target.table_a[static_cast<std::size_t>(space_a.rank(t))].value() >
          c_prime)
        return std::nullopt;
  }

  Minion minion = enumerate_polymorphisms(tmpl.A, tmpl.B, arity, lim);
  CanonicalFamily fam;
  fam.arity = arity;
  for (const Tuple& t : feas)
    fam.alpha.push_back(
        target.table_a[static_cast<std::size_t>(space_a.rank(t))].value());
  TupleSpace space_b(tmpl.B.dom(), target.coord_sorts);
  for (const NaryFunction& f : minion.fns) {
    Tuple image(target.coord_sorts.size());
    for (std::size_t z = 0; z < target.coord_sorts.size(); ++z)
      image[z] = fs.apply(f, target.coord_sorts[z], gm_rows[z]);
    const Ext& vb =
        target.table_b[static_cast<std::size_t>(space_b.rank(image))];
    if (!vb.finite()) return std::nullopt;
    fam.beta.push_back(vb.value());
  }

  CanonicalRequest req;
  req.tmpl = tmpl;
  req.mode = CanonicalMode::Thresholds;
  req.families = {std::move(fam)};
  req.c_prime = c_prime;
  req.s_prime = s_prime;
  CanonicalResult res = synthesize(req, lim);
  if (!res.is_formulas) return std::nullopt;

  PPDefinition defn;
  defn.formula = res.formulas[0].formula;
  defn.iota = iota;
  std::string why;
  if (!verify_pp_definition(defn, target, tmpl, PPMode::Valued, c_prime,
                            s_prime, lim, &why))
    throw ContractError("synthesized definition failed verification: " + why);
  return defn;
}

}  // namespace pvcsp
