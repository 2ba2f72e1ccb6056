#include "doctest.h"
#include "helpers.hpp"
#include "pvcsp/reduction.hpp"

using namespace pvcsp;
using namespace testutil;

namespace {

/// Classification of a formula over a crisp pair with c = s = 0: yes iff
/// satisfiable over A, no iff unsatisfiable over B.
bool crisp_yes(const PayoffFormula& phi, const ValuedStructure& str) {
  return brute_force_max(phi, str, 1 << 22).value.finite();
}

PayoffFormula sat_instance(const ValuedTemplate& tmpl) {
  return parity_formula(tmpl, {"x", "y", "z"}, {{Rat(1), 0, {0, 1, 2}}});
}

PayoffFormula unsat_instance(const ValuedTemplate& tmpl) {
  // x must have parity 0 and parity 1 at once.
  return parity_formula(tmpl, {"x"},
                        {{Rat(1), 0, {0, 0, 0}}, {Rat(1), 1, {0, 0, 0}}});
}

MinionHomTable identity_hom(const ValuedTemplate& tmpl, int k) {
  MinionHomTable t;
  t.k = k;
  t.src_dom = tmpl.A.dom();
  t.src_cod = tmpl.B.dom();
  t.tgt_dom = tmpl.A.dom();
  t.tgt_cod = tmpl.B.dom();
  t.maps.resize(static_cast<std::size_t>(k));
  for (int n = 1; n <= k; ++n) {
    const Minion m = enumerate_polymorphisms(tmpl.A, tmpl.B, n);
    for (const NaryFunction& f : m.fns) t.maps[n - 1][f] = f;
  }
  return t;
}

}  // namespace

TEST_CASE("pcsp_to_mc shapes") {
  const ValuedTemplate tmpl = lin2_crisp();
  const PayoffFormula phi = parity_formula(
      tmpl, {"x", "y", "z", "w"},
      {{Rat(1), 0, {0, 1, 2}}, {Rat(2), 1, {1, 2, 3}}});
  const MCInstance inst = pcsp_to_mc(phi, tmpl);
  CHECK(inst.k == 4);  // largest domain: 4 feasible triples
  REQUIRE(inst.u_names.size() == 2);
  REQUIRE(inst.v_names.size() == 4);
  CHECK(inst.u_dom[0].size() == 4);
  CHECK(inst.u_dom[1].size() == 4);
  for (const auto& dom : inst.v_dom) CHECK(dom.size() == 2);
  // One condition per atom coordinate.
  CHECK(inst.conditions.size() == 6);
  CHECK_NOTHROW(inst.validate());

  // A user-supplied k below the automatic one is rejected.
  CHECK_THROWS_AS(pcsp_to_mc(phi, tmpl, 3), ConfigError);
  CHECK(pcsp_to_mc(phi, tmpl, 7).k == 7);
}

TEST_CASE("mc round trip preserves crisp classification") {
  const ValuedTemplate tmpl = lin2_crisp();
  for (const bool yes : {true, false}) {
    const PayoffFormula phi =
        yes ? sat_instance(tmpl) : unsat_instance(tmpl);
    REQUIRE(crisp_yes(phi, tmpl.A) == yes);
    const MCInstance inst = pcsp_to_mc(phi, tmpl);
    const PayoffFormula back = mc_to_pcsp(inst, tmpl);
    CHECK(crisp_yes(back, tmpl.A) == yes);
    CHECK(crisp_yes(back, tmpl.B) == yes);  // A = B here
  }
}

TEST_CASE("pcsp_to_vmc records a verifiable certificate") {
  const ValuedTemplate tmpl = lin2_sat(1, 1);
  const PayoffFormula phi = parity_formula(
      tmpl, {"x", "y", "z"},
      {{Rat(2), 0, {0, 1, 2}}, {Rat(1), 1, {2, 1, 0}}});
  VMCInstance inst = pcsp_to_vmc(phi, tmpl);
  CHECK(inst.mc.u_names.size() == 2);
  CHECK_FALSE(inst.cf_completeness.has_value());
  REQUIRE(inst.cert.has_value());
  CHECK(inst.cert->weights == std::vector<Rat>{Rat(2), Rat(1)});
  std::string why;
  CHECK_MESSAGE(verify_vmc_certificate(inst, tmpl, {}, &why), why);

  // alpha for atom 0: w * (phi_0^A(a) - c) over the 4 satisfying triples.
  REQUIRE(inst.alpha[0].size() == 4);
  // Every feasible triple of phi_0 has value 1, so 2 * (1 - 1) = 0.
  CHECK(inst.alpha[0][0] == Rat(0));

  // Tampering breaks verification.
  inst.alpha[0][0] += 1;
  CHECK_FALSE(verify_vmc_certificate(inst, tmpl, {}, &why));
  CHECK_FALSE(why.empty());

  // Instances without a certificate cannot be verified.
  VMCInstance bare = pcsp_to_vmc(phi, tmpl);
  bare.cert.reset();
  CHECK_THROWS_AS(verify_vmc_certificate(bare, tmpl), ConfigError);
}

TEST_CASE("vmc round trip preserves crisp classification") {
  const ValuedTemplate tmpl = lin2_crisp();
  ReductionWorkspace ws;
  for (const bool yes : {true, false}) {
    const PayoffFormula phi =
        yes ? sat_instance(tmpl) : unsat_instance(tmpl);
    const VMCInstance inst = pcsp_to_vmc(phi, tmpl);
    const VmcToPcspResult res = vmc_to_pcsp(inst, tmpl, {}, {}, &ws);
    CHECK_FALSE(res.used_fallback);
    CHECK(crisp_yes(res.psi, tmpl.A) == yes);
    CHECK(crisp_yes(res.psi, tmpl.B) == yes);
  }
  // The memoization workspace saw at most the distinct family keys.
  CHECK(ws.improved_cache.size() <= 2);
}

TEST_CASE("vmc_to_pcsp falls back on a certified no-instance") {
  const ValuedTemplate tmpl = lin2_crisp();
  // A hand-built instance whose beta demands the impossible.
  VMCInstance inst;
  inst.mc.k = 2;
  inst.mc.u_names = {"u0"};
  inst.mc.u_dom = {{"l0"}};
  inst.mc.v_names = {"v0"};
  inst.mc.v_dom = {{"0", "1"}};
  inst.mc.conditions.push_back({0, 0, {0}});
  inst.alpha = {{Rat(0)}};
  BetaTable beta;
  beta.default_value = Rat(-1);
  inst.beta = {beta};
  inst.validate();

  // Without a fallback the reduction cannot proceed.
  CHECK_THROWS_AS(vmc_to_pcsp(inst, tmpl), ConfigError);

  // With a certified no-instance it returns exactly that.
  const PayoffFormula no = unsat_instance(tmpl);
  const VmcToPcspResult res = vmc_to_pcsp(inst, tmpl, no);
  CHECK(res.used_fallback);
  CHECK_FALSE(crisp_yes(res.psi, tmpl.B));

  // A fallback that is not a no-instance is rejected.
  CHECK_THROWS_AS(vmc_to_pcsp(inst, tmpl, sat_instance(tmpl)), ConfigError);
}

TEST_CASE("constant-factor vmc reduction tracks completeness") {
  ValuedTemplate cf = lin2_crisp();
  cf.kind = ValuedTemplate::Kind::ConstantFactor;
  cf.kappa = Rat(1);
  cf.validate();

  const PayoffFormula phi = sat_instance(cf);
  // The constant-factor mode demands an input completeness...
  CHECK_THROWS_AS(pcsp_to_vmc(phi, cf), ConfigError);
  const VMCInstance inst = pcsp_to_vmc(phi, cf, Rat(0));
  REQUIRE(inst.cf_completeness.has_value());
  CHECK(*inst.cf_completeness == Rat(0));

  // ...and the inverse reduction reports the shifted output completeness.
  const VmcToPcspResult res = vmc_to_pcsp(inst, cf);
  REQUIRE(res.cf_completeness.has_value());
  CHECK(crisp_yes(res.psi, cf.A));

  // Standard templates reject a supplied completeness.
  const ValuedTemplate std_tmpl = lin2_crisp();
  CHECK_THROWS_AS(pcsp_to_vmc(sat_instance(std_tmpl), std_tmpl, Rat(0)),
                  ConfigError);
}

TEST_CASE("between_vmcs pushes beta through the homomorphism") {
  const ValuedTemplate tmpl = lin2_crisp();
  const PayoffFormula phi = sat_instance(tmpl);
  const VMCInstance inst = pcsp_to_vmc(phi, tmpl);
  const int arity = inst.mc.u_arity(0);

  ValuedMinionHom hom;
  hom.tables.emplace_back(identity_hom(tmpl, arity), Rat(1));
  hom.validate();

  const VMCInstance out = between_vmcs(inst, hom);
  CHECK(out.mc.k == inst.mc.k);
  CHECK(out.alpha == inst.alpha);
  CHECK_FALSE(out.cert.has_value());  // certificate is dropped

  // On tabulated functions the new beta equals the old one.
  const Minion pol = enumerate_polymorphisms(tmpl.A, tmpl.B, arity);
  for (const NaryFunction& f : pol.fns)
    CHECK(out.beta_of(0, f) == inst.beta_of(0, f));

  // Off-support functions get the sentinel -(max(C,0)*|U| + 1). All old
  // beta values are 0 here, so C = 0 and the sentinel is -1.
  CHECK(out.beta[0].default_value == Rat(-1));

  // Sentinel override is honored.
  SentinelPolicy policy;
  policy.override_value = Rat(-77);
  CHECK(between_vmcs(inst, hom, policy).beta[0].default_value == Rat(-77));

  // The trivial reduction between crisp instances validates and returns
  // an identical instance.
  const MCInstance same = between_mcs(inst.mc);
  CHECK(same.k == inst.mc.k);
  CHECK(same.conditions.size() == inst.mc.conditions.size());
}

TEST_CASE("valued minion hom validation") {
  const ValuedTemplate tmpl = lin2_crisp();
  ValuedMinionHom hom;
  hom.tables.emplace_back(identity_hom(tmpl, 1), Rat(1, 2));
  CHECK_THROWS(hom.validate());  // probabilities sum to 1/2
  hom.tables.emplace_back(identity_hom(tmpl, 1), Rat(1, 2));
  CHECK_NOTHROW(hom.validate());
}

TEST_CASE("gadget substitution preserves crisp semantics") {
  const ValuedTemplate tmpl = lin2_crisp();

  // Gadget for phi_0: route the parity through two auxiliary variables.
  // phi_0(c0,c1,c2) iff exists g, z: c0+c1+g = 0, g+c2+z = 0, z+z+z = 0.
  PayoffFormula body0;
  body0.sig = tmpl.A.sig_ptr();
  body0.vars = SortedSet({{"c0", 0}, {"c1", 0}, {"c2", 0}, {"g", 0}, {"z", 0}}, 1);
  body0.atoms.push_back({Rat(1), 0, {0, 1, 3}});
  body0.atoms.push_back({Rat(1), 0, {3, 2, 4}});
  body0.atoms.push_back({Rat(1), 0, {4, 4, 4}});
  body0.validate();
  Gadget g0{body0, {0, 1, 2}, {4}};  // z is shared across atoms

  // Gadget for phi_1: identity.
  PayoffFormula body1;
  body1.sig = tmpl.A.sig_ptr();
  body1.vars = SortedSet({{"c0", 0}, {"c1", 0}, {"c2", 0}}, 1);
  body1.atoms.push_back({Rat(1), 1, {0, 1, 2}});
  body1.validate();
  Gadget g1{body1, {0, 1, 2}, {}};

  const std::map<int, Gadget> gadgets{{0, g0}, {1, g1}};

  for (const bool yes : {true, false}) {
    const PayoffFormula phi =
        yes ? sat_instance(tmpl) : unsat_instance(tmpl);
    const PayoffFormula sub = gadget_substitute(phi, gadgets);
    CHECK(crisp_yes(sub, tmpl.A) == yes);
  }

  // Weights multiply through.
  PayoffFormula weighted = sat_instance(tmpl);
  weighted.atoms[0].w = Rat(5);
  const PayoffFormula sub = gadget_substitute(weighted, gadgets);
  for (const Atom& atom : sub.atoms) CHECK(atom.w == Rat(5));

  // Every occurring symbol needs a gadget.
  const std::map<int, Gadget> partial{{0, g0}};
  CHECK_THROWS(gadget_substitute(unsat_instance(tmpl), partial));
}

TEST_CASE("gadget hom verification on the identity") {
  const ValuedTemplate tmpl = lin2_crisp();
  const MinionHomTable xi = identity_hom(tmpl, 2);

  MatrixLift lift;
  lift.symbol_map = {0, 1};
  lift.rows = {{{false, 0, 0}, {false, 1, 0}, {false, 2, 0}},
               {{false, 0, 0}, {false, 1, 0}, {false, 2, 0}}};

  std::string why;
  CHECK_MESSAGE(verify_gadget_hom(xi, tmpl, tmpl, lift, 2, {}, &why), why);

  // Mutating one image breaks the identity.
  MinionHomTable bad = xi;
  NaryFunction id1 = bad.maps[0].begin()->first;
  NaryFunction neg = id1;
  for (auto& v : neg.tables[0]) v ^= 1;
  bad.maps[0][id1] = neg;
  CHECK_FALSE(verify_gadget_hom(bad, tmpl, tmpl, lift, 2, {}, &why));
  CHECK_FALSE(why.empty());

  // A lift onto the wrong symbol also fails.
  MatrixLift swapped = lift;
  swapped.symbol_map = {1, 0};
  CHECK_FALSE(verify_gadget_hom(xi, tmpl, tmpl, swapped, 2, {}, &why));
}

TEST_CASE("pp definability: crisp synthesis and verification") {
  const ValuedTemplate tmpl = lin2_crisp();

  // The template's own ternary parity relation is definable.
  PPTarget parity;
  parity.coord_sorts = {0, 0, 0};
  for (int r = 0; r < 8; ++r) {
    const int p = (r ^ (r >> 1) ^ (r >> 2)) & 1;
    parity.table_a.push_back(p == 0 ? fin(0) : ninf());
    parity.table_b.push_back(p == 0 ? fin(0) : ninf());
  }
  const auto defn = synthesize_pp_definition(parity, tmpl, PPMode::Crisp);
  REQUIRE(defn.has_value());
  std::string why;
  CHECK_MESSAGE(
      verify_pp_definition(*defn, parity, tmpl, PPMode::Crisp, 0, 0, {}, &why),
      why);

  // Binary OR is not: the full ternary parity polymorphism maps its
  // feasible matrix outside the relation.
  PPTarget orrel;
  orrel.coord_sorts = {0, 0};
  orrel.table_a = {ninf(), fin(0), fin(0), fin(0)};
  orrel.table_b = {ninf(), fin(0), fin(0), fin(0)};
  CHECK_FALSE(synthesize_pp_definition(orrel, tmpl, PPMode::Crisp).has_value());

  // And the parity definition does not verify against OR.
  PPDefinition wrong = *defn;
  CHECK_FALSE(
      verify_pp_definition(wrong, orrel, tmpl, PPMode::Crisp, 0, 0, {}, &why));
}

TEST_CASE("pp definability: valued mode") {
  const ValuedTemplate tmpl = lin2_crisp();
  PPTarget parity;
  parity.coord_sorts = {0, 0, 0};
  for (int r = 0; r < 8; ++r) {
    const int p = (r ^ (r >> 1) ^ (r >> 2)) & 1;
    parity.table_a.push_back(p == 0 ? fin(0) : ninf());
    parity.table_b.push_back(p == 0 ? fin(0) : ninf());
  }
  const auto defn =
      synthesize_pp_definition(parity, tmpl, PPMode::Valued, Rat(0), Rat(0));
  REQUIRE(defn.has_value());
  std::string why;
  CHECK_MESSAGE(verify_pp_definition(*defn, parity, tmpl, PPMode::Valued,
                                     Rat(0), Rat(0), {}, &why),
                why);
}

TEST_CASE("pp synthesis refuses oversized targets") {
  const ValuedTemplate tmpl = lin2_crisp();
  PPTarget big;
  big.coord_sorts.assign(5, 0);
  big.table_a.assign(32, fin(0));
  big.table_b.assign(32, fin(0));
  CHECK_THROWS_AS(synthesize_pp_definition(big, tmpl, PPMode::Crisp),
                  ResourceLimitError);
}
