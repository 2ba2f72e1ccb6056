#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "pvcsp/weighting.hpp"

using namespace pvcsp;
using namespace testutil;

namespace {

/// The uniform weighting of one arity over the full polymorphism minion.
Weighting uniform_weighting(const ValuedTemplate& tmpl, int arity) {
  Weighting w;
  w.arity = arity;
  for (int n = 0; n < arity; ++n)
    w.in.entries.emplace_back(n, Rat(1, arity));
  const Minion m = enumerate_polymorphisms(tmpl.A, tmpl.B, arity);
  w.support = m.fns;
  for (int i = 0; i < m.size(); ++i)
    w.out.entries.emplace_back(i, Rat(1, m.size()));
  w.validate(tmpl.A, tmpl.B);
  return w;
}

}  // namespace

TEST_CASE("distribution invariants") {
  Distribution d;
  d.entries = {{0, Rat(1, 3)}, {2, Rat(2, 3)}};
  CHECK_NOTHROW(d.validate(3));
  CHECK(d.prob(0) == Rat(1, 3));
  CHECK(d.prob(1) == Rat(0));
  CHECK(d.prob(2) == Rat(2, 3));
  CHECK(d.expect({Rat(3), Rat(100), Rat(6)}) == Rat(5));

  Distribution bad = d;
  bad.entries[0].second = Rat(1, 2);
  CHECK_THROWS(bad.validate(3));  // sums to 7/6

  Distribution neg;
  neg.entries = {{0, Rat(-1)}, {1, Rat(2)}};
  CHECK_THROWS(neg.validate(2));  // negative probability

  Distribution oob;
  oob.entries = {{5, Rat(1)}};
  CHECK_THROWS(oob.validate(3));  // key out of range

  Distribution unsorted;
  unsorted.entries = {{1, Rat(1, 2)}, {0, Rat(1, 2)}};
  CHECK_THROWS(unsorted.validate(2));

  const Distribution pm = Distribution::point_mass(2);
  CHECK(pm.prob(2) == Rat(1));
  CHECK_NOTHROW(pm.validate(3));
}

TEST_CASE("payoff points of the uniform ternary weighting") {
  const ValuedTemplate tmpl = lin2_valued(1, 1);
  const Weighting w = uniform_weighting(tmpl, 3);

  // Columns all satisfy phi_0, so the input expectation is 1. The three
  // matrix rows are distinct, so a uniformly random ternary function sends
  // them to a uniform triple: the output expectation is 1/2.
  RelationMatrixPair pair;
  pair.symbol = 0;
  pair.columns = {{0, 0, 0}, {0, 1, 1}, {1, 0, 1}};
  const auto [x, y] = payoff_point(w, pair, tmpl);
  CHECK(x == Rat(1));
  CHECK(y == Rat(1, 2));

  // A mixed matrix: one satisfying, two violating columns.
  RelationMatrixPair mixed;
  mixed.symbol = 0;
  mixed.columns = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}};
  const auto [x2, y2] = payoff_point(w, mixed, tmpl);
  CHECK(x2 == Rat(1, 3));
  CHECK(y2 == Rat(1, 2));
}

TEST_CASE("slope search on explicit point sets") {
  // One point strictly inside the third quadrant relative to (c, s) = (1, 1):
  // kappa must be at least the slope through it.
  CHECK(polymorphism_slope({{Rat(0), Rat(0)}}, Rat(1), Rat(1)) == Rat(1));
  // A point with x >= c but y < s admits no slope.
  CHECK_FALSE(
      polymorphism_slope({{Rat(1), Rat(0)}}, Rat(1), Rat(1)).has_value());
  CHECK_FALSE(polymorphism_slope({{Rat(0), Rat(0)}, {Rat(2), Rat(1)}}, Rat(1),
                                 Rat(1))
                  .has_value());
  // Points at or above the thresholds need no slope at all.
  CHECK(polymorphism_slope({{Rat(1), Rat(1)}, {Rat(2), Rat(3)}}, Rat(1),
                           Rat(1)) == Rat(0));
  // Steeper of two interior points wins.
  CHECK(polymorphism_slope({{Rat(0), Rat(0)}, {Rat(1, 2), Rat(0)}}, Rat(1),
                           Rat(1)) == Rat(2));
}

TEST_CASE("kappa-polymorphism test on the valued parity pair") {
  const ValuedTemplate tmpl = lin2_valued(1, 1);
  // Point mass on the n-th projection at the given arity.
  const auto projection_weighting = [&](int arity, int n) {
    Weighting w;
    w.arity = arity;
    for (int z = 0; z < arity; ++z)
      w.in.entries.emplace_back(z, Rat(1, arity));
    FnSpace fs(tmpl.A.dom(), tmpl.B.dom(), arity);
    w.support = {fs.projection(n)};
    w.out = Distribution::point_mass(0);
    w.validate(tmpl.A, tmpl.B);
    return w;
  };

  // Identity point mass: payoff points (0,0) and (1,1); a kappa works iff
  // kappa >= 1 (the point (0,0) needs -1 >= -kappa).
  const Weighting id = projection_weighting(1, 0);
  CHECK_FALSE(is_kappa_polymorphism(id, Rat(0), tmpl));
  CHECK_FALSE(is_kappa_polymorphism(id, Rat(1, 2), tmpl));
  CHECK(is_kappa_polymorphism(id, Rat(1), tmpl));
  CHECK(is_kappa_polymorphism(id, Rat(17), tmpl));

  // With (c, s) = (1/2, 3/4): (0,0) needs kappa >= 3/2, (1,1) needs
  // kappa <= 1/2 -- no slope at all.
  const ValuedTemplate hard = lin2_valued(Rat(1, 2), Rat(3, 4));
  for (int k = 0; k < 5; ++k)
    CHECK_FALSE(is_kappa_polymorphism(id, Rat(k, 2), hard));

  // But the relaxed thresholds (7/8, 5/8) admit id with every slope in
  // [5/7, 3].
  const ValuedTemplate relaxed = lin2_valued(Rat(7, 8), Rat(5, 8));
  CHECK(is_kappa_polymorphism(id, Rat(1), relaxed));
  CHECK(is_kappa_polymorphism(id, Rat(3), relaxed));
  CHECK_FALSE(is_kappa_polymorphism(id, Rat(4), relaxed));
  CHECK_FALSE(is_kappa_polymorphism(id, Rat(1, 2), relaxed));
}

TEST_CASE("plurimorphism check finds a shared slope") {
  const ValuedTemplate tmpl = lin2_valued(1, 1);
  const auto projection_weighting = [&](int arity, int n) {
    Weighting w;
    w.arity = arity;
    for (int z = 0; z < arity; ++z)
      w.in.entries.emplace_back(z, Rat(1, arity));
    FnSpace fs(tmpl.A.dom(), tmpl.B.dom(), arity);
    w.support = {fs.projection(n)};
    w.out = Distribution::point_mass(0);
    w.validate(tmpl.A, tmpl.B);
    return w;
  };
  // Identity at arity 1 needs kappa >= 1; the first projection at arity 2
  // sees the point (1/2, 0) and needs kappa >= 2. Shared slope: 2.
  const std::vector<Weighting> family{projection_weighting(1, 0),
                                      projection_weighting(2, 0)};
  const auto p = plurimorphism_check(family, tmpl);
  REQUIRE(p.has_value());
  CHECK(p->members.size() == 2);
  CHECK(p->kappa == Rat(2));
  for (const Weighting& w : p->members)
    CHECK(is_kappa_polymorphism(w, p->kappa, tmpl));

  const ValuedTemplate hard = lin2_valued(Rat(1, 2), Rat(3, 4));
  CHECK_FALSE(plurimorphism_check(family, hard).has_value());
}

TEST_CASE("weighting minors push forward both distributions") {
  const ValuedTemplate tmpl = lin2_valued(1, 1);
  const Weighting w = uniform_weighting(tmpl, 2);
  // pi = (0, 0): both coordinates collapse onto the first.
  const Weighting m =
      weighting_minor(w, {0, 0}, 1, tmpl.A.dom(), tmpl.B.dom());
  CHECK(m.arity == 1);
  CHECK(m.in.prob(0) == Rat(1));
  CHECK_NOTHROW(m.validate(tmpl.A, tmpl.B));
  // The 16 binary functions collapse onto their diagonals: each of the 4
  // unary functions is hit by 4 of them.
  REQUIRE(m.support.size() == 4);
  for (std::size_t i = 0; i < m.support.size(); ++i)
    CHECK(m.out.prob(static_cast<int>(i)) == Rat(1, 4));
}

TEST_CASE("support minion closes under minors") {
  const ValuedTemplate tmpl = lin2_crisp();
  // A weighting supported on the full ternary parity only.
  Weighting w;
  w.arity = 3;
  w.in = Distribution::point_mass(0);
  const Minion m3 = enumerate_polymorphisms(tmpl.A, tmpl.B, 3);
  FnSpace fs(tmpl.A.dom(), tmpl.B.dom(), 3);
  for (const NaryFunction& f : m3.fns) {
    int ones = 0;
    for (int n = 0; n < 3; ++n) {
      std::vector<int> unit(3, 0);
      unit[n] = 1;
      ones += fs.apply(f, 0, unit);
    }
    if (ones == 3) {
      w.support.push_back(f);
      break;
    }
  }
  REQUIRE(w.support.size() == 1);
  w.out = Distribution::point_mass(0);
  w.validate(tmpl.A, tmpl.B);

  const SupportMinion sm =
      support_minion({w}, tmpl.A.dom(), tmpl.B.dom(), 3);
  REQUIRE(sm.levels.size() == 3);
  // Minors of the full parity: identity (arity 1) and the two
  // single-coordinate parities at arity 2... all added by closure.
  CHECK(sm.levels[2].size() == 1);
  CHECK(sm.levels[0].size() == 1);  // x ^ x ^ x = x
  CHECK(sm.levels[1].size() == 2);  // x and y from the three collapses
  CHECK(sm.added_by_closure[0].size() == 1);
  CHECK(sm.added_by_closure[1].size() == 2);
  CHECK(sm.added_by_closure[2].size() == 0);
}

TEST_CASE("expectation helpers") {
  const ValuedTemplate tmpl = lin2_valued(1, 1);
  const Weighting w = uniform_weighting(tmpl, 2);
  CHECK(expect_in(w, {Rat(1), Rat(3)}) == Rat(2));

  const Minion m = enumerate_polymorphisms(tmpl.A, tmpl.B, 2);
  std::vector<Rat> beta(static_cast<std::size_t>(m.size()), Rat(0));
  beta[0] = Rat(16);
  CHECK(expect_out(w, m, beta) == Rat(1));
}

TEST_CASE("weighting validation rejects non-polymorphic support") {
  const ValuedTemplate tmpl = lin2_crisp();
  Weighting w;
  w.arity = 1;
  w.in = Distribution::point_mass(0);
  FnSpace fs(tmpl.A.dom(), tmpl.B.dom(), 1);
  NaryFunction zero;
  zero.arity = 1;
  zero.tables = {{0, 0}};  // constant 0 is not a polymorphism of parity
  w.support = {zero};
  w.out = Distribution::point_mass(0);
  CHECK_THROWS(w.validate(tmpl.A, tmpl.B));
}
