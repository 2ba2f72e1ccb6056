#include <string>
#include <vector>

#include "doctest.h"
#include "helpers.hpp"
#include "pvcsp/json_io.hpp"
#include "pvcsp/zoo.hpp"

using namespace pvcsp;
using namespace testutil;

namespace {

ZooParams ints(std::map<std::string, int> m) {
  ZooParams p;
  p.ints = std::move(m);
  return p;
}

ZooParams rats(std::map<std::string, Rat> m) {
  ZooParams p;
  p.rats = std::move(m);
  return p;
}

/// Parameters that make each built-in constructible.
ZooParams default_params(const std::string& name) {
  if (name == "3lin2-pm") return rats({{"delta", Rat(1, 8)}});
  if (name == "clique") return ints({{"k", 3}});
  if (name == "coloring") return ints({{"a", 2}, {"b", 3}});
  if (name == "glc") return ints({{"d", 2}, {"e", 2}});
  if (name == "independent-set") return rats({{"c", Rat(1, 2)}});
  if (name == "klin2") return ints({{"k", 2}});
  if (name == "label-cover") return ints({{"d", 2}, {"e", 2}});
  if (name == "unique-games") return ints({{"d", 2}});
  if (name == "vertex-cover") return rats({{"c", Rat(1, 2)}});
  return {};
}

}  // namespace

TEST_CASE("every built-in constructs and validates") {
  const std::vector<std::string> names = zoo_names();
  CHECK(names.size() == 11);
  for (const std::string& name : names) {
    CAPTURE(name);
    const ValuedTemplate tmpl = builtin_template(name, default_params(name));
    CHECK_NOTHROW(tmpl.validate());
  }
}

TEST_CASE("parity templates") {
  const ValuedTemplate v = builtin_template("3lin2");
  CHECK(v.c == Rat(1));
  CHECK(v.s == Rat(1));
  CHECK(v.A.sig().symbols[0].id == "phi0");
  CHECK(v.A.sig().symbols[1].id == "phi1");
  // {0,1}-valued: every triple is feasible, payoff 1 iff the parity matches.
  CHECK(v.A.value(0, {0, 0, 0}) == fin(1));
  CHECK(v.A.value(0, {0, 0, 1}) == fin(0));
  CHECK(v.A.value(1, {0, 0, 1}) == fin(1));
  CHECK(v.A.feas(0).size() == 8);

  const ValuedTemplate thresholds =
      builtin_template("3lin2", rats({{"c", Rat(7, 8)}, {"s", Rat(5, 8)}}));
  CHECK(thresholds.c == Rat(7, 8));
  CHECK(thresholds.s == Rat(5, 8));

  // c < s is a legal (if useless) template.
  CHECK_NOTHROW(
      builtin_template("3lin2", rats({{"c", Rat(1, 2)}, {"s", Rat(3, 4)}})));

  const ValuedTemplate crisp = builtin_template("3lin2-crisp");
  CHECK(crisp.c == Rat(0));
  CHECK(crisp.s == Rat(0));
  CHECK(crisp.A.crisp());
  CHECK(crisp.A.feas(0).size() == 4);
  CHECK(crisp.A.value(0, {1, 1, 1}) == ninf());

  const ValuedTemplate k5 = builtin_template("klin2", ints({{"k", 5}}));
  CHECK(k5.A.sig().symbols[0].arity.size() == 5);
  CHECK(k5.A.feas(0).size() == 32);
  CHECK(k5.A.value(0, {1, 1, 0, 0, 0}) == fin(1));
  CHECK(k5.A.value(1, {1, 1, 0, 0, 0}) == fin(0));

  const ValuedTemplate pm =
      builtin_template("3lin2-pm", rats({{"delta", Rat(1, 8)}}));
  CHECK(pm.c == Rat(3, 4));
  CHECK(pm.s == Rat(1, 4));
  CHECK(pm.A.sig().symbols[0].id == "phi-1");
}

TEST_CASE("clique and coloring") {
  const ValuedTemplate k3 = builtin_template("clique", ints({{"k", 3}}));
  CHECK(k3.A.dom().size() == 3);
  CHECK(k3.A.sig().symbols[0].id == "edge");
  CHECK(k3.A.value(0, {0, 1}) == fin(0));
  CHECK(k3.A.value(0, {1, 1}) == ninf());
  CHECK(k3.c == Rat(0));

  const ValuedTemplate col =
      builtin_template("coloring", ints({{"a", 2}, {"b", 3}}));
  CHECK(col.A.dom().size() == 2);
  CHECK(col.B.dom().size() == 3);
  CHECK(col.c == Rat(1));
  CHECK(col.A.value(0, {0, 1}) == fin(1));
  CHECK(col.A.value(0, {0, 0}) == fin(0));  // loops are feasible but worthless
  CHECK(col.A.feas(0).size() == 4);

  CHECK_THROWS_AS(builtin_template("coloring", ints({{"a", 3}, {"b", 2}})),
                  ConfigError);
  CHECK_THROWS_AS(builtin_template("clique", ints({{"k", 1}})), ConfigError);
}

TEST_CASE("map templates") {
  const ValuedTemplate glc = builtin_template("glc", ints({{"d", 2}, {"e", 2}}));
  CHECK(glc.A.sig().sorts == std::vector<std::string>{"d", "e"});
  CHECK(glc.A.sig().symbols.size() == 4);  // all maps 2 -> 2
  CHECK(glc.c == Rat(1));
  CHECK(glc.s == Rat(1));
  const int e0 = glc.A.dom().of_sort(1)[0];
  CHECK(glc.A.value(0, {0, e0}) == fin(1));  // pi.0.0 maps 0 to 0
  CHECK(glc.A.value(0, {1, e0}) == fin(1));
  CHECK(glc.A.value(1, {1, e0}) == fin(0));  // pi.0.1 maps 1 to 1

  const ValuedTemplate lc =
      builtin_template("label-cover", ints({{"d", 2}, {"e", 2}}));
  CHECK(lc.A.crisp());
  CHECK(lc.c == Rat(0));
  CHECK(lc.A.value(0, {0, e0}) == fin(0));
  CHECK(lc.A.value(1, {1, e0}) == ninf());
  CHECK(lc.A.feas(0).size() == 2);  // one satisfied pair per u

  const ValuedTemplate ug = builtin_template("unique-games", ints({{"d", 3}}));
  CHECK(ug.A.sig().symbols.size() == 6);  // 3! bijections
  CHECK(ug.A.dom().of_sort(0).size() == 3);
  CHECK(ug.A.dom().of_sort(1).size() == 3);
  CHECK_THROWS_AS(builtin_template("unique-games", ints({{"d", 9}})),
                  ConfigError);
}

TEST_CASE("subset-selection templates") {
  const ValuedTemplate is =
      builtin_template("independent-set", rats({{"c", Rat(1, 2)}}));
  CHECK(is.c == Rat(1, 2));
  CHECK(is.s == Rat(1, 2));
  // phi rewards picking a vertex; psi forbids adjacent picks.
  CHECK(is.A.value(0, {0}) == fin(0));
  CHECK(is.A.value(0, {1}) == fin(1));
  CHECK(is.A.value(1, {1, 1}) == ninf());
  CHECK(is.A.value(1, {0, 1}) == fin(0));

  const ValuedTemplate vc =
      builtin_template("vertex-cover", rats({{"c", Rat(1, 2)}}));
  CHECK(vc.c == Rat(-1, 2));
  CHECK(vc.s == Rat(-1, 2));
  // phi charges for picking a vertex; psi insists every edge is covered.
  CHECK(vc.A.value(0, {1}) == fin(-1));
  CHECK(vc.A.value(0, {0}) == fin(0));
  CHECK(vc.A.value(1, {0, 0}) == ninf());
  CHECK(vc.A.value(1, {1, 0}) == fin(0));

  for (const Rat& bad : {Rat(0), Rat(2), Rat(-1)}) {
    CHECK_THROWS_AS(builtin_template("independent-set", rats({{"c", bad}})),
                    ConfigError);
    CHECK_THROWS_AS(builtin_template("vertex-cover", rats({{"c", bad}})),
                    ConfigError);
  }
}

TEST_CASE("parameter plumbing rejects junk") {
  CHECK_THROWS_AS(builtin_template("no-such-template"), ConfigError);
  // Missing required parameter.
  CHECK_THROWS_AS(builtin_template("clique"), ConfigError);
  CHECK_THROWS_AS(builtin_template("3lin2-pm"), ConfigError);
  // Unknown parameter.
  CHECK_THROWS_AS(builtin_template("3lin2", ints({{"k", 3}})), ConfigError);
  CHECK_THROWS_AS(
      builtin_template("clique", ints({{"k", 3}, {"extra", 1}})),
      ConfigError);
  CHECK_THROWS_AS(builtin_template("3lin2", rats({{"kappa", Rat(1)}})),
                  ConfigError);
  // Out-of-range rationals.
  CHECK_THROWS_AS(builtin_template("3lin2-pm", rats({{"delta", Rat(3, 8)}})),
                  ConfigError);
}

TEST_CASE("every built-in survives a json round trip") {
  for (const std::string& name : zoo_names()) {
    CAPTURE(name);
    const ValuedTemplate tmpl = builtin_template(name, default_params(name));
    const Json j = template_to_json(tmpl);
    const ValuedTemplate back = template_from_json(j);
    CHECK(template_to_json(back) == j);
    CHECK(back.c == tmpl.c);
    CHECK(back.s == tmpl.s);
    CHECK(back.A.sig().symbols.size() == tmpl.A.sig().symbols.size());
  }
}
