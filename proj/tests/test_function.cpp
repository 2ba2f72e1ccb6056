#include <set>

#include "doctest.h"
#include "helpers.hpp"
#include "pvcsp/function.hpp"

using namespace pvcsp;
using namespace testutil;

namespace {

SortedSet bool_set() { return SortedSet({{"0", 0}, {"1", 0}}, 1); }

}  // namespace

TEST_CASE("function space ranking is big-endian over sort positions") {
  const SortedSet b = bool_set();
  FnSpace fs(b, b, 2);
  CHECK(fs.inputs(0) == 4);
  CHECK(fs.rank_row(0, {0, 0}) == 0);
  CHECK(fs.rank_row(0, {0, 1}) == 1);
  CHECK(fs.rank_row(0, {1, 0}) == 2);
  CHECK(fs.rank_row(0, {1, 1}) == 3);
  for (std::int64_t r = 0; r < 4; ++r)
    CHECK(fs.rank_row(0, fs.unrank_row(0, r)) == r);
}

TEST_CASE("projections and application") {
  const SortedSet b = bool_set();
  FnSpace fs(b, b, 3);
  for (int n = 0; n < 3; ++n) {
    const NaryFunction p = fs.projection(n);
    CHECK(fs.as_projection(p) == n);
    for (std::int64_t r = 0; r < fs.inputs(0); ++r) {
      const std::vector<int> row = fs.unrank_row(0, r);
      CHECK(fs.apply(p, 0, row) == row[n]);
    }
  }
  // XOR of three is not a projection.
  NaryFunction x;
  x.arity = 3;
  x.tables.resize(1);
  for (std::int64_t r = 0; r < 8; ++r) {
    const std::vector<int> row = fs.unrank_row(0, r);
    x.tables[0].push_back(row[0] ^ row[1] ^ row[2]);
  }
  CHECK(fs.as_projection(x) == -1);
  CHECK_NOTHROW(fs.validate(x));
}

TEST_CASE("minors compose") {
  const SortedSet b = bool_set();
  FnSpace fs3(b, b, 3);
  FnSpace fs2(b, b, 2);

  NaryFunction x;  // ternary XOR
  x.arity = 3;
  x.tables.resize(1);
  for (std::int64_t r = 0; r < 8; ++r) {
    const std::vector<int> row = fs3.unrank_row(0, r);
    x.tables[0].push_back(row[0] ^ row[1] ^ row[2]);
  }

  // pi = (0, 0, 1): f^(pi)(a, b) = f(a, a, b) = b.
  const NaryFunction m = fs3.minor(x, {0, 0, 1}, 2);
  CHECK(m == fs2.projection(1));

  // Composition law: (f^(pi))^(rho) = f^(rho o pi).
  const std::vector<int> pi{1, 0, 1};   // 3 -> 2 coordinates
  const std::vector<int> rho{0, 0};     // 2 -> 1 coordinate
  const NaryFunction lhs = fs2.minor(fs3.minor(x, pi, 2), rho, 1);
  std::vector<int> comp(3);
  for (int i = 0; i < 3; ++i) comp[i] = rho[pi[i]];
  const NaryFunction rhs = fs3.minor(x, comp, 1);
  CHECK(lhs == rhs);
}

TEST_CASE("function enumeration is table-lexicographic and exhaustive") {
  const SortedSet b = bool_set();
  FnSpace fs(b, b, 2);
  CHECK(fs.count_all() == 16);
  std::vector<NaryFunction> fns;
  fs.for_each_function(1 << 16, [&](const NaryFunction& f) {
    fns.push_back(f);
  });
  REQUIRE(fns.size() == 16);
  // Strictly ascending in table order; equals the struct ordering.
  for (std::size_t i = 0; i + 1 < fns.size(); ++i) CHECK(fns[i] < fns[i + 1]);
  CHECK(fns.front().tables[0] == std::vector<int>{0, 0, 0, 0});
  CHECK(fns.back().tables[0] == std::vector<int>{1, 1, 1, 1});

  CHECK_THROWS_AS(fs.for_each_function(5, [](const NaryFunction&) {}),
                  ResourceLimitError);
}

TEST_CASE("multi-sorted function spaces act per sort") {
  const SortedSet dom({{"d0", 0}, {"d1", 0}, {"e0", 1}}, 2);
  FnSpace fs(dom, dom, 2);
  CHECK(fs.inputs(0) == 4);
  CHECK(fs.inputs(1) == 1);
  CHECK(fs.count_all() == 16);  // 2^4 * 1^1

  const NaryFunction p = fs.projection(0);
  CHECK(p.tables[1] == std::vector<int>{2});  // e0 is global index 2
  CHECK(fs.apply(p, 1, {2, 2}) == 2);
}

TEST_CASE("apply_rows evaluates a function on matrix rows") {
  const ValuedTemplate tmpl = lin2_crisp();
  FnSpace fs(tmpl.A.dom(), tmpl.B.dom(), 2);
  RelationMatrixPair pair;
  pair.symbol = 0;
  pair.columns = {{0, 1, 1}, {1, 0, 1}};
  // Row 0 = (0,1), row 1 = (1,0), row 2 = (1,1).
  const NaryFunction p0 = fs.projection(0);
  CHECK(apply_rows(fs, p0, pair, tmpl.A.sig()) == Tuple{0, 1, 1});
  const NaryFunction p1 = fs.projection(1);
  CHECK(apply_rows(fs, p1, pair, tmpl.A.sig()) == Tuple{1, 0, 1});
}
