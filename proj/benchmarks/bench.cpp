// Microbenchmarks for the heavy paths: exact LP solving, polymorphism
// enumeration, canonical synthesis, the long-code test formula, and the
// instance reductions.

#include <benchmark/benchmark.h>

#include "pvcsp/canonical.hpp"
#include "pvcsp/fourier.hpp"
#include "pvcsp/reduction.hpp"
#include "pvcsp/zoo.hpp"

namespace {

using namespace pvcsp;

ValuedTemplate lin2(const std::string& name) {
  return builtin_template(name);
}

void BM_EnumeratePolymorphisms(benchmark::State& state) {
  const ValuedTemplate tmpl = lin2("3lin2-crisp");
  const int arity = static_cast<int>(state.range(0));
  for (auto _ : state) {
    Minion m = enumerate_polymorphisms(tmpl.A, tmpl.B, arity);
    benchmark::DoNotOptimize(m);
  }
}
BENCHMARK(BM_EnumeratePolymorphisms)->Arg(3)->Arg(4);

void BM_CheckTemplate(benchmark::State& state) {
  ZooParams p;
  p.rats["c"] = Rat(7, 8);
  p.rats["s"] = Rat(5, 8);
  const ValuedTemplate tmpl = builtin_template("3lin2", p);
  for (auto _ : state) {
    CheckTemplateResult res = check_template(tmpl);
    benchmark::DoNotOptimize(res);
  }
}
BENCHMARK(BM_CheckTemplate);

void BM_CanonicalImproved(benchmark::State& state) {
  const ValuedTemplate tmpl = lin2("3lin2-crisp");
  const int arity = static_cast<int>(state.range(0));
  CanonicalRequest req;
  req.tmpl = tmpl;
  req.mode = CanonicalMode::Improved;
  CanonicalFamily fam;
  fam.arity = arity;
  fam.alpha.assign(static_cast<std::size_t>(arity), Rat(0));
  const Minion pol = enumerate_polymorphisms(tmpl.A, tmpl.B, arity);
  fam.beta.assign(static_cast<std::size_t>(pol.size()), Rat(0));
  req.families.push_back(fam);
  for (auto _ : state) {
    CanonicalResult res = synthesize(req);
    benchmark::DoNotOptimize(res);
  }
}
BENCHMARK(BM_CanonicalImproved)->Arg(3)->Arg(4);

void BM_LPSolve(benchmark::State& state) {
  // The arity-1 template-check system for a valued parity pair.
  ZooParams p;
  p.rats["c"] = Rat(1, 2);
  p.rats["s"] = Rat(3, 4);
  const ValuedTemplate tmpl = builtin_template("3lin2", p);
  const CheckTemplateResult seed = check_template(tmpl);
  for (auto _ : state) {
    LPResult res = solve_feasibility(seed.lp);
    benchmark::DoNotOptimize(res);
  }
}
BENCHMARK(BM_LPSolve);

void BM_BuildPhiPi(benchmark::State& state) {
  HastadConfig cfg;
  cfg.d_size = static_cast<int>(state.range(0));
  cfg.e_size = 2;
  cfg.delta = Rat(1, 8);
  std::vector<int> pi(static_cast<std::size_t>(cfg.d_size), 0);
  for (std::size_t i = 0; i < pi.size(); ++i)
    pi[i] = static_cast<int>(i % static_cast<std::size_t>(cfg.e_size));
  for (auto _ : state) {
    PayoffFormula phi = build_phi_pi(cfg, pi);
    benchmark::DoNotOptimize(phi);
  }
}
BENCHMARK(BM_BuildPhiPi)->Arg(2)->Arg(3);

void BM_FourierExpand(benchmark::State& state) {
  const int arity = static_cast<int>(state.range(0));
  PmFunction f;
  f.arity = arity;
  f.table.assign(std::size_t{1} << arity, 1);
  for (std::size_t i = 0; i < f.table.size(); ++i)
    if (__builtin_popcountll(i) % 2 == 1) f.table[i] = -1;
  for (auto _ : state) {
    FourierExpansion ex = fourier_expand(f);
    benchmark::DoNotOptimize(ex);
  }
}
BENCHMARK(BM_FourierExpand)->Arg(4)->Arg(6);

void BM_RoundTripMc(benchmark::State& state) {
  const ValuedTemplate tmpl = lin2("3lin2-crisp");
  PayoffFormula phi;
  phi.sig = tmpl.A.sig_ptr();
  phi.vars = SortedSet({{"x0", 0}, {"x1", 0}, {"x2", 0}, {"x3", 0}}, 1);
  phi.atoms.push_back({Rat(1), 0, {0, 1, 2}});
  phi.atoms.push_back({Rat(1), 1, {1, 2, 3}});
  phi.atoms.push_back({Rat(1), 0, {0, 2, 3}});
  for (auto _ : state) {
    MCInstance inst = pcsp_to_mc(phi, tmpl);
    PayoffFormula back = mc_to_pcsp(inst, tmpl);
    benchmark::DoNotOptimize(back);
  }
}
BENCHMARK(BM_RoundTripMc);

}  // namespace

BENCHMARK_MAIN();
