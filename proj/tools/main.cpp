// Command-line frontend for the pvcsp workbench: template checking,
// polymorphism enumeration, canonical-formula synthesis, instance
// reductions, gadget verification, pp-definability, and the Fourier-side
// long-code checks. All file I/O is JSON with "p/q" rationals; reports go
// to stdout, diagnostics and timing to stderr.
//
// Exit codes: 0 ok, 1 negative verdict, 2 usage error, 3 resource limit.

#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "pvcsp/canonical.hpp"
#include "pvcsp/fourier.hpp"
#include "pvcsp/json_io.hpp"
#include "pvcsp/reduction.hpp"
#include "pvcsp/zoo.hpp"

namespace {

using namespace pvcsp;

constexpr int kExitOk = 0;
constexpr int kExitNegative = 1;
constexpr int kExitUsage = 2;
constexpr int kExitResource = 3;
constexpr int kExitInternal = 70;

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open file: " + path);
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ParseError(e.what(), path);
  }
}

/// One template selector: either a built-in name with parameters or a
/// template file. The convenience parameter flags cover every zoo
/// parameter; --param accepts additional key=value pairs.
struct TemplateArg {
  std::string builtin;
  std::string file;
  std::vector<std::string> params;

  void attach(CLI::App* cmd, const std::string& prefix = "") {
    const std::string dash = prefix.empty() ? "--" : "--" + prefix + "-";
    auto* b = cmd->add_option(dash + "builtin", builtin,
                              "built-in template name");
    auto* f = cmd->add_option(dash + "template", file, "template JSON file");
    b->excludes(f);
    cmd->add_option(dash + "param", params,
                    "built-in parameter as key=value (repeatable)");
    if (prefix.empty()) {
      // Convenience spellings for the zoo parameters.
      for (const char* key : {"c", "s", "delta", "kappa"})
        cmd->add_option_function<std::string>(
            std::string("--") + key,
            [this, key](const std::string& v) {
              params.push_back(std::string(key) + "=" + v);
            },
            std::string("built-in parameter ") + key);
      for (const char* key : {"k", "d", "e", "a", "b"})
        cmd->add_option_function<std::string>(
            std::string("--") + key,
            [this, key](const std::string& v) {
              params.push_back(std::string(key) + "=" + v);
            },
            std::string("built-in parameter ") + key);
    }
  }

  ValuedTemplate load() const {
    if (builtin.empty() && file.empty())
      throw ConfigError("no template given: use --builtin or --template");
    if (!builtin.empty()) {
      ZooParams zp;
      for (const std::string& kv : params) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos)
          throw ConfigError("parameter must be key=value: " + kv);
        const std::string key = kv.substr(0, eq);
        const std::string value = kv.substr(eq + 1);
        if (key == "k" || key == "d" || key == "e" || key == "a" ||
            key == "b") {
          std::size_t used = 0;
          int n = 0;
          try {
            n = std::stoi(value, &used);
          } catch (const std::exception&) {
            throw ConfigError("parameter " + key + " expects an integer");
          }
          if (used != value.size())
            throw ConfigError("parameter " + key + " expects an integer");
          zp.ints[key] = n;
        } else {
          zp.rats[key] = rat_from_string(value);
        }
      }
      return builtin_template(builtin, zp);
    }
    if (!params.empty())
      throw ConfigError("parameters only apply to built-in templates");
    return template_from_json(read_json_file(file), file);
  }
};

struct GlobalState {
  Limits lim;
  bool dump_lp = false;
  std::vector<std::string> argv;

  Json report(Json result) const {
    Json j;
    j["command"] = argv;
    Json config;
    config["max_minion_size"] = lim.max_minion_size;
    config["max_mat_pairs"] = lim.max_mat_pairs;
    config["max_lp_rows"] = lim.max_lp_rows;
    config["max_assignments"] = lim.max_assignments;
    config["fourier_arity"] = lim.fourier_arity;
    config["jobs"] = lim.jobs;
    j["config"] = std::move(config);
    j["result"] = std::move(result);
    return j;
  }

  int emit(Json result, int exit_code) const {
    std::cout << report(std::move(result)).dump(2) << "\n";
    return exit_code;
  }
};

CanonicalMode parse_mode(const std::string& mode) {
  if (mode == "baby") return CanonicalMode::Baby;
  if (mode == "thresholds") return CanonicalMode::Thresholds;
  if (mode == "improved") return CanonicalMode::Improved;
  if (mode == "cf") return CanonicalMode::ConstantFactor;
  throw ConfigError("unknown canonical mode: " + mode);
}

PPMode parse_pp_mode(const std::string& mode) {
  if (mode == "crisp") return PPMode::Crisp;
  if (mode == "valued") return PPMode::Valued;
  throw ConfigError("unknown pp mode: " + mode);
}

int run(int argc, char** argv) {
  GlobalState g;
  for (int i = 0; i < argc; ++i) g.argv.emplace_back(argv[i]);

  CLI::App app{"Workbench for the algebraic theory of valued promise CSPs"};
  app.require_subcommand(1);
  app.add_option("--max-minion-size", g.lim.max_minion_size,
                 "bound on candidate function spaces");
  app.add_option("--max-mat-pairs", g.lim.max_mat_pairs,
                 "bound on relation-matrix pair counts");
  app.add_option("--max-lp-rows", g.lim.max_lp_rows, "bound on LP rows");
  app.add_option("--max-assignments", g.lim.max_assignments,
                 "bound on brute-force assignment sweeps");
  app.add_option("--fourier-arity", g.lim.fourier_arity,
                 "bound on Fourier expansion arity");
  app.add_option("--jobs", g.lim.jobs, "worker threads for sweeps");
  app.add_flag("--dump-lp", g.dump_lp,
               "include assembled LP systems in reports");

  int exit_code = kExitOk;

  // ---- check-template ----
  auto* check = app.add_subcommand(
      "check-template", "decide whether a template admits a unary weighting");
  auto check_tmpl = std::make_shared<TemplateArg>();
  check_tmpl->attach(check);
  check->callback([&, check_tmpl] {
    const ValuedTemplate tmpl = check_tmpl->load();
    const CheckTemplateResult res = check_template(tmpl, g.lim);
    Json result = check_result_to_json(res, tmpl, g.dump_lp);
    result["template"] = template_to_json(tmpl);
    exit_code = g.emit(std::move(result), res.valid ? kExitOk : kExitNegative);
  });

  // ---- pol enum ----
  auto* pol = app.add_subcommand("pol", "feasibility polymorphisms");
  pol->require_subcommand(1);
  auto* pol_enum =
      pol->add_subcommand("enum", "enumerate polymorphisms of one arity");
  auto pol_tmpl = std::make_shared<TemplateArg>();
  pol_tmpl->attach(pol_enum);
  auto pol_arity = std::make_shared<int>(1);
  pol_enum->add_option("--arity", *pol_arity, "polymorphism arity")
      ->required();
  pol_enum->callback([&, pol_tmpl, pol_arity] {
    const ValuedTemplate tmpl = pol_tmpl->load();
    const Minion m =
        enumerate_polymorphisms(tmpl.A, tmpl.B, *pol_arity, g.lim);
    Json fns = Json::array();
    for (const NaryFunction& f : m.fns)
      fns.push_back(function_to_json(f, tmpl.A.dom(), tmpl.B.dom()));
    Json result;
    result["arity"] = m.arity;
    result["count"] = m.size();
    result["functions"] = std::move(fns);
    exit_code = g.emit(std::move(result), kExitOk);
  });

  // ---- pluri check ----
  auto* pluri = app.add_subcommand("pluri", "plurimorphism checking");
  pluri->require_subcommand(1);
  auto* pluri_check = pluri->add_subcommand(
      "check", "search a shared slope for a family of weightings");
  auto pluri_tmpl = std::make_shared<TemplateArg>();
  pluri_tmpl->attach(pluri_check);
  auto pluri_family = std::make_shared<std::string>();
  pluri_check->add_option("--family", *pluri_family, "weightings JSON file")
      ->required();
  pluri_check->callback([&, pluri_tmpl, pluri_family] {
    const ValuedTemplate tmpl = pluri_tmpl->load();
    const std::vector<Weighting> family = weightings_from_json(
        read_json_file(*pluri_family), tmpl, *pluri_family, g.lim);
    const std::optional<Plurimorphism> p =
        plurimorphism_check(family, tmpl, g.lim);
    Json result;
    result["plurimorphism"] = p.has_value();
    if (p) result["kappa"] = rat_to_string(p->kappa);
    exit_code = g.emit(std::move(result), p ? kExitOk : kExitNegative);
  });

  // ---- canonical ----
  auto* canonical = app.add_subcommand(
      "canonical", "canonical-formula synthesis / dual witness extraction");
  auto canon_tmpl = std::make_shared<TemplateArg>();
  canon_tmpl->attach(canonical);
  auto canon_mode = std::make_shared<std::string>("baby");
  auto canon_families = std::make_shared<std::string>();
  auto canon_cp = std::make_shared<std::string>();
  auto canon_sp = std::make_shared<std::string>();
  canonical->add_option("--mode", *canon_mode,
                        "baby | thresholds | improved | cf");
  canonical->add_option("--families", *canon_families,
                        "canonical families JSON file")
      ->required();
  canonical->add_option("--c-prime", *canon_cp,
                        "relaxed completeness (thresholds mode)");
  canonical->add_option("--s-prime", *canon_sp,
                        "relaxed soundness (thresholds mode)");
  canonical->callback([&, canon_tmpl, canon_mode, canon_families, canon_cp,
                       canon_sp] {
    CanonicalRequest req;
    req.tmpl = canon_tmpl->load();
    req.mode = parse_mode(*canon_mode);
    req.families = families_from_json(read_json_file(*canon_families),
                                      *canon_families);
    if (!canon_cp->empty()) req.c_prime = rat_from_string(*canon_cp);
    if (!canon_sp->empty()) req.s_prime = rat_from_string(*canon_sp);
    const CanonicalResult res = synthesize(req, g.lim);
    exit_code = g.emit(canonical_result_to_json(res, req.tmpl, g.dump_lp),
                       res.is_formulas ? kExitOk : kExitNegative);
  });

  // ---- lp solve ----
  auto* lp = app.add_subcommand("lp", "exact rational LP feasibility");
  lp->require_subcommand(1);
  auto* lp_solve = lp->add_subcommand(
      "solve", "decide Ax <= b, x >= 0 and emit a verified certificate");
  auto lp_file = std::make_shared<std::string>();
  lp_solve->add_option("--lp", *lp_file, "LP system JSON file")->required();
  lp_solve->callback([&, lp_file] {
    const LPSystem sys = lp_from_json(read_json_file(*lp_file), *lp_file);
    const LPResult res = solve_feasibility(sys, g.lim);
    std::string why;
    if (!verify_certificate(sys, res, &why))
      throw ContractError("solver certificate failed verification: " + why);
    Json result = lp_result_to_json(res, sys);
    if (g.dump_lp) result["lp"] = lp_to_json(sys);
    exit_code =
        g.emit(std::move(result), res.feasible ? kExitOk : kExitNegative);
  });

  // ---- fourier ----
  auto* fourier =
      app.add_subcommand("fourier", "long-code tests on the +-1 cube");
  fourier->require_subcommand(1);

  auto* fv = fourier->add_subcommand(
      "verify-hastad", "check both dictatorship-test conditions exhaustively");
  auto fv_d = std::make_shared<int>(0);
  auto fv_e = std::make_shared<int>(0);
  auto fv_delta = std::make_shared<std::string>();
  fv->add_option("--d", *fv_d, "left index set size")->required();
  fv->add_option("--e", *fv_e, "right index set size")->required();
  fv->add_option("--delta", *fv_delta, "noise rate (rational)")->required();
  fv->callback([&, fv_d, fv_e, fv_delta] {
    HastadConfig cfg;
    cfg.d_size = *fv_d;
    cfg.e_size = *fv_e;
    cfg.delta = rat_from_string(*fv_delta);
    const GlcReport rep = verify_glc_conditions(cfg, g.lim);
    exit_code =
        g.emit(glc_report_to_json(rep), rep.ok ? kExitOk : kExitNegative);
  });

  auto* fe = fourier->add_subcommand(
      "expand", "Fourier expansion, folding, and influence distribution");
  auto fe_fn = std::make_shared<std::string>();
  fe->add_option("--fn", *fe_fn, "+-1 function JSON file (table array)")
      ->required();
  fe->callback([&, fe_fn] {
    const PmFunction f = pm_from_json(read_json_file(*fe_fn), *fe_fn);
    const FourierExpansion ex = fourier_expand(f, g.lim);
    const PmFunction folded = fold(f);
    Json result;
    result["expansion"] = fourier_expansion_to_json(ex);
    result["folded"] = folded.table;
    result["lambda"] = distribution_to_json(lambda_dist(f, g.lim));
    exit_code = g.emit(std::move(result), kExitOk);
  });

  // ---- reduce ----
  auto* reduce = app.add_subcommand("reduce", "instance-level reductions");
  reduce->require_subcommand(1);

  auto* r_pm = reduce->add_subcommand(
      "pcsp-to-mc", "formula to minor-condition instance (crisp)");
  auto r_pm_tmpl = std::make_shared<TemplateArg>();
  r_pm_tmpl->attach(r_pm);
  auto r_pm_formula = std::make_shared<std::string>();
  auto r_pm_k = std::make_shared<int>(-1);
  r_pm->add_option("--formula", *r_pm_formula, "payoff formula JSON file")
      ->required();
  r_pm->add_option("--arity-bound", *r_pm_k, "arity bound k (default: auto)");
  r_pm->callback([&, r_pm_tmpl, r_pm_formula, r_pm_k] {
    const ValuedTemplate tmpl = r_pm_tmpl->load();
    const PayoffFormula phi = formula_from_json(
        read_json_file(*r_pm_formula), tmpl, *r_pm_formula);
    std::optional<int> k;
    if (*r_pm_k >= 0) k = *r_pm_k;
    exit_code = g.emit(mc_to_json(pcsp_to_mc(phi, tmpl, k, g.lim)), kExitOk);
  });

  auto* r_mp = reduce->add_subcommand(
      "mc-to-pcsp", "minor-condition instance to formula (crisp)");
  auto r_mp_tmpl = std::make_shared<TemplateArg>();
  r_mp_tmpl->attach(r_mp);
  auto r_mp_mc = std::make_shared<std::string>();
  r_mp->add_option("--mc", *r_mp_mc, "minor-condition JSON file")->required();
  r_mp->callback([&, r_mp_tmpl, r_mp_mc] {
    const ValuedTemplate tmpl = r_mp_tmpl->load();
    const MCInstance inst = mc_from_json(read_json_file(*r_mp_mc), *r_mp_mc);
    exit_code =
        g.emit(formula_to_json(mc_to_pcsp(inst, tmpl, g.lim)), kExitOk);
  });

  auto* r_pv = reduce->add_subcommand(
      "pcsp-to-vmc", "formula to valued minor-condition instance");
  auto r_pv_tmpl = std::make_shared<TemplateArg>();
  r_pv_tmpl->attach(r_pv);
  auto r_pv_formula = std::make_shared<std::string>();
  auto r_pv_k = std::make_shared<int>(-1);
  auto r_pv_cf = std::make_shared<std::string>();
  r_pv->add_option("--formula", *r_pv_formula, "payoff formula JSON file")
      ->required();
  r_pv->add_option("--arity-bound", *r_pv_k, "arity bound k (default: auto)");
  r_pv->add_option("--cf-completeness", *r_pv_cf,
                   "input completeness (constant-factor templates)");
  r_pv->callback([&, r_pv_tmpl, r_pv_formula, r_pv_k, r_pv_cf] {
    const ValuedTemplate tmpl = r_pv_tmpl->load();
    const PayoffFormula phi = formula_from_json(
        read_json_file(*r_pv_formula), tmpl, *r_pv_formula);
    std::optional<int> k;
    if (*r_pv_k >= 0) k = *r_pv_k;
    std::optional<Rat> cf;
    if (!r_pv_cf->empty()) cf = rat_from_string(*r_pv_cf);
    exit_code = g.emit(
        vmc_to_json(pcsp_to_vmc(phi, tmpl, cf, k, g.lim), tmpl), kExitOk);
  });

  auto* r_vp = reduce->add_subcommand(
      "vmc-to-pcsp", "valued minor-condition instance to formula");
  auto r_vp_tmpl = std::make_shared<TemplateArg>();
  r_vp_tmpl->attach(r_vp);
  auto r_vp_vmc = std::make_shared<std::string>();
  auto r_vp_fb = std::make_shared<std::string>();
  auto r_vp_fbc = std::make_shared<std::string>();
  r_vp->add_option("--vmc", *r_vp_vmc, "valued minor-condition JSON file")
      ->required();
  r_vp->add_option("--fallback-formula", *r_vp_fb,
                   "known no-instance used when synthesis yields a witness");
  r_vp->add_option("--fallback-completeness", *r_vp_fbc,
                   "output completeness of the fallback (constant-factor)");
  r_vp->callback([&, r_vp_tmpl, r_vp_vmc, r_vp_fb, r_vp_fbc] {
    const ValuedTemplate tmpl = r_vp_tmpl->load();
    const VMCInstance inst =
        vmc_from_json(read_json_file(*r_vp_vmc), tmpl, *r_vp_vmc);
    std::optional<PayoffFormula> fallback;
    if (!r_vp_fb->empty())
      fallback = formula_from_json(read_json_file(*r_vp_fb), tmpl, *r_vp_fb);
    std::optional<Rat> fallback_completeness;
    if (!r_vp_fbc->empty())
      fallback_completeness = rat_from_string(*r_vp_fbc);
    const VmcToPcspResult res = vmc_to_pcsp(inst, tmpl, fallback,
                                            fallback_completeness, nullptr,
                                            g.lim);
    Json result;
    result["formula"] = formula_to_json(res.psi);
    if (res.cf_completeness)
      result["cf_completeness"] = rat_to_string(*res.cf_completeness);
    result["used_fallback"] = res.used_fallback;
    exit_code = g.emit(std::move(result), kExitOk);
  });

  auto* r_bv = reduce->add_subcommand(
      "between-vmc",
      "push a valued minor-condition instance along a valued minion "
      "homomorphism");
  auto r_bv_src = std::make_shared<TemplateArg>();
  auto r_bv_tgt = std::make_shared<TemplateArg>();
  r_bv_src->attach(r_bv, "src");
  r_bv_tgt->attach(r_bv, "tgt");
  auto r_bv_vmc = std::make_shared<std::string>();
  auto r_bv_hom = std::make_shared<std::string>();
  auto r_bv_sentinel = std::make_shared<std::string>();
  r_bv->add_option("--vmc", *r_bv_vmc,
                   "instance JSON file (beta over the target minion)")
      ->required();
  r_bv->add_option("--hom", *r_bv_hom, "valued minion homomorphism JSON file")
      ->required();
  r_bv->add_option("--sentinel", *r_bv_sentinel,
                   "override for the off-support beta value");
  r_bv->callback([&, r_bv_src, r_bv_tgt, r_bv_vmc, r_bv_hom, r_bv_sentinel] {
    const ValuedTemplate src = r_bv_src->load();
    const ValuedTemplate tgt = r_bv_tgt->load();
    const VMCInstance inst =
        vmc_from_json(read_json_file(*r_bv_vmc), tgt, *r_bv_vmc);
    const ValuedMinionHom hom = valued_hom_from_json(
        read_json_file(*r_bv_hom), src.A.dom(), src.B.dom(), tgt.A.dom(),
        tgt.B.dom(), *r_bv_hom);
    SentinelPolicy policy;
    if (!r_bv_sentinel->empty())
      policy.override_value = rat_from_string(*r_bv_sentinel);
    exit_code =
        g.emit(vmc_to_json(between_vmcs(inst, hom, policy), src), kExitOk);
  });

  auto* r_bm = reduce->add_subcommand(
      "between-mc", "trivial reduction between minor-condition instances");
  auto r_bm_mc = std::make_shared<std::string>();
  r_bm->add_option("--mc", *r_bm_mc, "minor-condition JSON file")->required();
  r_bm->callback([&, r_bm_mc] {
    const MCInstance inst = mc_from_json(read_json_file(*r_bm_mc), *r_bm_mc);
    exit_code = g.emit(mc_to_json(between_mcs(inst)), kExitOk);
  });

  // ---- gadget ----
  auto* gadget =
      app.add_subcommand("gadget", "gadget replacements and their soundness");
  gadget->require_subcommand(1);

  auto* g_sub = gadget->add_subcommand(
      "substitute", "replace every atom by its registered gadget");
  auto g_sub_src = std::make_shared<TemplateArg>();
  auto g_sub_tgt = std::make_shared<TemplateArg>();
  g_sub_src->attach(g_sub, "src");
  g_sub_tgt->attach(g_sub, "tgt");
  auto g_sub_formula = std::make_shared<std::string>();
  auto g_sub_gadgets = std::make_shared<std::string>();
  g_sub->add_option("--formula", *g_sub_formula,
                    "formula over the source template")
      ->required();
  g_sub->add_option("--gadgets", *g_sub_gadgets, "gadget JSON file")
      ->required();
  g_sub->callback([&, g_sub_src, g_sub_tgt, g_sub_formula, g_sub_gadgets] {
    const ValuedTemplate src = g_sub_src->load();
    const ValuedTemplate tgt = g_sub_tgt->load();
    const PayoffFormula phi = formula_from_json(
        read_json_file(*g_sub_formula), src, *g_sub_formula);
    const std::map<int, Gadget> gadgets = gadgets_from_json(
        read_json_file(*g_sub_gadgets), src, tgt, *g_sub_gadgets);
    exit_code = g.emit(formula_to_json(gadget_substitute(phi, gadgets)),
                       kExitOk);
  });

  auto* g_ver = gadget->add_subcommand(
      "verify-hom",
      "check the pointwise payoff identity of a gadget homomorphism");
  auto g_ver_src = std::make_shared<TemplateArg>();
  auto g_ver_tgt = std::make_shared<TemplateArg>();
  g_ver_src->attach(g_ver, "src");
  g_ver_tgt->attach(g_ver, "tgt");
  auto g_ver_xi = std::make_shared<std::string>();
  auto g_ver_lift = std::make_shared<std::string>();
  auto g_ver_k = std::make_shared<int>(1);
  g_ver->add_option("--xi", *g_ver_xi, "minion homomorphism table JSON file")
      ->required();
  g_ver->add_option("--lift", *g_ver_lift, "matrix lift JSON file")
      ->required();
  g_ver->add_option("--arity-bound", *g_ver_k, "arity bound k")->required();
  g_ver->callback([&, g_ver_src, g_ver_tgt, g_ver_xi, g_ver_lift, g_ver_k] {
    const ValuedTemplate src = g_ver_src->load();
    const ValuedTemplate tgt = g_ver_tgt->load();
    // xi maps polymorphisms of the target pair to those of the source pair.
    const MinionHomTable xi = hom_table_from_json(
        read_json_file(*g_ver_xi), tgt.A.dom(), tgt.B.dom(), src.A.dom(),
        src.B.dom(), *g_ver_xi);
    const MatrixLift lift =
        lift_from_json(read_json_file(*g_ver_lift), src, tgt, *g_ver_lift);
    std::string why;
    const bool ok =
        verify_gadget_hom(xi, src, tgt, lift, *g_ver_k, g.lim, &why);
    Json result;
    result["ok"] = ok;
    if (!ok) result["why"] = why;
    exit_code = g.emit(std::move(result), ok ? kExitOk : kExitNegative);
  });

  // ---- ppdef ----
  auto* ppdef = app.add_subcommand(
      "ppdef", "primitive-positive style definability over a template");
  ppdef->require_subcommand(1);

  auto* pp_ver = ppdef->add_subcommand("verify", "verify a given definition");
  auto pp_ver_tmpl = std::make_shared<TemplateArg>();
  pp_ver_tmpl->attach(pp_ver);
  auto pp_ver_target = std::make_shared<std::string>();
  auto pp_ver_defn = std::make_shared<std::string>();
  auto pp_ver_mode = std::make_shared<std::string>("crisp");
  auto pp_ver_cp = std::make_shared<std::string>("0");
  auto pp_ver_sp = std::make_shared<std::string>("0");
  pp_ver->add_option("--target", *pp_ver_target, "target relation JSON file")
      ->required();
  pp_ver->add_option("--defn", *pp_ver_defn, "definition JSON file")
      ->required();
  pp_ver->add_option("--pp-mode", *pp_ver_mode, "crisp | valued");
  pp_ver->add_option("--c-prime", *pp_ver_cp, "target completeness (valued)");
  pp_ver->add_option("--s-prime", *pp_ver_sp, "target soundness (valued)");
  pp_ver->callback([&, pp_ver_tmpl, pp_ver_target, pp_ver_defn, pp_ver_mode,
                    pp_ver_cp, pp_ver_sp] {
    const ValuedTemplate tmpl = pp_ver_tmpl->load();
    const PPTarget target = pp_target_from_json(
        read_json_file(*pp_ver_target), tmpl, *pp_ver_target);
    const PPDefinition defn = pp_definition_from_json(
        read_json_file(*pp_ver_defn), tmpl, *pp_ver_defn);
    std::string why;
    const bool ok = verify_pp_definition(
        defn, target, tmpl, parse_pp_mode(*pp_ver_mode),
        rat_from_string(*pp_ver_cp), rat_from_string(*pp_ver_sp), g.lim, &why);
    Json result;
    result["ok"] = ok;
    if (!ok) result["why"] = why;
    exit_code = g.emit(std::move(result), ok ? kExitOk : kExitNegative);
  });

  auto* pp_syn =
      ppdef->add_subcommand("synthesize", "construct a verified definition");
  auto pp_syn_tmpl = std::make_shared<TemplateArg>();
  pp_syn_tmpl->attach(pp_syn);
  auto pp_syn_target = std::make_shared<std::string>();
  auto pp_syn_mode = std::make_shared<std::string>("crisp");
  auto pp_syn_cp = std::make_shared<std::string>("0");
  auto pp_syn_sp = std::make_shared<std::string>("0");
  pp_syn->add_option("--target", *pp_syn_target, "target relation JSON file")
      ->required();
  pp_syn->add_option("--pp-mode", *pp_syn_mode, "crisp | valued");
  pp_syn->add_option("--c-prime", *pp_syn_cp, "target completeness (valued)");
  pp_syn->add_option("--s-prime", *pp_syn_sp, "target soundness (valued)");
  pp_syn->callback([&, pp_syn_tmpl, pp_syn_target, pp_syn_mode, pp_syn_cp,
                    pp_syn_sp] {
    const ValuedTemplate tmpl = pp_syn_tmpl->load();
    const PPTarget target = pp_target_from_json(
        read_json_file(*pp_syn_target), tmpl, *pp_syn_target);
    const std::optional<PPDefinition> defn = synthesize_pp_definition(
        target, tmpl, parse_pp_mode(*pp_syn_mode),
        rat_from_string(*pp_syn_cp), rat_from_string(*pp_syn_sp), g.lim);
    Json result;
    result["definable"] = defn.has_value();
    if (defn) result["definition"] = pp_definition_to_json(*defn);
    exit_code = g.emit(std::move(result), defn ? kExitOk : kExitNegative);
  });

  const auto start = std::chrono::steady_clock::now();
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help and friends
    app.exit(e);
    return kExitUsage;
  }
  const auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
      std::chrono::steady_clock::now() - start);
  std::cerr << "elapsed: " << elapsed.count() << " ms\n";
  return exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const pvcsp::ResourceLimitError& e) {
    std::cerr << "resource limit: " << e.what() << "\n";
    return kExitResource;
  } catch (const pvcsp::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const pvcsp::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const pvcsp::PreconditionError& e) {
    std::cerr << "precondition violated: " << e.what() << "\n";
    return kExitUsage;
  } catch (const pvcsp::ContractError& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInternal;
  }
}
