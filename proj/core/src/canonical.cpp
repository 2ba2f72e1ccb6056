#include "pvcsp/canonical.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <map>
#include <utility>

#include "pvcsp/errors.hpp"
#include "pvcsp/polymorphism.hpp"

namespace pvcsp {

namespace {

constexpr std::int64_t kMaxCanonicalVars = std::int64_t(1) << 22;
constexpr std::uint64_t kExhaustiveFeasBound = 4096;

std::string row_n_label(std::size_t j, int n) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "r.j%03zu.n%03d", j, n);
  return buf;
}
std::string row_f_label(std::size_t j, int f) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "r.j%03zu.f%05d", j, f);
  return buf;
}
std::string col_m_label(std::size_t j, std::size_t m) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "c.j%03zu.m%06zu", j, m);
  return buf;
}
std::string delta_label(const char* which, std::size_t j) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "c.d%s.j%03zu", which, j);
  return buf;
}

/// Everything one family contributes to the system: its matrix pairs, the
/// polymorphism minion, the canonical variable layout, the atom argument
/// lists, and the finite payoff values entering the coefficients.
struct FamilyWork {
  int arity = 0;
  CanonicalLayout layout;
  std::vector<RelationMatrixPair> mats;
  Minion minion;
  std::vector<std::vector<int>> atom_args;  // per mat
  std::vector<std::vector<Rat>> a_vals;     // [mat][coordinate]
  std::vector<std::vector<Rat>> b_vals;     // [mat][minion index]
};

FamilyWork prepare_family(const ValuedTemplate& tmpl,
                          const CanonicalFamily& fam, const Limits& lim,
                          bool with_values) {
  if (fam.arity < 1) throw ConfigError("family arity must be positive");
  if (static_cast<int>(fam.alpha.size()) != fam.arity)
    throw ConfigError("alpha table size must equal the family arity");
  FamilyWork w;
  w.arity = fam.arity;
  w.layout = canonical_layout(tmpl.A.dom(), fam.arity);
  w.mats = enumerate_mat(tmpl.A, fam.arity, lim.max_mat_pairs);
  w.minion = enumerate_polymorphisms(tmpl.A, tmpl.B, fam.arity, lim);
  if (static_cast<int>(fam.beta.size()) != w.minion.size())
    throw ConfigError("beta table size must equal the polymorphism count");

  FnSpace fs(tmpl.A.dom(), tmpl.B.dom(), fam.arity);
  const Signature& sig = tmpl.A.sig();
  w.atom_args.reserve(w.mats.size());
  for (const auto& pair : w.mats) {
    std::vector<int> args(pair.n_rows());
    for (int z = 0; z < pair.n_rows(); ++z) {
      int t = sig.symbols[pair.symbol].arity[z].sort;
      args[z] = w.layout.index(t, fs.rank_row(t, pair.row(z)));
    }
    w.atom_args.push_back(std::move(args));
  }
  if (!with_values) return w;

  w.a_vals.reserve(w.mats.size());
  w.b_vals.reserve(w.mats.size());
  for (const auto& pair : w.mats) {
    std::vector<Rat> av(fam.arity);
    for (int n = 0; n < fam.arity; ++n)
      av[n] = tmpl.A.value(pair.symbol, pair.columns[n]).value();
    w.a_vals.push_back(std::move(av));
    std::vector<Rat> bv(w.minion.size());
    for (int fi = 0; fi < w.minion.size(); ++fi)
      bv[fi] =
          tmpl.B.value(pair.symbol, apply_rows(fs, w.minion.fns[fi], pair, sig))
              .value();
    w.b_vals.push_back(std::move(bv));
  }
  return w;
}

void check_request_shape(const CanonicalRequest& req) {
  req.tmpl.validate();
  bool cf = req.mode == CanonicalMode::ConstantFactor;
  if (cf != (req.tmpl.kind == ValuedTemplate::Kind::ConstantFactor))
    throw ConfigError(
        cf ? "constant-factor synthesis requires a constant-factor template"
           : "this mode requires a standard template");
  if (req.mode != CanonicalMode::Improved && req.families.size() != 1)
    throw ConfigError("this mode takes exactly one family");
}

void check_side_condition(const CanonicalRequest& req) {
  if (req.mode != CanonicalMode::Baby && req.mode != CanonicalMode::Thresholds)
    return;
  if (!req.tmpl.A.leq(req.tmpl.c)) return;
  const Rat& bound =
      req.mode == CanonicalMode::Baby ? req.tmpl.c : req.c_prime;
  for (const Rat& a : req.families[0].alpha)
    if (a > bound)
      throw PreconditionError(
          "side condition violated: every finite value of the first structure "
          "is at most the completeness threshold, so alpha may not exceed " +
          rat_to_string(bound));
}

PayoffFormula formula_from_weights(const ValuedTemplate& tmpl,
                                   const FamilyWork& w,
                                   const std::vector<Rat>& weights) {
  PayoffFormula phi;
  phi.sig = tmpl.A.sig_ptr();
  phi.vars = w.layout.vars;
  phi.atoms.reserve(w.mats.size());
  for (std::size_t m = 0; m < w.mats.size(); ++m)
    phi.atoms.push_back(Atom{weights[m], w.mats[m].symbol, w.atom_args[m]});
  return phi;
}

/// Splits a nonnegative row-mass vector into (total, distribution); an empty
/// support yields a point mass on the least key.
Distribution mass_to_distribution(const std::vector<Rat>& mass,
                                  const Rat& total) {
  if (total == 0) return Distribution::point_mass(0);
  Distribution d;
  for (std::size_t i = 0; i < mass.size(); ++i)
    if (mass[i] > 0)
      d.entries.emplace_back(static_cast<int>(i), mass[i] / total);
  return d;
}

Weighting weighting_from_masses(const FamilyWork& w,
                                const std::vector<Rat>& in_mass,
                                const Rat& theta_in,
                                const std::vector<Rat>& out_mass,
                                const Rat& theta_out) {
  Weighting omega;
  omega.arity = w.arity;
  omega.in = mass_to_distribution(in_mass, theta_in);
  int idx = 0;
  for (std::size_t fi = 0; fi < out_mass.size(); ++fi)
    if (out_mass[fi] > 0) {
      omega.support.push_back(w.minion.fns[fi]);
      omega.out.entries.emplace_back(idx++, out_mass[fi] / theta_out);
    }
  return omega;
}

bool fail(std::string* why, const std::string& msg) {
  if (why) *why = msg;
  return false;
}

}  // namespace

CanonicalLayout canonical_layout(const SortedSet& dom, int arity) {
  if (arity < 1) throw ConfigError("canonical layout needs a positive arity");
  CanonicalLayout lay;
  lay.arity = arity;
  std::vector<std::pair<std::string, int>> vars;
  std::int64_t total = 0;
  for (int t = 0; t < dom.sort_count(); ++t) {
    lay.offset.push_back(static_cast<int>(total));
    const auto& elems = dom.of_sort(t);
    std::int64_t rows = 1;
    for (int n = 0; n < arity; ++n) {
      rows *= static_cast<std::int64_t>(elems.size());
      if (rows > kMaxCanonicalVars)
        throw ResourceLimitError(
            "canonical variable set exceeds the size limit");
    }
    lay.rows.push_back(rows);
    total += rows;
    if (total > kMaxCanonicalVars)
      throw ResourceLimitError("canonical variable set exceeds the size limit");
    for (std::int64_t r = 0; r < rows; ++r) {
      std::string name;
      std::int64_t rest = r;
      std::int64_t base = static_cast<std::int64_t>(elems.size());
      std::vector<int> digits(arity);
      for (int n = arity - 1; n >= 0; --n) {
        digits[n] = static_cast<int>(rest % base);
        rest /= base;
      }
      for (int n = 0; n < arity; ++n) {
        if (n) name += ',';
        name += dom.id(elems[digits[n]]);
      }
      vars.emplace_back(std::move(name), t);
    }
  }
  lay.vars = SortedSet(std::move(vars), dom.sort_count());
  return lay;
}

SortedSet canonical_vars(const SortedSet& dom, int arity) {
  return canonical_layout(dom, arity).vars;
}

Tuple assignment_of_function(const SortedSet& dom, int arity,
                             const NaryFunction& f) {
  if (f.arity != arity) throw ConfigError("function arity mismatch");
  Tuple a;
  for (int t = 0; t < dom.sort_count(); ++t)
    a.insert(a.end(), f.tables[t].begin(), f.tables[t].end());
  return a;
}

Tuple assignment_of_projection(const SortedSet& dom, int arity, int n) {
  if (n < 0 || n >= arity) throw ConfigError("projection index out of range");
  Tuple a;
  for (int t = 0; t < dom.sort_count(); ++t) {
    const auto& elems = dom.of_sort(t);
    std::int64_t base = static_cast<std::int64_t>(elems.size());
    std::int64_t rows = 1;
    for (int i = 0; i < arity; ++i) rows *= base;
    std::int64_t stride = 1;
    for (int i = 0; i < arity - 1 - n; ++i) stride *= base;
    for (std::int64_t r = 0; r < rows; ++r)
      a.push_back(elems[static_cast<int>((r / stride) % base)]);
  }
  return a;
}

PayoffFormula build_crisp_canonical(const ValuedStructure& a, int arity,
                                    const Limits& lim) {
  CanonicalLayout lay = canonical_layout(a.dom(), arity);
  FnSpace fs(a.dom(), a.dom(), arity);
  const Signature& sig = a.sig();
  PayoffFormula phi;
  phi.sig = a.sig_ptr();
  phi.vars = lay.vars;
  for_each_mat(a, arity, lim.max_mat_pairs,
               [&](const RelationMatrixPair& pair) {
                 Atom atom;
                 atom.w = 1;
                 atom.symbol = pair.symbol;
                 atom.args.resize(pair.n_rows());
                 for (int z = 0; z < pair.n_rows(); ++z) {
                   int t = sig.symbols[pair.symbol].arity[z].sort;
                   atom.args[z] = lay.index(t, fs.rank_row(t, pair.row(z)));
                 }
                 phi.atoms.push_back(std::move(atom));
               });
  return phi;
}

PayoffFormula completed_formula(const PayoffFormula& pruned,
                                const ValuedStructure& a, int arity,
                                const Limits& lim) {
  PayoffFormula full = build_crisp_canonical(a, arity, lim);
  if (!(pruned.vars == full.vars))
    throw ConfigError("formula is not over the canonical variable set");
  std::map<std::pair<int, std::vector<int>>, std::size_t> where;
  for (std::size_t i = 0; i < full.atoms.size(); ++i) {
    full.atoms[i].w = 0;
    where[{full.atoms[i].symbol, full.atoms[i].args}] = i;
  }
  for (const Atom& atom : pruned.atoms) {
    auto it = where.find({atom.symbol, atom.args});
    if (it == where.end())
      throw ConfigError(
          "formula contains an atom outside the relation-matrix family");
    full.atoms[it->second].w += atom.w;
  }
  return full;
}

CanonicalResult synthesize(const CanonicalRequest& req, const Limits& lim) {
  check_request_shape(req);
  check_side_condition(req);
  const ValuedTemplate& tmpl = req.tmpl;
  const bool improved = req.mode == CanonicalMode::Improved;
  const bool cf = req.mode == CanonicalMode::ConstantFactor;

  std::vector<FamilyWork> work;
  std::uint64_t total_rows = improved ? 2 : 0;
  for (const auto& fam : req.families) {
    work.push_back(prepare_family(tmpl, fam, lim, true));
    total_rows += static_cast<std::uint64_t>(fam.arity) +
                  static_cast<std::uint64_t>(work.back().minion.size());
    if (total_rows > static_cast<std::uint64_t>(lim.max_lp_rows))
      throw ResourceLimitError(
          "canonical system has " + std::to_string(total_rows) +
          " or more rows, above the row limit of " +
          std::to_string(lim.max_lp_rows));
  }

  // Row/column layout. All modes share the (j, n) / (j, f) row blocks and
  // the (j, m) weight columns; the modes differ in shift columns and rhs.
  LPSystem sys;
  std::vector<std::vector<int>> row_n(work.size()), row_f(work.size());
  std::vector<std::vector<int>> col_m(work.size());
  Rat cp = req.tmpl.c, sp = req.tmpl.s;
  if (req.mode == CanonicalMode::Thresholds) {
    cp = req.c_prime;
    sp = req.s_prime;
  }
  for (std::size_t j = 0; j < work.size(); ++j) {
    const auto& fam = req.families[j];
    for (int n = 0; n < fam.arity; ++n) {
      Rat rhs = improved ? Rat(0)
                         : (cf ? Rat(-fam.alpha[n]) : Rat(cp - fam.alpha[n]));
      row_n[j].push_back(sys.add_row(row_n_label(j, n), rhs));
    }
    for (int fi = 0; fi < work[j].minion.size(); ++fi) {
      Rat rhs =
          (improved || cf) ? fam.beta[fi] : Rat(fam.beta[fi] - sp);
      row_f[j].push_back(sys.add_row(row_f_label(j, fi), rhs));
    }
  }
  int row_in = -1, row_out = -1;
  if (improved) {
    row_in = sys.add_row("r.in", 0);
    row_out = sys.add_row("r.out", 0);
  }

  for (std::size_t j = 0; j < work.size(); ++j) {
    for (std::size_t m = 0; m < work[j].mats.size(); ++m) {
      int col = sys.add_col(col_m_label(j, m));
      col_m[j].push_back(col);
      for (int n = 0; n < work[j].arity; ++n)
        sys.add_coef(row_n[j][n], col,
                     cf ? Rat(-work[j].a_vals[m][n])
                        : Rat(tmpl.c - work[j].a_vals[m][n]));
      for (int fi = 0; fi < work[j].minion.size(); ++fi)
        sys.add_coef(row_f[j][fi], col,
                     cf ? work[j].b_vals[m][fi]
                        : Rat(work[j].b_vals[m][fi] - tmpl.s));
    }
  }
  int col_gamma = -1;
  std::vector<std::array<int, 4>> col_delta(work.size());
  int col_dp = -1, col_dm = -1;
  if (improved) {
    col_gamma = sys.add_col("c.gamma");
    for (std::size_t j = 0; j < work.size(); ++j) {
      for (int n = 0; n < work[j].arity; ++n)
        sys.add_coef(row_n[j][n], col_gamma, req.families[j].alpha[n]);
      col_delta[j][0] = sys.add_col(delta_label("in+", j));
      col_delta[j][1] = sys.add_col(delta_label("in-", j));
      col_delta[j][2] = sys.add_col(delta_label("out+", j));
      col_delta[j][3] = sys.add_col(delta_label("out-", j));
      for (int n = 0; n < work[j].arity; ++n) {
        sys.add_coef(row_n[j][n], col_delta[j][0], 1);
        sys.add_coef(row_n[j][n], col_delta[j][1], -1);
      }
      for (int fi = 0; fi < work[j].minion.size(); ++fi) {
        sys.add_coef(row_f[j][fi], col_delta[j][2], 1);
        sys.add_coef(row_f[j][fi], col_delta[j][3], -1);
      }
      sys.add_coef(row_in, col_delta[j][0], -1);
      sys.add_coef(row_in, col_delta[j][1], 1);
      sys.add_coef(row_out, col_delta[j][2], -1);
      sys.add_coef(row_out, col_delta[j][3], 1);
    }
  } else if (cf) {
    col_dp = sys.add_col("c.dp");
    col_dm = sys.add_col("c.dm");
    for (int n = 0; n < work[0].arity; ++n) {
      sys.add_coef(row_n[0][n], col_dp, 1);
      sys.add_coef(row_n[0][n], col_dm, -1);
    }
    for (int fi = 0; fi < work[0].minion.size(); ++fi) {
      sys.add_coef(row_f[0][fi], col_dp, -tmpl.kappa);
      sys.add_coef(row_f[0][fi], col_dm, tmpl.kappa);
    }
  }

  CanonicalResult res;
  res.lp = sys;
  res.lp_result = solve_feasibility(sys, lim);

  if (res.lp_result.feasible) {
    res.is_formulas = true;
    const auto& y = res.lp_result.y;
    for (std::size_t j = 0; j < work.size(); ++j) {
      std::vector<Rat> weights;
      weights.reserve(work[j].mats.size());
      for (int col : col_m[j]) weights.push_back(y[col]);
      SynthFormula sf;
      sf.formula = formula_from_weights(tmpl, work[j], weights);
      if (improved) {
        sf.delta_in = y[col_delta[j][0]] - y[col_delta[j][1]];
        sf.delta_out = y[col_delta[j][2]] - y[col_delta[j][3]];
      } else if (cf) {
        sf.delta = y[col_dp] - y[col_dm];
      }
      res.formulas.push_back(std::move(sf));
    }
    if (improved) res.gamma = y[col_gamma];
    if (cf) res.kappa = tmpl.kappa;
  } else {
    res.is_formulas = false;
    const auto& x = res.lp_result.x;
    std::vector<Rat> theta_in(work.size(), Rat(0)),
        theta_out(work.size(), Rat(0));
    std::vector<std::vector<Rat>> in_mass(work.size()), out_mass(work.size());
    for (std::size_t j = 0; j < work.size(); ++j) {
      for (int r : row_n[j]) {
        in_mass[j].push_back(x[r]);
        theta_in[j] += x[r];
      }
      for (int r : row_f[j]) {
        out_mass[j].push_back(x[r]);
        theta_out[j] += x[r];
      }
    }
    if (improved) {
      for (std::size_t j = 0; j < work.size(); ++j)
        if (theta_in[j] != x[row_in] || theta_out[j] != x[row_out])
          throw ContractError(
              "dual certificate mass is not uniform across families");
    }
    Rat t_out = work.empty() ? Rat(0) : theta_out[0];
    if (work.empty() || t_out == 0)
      throw ContractError(
          "dual certificate carries no output mass; the system cannot be "
          "infeasible without one");
    if (cf) {
      if (theta_in[0] != tmpl.kappa * theta_out[0])
        throw ContractError(
            "dual certificate input mass must equal kappa times the output "
            "mass");
      res.kappa = tmpl.kappa;
    } else {
      res.kappa = theta_in[0] / theta_out[0];
    }
    for (std::size_t j = 0; j < work.size(); ++j)
      res.omegas.push_back(weighting_from_masses(
          work[j], in_mass[j], theta_in[j], out_mass[j], theta_out[j]));
  }

  std::string why;
  if (!verify_canonical_result(req, res, lim, &why))
    throw ContractError("synthesized result failed verification: " + why);
  return res;
}

bool verify_canonical_result(const CanonicalRequest& req,
                             const CanonicalResult& res, const Limits& lim,
                             std::string* why) {
  check_request_shape(req);
  check_side_condition(req);
  const ValuedTemplate& tmpl = req.tmpl;
  const SortedSet& dom = tmpl.A.dom();
  const bool improved = req.mode == CanonicalMode::Improved;
  const bool cf = req.mode == CanonicalMode::ConstantFactor;
  const std::size_t n_fam = req.families.size();
  if (res.is_formulas ? res.formulas.size() != n_fam
                      : res.omegas.size() != n_fam)
    throw ContractError("result shape does not match the request");

  std::vector<FamilyWork> work;
  for (const auto& fam : req.families)
    work.push_back(prepare_family(tmpl, fam, lim, false));

  if (res.is_formulas) {
    Rat sum_din = 0, sum_dout = 0;
    if (improved && res.gamma < 0)
      return fail(why, "the scaling factor must be nonnegative");
    for (std::size_t j = 0; j < n_fam; ++j) {
      const auto& fam = req.families[j];
      const auto& sf = res.formulas[j];
      try {
        sf.formula.validate();
      } catch (const std::exception& e) {
        return fail(why, std::string("formula invalid: ") + e.what());
      }
      if (!same_signature(*sf.formula.sig, tmpl.A.sig()))
        return fail(why, "formula signature does not match the template");
      if (!(sf.formula.vars == work[j].layout.vars))
        return fail(why, "formula is not over the canonical variable set");
      Rat w = sf.formula.weight();
      for (int n = 0; n < fam.arity; ++n) {
        Ext va = evaluate_formula(sf.formula, tmpl.A,
                                  assignment_of_projection(dom, fam.arity, n));
        if (!va.finite())
          return fail(why, "a projection payoff is infeasible");
        Rat lhs = va.value();
        bool ok;
        if (improved)
          ok = lhs - tmpl.c * w >= res.gamma * fam.alpha[n] + sf.delta_in;
        else if (cf)
          ok = lhs >= fam.alpha[n] + sf.delta;
        else if (req.mode == CanonicalMode::Thresholds)
          ok = lhs - tmpl.c * w >= fam.alpha[n] - req.c_prime;
        else
          ok = lhs - tmpl.c * w >= fam.alpha[n] - tmpl.c;
        if (!ok)
          return fail(why, "projection payoff inequality fails at coordinate " +
                               std::to_string(n));
      }
      for (int fi = 0; fi < work[j].minion.size(); ++fi) {
        Ext vb = evaluate_formula(
            sf.formula, tmpl.B,
            assignment_of_function(dom, fam.arity, work[j].minion.fns[fi]));
        if (!vb.finite())
          return fail(why,
                      "a polymorphism falls outside the formula's feasible "
                      "set");
        Rat lhs = vb.value();
        bool ok;
        if (improved)
          ok = lhs - tmpl.s * w <= fam.beta[fi] - sf.delta_out;
        else if (cf)
          ok = lhs <= fam.beta[fi] + tmpl.kappa * sf.delta;
        else if (req.mode == CanonicalMode::Thresholds)
          ok = lhs - tmpl.s * w <= fam.beta[fi] - req.s_prime;
        else
          ok = lhs - tmpl.s * w <= fam.beta[fi] - tmpl.s;
        if (!ok)
          return fail(why,
                      "polymorphism payoff inequality fails at function " +
                          std::to_string(fi));
      }
      // Feasibility-set equality: feas(Phi^B) must be exactly the minion.
      // One inclusion was checked above; the other is exhaustive when the
      // function space is small, structural (every relation-matrix pair is
      // covered by an atom) otherwise.
      FnSpace fs(tmpl.A.dom(), tmpl.B.dom(), fam.arity);
      if (fs.count_all() <= kExhaustiveFeasBound) {
        bool bad = false;
        fs.for_each_function(kExhaustiveFeasBound, [&](const NaryFunction& h) {
          if (bad || work[j].minion.contains(h)) return;
          Ext vb = evaluate_formula(
              sf.formula, tmpl.B, assignment_of_function(dom, fam.arity, h));
          if (vb.finite()) bad = true;
        });
        if (bad)
          return fail(why,
                      "the formula's feasible set exceeds the polymorphism "
                      "minion");
      } else {
        std::map<std::pair<int, std::vector<int>>, bool> have;
        for (const Atom& atom : sf.formula.atoms)
          have[{atom.symbol, atom.args}] = true;
        for (std::size_t m = 0; m < work[j].mats.size(); ++m)
          if (!have.count({work[j].mats[m].symbol, work[j].atom_args[m]}))
            return fail(why,
                        "the formula does not cover every relation-matrix "
                        "pair");
      }
      sum_din += sf.delta_in;
      sum_dout += sf.delta_out;
    }
    if (improved && sum_din < 0)
      return fail(why, "input shifts must sum to a nonnegative value");
    if (improved && sum_dout < 0)
      return fail(why, "output shifts must sum to a nonnegative value");
    return true;
  }

  // Dual witness branch.
  if (res.kappa < 0) return fail(why, "witness slope must be nonnegative");
  if (cf && res.kappa != tmpl.kappa)
    return fail(why, "witness slope must equal the template slope");
  Rat sum_in = 0, sum_out = 0;
  for (std::size_t j = 0; j < n_fam; ++j) {
    const auto& omega = res.omegas[j];
    try {
      omega.validate(tmpl.A, tmpl.B, lim);
    } catch (const std::exception& e) {
      return fail(why, std::string("witness weighting invalid: ") + e.what());
    }
    if (omega.arity != req.families[j].arity)
      return fail(why, "witness arity does not match the family");
    if (!is_kappa_polymorphism(omega, res.kappa, tmpl, lim))
      return fail(why, "witness is not a polymorphism at the claimed slope");
    Rat ein = expect_in(omega, req.families[j].alpha);
    Rat eout;
    try {
      eout = expect_out(omega, work[j].minion, req.families[j].beta);
    } catch (const std::exception& e) {
      return fail(why, std::string("witness support invalid: ") + e.what());
    }
    sum_in += ein;
    sum_out += eout;
  }
  if (improved) {
    if (res.kappa * sum_in < 0)
      return fail(why, "witness does not satisfy the input-payoff premise");
    if (sum_out >= 0)
      return fail(why, "witness does not violate the output-payoff bound");
    return true;
  }
  const Rat& a0 = sum_in;
  const Rat& b0 = sum_out;
  bool violated;
  if (cf)
    violated = b0 < tmpl.kappa * a0;
  else if (req.mode == CanonicalMode::Thresholds)
    violated = b0 - req.s_prime < res.kappa * (a0 - req.c_prime);
  else
    violated = b0 - tmpl.s < res.kappa * (a0 - tmpl.c);
  if (!violated)
    return fail(why, "witness does not violate the target inequality");
  return true;
}

CheckTemplateResult check_template(const ValuedTemplate& tmpl,
                                   const Limits& lim) {
  tmpl.validate();
  if (tmpl.kind != ValuedTemplate::Kind::Standard)
    throw ConfigError("template checking requires a standard template");
  Minion unary = enumerate_polymorphisms(tmpl.A, tmpl.B, 1, lim);

  CanonicalRequest req;
  req.tmpl = tmpl;
  req.mode = CanonicalMode::Baby;
  req.families.push_back(CanonicalFamily{
      1, {tmpl.c}, std::vector<Rat>(unary.fns.size(), tmpl.s - 1)});
  CanonicalResult synth = synthesize(req, lim);

  CheckTemplateResult out;
  out.lp = synth.lp;
  out.lp_result = synth.lp_result;
  if (!synth.is_formulas) {
    out.valid = true;
    out.kappa = synth.kappa;
    out.witness = synth.omegas[0];
    return out;
  }

  // The system is feasible: the formula certifies the template is not a
  // promise template. Confirm by brute force: its identity payoff reaches
  // the completeness bound while every unary map stays below soundness.
  out.valid = false;
  const PayoffFormula& counter = synth.formulas[0].formula;
  Rat w = counter.weight();
  Ext va = evaluate_formula(counter, tmpl.A,
                            assignment_of_projection(tmpl.A.dom(), 1, 0));
  bool ok = va.finite() && va.value() >= tmpl.c * w;
  FnSpace fs(tmpl.A.dom(), tmpl.B.dom(), 1);
  if (fs.count_all() > static_cast<std::uint64_t>(lim.max_minion_size))
    throw ResourceLimitError(
        "unary function space is too large for the brute-force counter "
        "check");
  fs.for_each_function(
      static_cast<std::uint64_t>(lim.max_minion_size),
      [&](const NaryFunction& h) {
        if (!ok) return;
        Ext vb = evaluate_formula(counter, tmpl.B,
                                  assignment_of_function(tmpl.A.dom(), 1, h));
        if (vb.finite() && vb.value() >= tmpl.s * w) ok = false;
      });
  if (!ok)
    throw ContractError("counter-formula failed its brute-force check");
  out.counter = counter;
  return out;
}

}  // namespace pvcsp
