#include "pvcsp/fourier.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <memory>
#include <sstream>
#include <utility>

namespace pvcsp {

namespace {

int digit_at(std::int64_t rank, int width, int coord) {
  return static_cast<int>((rank >> (width - 1 - coord)) & 1);
}

std::string sign_string(int width, std::int64_t rank) {
  std::string s;
  s.reserve(width);
  for (int n = 0; n < width; ++n) s += digit_at(rank, width, n) ? '-' : '+';
  return s;
}

/// Table-lexicographic rank of a single-sorted 0/1-valued function table.
std::uint64_t fn_table_index(const NaryFunction& f) {
  const auto& t = f.tables.at(0);
  std::uint64_t idx = 0;
  for (int v : t) idx = (idx << 1) | static_cast<unsigned>(v & 1);
  return idx;
}

std::vector<Rat> lambda_dense(const PmFunction& f, const Limits& lim) {
  Distribution dist = lambda_dist(f, lim);
  std::vector<Rat> table(f.arity, Rat(0));
  for (const auto& [key, p] : dist.entries) table[key] = p;
  return table;
}

std::shared_ptr<const Signature> hastad_signature() {
  static const std::shared_ptr<const Signature> sig = [] {
    auto s = std::make_shared<Signature>();
    s->sorts = {"x"};
    for (const char* id : {"phi-1", "phi1"}) {
      Symbol sym;
      sym.id = id;
      sym.arity = {{"z0", 0}, {"z1", 0}, {"z2", 0}};
      s->symbols.push_back(std::move(sym));
    }
    s->validate();
    return std::shared_ptr<const Signature>(std::move(s));
  }();
  return sig;
}

}  // namespace

void PmFunction::validate() const {
  if (arity < 0 || arity > 30) throw ConfigError("PmFunction arity out of range");
  if (table.size() != (std::size_t{1} << arity))
    throw ConfigError("PmFunction table size does not match arity");
  for (int v : table)
    if (v != 1 && v != -1) throw ConfigError("PmFunction values must be +1 or -1");
}

int pm_coord_value(int arity, std::int64_t rank, int coord) {
  return digit_at(rank, arity, coord) ? -1 : 1;
}

std::int64_t pm_negate(int arity, std::int64_t rank) {
  return ((std::int64_t{1} << arity) - 1) ^ rank;
}

bool pm_is_representative(int arity, std::int64_t rank) {
  return rank < (std::int64_t{1} << (arity - 1));
}

std::int64_t pm_representative(int arity, std::int64_t rank) {
  return pm_is_representative(arity, rank) ? rank : pm_negate(arity, rank);
}

PmFunction pm_projection(int arity, int coord) {
  if (coord < 0 || coord >= arity) throw ConfigError("projection coordinate out of range");
  PmFunction f{arity, std::vector<int>(std::size_t{1} << arity)};
  for (std::int64_t r = 0; r < static_cast<std::int64_t>(f.table.size()); ++r)
    f.table[r] = pm_coord_value(arity, r, coord);
  return f;
}

PmFunction pm_chi(int arity, std::uint32_t subset) {
  PmFunction f{arity, std::vector<int>(std::size_t{1} << arity)};
  for (std::int64_t r = 0; r < static_cast<std::int64_t>(f.table.size()); ++r)
    f.table[r] = chi_sign(arity, subset, r);
  return f;
}

int chi_sign(int arity, std::uint32_t subset, std::int64_t rank) {
  int parity = 0;
  for (int n = 0; n < arity; ++n)
    if (((subset >> n) & 1) != 0 && digit_at(rank, arity, n) != 0) parity ^= 1;
  return parity ? -1 : 1;
}

std::uint64_t pm_index(const PmFunction& f) {
  std::uint64_t idx = 0;
  for (int v : f.table) idx = (idx << 1) | static_cast<unsigned>(v == -1);
  return idx;
}

PmFunction pm_from_index(int arity, std::uint64_t index) {
  PmFunction f{arity, std::vector<int>(std::size_t{1} << arity)};
  const int sz = static_cast<int>(f.table.size());
  for (int r = 0; r < sz; ++r)
    f.table[r] = ((index >> (sz - 1 - r)) & 1) ? -1 : 1;
  return f;
}

NaryFunction pm_to_nary(const PmFunction& f) {
  NaryFunction g;
  g.arity = f.arity;
  g.tables.resize(1);
  g.tables[0].reserve(f.table.size());
  for (int v : f.table) g.tables[0].push_back(v == 1 ? 0 : 1);
  return g;
}

PmFunction pm_from_nary(const NaryFunction& f) {
  PmFunction g{f.arity, {}};
  g.table.reserve(f.tables.at(0).size());
  for (int v : f.tables[0]) g.table.push_back(v == 0 ? 1 : -1);
  g.validate();
  return g;
}

FourierExpansion fourier_expand(const PmFunction& f, const Limits& lim) {
  f.validate();
  if (f.arity > lim.fourier_arity)
    throw ResourceLimitError("fourier arity " + std::to_string(f.arity) +
                             " exceeds limit " + std::to_string(lim.fourier_arity));
  const int sz = static_cast<int>(f.table.size());
  FourierExpansion ex{f.arity, std::vector<Rat>(f.table.size())};
  for (std::uint32_t subset = 0; subset < static_cast<std::uint32_t>(sz); ++subset) {
    long acc = 0;
    for (std::int64_t r = 0; r < sz; ++r)
      acc += f.table[r] * chi_sign(f.arity, subset, r);
    ex.coef[subset] = Rat(acc) / sz;
  }
  return ex;
}

PmFunction fold(const PmFunction& f) {
  f.validate();
  if (f.arity < 1) throw ConfigError("fold requires positive arity");
  PmFunction g{f.arity, std::vector<int>(f.table.size())};
  for (std::int64_t r = 0; r < static_cast<std::int64_t>(f.table.size()); ++r)
    g.table[r] = pm_is_representative(f.arity, r)
                     ? f.table[r]
                     : -f.table[pm_negate(f.arity, r)];
  return g;
}

bool is_folded(const PmFunction& f) {
  f.validate();
  if (f.arity < 1) throw ConfigError("folding requires positive arity");
  for (std::int64_t r = 0; r < static_cast<std::int64_t>(f.table.size()); ++r)
    if (f.table[r] != -f.table[pm_negate(f.arity, r)]) return false;
  return true;
}

Distribution lambda_dist(const PmFunction& f, const Limits& lim) {
  if (f.arity < 1) throw ConfigError("lambda_dist requires positive arity");
  FourierExpansion ex = fourier_expand(fold(f), lim);
  Distribution dist;
  for (int d = 0; d < f.arity; ++d) {
    Rat mass = 0;
    for (std::uint32_t subset = 1; subset < ex.coef.size(); ++subset)
      if (((subset >> d) & 1) != 0 && ex.coef[subset] != 0)
        mass += ex.coef[subset] * ex.coef[subset] / std::popcount(subset);
    if (mass > 0) dist.entries.emplace_back(d, std::move(mass));
  }
  dist.validate(f.arity);
  return dist;
}

std::uint32_t oddim(const std::vector<int>& pi, std::uint32_t subset) {
  std::uint32_t out = 0;
  for (std::size_t n = 0; n < pi.size(); ++n)
    if (((subset >> n) & 1) != 0) out ^= std::uint32_t{1} << pi[n];
  return out;
}

void HastadConfig::validate() const {
  if (d_size < 1 || e_size < 1)
    throw ConfigError("coordinate sets must be nonempty");
  if (delta <= 0 || delta > Rat(1, 4))
    throw ConfigError("delta must lie in (0, 1/4]");
}

ValuedTemplate hastad_template(const Rat& delta) {
  if (delta <= 0 || delta > Rat(1, 4))
    throw ConfigError("delta must lie in (0, 1/4]");
  SortedSet dom({{"1", 0}, {"-1", 0}}, 1);
  std::vector<std::vector<Ext>> tables(2);
  for (int sym = 0; sym < 2; ++sym) {
    const int sign_of_symbol = sym == 0 ? -1 : 1;
    for (int r = 0; r < 8; ++r) {
      const int product = (std::popcount(static_cast<unsigned>(r)) & 1) ? -1 : 1;
      tables[sym].push_back(Ext(Rat(sign_of_symbol * product)));
    }
  }
  ValuedTemplate tmpl;
  tmpl.A = ValuedStructure(hastad_signature(), dom, tables);
  tmpl.B = tmpl.A;
  tmpl.kind = ValuedTemplate::Kind::Standard;
  tmpl.c = Rat(1) - 2 * delta;
  tmpl.s = 2 * delta;
  tmpl.validate();
  return tmpl;
}

ValuedTemplate glc_template(int d_size, int e_size, const Rat& epsilon) {
  if (d_size < 1 || e_size < 1)
    throw ConfigError("label-cover domains must be nonempty");
  if (epsilon <= 0 || epsilon > 1)
    throw ConfigError("label-cover soundness must lie in (0, 1]");
  std::uint64_t n_maps = 1;
  for (int i = 0; i < d_size; ++i) {
    n_maps *= static_cast<std::uint64_t>(e_size);
    if (n_maps > (std::uint64_t{1} << 16))
      throw ConfigError("label-cover map count exceeds 65536");
  }

  auto sig = std::make_shared<Signature>();
  sig->sorts = {"d", "e"};
  std::vector<std::vector<int>> maps;
  for_each_map(d_size, e_size, [&](const std::vector<int>& pi) {
    Symbol sym;
    sym.id = "pi";
    for (int img : pi) sym.id += "." + std::to_string(img);
    sym.arity = {{"u", 0}, {"v", 1}};
    sig->symbols.push_back(std::move(sym));
    maps.push_back(pi);
  });
  sig->validate();

  std::vector<std::pair<std::string, int>> elems;
  for (int i = 0; i < d_size; ++i) elems.emplace_back("d" + std::to_string(i), 0);
  for (int i = 0; i < e_size; ++i) elems.emplace_back("e" + std::to_string(i), 1);
  SortedSet dom(std::move(elems), 2);

  std::vector<std::vector<Ext>> tables(maps.size());
  for (std::size_t m = 0; m < maps.size(); ++m)
    for (int u = 0; u < d_size; ++u)
      for (int v = 0; v < e_size; ++v)
        tables[m].push_back(Ext(Rat(maps[m][u] == v ? 1 : 0)));

  ValuedTemplate tmpl;
  tmpl.A = ValuedStructure(std::move(sig), dom, tables);
  tmpl.B = tmpl.A;
  tmpl.kind = ValuedTemplate::Kind::Standard;
  tmpl.c = 1;
  tmpl.s = epsilon;
  tmpl.validate();
  return tmpl;
}

namespace {

void check_pi(const HastadConfig& cfg, const std::vector<int>& pi) {
  if (static_cast<int>(pi.size()) != cfg.d_size)
    throw ConfigError("map must assign an image to every coordinate of D");
  for (int img : pi)
    if (img < 0 || img >= cfg.e_size)
      throw ConfigError("map image out of range");
}

}  // namespace

PayoffFormula build_phi_pi(const HastadConfig& cfg, const std::vector<int>& pi,
                           const Limits& lim) {
  cfg.validate();
  check_pi(cfg, pi);
  const int bits = cfg.e_size + 2 * cfg.d_size;
  if (bits >= 62 || (std::uint64_t{1} << bits) > lim.max_assignments)
    throw ResourceLimitError("long-code sampling space exceeds the assignment limit");

  const int d = cfg.d_size, e = cfg.e_size;
  const std::int64_t d_half = std::int64_t{1} << (d - 1);
  const std::int64_t e_half = std::int64_t{1} << (e - 1);

  std::vector<std::pair<std::string, int>> elems;
  for (std::int64_t r = 0; r < d_half; ++r)
    elems.emplace_back("D." + sign_string(d, r), 0);
  for (std::int64_t r = 0; r < e_half; ++r)
    elems.emplace_back("E." + sign_string(e, r), 0);

  PayoffFormula phi;
  phi.sig = hastad_signature();
  phi.vars = SortedSet(std::move(elems), 1);

  std::vector<Rat> pow_noise(d + 1), pow_keep(d + 1);
  pow_noise[0] = 1;
  pow_keep[0] = 1;
  for (int j = 1; j <= d; ++j) {
    pow_noise[j] = pow_noise[j - 1] * cfg.delta;
    pow_keep[j] = pow_keep[j - 1] * (Rat(1) - cfg.delta);
  }
  Rat uniform(1);
  for (int j = 0; j < d + e; ++j) uniform /= 2;

  const auto d_var = [&](std::int64_t rep) { return static_cast<int>(rep); };
  const auto e_var = [&](std::int64_t rep) { return static_cast<int>(d_half + rep); };

  std::map<std::pair<int, Tuple>, Rat> weight;
  for (std::int64_t a = 0; a < (std::int64_t{1} << e); ++a)
    for (std::int64_t b = 0; b < (std::int64_t{1} << d); ++b)
      for (std::int64_t noise = 0; noise < (std::int64_t{1} << d); ++noise) {
        std::int64_t prod = 0;
        for (int n = 0; n < d; ++n) {
          const int bit = digit_at(a, e, pi[n]) ^ digit_at(b, d, n) ^
                          digit_at(noise, d, n);
          prod |= static_cast<std::int64_t>(bit) << (d - 1 - n);
        }
        const int flips = (pm_is_representative(e, a) ? 0 : 1) +
                          (pm_is_representative(d, b) ? 0 : 1) +
                          (pm_is_representative(d, prod) ? 0 : 1);
        const int symbol = (flips % 2 == 0) ? 1 : 0;  // even -> "phi1"
        Tuple args{e_var(pm_representative(e, a)), d_var(pm_representative(d, b)),
                   d_var(pm_representative(d, prod))};
        const int minus = std::popcount(static_cast<std::uint64_t>(noise));
        weight[{symbol, std::move(args)}] +=
            pow_noise[minus] * pow_keep[d - minus] * uniform;
      }

  Rat total = 0;
  for (auto& [key, w] : weight) {
    phi.atoms.push_back(Atom{w, key.first, key.second});
    total += w;
  }
  if (total != 1)
    throw ContractError("long-code test weights do not sum to 1");
  phi.validate();
  return phi;
}

Tuple phi_assignment(const HastadConfig& cfg, const PmFunction& f_d,
                     const PmFunction& f_e) {
  if (f_d.arity != cfg.d_size || f_e.arity != cfg.e_size)
    throw ConfigError("function arities must match the configured coordinate sets");
  const std::int64_t d_half = std::int64_t{1} << (cfg.d_size - 1);
  const std::int64_t e_half = std::int64_t{1} << (cfg.e_size - 1);
  Tuple t;
  t.reserve(static_cast<std::size_t>(d_half + e_half));
  for (std::int64_t r = 0; r < d_half; ++r)
    t.push_back(f_d.table[r] == 1 ? 0 : 1);
  for (std::int64_t r = 0; r < e_half; ++r)
    t.push_back(f_e.table[r] == 1 ? 0 : 1);
  return t;
}

Rat evaluate_phi(const PayoffFormula& phi, const ValuedStructure& str,
                 const HastadConfig& cfg, const PmFunction& f_d,
                 const PmFunction& f_e) {
  Ext v = evaluate_formula(phi, str, phi_assignment(cfg, f_d, f_e));
  if (!v.finite())
    throw ContractError("long-code test formula evaluated to -inf on a total structure");
  return v.value();
}

Rat phi_closed_form(const HastadConfig& cfg, const std::vector<int>& pi,
                    const PmFunction& f_d, const PmFunction& f_e,
                    const Limits& lim) {
  cfg.validate();
  check_pi(cfg, pi);
  if (f_d.arity != cfg.d_size || f_e.arity != cfg.e_size)
    throw ConfigError("function arities must match the configured coordinate sets");
  FourierExpansion p = fourier_expand(fold(f_d), lim);
  FourierExpansion q = fourier_expand(fold(f_e), lim);
  std::vector<Rat> pw(cfg.d_size + 1);
  pw[0] = 1;
  for (int j = 1; j <= cfg.d_size; ++j) pw[j] = pw[j - 1] * cfg.c();
  Rat acc = 0;
  for (std::uint32_t k = 0; k < p.coef.size(); ++k) {
    if (p.coef[k] == 0) continue;
    const Rat& qk = q.coef[oddim(pi, k)];
    if (qk == 0) continue;
    acc += p.coef[k] * p.coef[k] * qk * pw[std::popcount(k)];
  }
  return acc;
}

GlcReport verify_glc_conditions(const HastadConfig& cfg, const Limits& lim) {
  cfg.validate();
  if (cfg.d_size > lim.fourier_arity || cfg.e_size > lim.fourier_arity)
    throw ResourceLimitError("coordinate set exceeds the fourier arity limit");
  if (cfg.d_size > 5 || cfg.e_size > 5)
    throw ResourceLimitError("exhaustive function space is too large");
  const std::uint64_t nd = std::uint64_t{1} << (std::uint64_t{1} << cfg.d_size);
  const std::uint64_t ne = std::uint64_t{1} << (std::uint64_t{1} << cfg.e_size);
  if (nd > lim.max_minion_size || ne > lim.max_minion_size)
    throw ResourceLimitError("exhaustive function space exceeds the minion limit");

  struct SideData {
    std::vector<std::vector<Rat>> hat;   // folded Fourier coefficients
    std::vector<std::vector<Rat>> lam;   // dense coordinate distribution
  };
  const auto precompute = [&](int arity, std::uint64_t count) {
    SideData side;
    side.hat.reserve(count);
    side.lam.reserve(count);
    for (std::uint64_t i = 0; i < count; ++i) {
      PmFunction f = pm_from_index(arity, i);
      side.hat.push_back(fourier_expand(fold(f), lim).coef);
      side.lam.push_back(lambda_dense(f, lim));
    }
    return side;
  };
  SideData d_side = precompute(cfg.d_size, nd);
  SideData e_side = precompute(cfg.e_size, ne);

  std::vector<Rat> pw(cfg.d_size + 1);
  pw[0] = 1;
  for (int j = 1; j <= cfg.d_size; ++j) pw[j] = pw[j - 1] * cfg.c();

  GlcReport report;
  report.condition1_min = 1;
  bool have_margin = false;

  const auto record = [&](std::string msg) {
    ++report.violation_count;
    if (static_cast<int>(report.violations.size()) < kMaxGlcViolations)
      report.violations.push_back(std::move(msg));
  };
  const auto map_name = [](const std::vector<int>& pi) {
    std::string s = "pi=[";
    for (std::size_t i = 0; i < pi.size(); ++i)
      s += (i ? "," : "") + std::to_string(pi[i]);
    return s + "]";
  };

  ValuedTemplate tmpl = hastad_template(cfg.delta);
  const std::uint32_t n_subsets = std::uint32_t{1} << cfg.d_size;

  for_each_map(cfg.d_size, cfg.e_size, [&](const std::vector<int>& pi) {
    ++report.maps_checked;

    PayoffFormula phi = build_phi_pi(cfg, pi, lim);
    for (int d = 0; d < cfg.d_size; ++d) {
      Rat value = evaluate_phi(phi, tmpl.A, cfg, pm_projection(cfg.d_size, d),
                               pm_projection(cfg.e_size, pi[d]));
      if (value < report.condition1_min) report.condition1_min = value;
      if (value < cfg.c()) {
        report.condition1_ok = false;
        record(map_name(pi) + " d=" + std::to_string(d) + ": projection value " +
               rat_to_string(value) + " < c=" + rat_to_string(cfg.c()));
      }
    }

    std::vector<std::uint32_t> od(n_subsets);
    for (std::uint32_t k = 0; k < n_subsets; ++k) od[k] = oddim(pi, k);

    for (std::uint64_t fd = 0; fd < nd; ++fd) {
      const auto& hat_d = d_side.hat[fd];
      const auto& lam_d = d_side.lam[fd];
      for (std::uint64_t fe = 0; fe < ne; ++fe) {
        const auto& hat_e = e_side.hat[fe];
        const auto& lam_e = e_side.lam[fe];
        ++report.pairs_checked;

        Rat lhs = 0;
        for (std::uint32_t k = 0; k < n_subsets; ++k) {
          if (hat_d[k] == 0) continue;
          const Rat& qk = hat_e[od[k]];
          if (qk == 0) continue;
          lhs += hat_d[k] * hat_d[k] * qk * pw[std::popcount(k)];
        }
        Rat rhs = 0;
        for (int d = 0; d < cfg.d_size; ++d)
          if (lam_d[d] != 0 && lam_e[pi[d]] != 0) rhs += lam_d[d] * lam_e[pi[d]];

        Rat margin = rhs - cfg.gamma(lhs);
        if (!have_margin || margin < report.condition2_min_margin) {
          report.condition2_min_margin = margin;
          have_margin = true;
        }
        if (margin < 0) {
          report.condition2_ok = false;
          record(map_name(pi) + " f_D=" + std::to_string(fd) + " f_E=" +
                 std::to_string(fe) + ": margin " + rat_to_string(margin));
        }
      }
    }
  });

  report.ok = report.condition1_ok && report.condition2_ok;
  return report;
}

MinionHomTable xi_from_lambda(const HastadConfig& cfg,
                              const std::vector<int>& lambda_d,
                              const std::vector<int>& lambda_e, int k,
                              const Limits& lim) {
  cfg.validate();
  if (k < 1) throw ConfigError("arity bound must be positive");
  if (cfg.d_size > 5 || cfg.e_size > 5)
    throw ResourceLimitError("choice tables are too large to index");
  const std::uint64_t nd = std::uint64_t{1} << (std::uint64_t{1} << cfg.d_size);
  const std::uint64_t ne = std::uint64_t{1} << (std::uint64_t{1} << cfg.e_size);
  if (lambda_d.size() != nd)
    throw ConfigError("lambda_d must assign a coordinate to every function");
  if (lambda_e.size() != ne)
    throw ConfigError("lambda_e must assign a coordinate to every function");
  for (int v : lambda_d)
    if (v < 0 || v >= cfg.d_size) throw ConfigError("lambda_d image out of range");
  for (int v : lambda_e)
    if (v < 0 || v >= cfg.e_size) throw ConfigError("lambda_e image out of range");

  ValuedTemplate source = hastad_template(cfg.delta);
  ValuedTemplate target = glc_template(cfg.d_size, cfg.e_size, cfg.epsilon());
  const SortedSet& pm_dom = source.A.dom();
  const SortedSet& glc_dom = target.A.dom();

  MinionHomTable table;
  table.k = k;
  table.src_dom = pm_dom;
  table.src_cod = pm_dom;
  table.tgt_dom = glc_dom;
  table.tgt_cod = glc_dom;
  table.maps.resize(k);

  for (int n = 1; n <= k; ++n) {
    FnSpace pfs(pm_dom, pm_dom, n);
    FnSpace gfs(glc_dom, glc_dom, n);
    if (pfs.count_all() > lim.max_minion_size)
      throw ResourceLimitError("function space at arity " + std::to_string(n) +
                               " exceeds the minion limit");
    pfs.for_each_function(lim.max_minion_size, [&](const NaryFunction& f) {
      NaryFunction image;
      image.arity = n;
      image.tables.resize(2);
      for (std::int64_t r = 0; r < gfs.inputs(0); ++r) {
        std::vector<int> row = gfs.unrank_row(0, r);
        std::vector<int> pos(row.size());
        for (std::size_t z = 0; z < row.size(); ++z)
          pos[z] = glc_dom.pos_in_sort(row[z]);
        NaryFunction minor = pfs.minor(f, pos, cfg.d_size);
        image.tables[0].push_back(lambda_d[fn_table_index(minor)]);
      }
      for (std::int64_t r = 0; r < gfs.inputs(1); ++r) {
        std::vector<int> row = gfs.unrank_row(1, r);
        std::vector<int> pos(row.size());
        for (std::size_t z = 0; z < row.size(); ++z)
          pos[z] = glc_dom.pos_in_sort(row[z]);
        NaryFunction minor = pfs.minor(f, pos, cfg.e_size);
        image.tables[1].push_back(cfg.d_size + lambda_e[fn_table_index(minor)]);
      }
      table.maps[n - 1].emplace(f, std::move(image));
    });
  }
  return table;
}

Rat glc_pair_expectation(const HastadConfig& cfg, const std::vector<int>& pi,
                         const Weighting& omega,
                         const std::vector<int>& d_tuple,
                         const std::vector<int>& e_tuple, const Limits& lim) {
  cfg.validate();
  check_pi(cfg, pi);
  if (static_cast<int>(d_tuple.size()) != omega.arity ||
      static_cast<int>(e_tuple.size()) != omega.arity)
    throw ConfigError("tuple lengths must match the weighting arity");
  for (int v : d_tuple)
    if (v < 0 || v >= cfg.d_size) throw ConfigError("d tuple entry out of range");
  for (int v : e_tuple)
    if (v < 0 || v >= cfg.e_size) throw ConfigError("e tuple entry out of range");

  ValuedTemplate source = hastad_template(cfg.delta);
  FnSpace pfs(source.A.dom(), source.A.dom(), omega.arity);

  Rat acc = 0;
  for (const auto& [key, prob] : omega.out.entries) {
    const NaryFunction& f = omega.support[key];
    std::vector<Rat> lam_d =
        lambda_dense(pm_from_nary(pfs.minor(f, d_tuple, cfg.d_size)), lim);
    std::vector<Rat> lam_e =
        lambda_dense(pm_from_nary(pfs.minor(f, e_tuple, cfg.e_size)), lim);
    Rat hit = 0;
    for (int d = 0; d < cfg.d_size; ++d)
      if (lam_d[d] != 0 && lam_e[pi[d]] != 0) hit += lam_d[d] * lam_e[pi[d]];
    acc += prob * hit;
  }
  return acc;
}

}  // namespace pvcsp
