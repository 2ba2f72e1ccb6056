#include "pvcsp/lp.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace pvcsp {

int LPSystem::add_col(const std::string& label) {
  col_labels.push_back(label);
  for (auto& row : coef) row.emplace_back(0);
  return n_cols() - 1;
}

int LPSystem::add_row(const std::string& label, Rat q) {
  row_labels.push_back(label);
  coef.emplace_back(col_labels.size(), Rat(0));
  rhs.push_back(std::move(q));
  return n_rows() - 1;
}

int LPSystem::col_index(const std::string& label) const {
  auto it = std::find(col_labels.begin(), col_labels.end(), label);
  return it == col_labels.end() ? -1
                                : static_cast<int>(it - col_labels.begin());
}

int LPSystem::row_index(const std::string& label) const {
  auto it = std::find(row_labels.begin(), row_labels.end(), label);
  return it == row_labels.end() ? -1
                                : static_cast<int>(it - row_labels.begin());
}

void LPSystem::validate() const {
  if (coef.size() != row_labels.size() || rhs.size() != row_labels.size())
    throw ConfigError("lp system shape mismatch");
  for (const auto& row : coef)
    if (row.size() != col_labels.size())
      throw ConfigError("lp system shape mismatch");
  std::set<std::string> seen(col_labels.begin(), col_labels.end());
  if (seen.size() != col_labels.size())
    throw ConfigError("duplicate lp column label");
  std::set<std::string> rseen(row_labels.begin(), row_labels.end());
  if (rseen.size() != row_labels.size())
    throw ConfigError("duplicate lp row label");
}

namespace {

std::vector<int> label_order(const std::vector<std::string>& labels) {
  std::vector<int> perm(labels.size());
  std::iota(perm.begin(), perm.end(), 0);
  std::sort(perm.begin(), perm.end(),
            [&](int a, int b) { return labels[a] < labels[b]; });
  return perm;
}

}  // namespace

LPResult solve_feasibility(const LPSystem& sys, const Limits& lim) {
  sys.validate();
  if (static_cast<std::uint64_t>(sys.n_rows()) > lim.max_lp_rows)
    throw ResourceLimitError("lp row count exceeds limit");

  const int m = sys.n_rows();
  const int n = sys.n_cols();
  std::vector<int> prow = label_order(sys.row_labels);
  std::vector<int> pcol = label_order(sys.col_labels);

  // Equality form with rhs >= 0: rows with negative rhs are negated and get
  // an artificial variable; every row gets a slack with sign sigma_i.
  std::vector<int> art_col(m, -1);
  int n_art = 0;
  for (int i = 0; i < m; ++i)
    if (sys.rhs[prow[i]] < 0) art_col[i] = n + m + n_art++;
  const int width = n + m + n_art;

  std::vector<std::vector<Rat>> a(m, std::vector<Rat>(width, Rat(0)));
  std::vector<Rat> b(m);
  std::vector<int> basis(m);
  for (int i = 0; i < m; ++i) {
    const int src = prow[i];
    const Rat sigma = sys.rhs[src] < 0 ? Rat(-1) : Rat(1);
    for (int j = 0; j < n; ++j) a[i][j] = sigma * sys.coef[src][pcol[j]];
    a[i][n + i] = sigma;
    b[i] = sigma * sys.rhs[src];
    if (art_col[i] >= 0) {
      a[i][art_col[i]] = 1;
      basis[i] = art_col[i];
    } else {
      basis[i] = n + i;
    }
  }

  // Reduced-cost row for min(sum of artificials), with basic columns zeroed.
  std::vector<Rat> d(width, Rat(0));
  Rat neg_z = 0;
  for (int i = 0; i < m; ++i)
    if (art_col[i] >= 0) d[art_col[i]] = 1;
  for (int i = 0; i < m; ++i) {
    if (art_col[i] < 0) continue;
    for (int j = 0; j < width; ++j) d[j] -= a[i][j];
    neg_z -= b[i];
  }

  for (;;) {
    int enter = -1;
    for (int j = 0; j < width; ++j)
      if (d[j] < 0) {
        enter = j;
        break;
      }
    if (enter < 0) break;
    int leave = -1;
    Rat best;
    for (int i = 0; i < m; ++i) {
      if (a[i][enter] <= 0) continue;
      Rat ratio = b[i] / a[i][enter];
      if (leave < 0 || ratio < best ||
          (ratio == best && basis[i] < basis[leave])) {
        leave = i;
        best = ratio;
      }
    }
    if (leave < 0)
      throw ContractError("phase-1 objective unbounded");
    const Rat piv = a[leave][enter];
    for (int j = 0; j < width; ++j) a[leave][j] /= piv;
    b[leave] /= piv;
    for (int i = 0; i < m; ++i) {
      if (i == leave || a[i][enter] == 0) continue;
      const Rat f = a[i][enter];
      for (int j = 0; j < width; ++j) a[i][j] -= f * a[leave][j];
      b[i] -= f * b[leave];
    }
    if (d[enter] != 0) {
      const Rat f = d[enter];
      for (int j = 0; j < width; ++j) d[j] -= f * a[leave][j];
      neg_z -= f * b[leave];
    }
    basis[leave] = enter;
  }

  LPResult res;
  if (neg_z == 0) {
    res.feasible = true;
    res.y.assign(n, Rat(0));
    for (int i = 0; i < m; ++i)
      if (basis[i] < n) res.y[pcol[basis[i]]] = b[i];
  } else {
    // Farkas certificate: reduced costs of the slack columns.
    res.feasible = false;
    res.x.assign(m, Rat(0));
    for (int i = 0; i < m; ++i) res.x[prow[i]] = d[n + i];
  }
  std::string why;
  if (!verify_certificate(sys, res, &why))
    throw ContractError("solver produced an invalid result: " + why);
  return res;
}

bool verify_certificate(const LPSystem& sys, const LPResult& res,
                        std::string* why) {
  auto fail = [&](const std::string& msg) {
    if (why) *why = msg;
    return false;
  };
  if (res.feasible) {
    if (static_cast<int>(res.y.size()) != sys.n_cols())
      return fail("solution size mismatch");
    for (int j = 0; j < sys.n_cols(); ++j)
      if (res.y[j] < 0) return fail("negative entry in solution");
    for (int i = 0; i < sys.n_rows(); ++i) {
      Rat lhs = 0;
      for (int j = 0; j < sys.n_cols(); ++j) lhs += sys.coef[i][j] * res.y[j];
      if (lhs > sys.rhs[i])
        return fail("row " + sys.row_labels[i] + " violated");
    }
    return true;
  }
  if (static_cast<int>(res.x.size()) != sys.n_rows())
    return fail("certificate size mismatch");
  for (int i = 0; i < sys.n_rows(); ++i)
    if (res.x[i] < 0) return fail("negative entry in certificate");
  for (int j = 0; j < sys.n_cols(); ++j) {
    Rat v = 0;
    for (int i = 0; i < sys.n_rows(); ++i) v += sys.coef[i][j] * res.x[i];
    if (v < 0) return fail("certificate fails column " + sys.col_labels[j]);
  }
  Rat qx = 0;
  for (int i = 0; i < sys.n_rows(); ++i) qx += sys.rhs[i] * res.x[i];
  if (qx >= 0) return fail("certificate has q^T x >= 0");
  return true;
}

namespace {

using FMRow = std::pair<std::vector<Rat>, Rat>;  // coefs <= rhs

FMRow normalize_row(FMRow row) {
  Rat scale = 0;
  for (const Rat& v : row.first)
    if (v != 0) {
      scale = abs(v);
      break;
    }
  if (scale == 0 && row.second != 0) scale = abs(row.second);
  if (scale != 0 && scale != 1) {
    for (Rat& v : row.first) v /= scale;
    row.second /= scale;
  }
  return row;
}

}  // namespace

bool fm_oracle(const LPSystem& sys, int max_vars) {
  sys.validate();
  const int n = sys.n_cols();
  if (n > max_vars)
    throw ResourceLimitError("fourier-motzkin variable count exceeds limit");

  std::set<FMRow> rows;
  for (int i = 0; i < sys.n_rows(); ++i)
    rows.insert(normalize_row({sys.coef[i], sys.rhs[i]}));
  for (int j = 0; j < n; ++j) {
    std::vector<Rat> nonneg(n, Rat(0));
    nonneg[j] = -1;
    rows.insert(normalize_row({std::move(nonneg), Rat(0)}));
  }

  for (int v = 0; v < n; ++v) {
    std::vector<FMRow> pos, neg;
    std::set<FMRow> next;
    for (const auto& row : rows) {
      if (row.first[v] > 0)
        pos.push_back(row);
      else if (row.first[v] < 0)
        neg.push_back(row);
      else
        next.insert(row);
    }
    for (const auto& p : pos)
      for (const auto& q : neg) {
        FMRow comb{std::vector<Rat>(n, Rat(0)), Rat(0)};
        const Rat& pc = p.first[v];
        const Rat nc = -q.first[v];
        for (int j = 0; j < n; ++j)
          comb.first[j] = p.first[j] / pc + q.first[j] / nc;
        comb.second = p.second / pc + q.second / nc;
        comb.first[v] = 0;
        bool all_zero = true;
        for (const Rat& c : comb.first)
          if (c != 0) {
            all_zero = false;
            break;
          }
        if (all_zero) {
          if (comb.second < 0) return false;
          continue;  // trivially true
        }
        next.insert(normalize_row(std::move(comb)));
      }
    rows = std::move(next);
  }

  for (const auto& row : rows)
    if (row.second < 0) return false;
  return true;
}

}  // namespace pvcsp
