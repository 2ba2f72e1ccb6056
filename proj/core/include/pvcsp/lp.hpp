#pragma once

#include <string>
#include <vector>

#include "pvcsp/errors.hpp"
#include "pvcsp/rational.hpp"

namespace pvcsp {

/// A feasibility system: find y >= 0 with F y <= q. Rows and columns carry
/// unique string labels; labels are zero-padded so that lexicographic order
/// equals construction order, and the solver normalizes to label order so
/// results do not depend on assembly order.
struct LPSystem {
  std::vector<std::string> col_labels;
  std::vector<std::string> row_labels;
  std::vector<std::vector<Rat>> coef;  // [row][col]
  std::vector<Rat> rhs;                // q

  int n_rows() const { return static_cast<int>(row_labels.size()); }
  int n_cols() const { return static_cast<int>(col_labels.size()); }

  int add_col(const std::string& label);
  int add_row(const std::string& label, Rat q);
  void add_coef(int row, int col, const Rat& v) { coef[row][col] += v; }

  int col_index(const std::string& label) const;
  int row_index(const std::string& label) const;

  /// Shape and label-uniqueness checks.
  void validate() const;
};

/// Outcome of solve_feasibility. Exactly one of y / x is meaningful:
/// feasible carries a solution y >= 0 with F y <= q; infeasible carries a
/// certificate x >= 0 with F^T x >= 0 and q^T x < 0.
struct LPResult {
  bool feasible = false;
  std::vector<Rat> y;  // per column
  std::vector<Rat> x;  // per row
};

/// Exact phase-1 simplex (Bland's rule) deciding feasibility of
/// {y >= 0 : F y <= q}. Always returns either a solution or a certificate;
/// both are re-checked internally before returning.
LPResult solve_feasibility(const LPSystem& sys, const Limits& lim = {});

/// Re-derives the claimed result from scratch: a feasible result must
/// satisfy every row, an infeasible one must be a valid certificate. On
/// failure, *why (if given) receives the first violation found.
bool verify_certificate(const LPSystem& sys, const LPResult& res,
                        std::string* why = nullptr);

/// Independent feasibility decision by Fourier-Motzkin elimination
/// (including the y >= 0 rows). Only for small systems; throws
/// ResourceLimitError beyond `max_vars` variables.
bool fm_oracle(const LPSystem& sys, int max_vars = 6);

}  // namespace pvcsp
