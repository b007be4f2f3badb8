// Copyright 2026 The privfunnel Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "privfunnel/linear_program.h"

#include <cmath>
#include <optional>
#include <utility>
#include <vector>

#include "absl/strings/str_cat.h"
#include "privfunnel/errors.h"

namespace privfunnel {
namespace {

constexpr double kPivotTolerance = 1e-11;
constexpr int kMaxIterations = 100000;

// Equality-form problem: maximize c.x, A x = b, x >= 0.
struct StandardForm {
  Eigen::MatrixXd a;
  Eigen::VectorXd b;
  Eigen::VectorXd c;
};

struct StandardSolution {
  Eigen::VectorXd x;
  double value = 0.0;
  // c_j - z_j at the optimum; <= 0 everywhere, 0 on the basis.
  Eigen::VectorXd reduced_costs;
};

// Dense simplex tableau. The last row holds z_j - c_j and the last column
// the basic values; the bottom-right entry is the objective value.
class Tableau {
 public:
  Tableau(const StandardForm& form)
      : m_(static_cast<int>(form.a.rows())),
        n_(static_cast<int>(form.a.cols())),
        rhs_(n_ + m_),
        t_(Eigen::MatrixXd::Zero(m_ + 1, n_ + m_ + 1)),
        basis_(m_) {
    for (int i = 0; i < m_; ++i) {
      double sign = form.b[i] < 0.0 ? -1.0 : 1.0;
      t_.row(i).head(n_) = sign * form.a.row(i);
      t_(i, n_ + i) = 1.0;
      t_(i, n_ + m_) = sign * form.b[i];
      basis_[i] = n_ + i;
    }
  }

  // Phase 1: maximize -(sum of artificials).
  absl::Status FindFeasibleBasis() {
    for (int j = 0; j <= rhs_; ++j) {
      double column = 0.0;
      for (int i = 0; i < m_; ++i) column += t_(i, j);
      t_(m_, j) = j < n_ || j == rhs_ ? -column : 0.0;
    }
    if (absl::Status s = Optimize(rhs_); !s.ok()) return s;
    double scale = 1.0;
    for (int i = 0; i < m_; ++i) scale = std::max(scale, std::abs(t_(i, rhs_)));
    if (t_(m_, rhs_) < -kLpTolerance * scale) {
      return MakeError(ErrorKind::kInfeasible, "linear program is infeasible");
    }
    // Pivot zero-level artificials out; drop rows that are redundant.
    for (int i = 0; i < m_; ++i) {
      if (basis_[i] < n_) continue;
      int entering = -1;
      for (int j = 0; j < n_; ++j) {
        if (std::abs(t_(i, j)) > 1e-9) {
          entering = j;
          break;
        }
      }
      if (entering >= 0) {
        Pivot(i, entering);
      } else {
        RemoveRow(i);
        --i;
      }
    }
    return absl::OkStatus();
  }

  // Phase 2 on the original columns.
  absl::StatusOr<StandardSolution> Maximize(const Eigen::VectorXd& c) {
    for (int j = 0; j <= rhs_; ++j) {
      double z = 0.0;
      for (int i = 0; i < m_; ++i) {
        if (basis_[i] < n_) z += c[basis_[i]] * t_(i, j);
      }
      t_(m_, j) = j < n_ ? z - c[j] : (j == rhs_ ? z : 0.0);
    }
    if (absl::Status s = Optimize(n_); !s.ok()) return s;
    StandardSolution solution;
    solution.x = Eigen::VectorXd::Zero(n_);
    for (int i = 0; i < m_; ++i) {
      if (basis_[i] < n_) solution.x[basis_[i]] = t_(i, rhs_);
    }
    solution.x = solution.x.cwiseMax(0.0);
    solution.value = c.dot(solution.x);
    solution.reduced_costs = -t_.row(m_).head(n_).transpose();
    for (int i = 0; i < m_; ++i) {
      if (basis_[i] < n_) solution.reduced_costs[basis_[i]] = 0.0;
    }
    return solution;
  }

 private:
  // Bland's rule over columns [0, allowed).
  absl::Status Optimize(int allowed) {
    for (int iteration = 0; iteration < kMaxIterations; ++iteration) {
      int entering = -1;
      for (int j = 0; j < allowed; ++j) {
        if (t_(m_, j) < -kLpTolerance) {
          entering = j;
          break;
        }
      }
      if (entering < 0) return absl::OkStatus();
      int leaving = -1;
      double best_ratio = 0.0;
      for (int i = 0; i < m_; ++i) {
        double pivot = t_(i, entering);
        if (pivot <= kPivotTolerance) continue;
        double ratio = t_(i, rhs_) / pivot;
        if (leaving < 0 || ratio < best_ratio - 1e-12 ||
            (ratio <= best_ratio + 1e-12 && basis_[i] < basis_[leaving])) {
          leaving = i;
          best_ratio = ratio;
        }
      }
      if (leaving < 0) {
        return MakeError(ErrorKind::kUnbounded,
                         "objective is unbounded above");
      }
      Pivot(leaving, entering);
    }
    return MakeError(ErrorKind::kInternal, "simplex iteration limit reached");
  }

  void Pivot(int row, int col) {
    t_.row(row) /= t_(row, col);
    for (int i = 0; i <= m_; ++i) {
      if (i == row) continue;
      double factor = t_(i, col);
      if (factor != 0.0) t_.row(i) -= factor * t_.row(row);
    }
    basis_[row] = col;
  }

  void RemoveRow(int row) {
    const int last = m_;  // objective row index
    Eigen::MatrixXd next(m_, t_.cols());
    int k = 0;
    for (int i = 0; i <= last; ++i) {
      if (i != row) next.row(k++) = t_.row(i);
    }
    t_ = std::move(next);
    basis_.erase(basis_.begin() + row);
    --m_;
  }

  int m_;
  int n_;
  int rhs_;  // column of the basic values; artificials occupy [n_, rhs_)
  Eigen::MatrixXd t_;
  std::vector<int> basis_;
};

absl::StatusOr<StandardSolution> SolveStandard(const StandardForm& form) {
  Tableau tableau(form);
  if (absl::Status s = tableau.FindFeasibleBasis(); !s.ok()) return s;
  return tableau.Maximize(form.c);
}

// Restricts the problem to `columns` (in order).
StandardForm SelectColumns(const StandardForm& form,
                           const std::vector<int>& columns) {
  StandardForm out;
  out.a.resize(form.a.rows(), columns.size());
  out.c.resize(columns.size());
  for (size_t k = 0; k < columns.size(); ++k) {
    out.a.col(k) = form.a.col(columns[k]);
    out.c[k] = form.c[columns[k]];
  }
  out.b = form.b;
  return out;
}

}  // namespace

absl::StatusOr<LpSolution> SolveLp(const LinearProgram& lp) {
  const int n = lp.num_variables();
  const int m_eq = static_cast<int>(lp.eq_rhs.size());
  const int m_in = static_cast<int>(lp.ineq_rhs.size());
  if (n == 0 || lp.eq_coeffs.rows() != m_eq || lp.ineq_coeffs.rows() != m_in ||
      (m_eq > 0 && lp.eq_coeffs.cols() != n) ||
      (m_in > 0 && lp.ineq_coeffs.cols() != n)) {
    return MakeError(ErrorKind::kDimensionMismatch,
                     "linear program dimensions are inconsistent");
  }

  // Slack variables turn the inequalities into equalities.
  StandardForm form;
  const int total = n + m_in;
  form.a = Eigen::MatrixXd::Zero(m_eq + m_in, total);
  form.b.resize(m_eq + m_in);
  if (m_eq > 0) {
    form.a.topLeftCorner(m_eq, n) = lp.eq_coeffs;
    form.b.head(m_eq) = lp.eq_rhs;
  }
  if (m_in > 0) {
    form.a.bottomLeftCorner(m_in, n) = lp.ineq_coeffs;
    form.a.bottomRightCorner(m_in, m_in).setIdentity();
    form.b.tail(m_in) = lp.ineq_rhs;
  }
  form.c = Eigen::VectorXd::Zero(total);
  form.c.head(n) = lp.objective;

  auto optimum = SolveStandard(form);
  if (!optimum.ok()) return optimum.status();
  Eigen::VectorXd x = optimum->x;

  // Optimal face: every column with a strictly negative reduced cost is 0.
  std::vector<int> free_columns;
  bool ties = false;
  for (int j = 0; j < total; ++j) {
    double rc = optimum->reduced_costs[j];
    if (rc < -kLpTolerance) continue;
    free_columns.push_back(j);
    if (x[j] <= kLpTolerance && std::abs(rc) <= kLpTolerance) ties = true;
  }

  if (ties) {
    // Lexicographic minimisation over the optimal face, one coordinate at a
    // time; fixed coordinates are pinned by extra equality rows.
    StandardForm face = SelectColumns(form, free_columns);
    for (size_t k = 0; k < free_columns.size() && free_columns[k] < n; ++k) {
      Eigen::VectorXd minimize_k = Eigen::VectorXd::Zero(face.a.cols());
      minimize_k[k] = -1.0;
      StandardForm step = face;
      step.c = minimize_k;
      auto lowest = SolveStandard(step);
      if (!lowest.ok()) break;  // keep the plain optimum on numerical trouble
      double fixed = lowest->x[k];
      face.a.conservativeResize(face.a.rows() + 1, Eigen::NoChange);
      face.a.row(face.a.rows() - 1).setZero();
      face.a(face.a.rows() - 1, k) = 1.0;
      face.b.conservativeResize(face.b.size() + 1);
      face.b[face.b.size() - 1] = fixed;
      if (k + 1 == free_columns.size() || free_columns[k + 1] >= n) {
        Eigen::VectorXd lex = Eigen::VectorXd::Zero(total);
        for (size_t i = 0; i < free_columns.size(); ++i) {
          lex[free_columns[i]] = lowest->x[i];
        }
        x = lex;
      }
    }
  }

  LpSolution solution;
  solution.point = x.head(n);
  solution.value = lp.objective.dot(solution.point);
  for (int i = 0; i < n; ++i) {
    if (solution.point[i] > kLpTolerance) solution.support.push_back(i);
  }
  return solution;
}

}  // namespace privfunnel
