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

#ifndef PRIVFUNNEL_LINEAR_PROGRAM_H_
#define PRIVFUNNEL_LINEAR_PROGRAM_H_

#include <vector>

#include "Eigen/Dense"
#include "absl/status/statusor.h"

namespace privfunnel {

inline constexpr double kLpTolerance = 1e-9;

// maximize objective.x subject to eq_coeffs x = eq_rhs,
// ineq_coeffs x <= ineq_rhs and x >= 0.
struct LinearProgram {
  Eigen::VectorXd objective;
  Eigen::MatrixXd eq_coeffs;
  Eigen::VectorXd eq_rhs;
  Eigen::MatrixXd ineq_coeffs;
  Eigen::VectorXd ineq_rhs;

  int num_variables() const { return static_cast<int>(objective.size()); }
};

struct LpSolution {
  double value = 0.0;
  Eigen::VectorXd point;
  std::vector<int> support;  // indices with point[i] > kLpTolerance
};

// Two-phase simplex with Bland's rule. Among optimal points returns the
// lexicographically smallest one, which is a basic solution.
absl::StatusOr<LpSolution> SolveLp(const LinearProgram& lp);

}  // namespace privfunnel

#endif  // PRIVFUNNEL_LINEAR_PROGRAM_H_
