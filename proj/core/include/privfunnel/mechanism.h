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

#ifndef PRIVFUNNEL_MECHANISM_H_
#define PRIVFUNNEL_MECHANISM_H_

#include <span>
#include <vector>

#include "Eigen/Dense"
#include "absl/status/statusor.h"
#include "privfunnel/probability.h"

namespace privfunnel {

inline constexpr double kStochasticTolerance = 1e-9;
// Posterior columns closer than this (max norm) are treated as identical.
inline constexpr double kMergeTolerance = 1e-7;

// A local sanitisation mechanism stored row-per-output: entry (y, x) is
// P(Y = y | X = x). Columns are distributions.
class Mechanism {
 public:
  static absl::StatusOr<Mechanism> Create(Eigen::MatrixXd q);
  static Mechanism Identity(int size);
  // One output that every input maps to.
  static Mechanism Constant(int num_inputs);

  int num_outputs() const { return static_cast<int>(q_.rows()); }
  int num_inputs() const { return static_cast<int>(q_.cols()); }
  const Eigen::MatrixXd& matrix() const { return q_; }
  double operator()(int y, int x) const { return q_(y, x); }

  // Output distribution q = Q p_x.
  Eigen::VectorXd OutputDistribution(const Eigen::VectorXd& p_x) const;

 private:
  explicit Mechanism(Eigen::MatrixXd q) : q_(std::move(q)) {}

  Eigen::MatrixXd q_;
};

// Output distribution q and posteriors R (a x b, column y is P(X | Y = y)).
class ReverseRepresentation {
 public:
  static absl::StatusOr<ReverseRepresentation> Create(
      Eigen::VectorXd output_distribution, Eigen::MatrixXd posteriors);

  int num_outputs() const { return static_cast<int>(q_.size()); }
  int num_inputs() const { return static_cast<int>(r_.rows()); }
  const Eigen::VectorXd& output_distribution() const { return q_; }
  const Eigen::MatrixXd& posteriors() const { return r_; }

 private:
  ReverseRepresentation(Eigen::VectorXd q, Eigen::MatrixXd r)
      : q_(std::move(q)), r_(std::move(r)) {}

  Eigen::VectorXd q_;
  Eigen::MatrixXd r_;
};

// Q(y|x) = q_y R(x|y) / p_x. Fails with InconsistentPrior when R q != p_x.
absl::StatusOr<Mechanism> ReverseToForward(const ReverseRepresentation& rep,
                                           const ProbabilityVector& p_x);

// Bayes inversion. Outputs with q_y = 0 are dropped.
absl::StatusOr<ReverseRepresentation> ForwardToReverse(
    const Mechanism& mechanism, const ProbabilityVector& p_x);

// Independent per-attribute mechanisms applied side by side. Inputs and
// outputs are both coded with the mixed-radix order of AttributeSchema.
absl::StatusOr<Mechanism> ComposeProduct(std::span<const Mechanism> factors,
                                         const AttributeSchema& schema);

// Drops outputs that never occur under p_x and merges outputs whose
// posteriors P(X | y) agree within kMergeTolerance. Surviving outputs keep
// their order of first appearance.
absl::StatusOr<Mechanism> ReduceOutputs(const Mechanism& mechanism,
                                        const ProbabilityVector& p_x);

// Samples an output for input x (0-based).
absl::StatusOr<int> Apply(const Mechanism& mechanism, int x, Rng& rng);

}  // namespace privfunnel

#endif  // PRIVFUNNEL_MECHANISM_H_
