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

#ifndef PRIVFUNNEL_PROBABILITY_H_
#define PRIVFUNNEL_PROBABILITY_H_

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "Eigen/Dense"
#include "absl/status/statusor.h"

namespace privfunnel {

class Mechanism;

// The single generator type used across the library. Always passed
// explicitly; nothing in privfunnel keeps global random state.
using Rng = std::mt19937_64;

// Uniform draw from [0, 1) using the top 53 bits of one generator output.
// Unlike std::uniform_real_distribution this is identical on every platform.
double UniformUnit(Rng& rng);

inline constexpr double kProbabilityTolerance = 1e-12;

// A finite distribution: nonnegative entries summing to one.
class ProbabilityVector {
 public:
  static absl::StatusOr<ProbabilityVector> Create(Eigen::VectorXd values);
  // Rescales a nonnegative vector with positive mass to sum to one.
  static absl::StatusOr<ProbabilityVector> Normalize(Eigen::VectorXd weights);

  int size() const { return static_cast<int>(values_.size()); }
  double operator[](int i) const { return values_[i]; }
  const Eigen::VectorXd& values() const { return values_; }

 private:
  explicit ProbabilityVector(Eigen::VectorXd values)
      : values_(std::move(values)) {}

  Eigen::VectorXd values_;
};

// Prior p(S, X) over c secret values and a data values, stored as a c x a
// matrix. Both marginals are strictly positive; individual cells may be 0.
class JointDistribution {
 public:
  static absl::StatusOr<JointDistribution> Create(Eigen::MatrixXd p);

  int num_secrets() const { return static_cast<int>(p_.rows()); }
  int num_values() const { return static_cast<int>(p_.cols()); }
  const Eigen::MatrixXd& matrix() const { return p_; }

  // p_S and p_X.
  const Eigen::VectorXd& secret_marginal() const { return p_s_; }
  const Eigen::VectorXd& value_marginal() const { return p_x_; }

  // Row s holds p_{X|s}.
  Eigen::MatrixXd ValueGivenSecret() const;
  // Entry (s, x) holds p_{s|x}; column x is p_{S|x}.
  Eigen::MatrixXd SecretGivenValue() const;

 private:
  explicit JointDistribution(Eigen::MatrixXd p);

  Eigen::MatrixXd p_;
  Eigen::VectorXd p_s_;
  Eigen::VectorXd p_x_;
};

struct DerivedDistributions {
  ProbabilityVector secret;                    // p_S
  ProbabilityVector value;                     // p_X
  std::vector<ProbabilityVector> value_given_secret;  // p_{X|s}, one per s
  std::vector<ProbabilityVector> secret_given_value;  // p_{S|x}, one per x
};

DerivedDistributions MarginalsAndConditionals(const JointDistribution& joint);

// Shannon entropy in nats with 0 ln 0 = 0.
double Entropy(const ProbabilityVector& v);
double Entropy(const Eigen::Ref<const Eigen::VectorXd>& v);

// I(X;Y) in nats for X ~ p_x and Y drawn through the mechanism.
absl::StatusOr<double> MutualInformation(const ProbabilityVector& p_x,
                                         const Mechanism& mechanism);
// Unchecked form for raw matrices; q.cols() must equal p_x.size().
double MutualInformation(const Eigen::VectorXd& p_x, const Eigen::MatrixXd& q);

// Mixed-radix coding of attribute tuples. Attribute 0 is the most
// significant digit: flat = ((x0 * a1) + x1) * a2 + x2 ... (all 0-based).
class AttributeSchema {
 public:
  static absl::StatusOr<AttributeSchema> Create(std::vector<int> sizes);
  // A single attribute of the given size.
  static AttributeSchema Single(int size);

  int num_attributes() const { return static_cast<int>(sizes_.size()); }
  const std::vector<int>& sizes() const { return sizes_; }
  int size(int attribute) const { return sizes_[attribute]; }
  int flat_size() const { return flat_size_; }

  int Flatten(std::span<const int> tuple) const;
  std::vector<int> Unflatten(int flat) const;

  // Digit of the given attribute inside a flat index.
  int Digit(int flat, int attribute) const;

 private:
  explicit AttributeSchema(std::vector<int> sizes);

  std::vector<int> sizes_;
  std::vector<int> strides_;
  int flat_size_ = 1;
};

// Attacker side information: the values of a subset of attributes.
struct Context {
  std::vector<int> attributes;  // ascending, 0-based attribute indices
  std::vector<int> values;      // one value per listed attribute
};

struct ContextConditionals {
  double context_probability = 0.0;  // P(X^J = x^J)
  ProbabilityVector target_given_context;
  // p_{X^j | s, x^J}; nullopt when P(s, x^J) = 0.
  std::vector<std::optional<ProbabilityVector>> target_given_secret_and_context;
};

// Distribution of attribute `target` given the context, unconditionally and
// per secret value. Fails with ZeroProbabilityContext when P(x^J) = 0.
absl::StatusOr<ContextConditionals> ConditionOnContext(
    const JointDistribution& joint, const AttributeSchema& schema,
    const Context& context, int target);

// Every entry drawn uniformly from [0, 1), then rescaled to sum to one.
// Draws with a zero marginal are discarded and redrawn.
JointDistribution RandomJoint(int num_secrets, int num_values, Rng& rng);
JointDistribution RandomJoint(int num_secrets, int num_values,
                              std::uint64_t seed);

}  // namespace privfunnel

#endif  // PRIVFUNNEL_PROBABILITY_H_
