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

#include "privfunnel/probability.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "absl/strings/str_cat.h"
#include "privfunnel/errors.h"
#include "privfunnel/mechanism.h"

namespace privfunnel {

double UniformUnit(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

absl::StatusOr<ProbabilityVector> ProbabilityVector::Create(
    Eigen::VectorXd values) {
  if (values.size() == 0) {
    return MakeError(ErrorKind::kInvalidInput, "empty probability vector");
  }
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i]) || values[i] < 0.0) {
      return MakeError(ErrorKind::kInvalidInput,
                       absl::StrCat("entry ", i, " is ", values[i]));
    }
  }
  double total = values.sum();
  if (std::abs(total - 1.0) > kProbabilityTolerance) {
    return MakeError(ErrorKind::kInvalidInput,
                     absl::StrCat("entries sum to ", total));
  }
  return ProbabilityVector(std::move(values));
}

absl::StatusOr<ProbabilityVector> ProbabilityVector::Normalize(
    Eigen::VectorXd weights) {
  for (Eigen::Index i = 0; i < weights.size(); ++i) {
    if (!std::isfinite(weights[i]) || weights[i] < 0.0) {
      return MakeError(ErrorKind::kInvalidInput,
                       absl::StrCat("weight ", i, " is ", weights[i]));
    }
  }
  double total = weights.sum();
  if (!(total > 0.0)) {
    return MakeError(ErrorKind::kInvalidInput, "weights have no mass");
  }
  return ProbabilityVector(weights / total);
}

JointDistribution::JointDistribution(Eigen::MatrixXd p)
    : p_(std::move(p)),
      p_s_(p_.rowwise().sum()),
      p_x_(p_.colwise().sum().transpose()) {}

absl::StatusOr<JointDistribution> JointDistribution::Create(Eigen::MatrixXd p) {
  if (p.rows() < 1 || p.cols() < 1) {
    return MakeError(ErrorKind::kInvalidInput, "joint distribution is empty");
  }
  for (Eigen::Index s = 0; s < p.rows(); ++s) {
    for (Eigen::Index x = 0; x < p.cols(); ++x) {
      if (!std::isfinite(p(s, x)) || p(s, x) < 0.0) {
        return MakeError(ErrorKind::kInvalidInput,
                         absl::StrCat("p[", s, ",", x, "] = ", p(s, x)));
      }
    }
  }
  double total = p.sum();
  if (std::abs(total - 1.0) > kProbabilityTolerance) {
    return MakeError(ErrorKind::kInvalidInput,
                     absl::StrCat("joint sums to ", total));
  }
  for (Eigen::Index s = 0; s < p.rows(); ++s) {
    if (!(p.row(s).sum() > 0.0)) {
      return MakeError(ErrorKind::kZeroMarginal,
                       absl::StrCat("secret value ", s, " has probability 0"));
    }
  }
  for (Eigen::Index x = 0; x < p.cols(); ++x) {
    if (!(p.col(x).sum() > 0.0)) {
      return MakeError(ErrorKind::kZeroMarginal,
                       absl::StrCat("data value ", x, " has probability 0"));
    }
  }
  return JointDistribution(std::move(p));
}

Eigen::MatrixXd JointDistribution::ValueGivenSecret() const {
  return p_s_.cwiseInverse().asDiagonal() * p_;
}

Eigen::MatrixXd JointDistribution::SecretGivenValue() const {
  return p_ * p_x_.cwiseInverse().asDiagonal();
}

DerivedDistributions MarginalsAndConditionals(const JointDistribution& joint) {
  // The joint's invariants make every normalisation below well defined.
  auto vec = [](Eigen::VectorXd v) {
    return *ProbabilityVector::Normalize(std::move(v));
  };
  Eigen::MatrixXd x_given_s = joint.ValueGivenSecret();
  Eigen::MatrixXd s_given_x = joint.SecretGivenValue();
  std::vector<ProbabilityVector> value_given_secret;
  for (int s = 0; s < joint.num_secrets(); ++s) {
    value_given_secret.push_back(vec(x_given_s.row(s).transpose()));
  }
  std::vector<ProbabilityVector> secret_given_value;
  for (int x = 0; x < joint.num_values(); ++x) {
    secret_given_value.push_back(vec(s_given_x.col(x)));
  }
  return DerivedDistributions{
      .secret = vec(joint.secret_marginal()),
      .value = vec(joint.value_marginal()),
      .value_given_secret = std::move(value_given_secret),
      .secret_given_value = std::move(secret_given_value),
  };
}

double Entropy(const Eigen::Ref<const Eigen::VectorXd>& v) {
  double h = 0.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (v[i] > 0.0) h -= v[i] * std::log(v[i]);
  }
  return h;
}

double Entropy(const ProbabilityVector& v) { return Entropy(v.values()); }

double MutualInformation(const Eigen::VectorXd& p_x, const Eigen::MatrixXd& q) {
  Eigen::VectorXd q_y = q * p_x;
  double mi = 0.0;
  for (Eigen::Index y = 0; y < q.rows(); ++y) {
    if (!(q_y[y] > 0.0)) continue;
    for (Eigen::Index x = 0; x < q.cols(); ++x) {
      double joint = p_x[x] * q(y, x);
      if (joint > 0.0) mi += joint * std::log(q(y, x) / q_y[y]);
    }
  }
  // Rounding can push an exact zero slightly negative.
  return std::max(mi, 0.0);
}

absl::StatusOr<double> MutualInformation(const ProbabilityVector& p_x,
                                         const Mechanism& mechanism) {
  if (mechanism.num_inputs() != p_x.size()) {
    return MakeError(ErrorKind::kDimensionMismatch,
                     absl::StrCat("mechanism has ", mechanism.num_inputs(),
                                  " inputs, distribution has ", p_x.size()));
  }
  return MutualInformation(p_x.values(), mechanism.matrix());
}

AttributeSchema::AttributeSchema(std::vector<int> sizes)
    : sizes_(std::move(sizes)), strides_(sizes_.size(), 1) {
  for (int j = num_attributes() - 1; j >= 0; --j) {
    strides_[j] = flat_size_;
    flat_size_ *= sizes_[j];
  }
}

absl::StatusOr<AttributeSchema> AttributeSchema::Create(std::vector<int> sizes) {
  if (sizes.empty()) {
    return MakeError(ErrorKind::kInvalidInput, "schema has no attributes");
  }
  long long product = 1;
  for (int size : sizes) {
    if (size < 1) {
      return MakeError(ErrorKind::kInvalidInput,
                       absl::StrCat("attribute size ", size));
    }
    product *= size;
    if (product > std::numeric_limits<int>::max() / 2) {
      return MakeError(ErrorKind::kInvalidInput, "alphabet too large");
    }
  }
  return AttributeSchema(std::move(sizes));
}

AttributeSchema AttributeSchema::Single(int size) {
  return AttributeSchema(std::vector<int>{size});
}

int AttributeSchema::Flatten(std::span<const int> tuple) const {
  int flat = 0;
  for (int j = 0; j < num_attributes(); ++j) flat += tuple[j] * strides_[j];
  return flat;
}

std::vector<int> AttributeSchema::Unflatten(int flat) const {
  std::vector<int> tuple(sizes_.size());
  for (int j = 0; j < num_attributes(); ++j) tuple[j] = Digit(flat, j);
  return tuple;
}

int AttributeSchema::Digit(int flat, int attribute) const {
  return (flat / strides_[attribute]) % sizes_[attribute];
}

absl::StatusOr<ContextConditionals> ConditionOnContext(
    const JointDistribution& joint, const AttributeSchema& schema,
    const Context& context, int target) {
  if (schema.flat_size() != joint.num_values()) {
    return MakeError(ErrorKind::kSchemaMismatch,
                     absl::StrCat("schema covers ", schema.flat_size(),
                                  " values, joint has ", joint.num_values()));
  }
  if (target < 0 || target >= schema.num_attributes()) {
    return MakeError(ErrorKind::kOutOfRange,
                     absl::StrCat("target attribute ", target));
  }
  if (context.attributes.size() != context.values.size()) {
    return MakeError(ErrorKind::kInvalidInput,
                     "context attributes and values differ in length");
  }
  for (size_t k = 0; k < context.attributes.size(); ++k) {
    int j = context.attributes[k];
    if (j < 0 || j >= schema.num_attributes()) {
      return MakeError(ErrorKind::kOutOfRange,
                       absl::StrCat("context attribute ", j));
    }
    if (j == target) {
      return MakeError(ErrorKind::kInvalidInput,
                       "target attribute is part of the context");
    }
    if (context.values[k] < 0 || context.values[k] >= schema.size(j)) {
      return MakeError(ErrorKind::kOutOfRange,
                       absl::StrCat("value ", context.values[k],
                                    " for attribute ", j));
    }
  }

  const int c = joint.num_secrets();
  const int target_size = schema.size(target);
  // mass(s, v) = P(S = s, X^target = v, X^J = x^J)
  Eigen::MatrixXd mass = Eigen::MatrixXd::Zero(c, target_size);
  for (int x = 0; x < joint.num_values(); ++x) {
    bool matches = true;
    for (size_t k = 0; k < context.attributes.size() && matches; ++k) {
      matches = schema.Digit(x, context.attributes[k]) == context.values[k];
    }
    if (!matches) continue;
    mass.col(schema.Digit(x, target)) += joint.matrix().col(x);
  }
  double context_probability = mass.sum();
  if (!(context_probability > 0.0)) {
    return MakeError(ErrorKind::kZeroProbabilityContext,
                     "context has probability 0");
  }
  std::vector<std::optional<ProbabilityVector>> per_secret;
  per_secret.reserve(c);
  for (int s = 0; s < c; ++s) {
    if (mass.row(s).sum() > 0.0) {
      per_secret.push_back(
          *ProbabilityVector::Normalize(mass.row(s).transpose()));
    } else {
      per_secret.push_back(std::nullopt);
    }
  }
  return ContextConditionals{
      .context_probability = context_probability,
      .target_given_context =
          *ProbabilityVector::Normalize(mass.colwise().sum().transpose()),
      .target_given_secret_and_context = std::move(per_secret),
  };
}

JointDistribution RandomJoint(int num_secrets, int num_values, Rng& rng) {
  while (true) {
    Eigen::MatrixXd p(num_secrets, num_values);
    for (int s = 0; s < num_secrets; ++s) {
      for (int x = 0; x < num_values; ++x) p(s, x) = UniformUnit(rng);
    }
    p /= p.sum();
    auto joint = JointDistribution::Create(std::move(p));
    if (joint.ok()) return *std::move(joint);
  }
}

JointDistribution RandomJoint(int num_secrets, int num_values,
                              std::uint64_t seed) {
  Rng rng(seed);
  return RandomJoint(num_secrets, num_values, rng);
}

}  // namespace privfunnel
