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

#include "privfunnel/mechanism.h"

#include <cmath>
#include <utility>
#include <vector>

#include "absl/strings/str_cat.h"
#include "privfunnel/errors.h"

namespace privfunnel {
namespace {

// Entries this small are rounding residue from vertex arithmetic.
constexpr double kNegligibleEntry = 1e-12;

}  // namespace

absl::StatusOr<Mechanism> Mechanism::Create(Eigen::MatrixXd q) {
  if (q.rows() < 1 || q.cols() < 1) {
    return MakeError(ErrorKind::kInvalidInput, "mechanism is empty");
  }
  for (Eigen::Index y = 0; y < q.rows(); ++y) {
    for (Eigen::Index x = 0; x < q.cols(); ++x) {
      double v = q(y, x);
      if (!std::isfinite(v) || v < -kNegligibleEntry) {
        return MakeError(ErrorKind::kInvalidInput,
                         absl::StrCat("Q[", y, ",", x, "] = ", v));
      }
      if (v < 0.0) q(y, x) = 0.0;
    }
  }
  for (Eigen::Index x = 0; x < q.cols(); ++x) {
    double total = q.col(x).sum();
    if (std::abs(total - 1.0) > kStochasticTolerance) {
      return MakeError(ErrorKind::kInvalidInput,
                       absl::StrCat("column ", x, " sums to ", total));
    }
  }
  return Mechanism(std::move(q));
}

Mechanism Mechanism::Identity(int size) {
  return Mechanism(Eigen::MatrixXd::Identity(size, size));
}

Mechanism Mechanism::Constant(int num_inputs) {
  return Mechanism(Eigen::MatrixXd::Ones(1, num_inputs));
}

Eigen::VectorXd Mechanism::OutputDistribution(const Eigen::VectorXd& p_x) const {
  return q_ * p_x;
}

absl::StatusOr<ReverseRepresentation> ReverseRepresentation::Create(
    Eigen::VectorXd output_distribution, Eigen::MatrixXd posteriors) {
  if (output_distribution.size() != posteriors.cols() ||
      output_distribution.size() == 0 || posteriors.rows() == 0) {
    return MakeError(ErrorKind::kDimensionMismatch,
                     absl::StrCat("q has ", output_distribution.size(),
                                  " outputs, R is ", posteriors.rows(), "x",
                                  posteriors.cols()));
  }
  if ((output_distribution.array() < 0.0).any() ||
      std::abs(output_distribution.sum() - 1.0) > kStochasticTolerance) {
    return MakeError(ErrorKind::kInvalidInput,
                     "output distribution is not a distribution");
  }
  for (Eigen::Index y = 0; y < posteriors.cols(); ++y) {
    if ((posteriors.col(y).array() < -kNegligibleEntry).any() ||
        std::abs(posteriors.col(y).sum() - 1.0) > kStochasticTolerance) {
      return MakeError(ErrorKind::kInvalidInput,
                       absl::StrCat("posterior ", y, " is not a distribution"));
    }
  }
  posteriors = posteriors.cwiseMax(0.0);
  return ReverseRepresentation(std::move(output_distribution),
                               std::move(posteriors));
}

absl::StatusOr<Mechanism> ReverseToForward(const ReverseRepresentation& rep,
                                           const ProbabilityVector& p_x) {
  if (rep.num_inputs() != p_x.size()) {
    return MakeError(ErrorKind::kDimensionMismatch,
                     absl::StrCat("posteriors cover ", rep.num_inputs(),
                                  " inputs, prior has ", p_x.size()));
  }
  if ((p_x.values().array() <= 0.0).any()) {
    return MakeError(ErrorKind::kZeroMarginal, "p_X is not strictly positive");
  }
  const Eigen::VectorXd& q = rep.output_distribution();
  const Eigen::MatrixXd& r = rep.posteriors();
  Eigen::VectorXd implied = r * q;
  double gap = (implied - p_x.values()).cwiseAbs().maxCoeff();
  if (gap > kStochasticTolerance) {
    return MakeError(ErrorKind::kInconsistentPrior,
                     absl::StrCat("R q differs from p_X by ", gap));
  }
  // Q(y, x) = q_y R(x, y) / p_x
  Eigen::MatrixXd forward = q.asDiagonal() * r.transpose() *
                            p_x.values().cwiseInverse().asDiagonal();
  for (Eigen::Index x = 0; x < forward.cols(); ++x) {
    forward.col(x) /= forward.col(x).sum();
  }
  return Mechanism::Create(std::move(forward));
}

absl::StatusOr<ReverseRepresentation> ForwardToReverse(
    const Mechanism& mechanism, const ProbabilityVector& p_x) {
  if (mechanism.num_inputs() != p_x.size()) {
    return MakeError(ErrorKind::kDimensionMismatch,
                     absl::StrCat("mechanism has ", mechanism.num_inputs(),
                                  " inputs, prior has ", p_x.size()));
  }
  Eigen::VectorXd q_all = mechanism.OutputDistribution(p_x.values());
  std::vector<int> kept;
  for (int y = 0; y < mechanism.num_outputs(); ++y) {
    if (q_all[y] > 0.0) kept.push_back(y);
  }
  const int b = static_cast<int>(kept.size());
  Eigen::VectorXd q(b);
  Eigen::MatrixXd r(mechanism.num_inputs(), b);
  for (int k = 0; k < b; ++k) {
    int y = kept[k];
    q[k] = q_all[y];
    r.col(k) = mechanism.matrix().row(y).transpose().cwiseProduct(p_x.values()) /
               q_all[y];
  }
  q /= q.sum();
  return ReverseRepresentation::Create(std::move(q), std::move(r));
}

absl::StatusOr<Mechanism> ComposeProduct(std::span<const Mechanism> factors,
                                         const AttributeSchema& schema) {
  if (static_cast<int>(factors.size()) != schema.num_attributes()) {
    return MakeError(ErrorKind::kSchemaMismatch,
                     absl::StrCat(factors.size(), " factors for ",
                                  schema.num_attributes(), " attributes"));
  }
  std::vector<int> output_sizes;
  for (int j = 0; j < schema.num_attributes(); ++j) {
    if (factors[j].num_inputs() != schema.size(j)) {
      return MakeError(ErrorKind::kSchemaMismatch,
                       absl::StrCat("factor ", j, " has ",
                                    factors[j].num_inputs(),
                                    " inputs, attribute has ", schema.size(j)));
    }
    output_sizes.push_back(factors[j].num_outputs());
  }
  auto output_schema = AttributeSchema::Create(std::move(output_sizes));
  if (!output_schema.ok()) return output_schema.status();

  Eigen::MatrixXd product(output_schema->flat_size(), schema.flat_size());
  for (int y = 0; y < product.rows(); ++y) {
    for (int x = 0; x < product.cols(); ++x) {
      double v = 1.0;
      for (int j = 0; j < schema.num_attributes() && v != 0.0; ++j) {
        v *= factors[j](output_schema->Digit(y, j), schema.Digit(x, j));
      }
      product(y, x) = v;
    }
  }
  return Mechanism::Create(std::move(product));
}

absl::StatusOr<Mechanism> ReduceOutputs(const Mechanism& mechanism,
                                        const ProbabilityVector& p_x) {
  if (mechanism.num_inputs() != p_x.size()) {
    return MakeError(ErrorKind::kDimensionMismatch,
                     absl::StrCat("mechanism has ", mechanism.num_inputs(),
                                  " inputs, prior has ", p_x.size()));
  }
  const Eigen::MatrixXd& q = mechanism.matrix();
  const int a = mechanism.num_inputs();

  std::vector<Eigen::VectorXd> posteriors;  // group representatives
  std::vector<Eigen::VectorXd> rows;        // summed rows per group
  for (int y = 0; y < mechanism.num_outputs(); ++y) {
    Eigen::VectorXd row = q.row(y).transpose();
    double mass = row.dot(p_x.values());
    if (row.maxCoeff() <= kNegligibleEntry || !(mass > 0.0)) continue;
    Eigen::VectorXd posterior = row.cwiseProduct(p_x.values()) / mass;
    bool merged = false;
    for (size_t g = 0; g < posteriors.size(); ++g) {
      if ((posteriors[g] - posterior).cwiseAbs().maxCoeff() <=
          kMergeTolerance) {
        rows[g] += row;
        merged = true;
        break;
      }
    }
    if (!merged) {
      posteriors.push_back(std::move(posterior));
      rows.push_back(std::move(row));
    }
  }
  if (rows.empty()) {
    return MakeError(ErrorKind::kInvalidInput, "mechanism has no mass");
  }
  Eigen::MatrixXd reduced(rows.size(), a);
  for (size_t g = 0; g < rows.size(); ++g) reduced.row(g) = rows[g].transpose();
  for (int x = 0; x < a; ++x) {
    double total = reduced.col(x).sum();
    if (total > 0.0) {
      reduced.col(x) /= total;
    } else {
      // Only reachable for inputs with p_x = 0, whose rows were all dropped.
      reduced(0, x) = 1.0;
    }
  }
  return Mechanism::Create(std::move(reduced));
}

absl::StatusOr<int> Apply(const Mechanism& mechanism, int x, Rng& rng) {
  if (x < 0 || x >= mechanism.num_inputs()) {
    return MakeError(ErrorKind::kOutOfRange,
                     absl::StrCat("input symbol ", x, " outside [0, ",
                                  mechanism.num_inputs(), ")"));
  }
  double u = UniformUnit(rng);
  double cumulative = 0.0;
  int last_possible = 0;
  for (int y = 0; y < mechanism.num_outputs(); ++y) {
    double p = mechanism(y, x);
    if (p <= 0.0) continue;
    cumulative += p;
    last_possible = y;
    if (u < cumulative) return y;
  }
  return last_possible;
}

}  // namespace privfunnel
