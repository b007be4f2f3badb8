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

#include "privfunnel/audit.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "absl/strings/str_cat.h"
#include "privfunnel/errors.h"

namespace privfunnel {
namespace {

constexpr double kInfinity = std::numeric_limits<double>::infinity();

absl::Status CheckInputs(const Mechanism& mechanism,
                         const JointDistribution& joint) {
  if (mechanism.num_inputs() != joint.num_values()) {
    return MakeError(ErrorKind::kDimensionMismatch,
                     absl::StrCat("mechanism has ", mechanism.num_inputs(),
                                  " inputs, joint has ", joint.num_values(),
                                  " data values"));
  }
  return absl::OkStatus();
}

// LIP of the mechanism against an unnormalised prior `mass` (c x a, positive
// total). Rows with no mass are secrets the attacker has ruled out.
double LipAgainst(const Eigen::MatrixXd& q, const Eigen::MatrixXd& mass) {
  const double total = mass.sum();
  const Eigen::VectorXd output = q * mass.colwise().sum().transpose() / total;
  double worst = 0.0;
  for (Eigen::Index s = 0; s < mass.rows(); ++s) {
    const double secret_mass = mass.row(s).sum();
    if (!(secret_mass > 0.0)) continue;
    const Eigen::VectorXd given_secret =
        q * mass.row(s).transpose() / secret_mass;
    for (Eigen::Index y = 0; y < q.rows(); ++y) {
      if (!(output[y] > 0.0)) continue;
      if (!(given_secret[y] > 0.0)) return kInfinity;
      worst = std::max(worst, std::abs(std::log(given_secret[y] / output[y])));
    }
  }
  return worst;
}

}  // namespace

absl::StatusOr<double> MeasureLdp(const Mechanism& mechanism,
                                  const JointDistribution& joint) {
  if (absl::Status s = CheckInputs(mechanism, joint); !s.ok()) return s;
  // Column s is P(Y | S = s).
  const Eigen::MatrixXd given_secret =
      mechanism.matrix() * joint.ValueGivenSecret().transpose();
  double worst = 0.0;
  for (Eigen::Index y = 0; y < given_secret.rows(); ++y) {
    const double high = given_secret.row(y).maxCoeff();
    const double low = given_secret.row(y).minCoeff();
    if (!(high > 0.0)) continue;
    if (!(low > 0.0)) return kInfinity;
    worst = std::max(worst, std::log(high / low));
  }
  return worst;
}

absl::StatusOr<double> MeasureLip(const Mechanism& mechanism,
                                  const JointDistribution& joint) {
  if (absl::Status s = CheckInputs(mechanism, joint); !s.ok()) return s;
  return LipAgainst(mechanism.matrix(), joint.matrix());
}

absl::StatusOr<double> MeasureLipInContext(const Mechanism& mechanism,
                                           const JointDistribution& joint,
                                           const AttributeSchema& schema,
                                           const Context& context) {
  if (absl::Status s = CheckInputs(mechanism, joint); !s.ok()) return s;
  if (schema.flat_size() != joint.num_values()) {
    return MakeError(ErrorKind::kSchemaMismatch,
                     absl::StrCat("schema covers ", schema.flat_size(),
                                  " values, joint has ", joint.num_values()));
  }
  if (context.attributes.size() != context.values.size()) {
    return MakeError(ErrorKind::kInvalidInput,
                     "context attributes and values differ in length");
  }
  for (int j : context.attributes) {
    if (j < 0 || j >= schema.num_attributes()) {
      return MakeError(ErrorKind::kOutOfRange,
                       absl::StrCat("context attribute ", j));
    }
  }
  if (context.attributes.empty()) {
    return LipAgainst(mechanism.matrix(), joint.matrix());
  }
  Eigen::MatrixXd mass = Eigen::MatrixXd::Zero(joint.num_secrets(),
                                               joint.num_values());
  for (int x = 0; x < joint.num_values(); ++x) {
    bool matches = true;
    for (size_t k = 0; k < context.attributes.size() && matches; ++k) {
      matches = schema.Digit(x, context.attributes[k]) == context.values[k];
    }
    if (matches) mass.col(x) = joint.matrix().col(x);
  }
  if (!(mass.sum() > 0.0)) {
    return MakeError(ErrorKind::kZeroProbabilityContext,
                     "context has probability 0");
  }
  return LipAgainst(mechanism.matrix(), mass);
}

absl::StatusOr<double> MeasureSrlip(const Mechanism& mechanism,
                                    const JointDistribution& joint,
                                    const AttributeSchema& schema) {
  const int m = schema.num_attributes();
  if (m > kMaxSrlipAttributes) {
    return MakeError(ErrorKind::kDimensionTooLarge,
                     absl::StrCat(m, " attributes exceed the exhaustive audit "
                                     "limit of ",
                                  kMaxSrlipAttributes));
  }
  double worst = 0.0;
  for (int mask = 0; mask < (1 << m); ++mask) {
    Context context;
    int num_values = 1;
    for (int j = 0; j < m; ++j) {
      if (mask & (1 << j)) {
        context.attributes.push_back(j);
        num_values *= schema.size(j);
      }
    }
    context.values.assign(context.attributes.size(), 0);
    for (int code = 0; code < num_values; ++code) {
      int rest = code;
      for (int k = static_cast<int>(context.attributes.size()) - 1; k >= 0;
           --k) {
        context.values[k] = rest % schema.size(context.attributes[k]);
        rest /= schema.size(context.attributes[k]);
      }
      auto measured = MeasureLipInContext(mechanism, joint, schema, context);
      if (!measured.ok()) {
        if (ErrorKindOf(measured.status()) == "ZeroProbabilityContext") {
          continue;
        }
        return measured.status();
      }
      worst = std::max(worst, *measured);
      if (std::isinf(worst)) return worst;
    }
  }
  return worst;
}

absl::StatusOr<double> SecretLeakage(const Mechanism& mechanism,
                                     const JointDistribution& joint) {
  if (absl::Status s = CheckInputs(mechanism, joint); !s.ok()) return s;
  // Entry (s, y) is P(S = s, Y = y).
  const Eigen::MatrixXd secret_output =
      joint.matrix() * mechanism.matrix().transpose();
  const Eigen::VectorXd p_s = secret_output.rowwise().sum();
  const Eigen::VectorXd p_y = secret_output.colwise().sum().transpose();
  double mi = 0.0;
  for (Eigen::Index s = 0; s < secret_output.rows(); ++s) {
    for (Eigen::Index y = 0; y < secret_output.cols(); ++y) {
      double v = secret_output(s, y);
      if (v > 0.0) mi += v * std::log(v / (p_s[s] * p_y[y]));
    }
  }
  return std::max(mi, 0.0);
}

absl::StatusOr<PrivacyReport> AuditReport(
    const Mechanism& mechanism, const JointDistribution& joint,
    const std::optional<AttributeSchema>& schema) {
  PrivacyReport report;
  auto ldp = MeasureLdp(mechanism, joint);
  if (!ldp.ok()) return ldp.status();
  auto lip = MeasureLip(mechanism, joint);
  if (!lip.ok()) return lip.status();
  auto leakage = SecretLeakage(mechanism, joint);
  if (!leakage.ok()) return leakage.status();
  report.eps_ldp = *ldp;
  report.eps_lip = *lip;
  report.mi_sy = *leakage;
  report.mi_xy = MutualInformation(joint.value_marginal(), mechanism.matrix());
  if (schema.has_value()) {
    auto srlip = MeasureSrlip(mechanism, joint, *schema);
    if (!srlip.ok()) return srlip.status();
    report.eps_srlip = *srlip;
  }

  LemmaFlags& flags = report.lemma_flags;
  flags.lip_within_ldp = report.eps_lip <= report.eps_ldp + kLemmaSlack;
  flags.ldp_within_twice_lip =
      report.eps_ldp <= 2.0 * report.eps_lip + kLemmaSlack;
  flags.mi_within_lip = report.mi_sy <= report.eps_lip + kLemmaSlack;
  if (report.eps_srlip.has_value()) {
    flags.lip_within_srlip = report.eps_lip <= *report.eps_srlip + kLemmaSlack;
  }
  return report;
}

}  // namespace privfunnel
