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

#ifndef PRIVFUNNEL_AUDIT_H_
#define PRIVFUNNEL_AUDIT_H_

#include <optional>

#include "absl/status/statusor.h"
#include "privfunnel/mechanism.h"
#include "privfunnel/probability.h"

namespace privfunnel {

// Slack used when checking the relations between leakage measures.
inline constexpr double kLemmaSlack = 1e-9;
// The brute-force SRLIP measure visits 2^m attribute subsets.
inline constexpr int kMaxSrlipAttributes = 12;

// Measures are in nats and may be +infinity. Outputs with P(y) = 0 never
// enter a maximum.

// max over y, s, s' of ln P(y|s) / P(y|s').
absl::StatusOr<double> MeasureLdp(const Mechanism& mechanism,
                                  const JointDistribution& joint);

// max over y, s of |ln P(y|s) / P(y)|.
absl::StatusOr<double> MeasureLip(const Mechanism& mechanism,
                                  const JointDistribution& joint);

// LIP measured against the prior conditioned on one context x^J. Secrets
// with P(s, x^J) = 0 are skipped. Fails with ZeroProbabilityContext when
// P(x^J) = 0.
absl::StatusOr<double> MeasureLipInContext(const Mechanism& mechanism,
                                           const JointDistribution& joint,
                                           const AttributeSchema& schema,
                                           const Context& context);

// Exhaustive maximum of MeasureLipInContext over every attribute subset J
// and every x^J with P(x^J) > 0.
absl::StatusOr<double> MeasureSrlip(const Mechanism& mechanism,
                                    const JointDistribution& joint,
                                    const AttributeSchema& schema);

// I(S;Y) in nats.
absl::StatusOr<double> SecretLeakage(const Mechanism& mechanism,
                                     const JointDistribution& joint);

struct LemmaFlags {
  bool lip_within_ldp = true;         // eps_lip <= eps_ldp
  bool ldp_within_twice_lip = true;   // eps_ldp <= 2 eps_lip
  bool mi_within_lip = true;          // I(S;Y) <= eps_lip
  std::optional<bool> lip_within_srlip;  // eps_lip <= eps_srlip

  bool all() const {
    return lip_within_ldp && ldp_within_twice_lip && mi_within_lip &&
           lip_within_srlip.value_or(true);
  }
};

struct PrivacyReport {
  double eps_ldp = 0.0;
  double eps_lip = 0.0;
  std::optional<double> eps_srlip;
  double mi_sy = 0.0;
  double mi_xy = 0.0;
  LemmaFlags lemma_flags;
};

// A false lemma flag means a measurement bug, not a property of the data.
absl::StatusOr<PrivacyReport> AuditReport(
    const Mechanism& mechanism, const JointDistribution& joint,
    const std::optional<AttributeSchema>& schema = std::nullopt);

}  // namespace privfunnel

#endif  // PRIVFUNNEL_AUDIT_H_
