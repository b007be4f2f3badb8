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

#ifndef PRIVFUNNEL_JSON_IO_H_
#define PRIVFUNNEL_JSON_IO_H_

#include <optional>
#include <string>
#include <string_view>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "privfunnel/audit.h"
#include "privfunnel/experiment.h"
#include "privfunnel/mechanism.h"
#include "privfunnel/optimizers.h"
#include "privfunnel/probability.h"

// File formats shared by the CLI and other front ends:
//
//   prior      {"c": 2, "a": 4, "p": [[...], [...]], "schema": {"sizes": [2, 2]}}
//   mechanism  {"a": 4, "b": 3, "Q": [[row for y = 1], ...]}
//   schema     {"sizes": [2, 2]}
//   result     mechanism fields plus utility_nats, epsilon, notion,
//              vertex_count, time_ms and a diagnostics object
//   report     eps_ldp, eps_lip, eps_srlip, mi_sy, mi_xy, lemma_flags;
//              infinite values are written as the string "inf"
namespace privfunnel {

struct PriorFile {
  JointDistribution joint;
  std::optional<AttributeSchema> schema;
};

absl::StatusOr<PriorFile> ParsePriorJson(std::string_view text);
std::string PriorToJson(const JointDistribution& joint,
                        const std::optional<AttributeSchema>& schema);

absl::StatusOr<Mechanism> ParseMechanismJson(std::string_view text);
std::string MechanismToJson(const Mechanism& mechanism);

absl::StatusOr<AttributeSchema> ParseSchemaJson(std::string_view text);

std::string ResultToJson(const OptimizationResult& result);
std::string ReportToJson(const PrivacyReport& report);

absl::StatusOr<ExperimentConfig> ParseExperimentConfigJson(
    std::string_view text);

absl::StatusOr<std::string> ReadTextFile(const std::string& path);
absl::Status WriteTextFile(const std::string& path, std::string_view content);

}  // namespace privfunnel

#endif  // PRIVFUNNEL_JSON_IO_H_
