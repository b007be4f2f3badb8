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

#include "privfunnel/experiment.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <map>
#include <utility>

#include "absl/strings/str_cat.h"
#include "privfunnel/audit.h"
#include "privfunnel/errors.h"

namespace privfunnel {
namespace {

// Shortest representation that reads back to the same double.
std::string FormatNumber(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buffer[64];
  auto [end, ec] = std::to_chars(buffer, buffer + sizeof(buffer), v);
  return std::string(buffer, end);
}

absl::StatusOr<double> MeasureUnder(Notion notion, const Mechanism& mechanism,
                                    const JointDistribution& joint,
                                    const AttributeSchema& schema) {
  switch (notion) {
    case Notion::kLdp:
      return MeasureLdp(mechanism, joint);
    case Notion::kLip:
      return MeasureLip(mechanism, joint);
    case Notion::kSrlip:
      return MeasureSrlip(mechanism, joint, schema);
  }
  return MakeError(ErrorKind::kInternal, "unknown notion");
}

}  // namespace

absl::Status ExperimentConfig::Validate() const {
  if (num_secrets < 2) {
    return MakeError(ErrorKind::kInvalidInput, "c must be at least 2");
  }
  if (sizes.empty()) {
    return MakeError(ErrorKind::kInvalidInput, "no attribute sizes");
  }
  auto schema = AttributeSchema::Create(sizes);
  if (!schema.ok()) return schema.status();
  if (schema->flat_size() < 2) {
    return MakeError(ErrorKind::kInvalidInput, "a must be at least 2");
  }
  if (epsilons.empty()) {
    return MakeError(ErrorKind::kInvalidInput, "epsilon grid is empty");
  }
  for (double e : epsilons) {
    if (!(e >= 0.0)) {
      return MakeError(ErrorKind::kInvalidInput, "epsilons must be >= 0");
    }
  }
  if (trials < 1) {
    return MakeError(ErrorKind::kInvalidInput, "trials must be >= 1");
  }
  if (notions.empty()) {
    return MakeError(ErrorKind::kInvalidInput, "no notions requested");
  }
  return absl::OkStatus();
}

absl::StatusOr<std::vector<ExperimentRow>> RunExperiment(
    const ExperimentConfig& config) {
  if (absl::Status s = config.Validate(); !s.ok()) return s;
  const AttributeSchema schema = *AttributeSchema::Create(config.sizes);
  std::vector<ExperimentRow> rows;
  for (int trial = 0; trial < config.trials; ++trial) {
    const JointDistribution joint = RandomJoint(
        config.num_secrets, schema.flat_size(), config.seed + trial);
    for (double epsilon : config.epsilons) {
      for (Notion notion : config.notions) {
        ExperimentRow row{.trial = trial, .epsilon = epsilon, .notion = notion};
        absl::StatusOr<OptimizationResult> result;
        switch (notion) {
          case Notion::kLdp:
            result = OptimizeLdp(joint, epsilon, config.enumeration);
            break;
          case Notion::kLip:
            result = OptimizeLip(joint, epsilon, config.enumeration);
            break;
          case Notion::kSrlip:
            result = OptimizeSrlip(joint, schema, epsilon, {},
                                   config.enumeration);
            break;
        }
        if (!result.ok()) {
          row.status = absl::StrCat("error:", ErrorKindOf(result.status()));
          rows.push_back(std::move(row));
          continue;
        }
        auto measured = MeasureUnder(notion, result->mechanism, joint, schema);
        if (!measured.ok()) {
          row.status = absl::StrCat("error:", ErrorKindOf(measured.status()));
          rows.push_back(std::move(row));
          continue;
        }
        row.utility = result->utility;
        row.eps_measured = *measured;
        row.time_ms = config.record_time ? result->time_ms : 0.0;
        row.vertex_count = result->total_vertex_count();
        rows.push_back(std::move(row));
      }
    }
  }
  return rows;
}

std::string ExperimentCsv(const std::vector<ExperimentRow>& rows) {
  std::string out =
      "trial,epsilon,notion,utility_nats,eps_measured,time_ms,vertex_count,"
      "status\n";
  for (const ExperimentRow& row : rows) {
    absl::StrAppend(&out, row.trial, ",", FormatNumber(row.epsilon), ",",
                    NotionName(row.notion), ",", FormatNumber(row.utility),
                    ",", FormatNumber(row.eps_measured), ",",
                    FormatNumber(row.time_ms), ",", row.vertex_count, ",",
                    row.status, "\n");
  }
  return out;
}

std::string AggregateCsv(const std::vector<ExperimentRow>& rows) {
  struct Summary {
    int count = 0;
    double utility_sum = 0.0;
    double utility_min = std::numeric_limits<double>::infinity();
    double utility_max = -std::numeric_limits<double>::infinity();
    double time_sum = 0.0;
    double time_min = std::numeric_limits<double>::infinity();
    double time_max = -std::numeric_limits<double>::infinity();
    double eps_max = 0.0;
  };
  // Keyed by first appearance so the output follows the config's order.
  std::vector<std::pair<double, Notion>> order;
  std::map<std::pair<double, Notion>, Summary> summaries;
  for (const ExperimentRow& row : rows) {
    auto key = std::make_pair(row.epsilon, row.notion);
    if (!summaries.contains(key)) order.push_back(key);
    Summary& s = summaries[key];
    if (row.status != "ok") continue;
    ++s.count;
    s.utility_sum += row.utility;
    s.utility_min = std::min(s.utility_min, row.utility);
    s.utility_max = std::max(s.utility_max, row.utility);
    s.time_sum += row.time_ms;
    s.time_min = std::min(s.time_min, row.time_ms);
    s.time_max = std::max(s.time_max, row.time_ms);
    s.eps_max = std::max(s.eps_max, row.eps_measured);
  }
  std::string out =
      "epsilon,notion,ok_trials,utility_mean,utility_min,utility_max,"
      "time_ms_mean,time_ms_min,time_ms_max,eps_measured_max\n";
  for (const auto& key : order) {
    const Summary& s = summaries[key];
    if (s.count == 0) {
      absl::StrAppend(&out, FormatNumber(key.first), ",",
                      NotionName(key.second), ",0,,,,,,,\n");
      continue;
    }
    absl::StrAppend(
        &out, FormatNumber(key.first), ",", NotionName(key.second), ",",
        s.count, ",", FormatNumber(s.utility_sum / s.count), ",",
        FormatNumber(s.utility_min), ",", FormatNumber(s.utility_max), ",",
        FormatNumber(s.time_sum / s.count), ",", FormatNumber(s.time_min), ",",
        FormatNumber(s.time_max), ",", FormatNumber(s.eps_max), "\n");
  }
  return out;
}

}  // namespace privfunnel
