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

#ifndef PRIVFUNNEL_EXPERIMENT_H_
#define PRIVFUNNEL_EXPERIMENT_H_

#include <cstdint>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "privfunnel/optimizers.h"
#include "privfunnel/polytope.h"

namespace privfunnel {

// Random-prior comparison of optimizers. Trial t draws its prior with
// RandomJoint(c, prod(sizes), seed + t), so any trial can be regenerated
// on its own with `gen-prior --seed`.
struct ExperimentConfig {
  int num_secrets = 2;
  std::vector<int> sizes;  // one entry for a flat alphabet
  std::vector<double> epsilons;
  int trials = 1;
  std::uint64_t seed = 0;
  std::vector<Notion> notions;
  // When false, time_ms is written as 0 so repeated runs are byte-identical.
  bool record_time = true;
  EnumerationOptions enumeration;

  absl::Status Validate() const;
};

struct ExperimentRow {
  int trial = 0;
  double epsilon = 0.0;
  Notion notion = Notion::kLip;
  double utility = 0.0;
  double eps_measured = 0.0;  // measured under the row's own notion
  double time_ms = 0.0;
  int vertex_count = 0;
  std::string status = "ok";  // "ok" or "error:<Kind>"
};

// Rows ordered by (trial, epsilon in config order, notion in config order).
// Optimizer failures become rows with an error status.
absl::StatusOr<std::vector<ExperimentRow>> RunExperiment(
    const ExperimentConfig& config);

// Header: trial,epsilon,notion,utility_nats,eps_measured,time_ms,vertex_count,status
std::string ExperimentCsv(const std::vector<ExperimentRow>& rows);

// Mean/min/max of utility and time per (epsilon, notion) over ok rows.
std::string AggregateCsv(const std::vector<ExperimentRow>& rows);

}  // namespace privfunnel

#endif  // PRIVFUNNEL_EXPERIMENT_H_
