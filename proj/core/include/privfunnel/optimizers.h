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

#ifndef PRIVFUNNEL_OPTIMIZERS_H_
#define PRIVFUNNEL_OPTIMIZERS_H_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "privfunnel/mechanism.h"
#include "privfunnel/polytope.h"
#include "privfunnel/probability.h"

namespace privfunnel {

enum class Notion { kLdp, kLip, kSrlip };

const char* NotionName(Notion notion);  // "LDP", "LIP", "SRLIP"
absl::StatusOr<Notion> ParseNotion(const std::string& name);  // any case

struct PolytopeStats {
  int dimension = 0;        // affine dimension of the equality constraints
  int num_inequalities = 0;
  int vertex_count = 0;
};

struct OptimizationResult {
  Mechanism mechanism;       // reduced form
  Mechanism raw_mechanism;   // as read off the optimal vertex / LP support
  double utility = 0.0;      // I(X;Y) of `mechanism`, nats
  double epsilon = 0.0;
  Notion notion = Notion::kLip;
  // One entry for LDP and LIP, one per attribute for SRLIP.
  std::vector<PolytopeStats> polytopes;
  std::vector<double> split;  // SRLIP per-attribute budgets
  std::vector<Mechanism> factors;  // SRLIP per-attribute mechanisms
  double time_ms = 0.0;

  int total_vertex_count() const;
};

// Gamma: mechanisms Q (a x a, variables row-major Q(y, x) at y * a + x) that
// are column stochastic and satisfy
//   e^-eps (Q p_{X|s})_y - (Q p_{X|s'})_y <= 0   for all y and s != s'.
HPolytope BuildLdpPolytope(const JointDistribution& joint, double epsilon);

// Delta: candidate posterior columns v in the simplex with
//   e^-eps p_s <= p_{s|X} v <= e^eps p_s   for all s.
// Two inequalities per secret, lower bound first.
HPolytope BuildLipPolytope(const JointDistribution& joint, double epsilon);

// Per-attribute polytope: mechanisms Q^j (a^j x a^j) that are eps-LIP with
// respect to p(S, X^j | x^J) for every context J not containing j and every
// x^J with P(x^J) > 0. Secrets with P(s, x^J) = 0 contribute no rows.
absl::StatusOr<HPolytope> BuildSrlipPolytope(const JointDistribution& joint,
                                             const AttributeSchema& schema,
                                             int attribute, double epsilon);

// Best eps-LDP mechanism: exact I(X;Y) evaluated at every vertex of Gamma.
absl::StatusOr<OptimizationResult> OptimizeLdp(
    const JointDistribution& joint, double epsilon,
    const EnumerationOptions& options = {});

// Best eps-LIP mechanism: vertices of Delta, then a linear program over
// mixtures of those posteriors reproducing p_X.
absl::StatusOr<OptimizationResult> OptimizeLip(
    const JointDistribution& joint, double epsilon,
    const EnumerationOptions& options = {});

// Product of per-attribute mechanisms, each the best vertex of its
// BuildSrlipPolytope at budget split[j]. Not optimal among all eps-SRLIP
// mechanisms, and the product can leak more than eps when attributes are
// dependent given S; check with MeasureSrlip. An empty split means eps / m
// for every attribute.
absl::StatusOr<OptimizationResult> OptimizeSrlip(
    const JointDistribution& joint, const AttributeSchema& schema,
    double epsilon, std::vector<double> split = {},
    const EnumerationOptions& options = {});

}  // namespace privfunnel

#endif  // PRIVFUNNEL_OPTIMIZERS_H_
