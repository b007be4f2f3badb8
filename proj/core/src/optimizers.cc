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

#include "privfunnel/optimizers.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <utility>
#include <vector>

#include "absl/strings/ascii.h"
#include "absl/strings/str_cat.h"
#include "privfunnel/errors.h"
#include "privfunnel/linear_program.h"

namespace privfunnel {
namespace {

// Objective values closer than this count as a tie; the earlier
// (lexicographically smaller) vertex wins.
constexpr double kObjectiveTieTolerance = 1e-12;

using Clock = std::chrono::steady_clock;

double ElapsedMs(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start)
      .count();
}

absl::Status CheckBudget(double epsilon) {
  if (!(epsilon >= 0.0)) {
    return MakeError(ErrorKind::kInvalidInput,
                     absl::StrCat("epsilon must be >= 0, got ", epsilon));
  }
  return absl::OkStatus();
}

// Column-stochastic matrix stored row-major in a vertex.
Eigen::MatrixXd VertexToMatrix(const Eigen::VectorXd& point, int size) {
  Eigen::MatrixXd q(size, size);
  for (int y = 0; y < size; ++y) {
    for (int x = 0; x < size; ++x) q(y, x) = std::max(point[y * size + x], 0.0);
  }
  for (int x = 0; x < size; ++x) q.col(x) /= q.col(x).sum();
  return q;
}

struct BestVertex {
  Eigen::MatrixXd mechanism;
  PolytopeStats stats;
};

// Maximises I(X;Y) over the vertices of a mechanism polytope. The objective
// is convex in Q, so a vertex attains the maximum over the whole polytope.
absl::StatusOr<BestVertex> MaximizeOverMechanismVertices(
    const HPolytope& polytope, const Eigen::VectorXd& p_x,
    const EnumerationOptions& options) {
  const int size = static_cast<int>(p_x.size());
  auto vertices = EnumerateVertices(polytope, options);
  if (!vertices.ok()) return vertices.status();

  std::vector<double> values;
  values.reserve(vertices->size());
  for (const Vertex& v : vertices->vertices) {
    values.push_back(MutualInformation(p_x, VertexToMatrix(v.point, size)));
  }
  const double best = *std::max_element(values.begin(), values.end());
  size_t chosen = 0;
  while (values[chosen] < best - kObjectiveTieTolerance) ++chosen;

  return BestVertex{
      .mechanism = VertexToMatrix(vertices->vertices[chosen].point, size),
      .stats =
          PolytopeStats{
              .dimension = polytope.EqualityNullity(),
              .num_inequalities = polytope.num_inequalities(),
              .vertex_count = vertices->size(),
          },
  };
}

absl::StatusOr<OptimizationResult> Finish(Eigen::MatrixXd raw_matrix,
                                          const ProbabilityVector& p_x,
                                          double epsilon, Notion notion,
                                          std::vector<PolytopeStats> stats,
                                          std::vector<double> split,
                                          Clock::time_point start) {
  auto raw = Mechanism::Create(std::move(raw_matrix));
  if (!raw.ok()) return raw.status();
  auto reduced = ReduceOutputs(*raw, p_x);
  if (!reduced.ok()) return reduced.status();
  double utility = MutualInformation(p_x.values(), reduced->matrix());
  double time_ms = ElapsedMs(start);
  return OptimizationResult{
      .mechanism = *std::move(reduced),
      .raw_mechanism = *std::move(raw),
      .utility = utility,
      .epsilon = epsilon,
      .notion = notion,
      .polytopes = std::move(stats),
      .split = std::move(split),
      .factors = {},
      .time_ms = time_ms,
  };
}

}  // namespace

const char* NotionName(Notion notion) {
  switch (notion) {
    case Notion::kLdp:
      return "LDP";
    case Notion::kLip:
      return "LIP";
    case Notion::kSrlip:
      return "SRLIP";
  }
  return "unknown";
}

absl::StatusOr<Notion> ParseNotion(const std::string& name) {
  std::string lower = absl::AsciiStrToLower(name);
  if (lower == "ldp") return Notion::kLdp;
  if (lower == "lip") return Notion::kLip;
  if (lower == "srlip") return Notion::kSrlip;
  return MakeError(ErrorKind::kInvalidInput,
                   absl::StrCat("unknown notion '", name, "'"));
}

int OptimizationResult::total_vertex_count() const {
  int total = 0;
  for (const PolytopeStats& s : polytopes) total += s.vertex_count;
  return total;
}

absl::StatusOr<OptimizationResult> OptimizeLdp(
    const JointDistribution& joint, double epsilon,
    const EnumerationOptions& options) {
  if (absl::Status s = CheckBudget(epsilon); !s.ok()) return s;
  const Clock::time_point start = Clock::now();
  const ProbabilityVector p_x = MarginalsAndConditionals(joint).value;
  HPolytope gamma = BuildLdpPolytope(joint, epsilon);
  auto best = MaximizeOverMechanismVertices(gamma, p_x.values(), options);
  if (!best.ok()) return best.status();
  return Finish(std::move(best->mechanism), p_x, epsilon, Notion::kLdp,
                {best->stats}, {}, start);
}

absl::StatusOr<OptimizationResult> OptimizeLip(
    const JointDistribution& joint, double epsilon,
    const EnumerationOptions& options) {
  if (absl::Status s = CheckBudget(epsilon); !s.ok()) return s;
  const Clock::time_point start = Clock::now();
  const ProbabilityVector p_x = MarginalsAndConditionals(joint).value;
  const int a = joint.num_values();

  HPolytope delta = BuildLipPolytope(joint, epsilon);
  auto vertices = EnumerateVertices(delta, options);
  if (!vertices.ok()) return vertices.status();
  const int num_vertices = vertices->size();

  // Mixture weights w_v >= 0 with sum_v w_v v = p_X; I(X;Y) is linear in w.
  LinearProgram lp;
  lp.objective.resize(num_vertices);
  lp.eq_coeffs.resize(a, num_vertices);
  const double h_x = Entropy(p_x);
  for (int k = 0; k < num_vertices; ++k) {
    const Eigen::VectorXd& v = vertices->vertices[k].point;
    lp.objective[k] = h_x - Entropy(v);
    lp.eq_coeffs.col(k) = v;
  }
  lp.eq_rhs = p_x.values();
  lp.ineq_coeffs.resize(0, num_vertices);
  lp.ineq_rhs.resize(0);
  auto solution = SolveLp(lp);
  if (!solution.ok()) {
    return MakeError(ErrorKind::kInternal,
                     absl::StrCat("posterior mixture LP failed: ",
                                  solution.status().message()));
  }

  const int b = static_cast<int>(solution->support.size());
  Eigen::VectorXd q(b);
  Eigen::MatrixXd r(a, b);
  for (int k = 0; k < b; ++k) {
    int index = solution->support[k];
    q[k] = solution->point[index];
    r.col(k) = vertices->vertices[index].point.cwiseMax(0.0);
    r.col(k) /= r.col(k).sum();
  }
  q /= q.sum();
  auto rep = ReverseRepresentation::Create(std::move(q), std::move(r));
  if (!rep.ok()) return rep.status();
  auto forward = ReverseToForward(*rep, p_x);
  if (!forward.ok()) return forward.status();

  PolytopeStats stats{
      .dimension = delta.EqualityNullity(),
      .num_inequalities = delta.num_inequalities(),
      .vertex_count = num_vertices,
  };
  return Finish(forward->matrix(), p_x, epsilon, Notion::kLip, {stats}, {},
                start);
}

absl::StatusOr<OptimizationResult> OptimizeSrlip(
    const JointDistribution& joint, const AttributeSchema& schema,
    double epsilon, std::vector<double> split,
    const EnumerationOptions& options) {
  if (absl::Status s = CheckBudget(epsilon); !s.ok()) return s;
  const int m = schema.num_attributes();
  if (schema.flat_size() != joint.num_values()) {
    return MakeError(ErrorKind::kSchemaMismatch,
                     absl::StrCat("schema covers ", schema.flat_size(),
                                  " values, joint has ", joint.num_values()));
  }
  if (split.empty()) split.assign(m, epsilon / m);
  if (static_cast<int>(split.size()) != m) {
    return MakeError(ErrorKind::kInvalidInput,
                     absl::StrCat("split has ", split.size(), " entries for ",
                                  m, " attributes"));
  }
  double total = 0.0;
  for (double e : split) {
    if (!(e >= 0.0)) {
      return MakeError(ErrorKind::kInvalidInput,
                       "split entries must be nonnegative");
    }
    total += e;
  }
  if (std::isfinite(epsilon) &&
      std::abs(total - epsilon) > 1e-12 * std::max(1.0, epsilon)) {
    return MakeError(ErrorKind::kInvalidInput,
                     absl::StrCat("split sums to ", total, ", budget is ",
                                  epsilon));
  }

  const Clock::time_point start = Clock::now();
  const ProbabilityVector p_x = MarginalsAndConditionals(joint).value;
  std::vector<Mechanism> factors;
  std::vector<PolytopeStats> stats;
  for (int j = 0; j < m; ++j) {
    auto polytope = BuildSrlipPolytope(joint, schema, j, split[j]);
    if (!polytope.ok()) return polytope.status();
    auto marginal = ConditionOnContext(joint, schema, Context{}, j);
    if (!marginal.ok()) return marginal.status();
    auto best = MaximizeOverMechanismVertices(
        *polytope, marginal->target_given_context.values(), options);
    if (!best.ok()) return best.status();
    auto factor = Mechanism::Create(std::move(best->mechanism));
    if (!factor.ok()) return factor.status();
    factors.push_back(*std::move(factor));
    stats.push_back(best->stats);
  }
  auto product = ComposeProduct(factors, schema);
  if (!product.ok()) return product.status();
  auto result = Finish(product->matrix(), p_x, epsilon, Notion::kSrlip,
                       std::move(stats), std::move(split), start);
  if (result.ok()) result->factors = std::move(factors);
  return result;
}

}  // namespace privfunnel
