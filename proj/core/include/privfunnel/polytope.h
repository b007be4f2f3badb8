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

#ifndef PRIVFUNNEL_POLYTOPE_H_
#define PRIVFUNNEL_POLYTOPE_H_

#include <string>
#include <vector>

#include "Eigen/Dense"
#include "absl/status/statusor.h"

namespace privfunnel {

inline constexpr double kFeasibilityTolerance = 1e-9;
inline constexpr double kDedupTolerance = 1e-7;
inline constexpr int kDefaultMaxDimension = 30;

// H-representation {v : eq_coeffs v = eq_rhs, ineq_coeffs v <= ineq_rhs}.
struct HPolytope {
  int dim = 0;
  Eigen::MatrixXd eq_coeffs;
  Eigen::VectorXd eq_rhs;
  Eigen::MatrixXd ineq_coeffs;
  Eigen::VectorXd ineq_rhs;

  static HPolytope Empty(int dim);

  int num_equalities() const { return static_cast<int>(eq_rhs.size()); }
  int num_inequalities() const { return static_cast<int>(ineq_rhs.size()); }

  void AddEquality(const Eigen::VectorXd& coeffs, double rhs);
  void AddInequality(const Eigen::VectorXd& coeffs, double rhs);

  // Dimension of the affine hull of the equality constraints alone.
  int EqualityNullity() const;
  // Dimension of the affine hull of the feasible set, computed from its
  // vertices. Implicit equalities among the inequalities are accounted for.
  absl::StatusOr<int> AffineDimension() const;

  bool Contains(const Eigen::VectorXd& point,
                double tolerance = kFeasibilityTolerance) const;
};

struct Vertex {
  Eigen::VectorXd point;
  // Inequalities with |coeffs.v - rhs| <= kFeasibilityTolerance.
  std::vector<int> tight;
};

// Complete vertex set, sorted lexicographically by coordinates.
struct VertexSet {
  std::vector<Vertex> vertices;

  int size() const { return static_cast<int>(vertices.size()); }
  bool empty() const { return vertices.empty(); }
};

struct EnumerationOptions {
  // Refuse polytopes whose equality-reduced dimension exceeds this.
  int max_dimension = kDefaultMaxDimension;
  double feasibility_tolerance = kFeasibilityTolerance;
  double dedup_tolerance = kDedupTolerance;

  // Applies PRIVFUNNEL_MAX_DIM from the environment when set.
  static EnumerationOptions FromEnvironment();
};

// All vertices of a bounded polytope, via the double description method on
// the homogenised cone over the equality-reduced coordinates.
//
// Errors: Infeasible (empty), Unbounded (recession direction or line),
// DimensionTooLarge (guard), InvalidInput (ragged constraint sizes).
absl::StatusOr<VertexSet> EnumerateVertices(
    const HPolytope& polytope, const EnumerationOptions& options = {});

// Rank of the equalities plus the inequalities tight at `point`.
int TightRank(const HPolytope& polytope, const Eigen::VectorXd& point,
              double tolerance = kFeasibilityTolerance);

// {"dim": n, "eq": [[coeffs, rhs], ...], "ineq": [[coeffs, rhs], ...]}
std::string PolytopeToJson(const HPolytope& polytope);
absl::StatusOr<HPolytope> PolytopeFromJson(const std::string& text);

}  // namespace privfunnel

#endif  // PRIVFUNNEL_POLYTOPE_H_
