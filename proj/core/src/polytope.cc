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

#include "privfunnel/polytope.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <numeric>
#include <utility>
#include <vector>

#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "privfunnel/errors.h"
#include "privfunnel/linear_program.h"

namespace privfunnel {
namespace {

// Threshold for a*r = 0 with unit-max-norm rows and rays.
constexpr double kZeroTest = 1e-10;
// Relative singular value threshold for rank decisions.
constexpr double kRankTolerance = 1e-10;

int NumericalRank(const Eigen::MatrixXd& m) {
  if (m.rows() == 0 || m.cols() == 0) return 0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const Eigen::VectorXd& sv = svd.singularValues();
  if (sv.size() == 0 || sv[0] == 0.0) return 0;
  double threshold = kRankTolerance * std::max<double>(1.0, sv[0]);
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) rank += sv[i] > threshold;
  return rank;
}

// Fixed-width set of constraint indices.
class RowSet {
 public:
  RowSet() = default;
  explicit RowSet(int num_rows) : words_((num_rows + 63) / 64, 0) {}

  void Set(int i) { words_[i >> 6] |= std::uint64_t{1} << (i & 63); }
  bool Test(int i) const { return (words_[i >> 6] >> (i & 63)) & 1; }

  int Count() const {
    int n = 0;
    for (std::uint64_t w : words_) n += std::popcount(w);
    return n;
  }

  RowSet Intersect(const RowSet& other) const {
    RowSet out = *this;
    for (size_t k = 0; k < words_.size(); ++k) out.words_[k] &= other.words_[k];
    return out;
  }

  int IntersectCount(const RowSet& other) const {
    int n = 0;
    for (size_t k = 0; k < words_.size(); ++k) {
      n += std::popcount(words_[k] & other.words_[k]);
    }
    return n;
  }

  bool SubsetOf(const RowSet& other) const {
    for (size_t k = 0; k < words_.size(); ++k) {
      if (words_[k] & ~other.words_[k]) return false;
    }
    return true;
  }

  template <typename F>
  void ForEach(F&& f) const {
    for (size_t k = 0; k < words_.size(); ++k) {
      std::uint64_t w = words_[k];
      while (w) {
        int bit = std::countr_zero(w);
        f(static_cast<int>(k * 64 + bit));
        w &= w - 1;
      }
    }
  }

 private:
  std::vector<std::uint64_t> words_;
};

struct Ray {
  Eigen::VectorXd coords;  // (t, lambda)
  RowSet zero;             // processed rows tight at this ray
};

void NormalizeMax(Eigen::VectorXd& v) {
  double scale = v.cwiseAbs().maxCoeff();
  if (scale > 0.0) v /= scale;
}

// Homogenised cone {(t, lambda) : rows * (t, lambda) <= 0}. Row 0 is
// -lambda <= 0; the others come from inequality `source[i]` of the input.
struct HomogenisedCone {
  Eigen::MatrixXd rows;
  std::vector<int> source;  // -1 for the lambda row
};

// Double description: rays of the cone in `cone`, which must have full
// column rank. Returns extreme rays with their tight row sets.
std::vector<Ray> DoubleDescription(const HomogenisedCone& cone,
                                   const std::vector<int>& basis) {
  const int d = static_cast<int>(cone.rows.cols());
  const int num_rows = static_cast<int>(cone.rows.rows());

  Eigen::MatrixXd b(d, d);
  for (int i = 0; i < d; ++i) b.row(i) = cone.rows.row(basis[i]);
  Eigen::MatrixXd inverse = b.fullPivLu().inverse();

  std::vector<Ray> rays;
  rays.reserve(d);
  for (int i = 0; i < d; ++i) {
    Ray ray{-inverse.col(i), RowSet(num_rows)};
    NormalizeMax(ray.coords);
    for (int k = 0; k < d; ++k) {
      if (k != i) ray.zero.Set(basis[k]);
    }
    rays.push_back(std::move(ray));
  }

  std::vector<bool> in_basis(num_rows, false);
  for (int i : basis) in_basis[i] = true;

  std::vector<double> values;
  std::vector<int> positive, negative, zero;
  for (int row = 0; row < num_rows; ++row) {
    if (in_basis[row]) continue;
    const auto a = cone.rows.row(row);
    values.resize(rays.size());
    positive.clear();
    negative.clear();
    zero.clear();
    for (size_t i = 0; i < rays.size(); ++i) {
      double v = a.dot(rays[i].coords);
      values[i] = v;
      if (v > kZeroTest) {
        positive.push_back(static_cast<int>(i));
      } else if (v < -kZeroTest) {
        negative.push_back(static_cast<int>(i));
      } else {
        zero.push_back(static_cast<int>(i));
      }
    }
    if (positive.empty()) {
      for (int i : zero) rays[i].zero.Set(row);
      continue;
    }

    // Rays tight on each processed row, for the adjacency test below.
    std::vector<std::vector<int>> tight_rays(num_rows);
    for (size_t i = 0; i < rays.size(); ++i) {
      rays[i].zero.ForEach(
          [&](int r) { tight_rays[r].push_back(static_cast<int>(i)); });
    }

    std::vector<Ray> created;
    for (int p : positive) {
      for (int n : negative) {
        if (rays[p].zero.IntersectCount(rays[n].zero) < d - 2) continue;
        RowSet common = rays[p].zero.Intersect(rays[n].zero);
        // Combinatorial adjacency: no third ray is tight on all of `common`.
        // Only rays tight on the rarest row of `common` can qualify.
        const std::vector<int>* candidates = nullptr;
        common.ForEach([&](int r) {
          if (candidates == nullptr || tight_rays[r].size() < candidates->size()) {
            candidates = &tight_rays[r];
          }
        });
        bool adjacent = true;
        if (candidates == nullptr) {
          // Empty common set (d <= 2): every other ray qualifies.
          adjacent = rays.size() <= 2;
        } else {
          for (int r : *candidates) {
            if (r == p || r == n) continue;
            if (common.SubsetOf(rays[r].zero)) {
              adjacent = false;
              break;
            }
          }
        }
        if (!adjacent) continue;
        Ray ray{values[p] * rays[n].coords - values[n] * rays[p].coords,
                std::move(common)};
        NormalizeMax(ray.coords);
        ray.zero.Set(row);
        created.push_back(std::move(ray));
      }
    }

    std::vector<Ray> next;
    next.reserve(negative.size() + zero.size() + created.size());
    // Keep the surviving rays in their previous relative order.
    for (size_t i = 0; i < rays.size(); ++i) {
      if (values[i] > kZeroTest) continue;
      if (values[i] >= -kZeroTest) rays[i].zero.Set(row);
      next.push_back(std::move(rays[i]));
    }
    for (Ray& ray : created) next.push_back(std::move(ray));
    rays = std::move(next);
  }
  return rays;
}

// Picks d linearly independent rows, preferring earlier ones.
std::vector<int> GreedyBasis(const Eigen::MatrixXd& rows) {
  const int d = static_cast<int>(rows.cols());
  std::vector<int> basis;
  Eigen::MatrixXd orthonormal(d, 0);
  for (int i = 0; i < rows.rows() && static_cast<int>(basis.size()) < d; ++i) {
    Eigen::VectorXd v = rows.row(i).transpose();
    Eigen::VectorXd residual = v;
    for (int pass = 0; pass < 2; ++pass) {
      residual -= orthonormal * (orthonormal.transpose() * residual);
    }
    if (residual.norm() > 1e-8 * std::max(1.0, v.norm())) {
      orthonormal.conservativeResize(Eigen::NoChange, orthonormal.cols() + 1);
      orthonormal.col(orthonormal.cols() - 1) = residual.normalized();
      basis.push_back(i);
    }
  }
  return basis;
}

// Feasibility of {A v = b, G v <= h} with free v, via v = v+ - v-.
bool IsFeasible(const HPolytope& p) {
  const int n = p.dim;
  LinearProgram lp;
  lp.objective = Eigen::VectorXd::Zero(2 * n);
  lp.eq_coeffs.resize(p.num_equalities(), 2 * n);
  lp.eq_coeffs << p.eq_coeffs, -p.eq_coeffs;
  lp.eq_rhs = p.eq_rhs;
  lp.ineq_coeffs.resize(p.num_inequalities(), 2 * n);
  lp.ineq_coeffs << p.ineq_coeffs, -p.ineq_coeffs;
  lp.ineq_rhs = p.ineq_rhs;
  return SolveLp(lp).ok();
}

absl::Status ValidateShape(const HPolytope& p) {
  if (p.dim < 1) return MakeError(ErrorKind::kInvalidInput, "dim must be >= 1");
  bool ok = p.eq_coeffs.rows() == p.eq_rhs.size() &&
            p.ineq_coeffs.rows() == p.ineq_rhs.size() &&
            (p.eq_coeffs.rows() == 0 || p.eq_coeffs.cols() == p.dim) &&
            (p.ineq_coeffs.rows() == 0 || p.ineq_coeffs.cols() == p.dim);
  if (!ok) {
    return MakeError(ErrorKind::kInvalidInput,
                     "constraint sizes do not match the dimension");
  }
  if (!p.eq_coeffs.allFinite() || !p.eq_rhs.allFinite() ||
      !p.ineq_coeffs.allFinite() || !p.ineq_rhs.allFinite()) {
    return MakeError(ErrorKind::kInvalidInput, "non-finite constraint data");
  }
  return absl::OkStatus();
}

// Re-solves the vertex from its tight constraints to clean up the rounding
// accumulated along the double description.
Eigen::VectorXd Polish(const HPolytope& p, const Eigen::VectorXd& approx,
                       const std::vector<int>& tight, double tolerance) {
  const int m = p.num_equalities() + static_cast<int>(tight.size());
  Eigen::MatrixXd system(m, p.dim);
  Eigen::VectorXd rhs(m);
  if (p.num_equalities() > 0) {
    system.topRows(p.num_equalities()) = p.eq_coeffs;
    rhs.head(p.num_equalities()) = p.eq_rhs;
  }
  for (size_t k = 0; k < tight.size(); ++k) {
    system.row(p.num_equalities() + k) = p.ineq_coeffs.row(tight[k]);
    rhs[p.num_equalities() + k] = p.ineq_rhs[tight[k]];
  }
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(system);
  cod.setThreshold(kRankTolerance);
  if (cod.rank() < p.dim) return approx;
  Eigen::VectorXd exact = cod.solve(rhs);
  if (!p.Contains(exact, tolerance)) return approx;
  if ((exact - approx).cwiseAbs().maxCoeff() > 1e-6) return approx;
  return exact;
}

std::vector<int> TightInequalities(const HPolytope& p, const Eigen::VectorXd& v,
                                   double tolerance) {
  std::vector<int> tight;
  if (p.num_inequalities() == 0) return tight;
  Eigen::VectorXd slack = p.ineq_rhs - p.ineq_coeffs * v;
  for (int i = 0; i < p.num_inequalities(); ++i) {
    if (std::abs(slack[i]) <= tolerance) tight.push_back(i);
  }
  return tight;
}

// Removes points within `tolerance` (max norm) of an earlier point. Sweeps
// along a fixed projection whose weights sum to one, so near-duplicates are
// always inside the sweep window.
std::vector<Eigen::VectorXd> Deduplicate(std::vector<Eigen::VectorXd> points,
                                         double tolerance) {
  if (points.empty()) return points;
  const Eigen::Index n = points.front().size();
  Eigen::VectorXd weights(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    weights[i] = 1.0 + std::fmod(0.6180339887498949 * (i + 1), 1.0);
  }
  weights /= weights.sum();
  std::vector<std::pair<double, int>> keys;
  for (size_t i = 0; i < points.size(); ++i) {
    keys.emplace_back(weights.dot(points[i]), static_cast<int>(i));
  }
  std::sort(keys.begin(), keys.end());
  std::vector<bool> dropped(points.size(), false);
  for (size_t i = 0; i < keys.size(); ++i) {
    if (dropped[keys[i].second]) continue;
    for (size_t j = i + 1;
         j < keys.size() && keys[j].first - keys[i].first <= tolerance; ++j) {
      if (dropped[keys[j].second]) continue;
      double gap = (points[keys[i].second] - points[keys[j].second])
                       .cwiseAbs()
                       .maxCoeff();
      if (gap <= tolerance) dropped[keys[j].second] = true;
    }
  }
  std::vector<Eigen::VectorXd> kept;
  for (size_t i = 0; i < points.size(); ++i) {
    if (!dropped[i]) kept.push_back(std::move(points[i]));
  }
  return kept;
}

}  // namespace

HPolytope HPolytope::Empty(int dim) {
  HPolytope p;
  p.dim = dim;
  p.eq_coeffs.resize(0, dim);
  p.ineq_coeffs.resize(0, dim);
  return p;
}

void HPolytope::AddEquality(const Eigen::VectorXd& coeffs, double rhs) {
  eq_coeffs.conservativeResize(eq_coeffs.rows() + 1, dim);
  eq_coeffs.row(eq_coeffs.rows() - 1) = coeffs.transpose();
  eq_rhs.conservativeResize(eq_rhs.size() + 1);
  eq_rhs[eq_rhs.size() - 1] = rhs;
}

void HPolytope::AddInequality(const Eigen::VectorXd& coeffs, double rhs) {
  ineq_coeffs.conservativeResize(ineq_coeffs.rows() + 1, dim);
  ineq_coeffs.row(ineq_coeffs.rows() - 1) = coeffs.transpose();
  ineq_rhs.conservativeResize(ineq_rhs.size() + 1);
  ineq_rhs[ineq_rhs.size() - 1] = rhs;
}

int HPolytope::EqualityNullity() const {
  return dim - NumericalRank(eq_coeffs);
}

absl::StatusOr<int> HPolytope::AffineDimension() const {
  auto vertices = EnumerateVertices(*this);
  if (!vertices.ok()) return vertices.status();
  if (vertices->size() <= 1) return 0;
  Eigen::MatrixXd spans(dim, vertices->size() - 1);
  for (int i = 1; i < vertices->size(); ++i) {
    spans.col(i - 1) = vertices->vertices[i].point - vertices->vertices[0].point;
  }
  return NumericalRank(spans);
}

bool HPolytope::Contains(const Eigen::VectorXd& point, double tolerance) const {
  if (point.size() != dim) return false;
  if (num_equalities() > 0 &&
      (eq_coeffs * point - eq_rhs).cwiseAbs().maxCoeff() > tolerance) {
    return false;
  }
  if (num_inequalities() > 0 &&
      (ineq_coeffs * point - ineq_rhs).maxCoeff() > tolerance) {
    return false;
  }
  return true;
}

EnumerationOptions EnumerationOptions::FromEnvironment() {
  EnumerationOptions options;
  if (const char* env = std::getenv("PRIVFUNNEL_MAX_DIM")) {
    int value = 0;
    if (absl::SimpleAtoi(env, &value) && value > 0) {
      options.max_dimension = value;
    }
  }
  return options;
}

int TightRank(const HPolytope& polytope, const Eigen::VectorXd& point,
              double tolerance) {
  std::vector<int> tight = TightInequalities(polytope, point, tolerance);
  Eigen::MatrixXd system(polytope.num_equalities() + tight.size(),
                         polytope.dim);
  if (polytope.num_equalities() > 0) {
    system.topRows(polytope.num_equalities()) = polytope.eq_coeffs;
  }
  for (size_t k = 0; k < tight.size(); ++k) {
    system.row(polytope.num_equalities() + k) =
        polytope.ineq_coeffs.row(tight[k]);
  }
  return NumericalRank(system);
}

absl::StatusOr<VertexSet> EnumerateVertices(const HPolytope& polytope,
                                            const EnumerationOptions& options) {
  if (absl::Status s = ValidateShape(polytope); !s.ok()) return s;
  const int n = polytope.dim;

  // Parametrise the equality-constrained affine subspace as v0 + basis * t.
  Eigen::VectorXd v0 = Eigen::VectorXd::Zero(n);
  Eigen::MatrixXd basis = Eigen::MatrixXd::Identity(n, n);
  if (polytope.num_equalities() > 0) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(
        polytope.eq_coeffs, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const Eigen::VectorXd& sv = svd.singularValues();
    double threshold =
        kRankTolerance * std::max<double>(1.0, sv.size() ? sv[0] : 0.0);
    int rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i) rank += sv[i] > threshold;
    v0 = svd.solve(polytope.eq_rhs);
    double residual =
        (polytope.eq_coeffs * v0 - polytope.eq_rhs).cwiseAbs().maxCoeff();
    if (residual > options.feasibility_tolerance) {
      return MakeError(ErrorKind::kInfeasible, "equalities are inconsistent");
    }
    basis = svd.matrixV().rightCols(n - rank);
  }
  const int k = static_cast<int>(basis.cols());
  if (k > options.max_dimension) {
    return MakeError(ErrorKind::kDimensionTooLarge,
                     absl::StrCat("reduced dimension ", k, " exceeds guard ",
                                  options.max_dimension));
  }

  // Homogenise: G (v0 + B t) <= h  becomes  [G B, -(h - G v0)] (t, l) <= 0.
  HomogenisedCone cone;
  const int d = k + 1;
  cone.rows.resize(polytope.num_inequalities() + 1, d);
  cone.rows.row(0).setZero();
  cone.rows(0, k) = -1.0;
  cone.source.push_back(-1);
  int used = 1;
  for (int i = 0; i < polytope.num_inequalities(); ++i) {
    Eigen::RowVectorXd row(d);
    row.head(k) = polytope.ineq_coeffs.row(i) * basis;
    row[k] = -(polytope.ineq_rhs[i] - polytope.ineq_coeffs.row(i).dot(v0));
    double scale = row.cwiseAbs().maxCoeff();
    if (scale < 1e-12) continue;  // 0 <= 0
    cone.rows.row(used++) = row / scale;
    cone.source.push_back(i);
  }
  cone.rows.conservativeResize(used, d);

  std::vector<int> initial = GreedyBasis(cone.rows);
  if (static_cast<int>(initial.size()) < d) {
    if (!IsFeasible(polytope)) {
      return MakeError(ErrorKind::kInfeasible, "feasible region is empty");
    }
    return MakeError(ErrorKind::kUnbounded,
                     "constraints admit a line through the feasible region");
  }

  std::vector<Ray> rays = DoubleDescription(cone, initial);

  std::vector<Eigen::VectorXd> points;
  for (const Ray& ray : rays) {
    double lambda = ray.coords[k];
    if (lambda <= kZeroTest) {
      return MakeError(ErrorKind::kUnbounded, "feasible region has a ray");
    }
    Eigen::VectorXd v = v0 + basis * (ray.coords.head(k) / lambda);
    std::vector<int> tight;
    ray.zero.ForEach([&](int row) {
      if (cone.source[row] >= 0) tight.push_back(cone.source[row]);
    });
    v = Polish(polytope, v, tight, options.feasibility_tolerance);
    for (Eigen::Index i = 0; i < v.size(); ++i) {
      if (std::abs(v[i]) < 1e-14) v[i] = 0.0;
    }
    if (!polytope.Contains(v, 1e3 * options.feasibility_tolerance)) {
      return MakeError(ErrorKind::kInternal,
                       "enumerated point violates the constraints");
    }
    points.push_back(std::move(v));
  }
  if (points.empty()) {
    return MakeError(ErrorKind::kInfeasible, "feasible region is empty");
  }

  points = Deduplicate(std::move(points), options.dedup_tolerance);
  std::sort(points.begin(), points.end(),
            [](const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
              return std::lexicographical_compare(a.begin(), a.end(),
                                                  b.begin(), b.end());
            });
  VertexSet result;
  result.vertices.reserve(points.size());
  for (Eigen::VectorXd& v : points) {
    std::vector<int> tight =
        TightInequalities(polytope, v, options.feasibility_tolerance);
    result.vertices.push_back(Vertex{std::move(v), std::move(tight)});
  }
  return result;
}

}  // namespace privfunnel
