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

#ifndef PRIVFUNNEL_TESTS_TESTING_ORACLES_H_
#define PRIVFUNNEL_TESTS_TESTING_ORACLES_H_

#include <vector>

#include "Eigen/Dense"
#include "privfunnel/polytope.h"
#include "privfunnel/probability.h"

namespace privfunnel::testing {

// Leakage and utility of a binary mechanism Q = [[alpha, beta],
// [1-alpha, 1-beta]] on a c x 2 joint, computed in closed form without the
// library.
struct BinaryMechanismScore {
  double mi_xy = 0.0;
  double eps_lip = 0.0;
  double eps_ldp = 0.0;
};
BinaryMechanismScore ScoreBinaryMechanism(const Eigen::MatrixXd& joint,
                                          double alpha, double beta);

// Best I(X;Y) over the grid {0, step, ..., 1}^2 of binary mechanisms with
// measured leakage at most epsilon, one entry per epsilon. With `refine`, each
// coarse optimum is then improved by a local search on finer grids down to
// step * 1e-5.
struct GridOracleResult {
  std::vector<double> lip;
  std::vector<double> ldp;
};
GridOracleResult BinaryGridOracle(const Eigen::MatrixXd& joint,
                                  const std::vector<double>& epsilons,
                                  double step, bool refine);

// Vertices obtained by solving every full-rank subset of constraints and
// keeping the feasible solutions, deduplicated within `merge`.
std::vector<Eigen::VectorXd> BruteForceVertices(const HPolytope& polytope,
                                                double feasibility = 1e-9,
                                                double merge = 1e-7);

// True when both point sets have equal size and match one to one within
// `tolerance` in the max norm.
bool SamePointSets(const std::vector<Eigen::VectorXd>& a,
                   const std::vector<Eigen::VectorXd>& b, double tolerance);

// Bounded random polytope in dimension `dim` with `num_constraints`
// inequalities: an enclosing simplex plus random cuts that keep the origin
// feasible. Cuts through existing vertices are added with some probability
// to exercise degeneracy.
HPolytope RandomBoundedPolytope(int dim, int num_constraints, Rng& rng);

// Column-stochastic b x a matrix with uniform random columns.
Eigen::MatrixXd RandomStochasticMatrix(int rows, int cols, Rng& rng);

}  // namespace privfunnel::testing

#endif  // PRIVFUNNEL_TESTS_TESTING_ORACLES_H_
