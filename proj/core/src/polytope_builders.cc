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

#include <algorithm>
#include <cmath>
#include <vector>

#include "absl/strings/str_cat.h"
#include "privfunnel/errors.h"
#include "privfunnel/optimizers.h"

namespace privfunnel {
namespace {

// Q (size x size) is laid out row-major: variable y * size + x is Q(y, x).
void AddColumnStochastic(HPolytope& polytope, int size) {
  for (int x = 0; x < size; ++x) {
    Eigen::VectorXd row = Eigen::VectorXd::Zero(polytope.dim);
    for (int y = 0; y < size; ++y) row[y * size + x] = 1.0;
    polytope.AddEquality(row, 1.0);
  }
  for (int y = 0; y < size; ++y) {
    for (int x = 0; x < size; ++x) {
      Eigen::VectorXd row = Eigen::VectorXd::Zero(polytope.dim);
      row[y * size + x] = -1.0;
      polytope.AddInequality(row, 0.0);
    }
  }
}

// Row enforcing (Q u)_y <= e^eps (Q w)_y, scaled by e^-eps so that an
// infinite budget degenerates to -(Q w)_y <= 0.
void AddRatioBound(HPolytope& polytope, int size, int y, double epsilon,
                   const Eigen::VectorXd& numerator,
                   const Eigen::VectorXd& denominator) {
  const double shrink = std::exp(-epsilon);
  Eigen::VectorXd row = Eigen::VectorXd::Zero(polytope.dim);
  for (int x = 0; x < size; ++x) {
    row[y * size + x] = shrink * numerator[x] - denominator[x];
  }
  polytope.AddInequality(row, 0.0);
}

}  // namespace

HPolytope BuildLdpPolytope(const JointDistribution& joint, double epsilon) {
  const int a = joint.num_values();
  const int c = joint.num_secrets();
  HPolytope polytope = HPolytope::Empty(a * a);
  AddColumnStochastic(polytope, a);
  const Eigen::MatrixXd x_given_s = joint.ValueGivenSecret();
  for (int y = 0; y < a; ++y) {
    for (int s = 0; s < c; ++s) {
      for (int t = 0; t < c; ++t) {
        if (s == t) continue;
        AddRatioBound(polytope, a, y, epsilon, x_given_s.row(s).transpose(),
                      x_given_s.row(t).transpose());
      }
    }
  }
  return polytope;
}

HPolytope BuildLipPolytope(const JointDistribution& joint, double epsilon) {
  const int a = joint.num_values();
  HPolytope polytope = HPolytope::Empty(a);
  polytope.AddEquality(Eigen::VectorXd::Ones(a), 1.0);
  for (int x = 0; x < a; ++x) {
    Eigen::VectorXd row = Eigen::VectorXd::Zero(a);
    row[x] = -1.0;
    polytope.AddInequality(row, 0.0);
  }
  const Eigen::MatrixXd s_given_x = joint.SecretGivenValue();
  const Eigen::VectorXd& p_s = joint.secret_marginal();
  for (int s = 0; s < joint.num_secrets(); ++s) {
    Eigen::VectorXd row = s_given_x.row(s).transpose();
    polytope.AddInequality(-row, -std::exp(-epsilon) * p_s[s]);
    // p_{s|X} v never exceeds 1 on the simplex, so capping the bound at 2
    // leaves the set unchanged and keeps it finite for huge budgets.
    polytope.AddInequality(row, std::min(std::exp(epsilon) * p_s[s], 2.0));
  }
  return polytope;
}

absl::StatusOr<HPolytope> BuildSrlipPolytope(const JointDistribution& joint,
                                             const AttributeSchema& schema,
                                             int attribute, double epsilon) {
  if (schema.flat_size() != joint.num_values()) {
    return MakeError(ErrorKind::kSchemaMismatch,
                     absl::StrCat("schema covers ", schema.flat_size(),
                                  " values, joint has ", joint.num_values()));
  }
  const int m = schema.num_attributes();
  if (attribute < 0 || attribute >= m) {
    return MakeError(ErrorKind::kOutOfRange,
                     absl::StrCat("attribute ", attribute, " of ", m));
  }
  if (!(epsilon >= 0.0)) {
    return MakeError(ErrorKind::kInvalidInput, "budget must be nonnegative");
  }
  const int size = schema.size(attribute);
  HPolytope polytope = HPolytope::Empty(size * size);
  AddColumnStochastic(polytope, size);

  std::vector<int> others;
  for (int j = 0; j < m; ++j) {
    if (j != attribute) others.push_back(j);
  }
  const int num_subsets = 1 << others.size();
  for (int mask = 0; mask < num_subsets; ++mask) {
    Context context;
    int num_values = 1;
    for (size_t k = 0; k < others.size(); ++k) {
      if (mask & (1 << k)) {
        context.attributes.push_back(others[k]);
        num_values *= schema.size(others[k]);
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
      auto conditionals = ConditionOnContext(joint, schema, context, attribute);
      if (!conditionals.ok()) {
        if (ErrorKindOf(conditionals.status()) == "ZeroProbabilityContext") {
          continue;
        }
        return conditionals.status();
      }
      const Eigen::VectorXd& overall =
          conditionals->target_given_context.values();
      for (const auto& given_secret :
           conditionals->target_given_secret_and_context) {
        if (!given_secret.has_value()) continue;
        const Eigen::VectorXd& secret = given_secret->values();
        for (int y = 0; y < size; ++y) {
          // e^-eps (Q p_{X^j|x^J})_y <= (Q p_{X^j|s,x^J})_y
          AddRatioBound(polytope, size, y, epsilon, overall, secret);
          // (Q p_{X^j|s,x^J})_y <= e^eps (Q p_{X^j|x^J})_y
          AddRatioBound(polytope, size, y, epsilon, secret, overall);
        }
      }
    }
  }
  return polytope;
}

}  // namespace privfunnel
