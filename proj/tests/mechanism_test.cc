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

#include "privfunnel/mechanism.h"

#include <cmath>
#include <vector>

#include "Eigen/Dense"
#include "gtest/gtest.h"
#include "privfunnel/audit.h"
#include "privfunnel/errors.h"
#include "privfunnel/probability.h"
#include "testing/oracles.h"

namespace privfunnel {
namespace {

Mechanism BinarySymmetric(double flip) {
  return *Mechanism::Create(
      (Eigen::MatrixXd(2, 2) << 1 - flip, flip, flip, 1 - flip).finished());
}

ProbabilityVector Prior(const Eigen::VectorXd& v) {
  return *ProbabilityVector::Create(v);
}

TEST(MechanismTest, RejectsNonStochastic) {
  EXPECT_FALSE(
      Mechanism::Create((Eigen::MatrixXd(2, 2) << 0.5, 0.5, 0.6, 0.5).finished())
          .ok());
  EXPECT_FALSE(
      Mechanism::Create((Eigen::MatrixXd(2, 1) << 1.5, -0.5).finished()).ok());
  EXPECT_TRUE(Mechanism::Create(Eigen::MatrixXd::Ones(1, 3)).ok());
}

TEST(ReverseToForwardTest, IdentityAndConstant) {
  const ProbabilityVector p = Prior(Eigen::Vector3d(0.2, 0.3, 0.5));
  auto identity = ReverseRepresentation::Create(p.values(),
                                                Eigen::MatrixXd::Identity(3, 3));
  ASSERT_TRUE(identity.ok());
  EXPECT_TRUE(ReverseToForward(*identity, p)->matrix().isApprox(
      Eigen::MatrixXd::Identity(3, 3), 1e-12));

  auto constant =
      ReverseRepresentation::Create(Eigen::VectorXd::Ones(1), p.values());
  ASSERT_TRUE(constant.ok());
  EXPECT_TRUE(ReverseToForward(*constant, p)->matrix().isApprox(
      Eigen::MatrixXd::Ones(1, 3), 1e-12));
}

TEST(ReverseToForwardTest, EntrywiseFormula) {
  const ProbabilityVector p = Prior(Eigen::Vector2d(0.5, 0.5));
  auto rep = ReverseRepresentation::Create(
      Eigen::Vector2d(0.5, 0.5),
      (Eigen::MatrixXd(2, 2) << 0.8, 0.2, 0.2, 0.8).finished());
  ASSERT_TRUE(rep.ok());
  auto q = ReverseToForward(*rep, p);
  ASSERT_TRUE(q.ok());
  EXPECT_NEAR((*q)(0, 0), 0.8, 1e-15);
  EXPECT_NEAR((*q)(0, 1), 0.2, 1e-15);
  EXPECT_NEAR((*q)(1, 0), 0.2, 1e-15);
  EXPECT_NEAR((*q)(1, 1), 0.8, 1e-15);
}

TEST(ReverseToForwardTest, InconsistentPrior) {
  const ProbabilityVector p = Prior(Eigen::Vector2d(0.3, 0.7));
  auto rep = ReverseRepresentation::Create(
      Eigen::Vector2d(0.5, 0.5), Eigen::MatrixXd::Identity(2, 2));
  ASSERT_TRUE(rep.ok());
  auto q = ReverseToForward(*rep, p);
  ASSERT_FALSE(q.ok());
  EXPECT_EQ(ErrorKindOf(q.status()), "InconsistentPrior");
}

TEST(ForwardToReverseTest, BayesRule) {
  const ProbabilityVector p = Prior(Eigen::Vector2d(0.5, 0.5));
  auto q = *Mechanism::Create(
      (Eigen::MatrixXd(2, 2) << 0.9, 0.2, 0.1, 0.8).finished());
  auto rep = ForwardToReverse(q, p);
  ASSERT_TRUE(rep.ok());
  EXPECT_NEAR(rep->output_distribution()(0), 0.55, 1e-15);
  EXPECT_NEAR(rep->output_distribution()(1), 0.45, 1e-15);
  EXPECT_NEAR(rep->posteriors()(0, 0), 9.0 / 11.0, 1e-15);
  EXPECT_NEAR(rep->posteriors()(1, 0), 2.0 / 11.0, 1e-15);
}

TEST(ForwardToReverseTest, TrivialCases) {
  const ProbabilityVector p = Prior(Eigen::Vector2d(0.5, 0.5));
  auto identity = *ForwardToReverse(Mechanism::Identity(2), p);
  EXPECT_TRUE(identity.posteriors().isApprox(Eigen::MatrixXd::Identity(2, 2)));
  auto constant = *ForwardToReverse(Mechanism::Constant(2), p);
  EXPECT_EQ(constant.num_outputs(), 1);
  EXPECT_TRUE(constant.posteriors().col(0).isApprox(p.values()));
}

TEST(ForwardToReverseTest, DropsZeroOutputsAndRoundTrips) {
  Rng rng(3);
  for (int trial = 0; trial < 40; ++trial) {
    const int a = 2 + trial % 4;
    const int b = 1 + trial % 5;
    Eigen::MatrixXd m = testing::RandomStochasticMatrix(b + 1, a, rng);
    m.row(b).setZero();
    for (int x = 0; x < a; ++x) m.col(x) /= m.col(x).sum();
    const Mechanism q = *Mechanism::Create(m);
    Eigen::VectorXd w(a);
    for (int x = 0; x < a; ++x) w(x) = UniformUnit(rng) + 0.05;
    const ProbabilityVector p = *ProbabilityVector::Normalize(w);
    auto rep = ForwardToReverse(q, p);
    ASSERT_TRUE(rep.ok());
    EXPECT_EQ(rep->num_outputs(), b);
    auto back = ReverseToForward(*rep, p);
    ASSERT_TRUE(back.ok()) << back.status();
    EXPECT_LE((back->matrix() - m.topRows(b)).cwiseAbs().maxCoeff(), 1e-9);
  }
}

TEST(ComposeProductTest, IdentitiesGiveIdentity) {
  auto schema = *AttributeSchema::Create({2, 3});
  std::vector<Mechanism> factors = {Mechanism::Identity(2),
                                    Mechanism::Identity(3)};
  auto q = ComposeProduct(factors, schema);
  ASSERT_TRUE(q.ok());
  EXPECT_TRUE(q->matrix().isApprox(Eigen::MatrixXd::Identity(6, 6)));
}

TEST(ComposeProductTest, ProductFormula) {
  auto schema = *AttributeSchema::Create({2, 2});
  std::vector<Mechanism> factors = {BinarySymmetric(0.1), BinarySymmetric(0.2)};
  auto q = ComposeProduct(factors, schema);
  ASSERT_TRUE(q.ok());
  for (int x = 0; x < 4; ++x) EXPECT_NEAR((*q)(x, x), 0.72, 1e-15);
  // y = (0, 1) from x = (0, 0): 0.9 * 0.2.
  EXPECT_NEAR((*q)(1, 0), 0.18, 1e-15);
}

TEST(ComposeProductTest, ConstantFactorMarginalizesAttribute) {
  auto schema = *AttributeSchema::Create({2, 3});
  std::vector<Mechanism> factors = {Mechanism::Constant(2),
                                    Mechanism::Identity(3)};
  auto q = ComposeProduct(factors, schema);
  ASSERT_TRUE(q.ok());
  ASSERT_EQ(q->num_outputs(), 3);
  for (int x = 0; x < 6; ++x) {
    EXPECT_DOUBLE_EQ((*q)(schema.Digit(x, 1), x), 1.0);
  }
}

TEST(ComposeProductTest, SchemaMismatch) {
  auto schema = *AttributeSchema::Create({2, 3});
  std::vector<Mechanism> factors = {Mechanism::Identity(2),
                                    Mechanism::Identity(2)};
  auto q = ComposeProduct(factors, schema);
  ASSERT_FALSE(q.ok());
  EXPECT_EQ(ErrorKindOf(q.status()), "SchemaMismatch");
}

TEST(ComposeProductTest, MutualInformationAdditiveOnProductPriors) {
  Rng rng(17);
  auto schema = *AttributeSchema::Create({2, 3});
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::Vector2d p1(UniformUnit(rng) + 0.1, UniformUnit(rng) + 0.1);
    Eigen::Vector3d p2;
    for (int i = 0; i < 3; ++i) p2(i) = UniformUnit(rng) + 0.1;
    const ProbabilityVector q1 = *ProbabilityVector::Normalize(p1);
    const ProbabilityVector q2 = *ProbabilityVector::Normalize(p2);
    Eigen::VectorXd product(6);
    for (int x = 0; x < 6; ++x) {
      product(x) = q1[schema.Digit(x, 0)] * q2[schema.Digit(x, 1)];
    }
    const Mechanism m1 = *Mechanism::Create(testing::RandomStochasticMatrix(3, 2, rng));
    const Mechanism m2 = *Mechanism::Create(testing::RandomStochasticMatrix(2, 3, rng));
    std::vector<Mechanism> factors = {m1, m2};
    const Mechanism q = *ComposeProduct(factors, schema);
    EXPECT_NEAR(MutualInformation(product, q.matrix()),
                *MutualInformation(q1, m1) + *MutualInformation(q2, m2), 1e-9);
  }
}

TEST(ReduceOutputsTest, MergesDuplicateRows) {
  const ProbabilityVector p = Prior(Eigen::Vector2d(0.4, 0.6));
  auto q = *Mechanism::Create(
      (Eigen::MatrixXd(3, 2) << 0.45, 0.1, 0.45, 0.1, 0.1, 0.8).finished());
  auto reduced = ReduceOutputs(q, p);
  ASSERT_TRUE(reduced.ok());
  EXPECT_EQ(reduced->num_outputs(), 2);
  EXPECT_NEAR(*MutualInformation(p, *reduced), *MutualInformation(p, q), 1e-12);
}

TEST(ReduceOutputsTest, DropsZeroRow) {
  const ProbabilityVector p = Prior(Eigen::Vector2d(0.4, 0.6));
  auto q = *Mechanism::Create(
      (Eigen::MatrixXd(3, 2) << 0.7, 0.2, 0.0, 0.0, 0.3, 0.8).finished());
  auto reduced = ReduceOutputs(q, p);
  ASSERT_TRUE(reduced.ok());
  EXPECT_EQ(reduced->num_outputs(), 2);
  EXPECT_DOUBLE_EQ((*reduced)(0, 0), 0.7);
  EXPECT_DOUBLE_EQ((*reduced)(1, 1), 0.8);
}

TEST(ReduceOutputsTest, ProportionalPosteriorsMerge) {
  // Rows 0 and 2 are proportional, so their posteriors coincide.
  const ProbabilityVector p = Prior(Eigen::Vector2d(0.3, 0.7));
  auto q = *Mechanism::Create(
      (Eigen::MatrixXd(3, 2) << 0.2, 0.1, 0.2, 0.6, 0.6, 0.3).finished());
  auto reduced = ReduceOutputs(q, p);
  ASSERT_TRUE(reduced.ok());
  EXPECT_EQ(reduced->num_outputs(), 2);
  EXPECT_NEAR((*reduced)(0, 0), 0.8, 1e-15);
  EXPECT_NEAR(*MutualInformation(p, *reduced), *MutualInformation(p, q), 1e-12);
}

TEST(ReduceOutputsTest, NeverIncreasesLeakage) {
  Rng rng(23);
  for (int trial = 0; trial < 40; ++trial) {
    const int c = 2 + trial % 3;
    const int a = 2 + trial % 4;
    const JointDistribution joint = RandomJoint(c, a, rng);
    // Duplicate rows with random splits so merging has work to do.
    Eigen::MatrixXd base = testing::RandomStochasticMatrix(3, a, rng);
    Eigen::MatrixXd m(5, a);
    m.topRows(3) = base;
    m.row(3) = 0.5 * base.row(0);
    m.row(0) *= 0.5;
    m.row(4).setZero();
    const Mechanism q = *Mechanism::Create(m);
    const ProbabilityVector p = *ProbabilityVector::Create(joint.value_marginal());
    const Mechanism reduced = *ReduceOutputs(q, p);
    EXPECT_LE(reduced.num_outputs(), 3);
    EXPECT_NEAR(*MutualInformation(p, reduced), *MutualInformation(p, q), 1e-9);
    EXPECT_LE(*MeasureLip(reduced, joint), *MeasureLip(q, joint) + 1e-9);
    EXPECT_LE(*MeasureLdp(reduced, joint), *MeasureLdp(q, joint) + 1e-9);
  }
}

TEST(ApplyTest, IdentityAndConstant) {
  Rng rng(1);
  for (int x = 0; x < 4; ++x) {
    EXPECT_EQ(*Apply(Mechanism::Identity(4), x, rng), x);
    EXPECT_EQ(*Apply(Mechanism::Constant(4), x, rng), 0);
  }
}

TEST(ApplyTest, OutOfRange) {
  Rng rng(1);
  EXPECT_EQ(ErrorKindOf(Apply(Mechanism::Identity(2), 2, rng).status()),
            "OutOfRange");
  EXPECT_EQ(ErrorKindOf(Apply(Mechanism::Identity(2), -1, rng).status()),
            "OutOfRange");
}

TEST(ApplyTest, MonteCarloFrequency) {
  Rng rng(2026);
  const Mechanism q = BinarySymmetric(0.1);
  int hits = 0;
  constexpr int kSamples = 100000;
  for (int i = 0; i < kSamples; ++i) hits += *Apply(q, 0, rng) == 0;
  EXPECT_NEAR(static_cast<double>(hits) / kSamples, 0.9, 0.01);
}

TEST(ApplyTest, DeterministicGivenSeed) {
  const Mechanism q = *Mechanism::Create(
      (Eigen::MatrixXd(3, 2) << 0.2, 0.5, 0.3, 0.25, 0.5, 0.25).finished());
  Rng first(8), second(8);
  for (int i = 0; i < 100; ++i) {
    EXPECT_EQ(*Apply(q, i % 2, first), *Apply(q, i % 2, second));
  }
}

}  // namespace
}  // namespace privfunnel
