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

#include <string>
#include <vector>

#include "absl/strings/str_split.h"
#include "gtest/gtest.h"
#include "privfunnel/json_io.h"

namespace privfunnel {
namespace {

ExperimentConfig SmallConfig() {
  ExperimentConfig config;
  config.num_secrets = 2;
  config.sizes = {3};
  config.epsilons = {0.5, 1.0};
  config.trials = 2;
  config.seed = 7;
  config.notions = {Notion::kLdp, Notion::kLip};
  config.record_time = false;
  return config;
}

TEST(ExperimentConfigTest, Validation) {
  EXPECT_TRUE(SmallConfig().Validate().ok());
  ExperimentConfig config = SmallConfig();
  config.epsilons.clear();
  EXPECT_FALSE(config.Validate().ok());
  config = SmallConfig();
  config.trials = 0;
  EXPECT_FALSE(config.Validate().ok());
  config = SmallConfig();
  config.notions.clear();
  EXPECT_FALSE(config.Validate().ok());
}

TEST(RunExperimentTest, RowsInDeterministicOrder) {
  auto rows = RunExperiment(SmallConfig());
  ASSERT_TRUE(rows.ok()) << rows.status();
  ASSERT_EQ(rows->size(), 8u);
  EXPECT_EQ((*rows)[0].trial, 0);
  EXPECT_EQ((*rows)[0].notion, Notion::kLdp);
  EXPECT_EQ((*rows)[1].notion, Notion::kLip);
  EXPECT_EQ((*rows)[2].epsilon, 1.0);
  EXPECT_EQ((*rows)[4].trial, 1);
  for (const ExperimentRow& row : *rows) {
    EXPECT_EQ(row.status, "ok");
    EXPECT_LE(row.eps_measured, row.epsilon + 1e-6);
    EXPECT_EQ(row.time_ms, 0.0);
  }
}

TEST(RunExperimentTest, CsvIsByteIdenticalAcrossRuns) {
  ExperimentConfig config = SmallConfig();
  config.trials = 1;
  const std::string first = ExperimentCsv(*RunExperiment(config));
  const std::string second = ExperimentCsv(*RunExperiment(config));
  EXPECT_EQ(first, second);
  EXPECT_EQ(first.substr(0, first.find('\n')),
            "trial,epsilon,notion,utility_nats,eps_measured,time_ms,"
            "vertex_count,status");
}

TEST(RunExperimentTest, LipBeatsSrlipPerTrial) {
  ExperimentConfig config;
  config.sizes = {2, 3};
  config.epsilons = {1.0};
  config.trials = 3;
  config.seed = 1;
  config.notions = {Notion::kLip, Notion::kSrlip};
  auto rows = RunExperiment(config);
  ASSERT_TRUE(rows.ok());
  ASSERT_EQ(rows->size(), 6u);
  for (size_t i = 0; i < rows->size(); i += 2) {
    EXPECT_GE((*rows)[i].utility, (*rows)[i + 1].utility - 1e-8);
    EXPECT_EQ((*rows)[i + 1].status, "ok");
  }
}

TEST(RunExperimentTest, FailedTrialsAreTagged) {
  ExperimentConfig config = SmallConfig();
  config.enumeration.max_dimension = 3;
  auto rows = RunExperiment(config);
  ASSERT_TRUE(rows.ok());
  EXPECT_EQ((*rows)[0].status, "error:DimensionTooLarge");
  EXPECT_EQ((*rows)[1].status, "ok");
  const std::string aggregate = AggregateCsv(*rows);
  EXPECT_NE(aggregate.find("0.5,LDP,0,"), std::string::npos);
}

TEST(AggregateCsvTest, SummarisesPerEpsilonAndNotion) {
  auto rows = *RunExperiment(SmallConfig());
  const std::string aggregate = AggregateCsv(rows);
  std::vector<std::string> lines =
      absl::StrSplit(aggregate, '\n', absl::SkipEmpty());
  ASSERT_EQ(lines.size(), 5u);
  EXPECT_EQ(lines[1].substr(0, 10), "0.5,LDP,2,");
}

TEST(ExperimentConfigJsonTest, Parses) {
  auto config = ParseExperimentConfigJson(R"({
    "c": 2, "sizes": [3, 3, 4], "epsilons": [0.5, 1],
    "trials": 4, "seed": 9, "notions": ["lip", "SRLIP"], "record_time": false
  })");
  ASSERT_TRUE(config.ok()) << config.status();
  EXPECT_EQ(config->sizes, (std::vector<int>{3, 3, 4}));
  EXPECT_EQ(config->trials, 4);
  EXPECT_EQ(config->seed, 9u);
  EXPECT_EQ(config->notions, (std::vector<Notion>{Notion::kLip, Notion::kSrlip}));
  EXPECT_FALSE(config->record_time);
  EXPECT_FALSE(ParseExperimentConfigJson(R"({"c": 2, "a": 3})").ok());
  EXPECT_FALSE(ParseExperimentConfigJson(
                   R"({"c": 2, "a": 3, "epsilons": [], "notions": ["lip"]})")
                   .ok());
}

}  // namespace
}  // namespace privfunnel
