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


#include "cli.h"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "json.hpp"

namespace privfunnel::cli {
namespace {

using ::testing::HasSubstr;
using ::testing::StartsWith;
using nlohmann::json;

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun Invoke(const std::vector<std::string>& args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = RunCli(args, out, err);
  return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = std::filesystem::path(::testing::TempDir()) /
           ::testing::UnitTest::GetInstance()->current_test_info()->name();
    std::filesystem::create_directories(dir_);
  }

  std::string Path(const std::string& name) const {
    return (dir_ / name).string();
  }

  std::string Write(const std::string& name, const std::string& content) {
    std::ofstream(Path(name)) << content;
    return Path(name);
  }

  static std::string Read(const std::string& path) {
    std::ifstream in(path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
  }

  std::filesystem::path dir_;
};

TEST_F(CliTest, GenPriorOptimizeAudit) {
  const std::string prior = Path("prior.json");
  ASSERT_EQ(Invoke({"gen-prior", "--c", "2", "--a", "3", "--seed", "7",
                    "--out", prior})
                .code,
            0);
  const json prior_doc = json::parse(Read(prior));
  EXPECT_EQ(prior_doc["c"], 2);
  EXPECT_EQ(prior_doc["a"], 3);

  const CliRun optimized = Invoke(
      {"optimize", "--notion", "lip", "--prior", prior, "--epsilon", "0.5"});
  ASSERT_EQ(optimized.code, 0) << optimized.err;
  const json result = json::parse(optimized.out);
  EXPECT_EQ(result["notion"], "LIP");
  EXPECT_GT(result["vertex_count"].get<int>(), 0);
  const double utility = result["utility_nats"].get<double>();

  json mechanism = {{"a", result["a"]}, {"b", result["b"]}, {"Q", result["Q"]}};
  const std::string mechanism_path = Write("q.json", mechanism.dump());
  const CliRun audited =
      Invoke({"audit", "--prior", prior, "--mechanism", mechanism_path});
  ASSERT_EQ(audited.code, 0) << audited.err;
  const json report = json::parse(audited.out);
  EXPECT_LE(report["eps_lip"].get<double>(), 0.5 + 1e-9);
  EXPECT_NEAR(report["mi_xy"].get<double>(), utility, 1e-9);
}

TEST_F(CliTest, OptimizeSrlipWithSizesAndDump) {
  const std::string prior = Path("prior.json");
  ASSERT_EQ(Invoke({"gen-prior", "--c", "2", "--sizes", "2,2", "--seed", "3",
                    "--out", prior})
                .code,
            0);
  const std::string dump = Path("polytopes.json");
  const CliRun run = Invoke({"optimize", "--notion", "srlip", "--prior", prior,
                          "--epsilon", "1", "--split", "0.25,0.75",
                          "--dump-polytope", dump, "--out", Path("r.json")});
  ASSERT_EQ(run.code, 0) << run.err;
  const json result = json::parse(Read(Path("r.json")));
  EXPECT_EQ(result["diagnostics"]["split"], json({0.25, 0.75}));
  EXPECT_EQ(result["diagnostics"]["factors"].size(), 2u);
  EXPECT_EQ(json::parse(Read(dump)).size(), 2u);
}

TEST_F(CliTest, SanitizeWithIdentityKeepsAttributes) {
  const std::string schema = Write(
      "schema.json",
      R"({"attributes": [{"name": "age", "size": 2}, {"name": "smoker", "size": 2}],
          "secret": "disease"})");
  const std::string csv = Write("in.csv",
                                "age,disease,smoker\n"
                                "1,1,2\n"
                                "2,2,1\n");
  const std::string identity = Write(
      "id.json",
      R"({"a": 4, "b": 4, "Q": [[1,0,0,0],[0,1,0,0],[0,0,1,0],[0,0,0,1]]})");
  const CliRun run = Invoke({"sanitize", "--input", csv, "--schema", schema,
                          "--mechanism", identity, "--seed", "1"});
  ASSERT_EQ(run.code, 0) << run.err;
  EXPECT_EQ(run.out, "age,smoker\n1,2\n2,1\n");
}

TEST_F(CliTest, ExperimentWritesRowsAndAggregate) {
  const std::string config = Write("config.json", R"({
    "c": 2, "a": 2, "epsilons": [0.5, 1.0], "trials": 2, "seed": 11,
    "notions": ["ldp", "lip"], "record_time": false})");
  const std::string aggregate = Path("aggregate.csv");
  const CliRun first =
      Invoke({"experiment", "--config", config, "--aggregate", aggregate});
  ASSERT_EQ(first.code, 0) << first.err;
  EXPECT_THAT(first.out, StartsWith("trial,epsilon,notion,utility_nats"));
  // Header plus 2 trials x 2 budgets x 2 notions.
  EXPECT_EQ(std::count(first.out.begin(), first.out.end(), '\n'), 9);
  EXPECT_THAT(Read(aggregate), StartsWith("epsilon,notion,ok_trials"));
  EXPECT_EQ(Invoke({"experiment", "--config", config}).out, first.out);
}

TEST_F(CliTest, UsageErrorsExitTwo) {
  EXPECT_EQ(Invoke({}).code, 2);
  EXPECT_EQ(Invoke({"frobnicate"}).code, 2);
  const CliRun missing = Invoke({"optimize", "--notion", "lip"});
  EXPECT_EQ(missing.code, 2);
  EXPECT_THAT(missing.err, StartsWith("error: Usage: "));
  EXPECT_EQ(Invoke({"gen-prior", "--a", "3", "--sizes", "2,2"}).code, 2);
}

TEST_F(CliTest, LibraryErrorsExitOne) {
  const CliRun no_file = Invoke({"optimize", "--notion", "lip", "--prior",
                              Path("absent.json"), "--epsilon", "1"});
  EXPECT_EQ(no_file.code, 1);
  EXPECT_THAT(no_file.err, StartsWith("error: "));

  const std::string prior = Path("prior.json");
  ASSERT_EQ(Invoke({"gen-prior", "--a", "3", "--out", prior}).code, 0);
  const CliRun bad_notion = Invoke(
      {"optimize", "--notion", "dp", "--prior", prior, "--epsilon", "1"});
  EXPECT_EQ(bad_notion.code, 1);
  EXPECT_THAT(bad_notion.err, HasSubstr("InvalidInput"));

  const CliRun no_schema = Invoke(
      {"optimize", "--notion", "srlip", "--prior", prior, "--epsilon", "1"});
  EXPECT_EQ(no_schema.code, 1);
  EXPECT_THAT(no_schema.err, HasSubstr("SchemaMismatch"));

  const CliRun negative = Invoke(
      {"optimize", "--notion", "ldp", "--prior", prior, "--epsilon", "-1"});
  EXPECT_EQ(negative.code, 1);
}

TEST_F(CliTest, HelpExitsZero) {
  const CliRun help = Invoke({"--help"});
  EXPECT_EQ(help.code, 0);
  EXPECT_THAT(help.out, HasSubstr("optimize"));
}

}  // namespace
}  // namespace privfunnel::cli
