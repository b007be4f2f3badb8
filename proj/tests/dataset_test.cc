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

#include "privfunnel/dataset.h"

#include <string>
#include <vector>

#include "Eigen/Dense"
#include "gtest/gtest.h"
#include "privfunnel/errors.h"
#include "privfunnel/mechanism.h"

namespace privfunnel {
namespace {

constexpr char kSchemaJson[] = R"({
  "attributes": [{"name": "age", "size": 3}, {"name": "smoker", "size": 2}],
  "secret": "disease"
})";

constexpr char kCsv[] =
    "id,age,disease,smoker\n"
    "1,1,2,2\n"
    "2,3,1,1\n"
    "3,2,1,2\n";

TEST(TableSchemaTest, Parses) {
  auto schema = ParseTableSchemaJson(kSchemaJson);
  ASSERT_TRUE(schema.ok()) << schema.status();
  EXPECT_EQ(schema->names, (std::vector<std::string>{"age", "smoker"}));
  EXPECT_EQ(schema->schema.flat_size(), 6);
  EXPECT_EQ(*schema->secret_column, "disease");
  EXPECT_EQ(ErrorKindOf(ParseTableSchemaJson("{").status()), "ParseError");
  EXPECT_FALSE(ParseTableSchemaJson(R"({"attributes": [{"name": "x"}]})").ok());
}

TEST(CsvTableTest, ParsesOneBasedCodes) {
  auto table = ParseCsvTable(kCsv, *ParseTableSchemaJson(kSchemaJson));
  ASSERT_TRUE(table.ok()) << table.status();
  ASSERT_EQ(table->rows.size(), 3u);
  EXPECT_EQ(table->rows[0], (std::vector<int>{0, 1}));
  EXPECT_EQ(table->rows[1], (std::vector<int>{2, 0}));
  EXPECT_EQ(*table->secrets, (std::vector<int>{1, 0, 0}));
  EXPECT_EQ(TableToCsv(*table), "age,smoker\n1,2\n3,1\n2,2\n");
}

TEST(CsvTableTest, RejectsBadInput) {
  const TableSchema schema = *ParseTableSchemaJson(kSchemaJson);
  EXPECT_EQ(ErrorKindOf(ParseCsvTable("age,smoker\n4,1\n", schema).status()),
            "OutOfRange");
  EXPECT_EQ(ErrorKindOf(ParseCsvTable("age,smoker\n0,1\n", schema).status()),
            "OutOfRange");
  EXPECT_EQ(ErrorKindOf(ParseCsvTable("age\n1\n", schema).status()),
            "SchemaMismatch");
  EXPECT_EQ(ErrorKindOf(ParseCsvTable("age,smoker\n1\n", schema).status()),
            "ParseError");
  EXPECT_EQ(ErrorKindOf(ParseCsvTable("", schema).status()), "ParseError");
}

TEST(SanitizeDatabaseTest, IdentityKeepsRowsAndDropsSecret) {
  auto table = *ParseCsvTable(kCsv, *ParseTableSchemaJson(kSchemaJson));
  auto out = SanitizeDatabase(table, Mechanism::Identity(6), 1);
  ASSERT_TRUE(out.ok()) << out.status();
  EXPECT_EQ(out->rows, table.rows);
  EXPECT_FALSE(out->secrets.has_value());
  const std::string csv = TableToCsv(*out);
  EXPECT_EQ(csv.find("disease"), std::string::npos);
  EXPECT_EQ(csv, "age,smoker\n1,2\n3,1\n2,2\n");
}

TEST(SanitizeDatabaseTest, ConstantMechanismGivesIdenticalRows) {
  auto table = *ParseCsvTable(kCsv, *ParseTableSchemaJson(kSchemaJson));
  auto out = SanitizeDatabase(table, Mechanism::Constant(6), 1);
  ASSERT_TRUE(out.ok());
  EXPECT_EQ(out->names, std::vector<std::string>{"y"});
  for (const auto& row : out->rows) EXPECT_EQ(row, std::vector<int>{0});
}

TEST(SanitizeDatabaseTest, DeterministicPerSeed) {
  auto table = *ParseCsvTable(kCsv, *ParseTableSchemaJson(kSchemaJson));
  Eigen::MatrixXd m = Eigen::MatrixXd::Constant(6, 6, 1.0 / 6);
  const Mechanism q = *Mechanism::Create(m);
  EXPECT_EQ(SanitizeDatabase(table, q, 42)->rows,
            SanitizeDatabase(table, q, 42)->rows);
}

TEST(SanitizeDatabaseTest, MonteCarloFlipRate) {
  TableSchema schema{{"bit"}, AttributeSchema::Single(2), std::nullopt};
  DatasetTable table{schema.names, schema.schema, {}, std::nullopt};
  constexpr int kRows = 100000;
  for (int i = 0; i < kRows; ++i) table.rows.push_back({i % 2});
  const Mechanism flip = *Mechanism::Create(
      (Eigen::MatrixXd(2, 2) << 0.9, 0.1, 0.1, 0.9).finished());
  auto out = SanitizeDatabase(table, flip, 2026);
  ASSERT_TRUE(out.ok());
  ASSERT_EQ(out->rows.size(), table.rows.size());
  int flips = 0;
  for (int i = 0; i < kRows; ++i) flips += out->rows[i][0] != table.rows[i][0];
  EXPECT_NEAR(static_cast<double>(flips) / kRows, 0.1, 0.01);
}

TEST(SanitizeDatabaseTest, Errors) {
  auto table = *ParseCsvTable(kCsv, *ParseTableSchemaJson(kSchemaJson));
  EXPECT_EQ(ErrorKindOf(SanitizeDatabase(table, Mechanism::Identity(5), 1).status()),
            "SchemaMismatch");
  table.rows[0][0] = 7;
  EXPECT_EQ(ErrorKindOf(SanitizeDatabase(table, Mechanism::Identity(6), 1).status()),
            "OutOfRange");
}

}  // namespace
}  // namespace privfunnel
