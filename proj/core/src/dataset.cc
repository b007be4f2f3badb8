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

#include <utility>

#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "absl/strings/str_split.h"
#include "absl/strings/strip.h"
#include "absl/strings/ascii.h"
#include "json.hpp"
#include "privfunnel/errors.h"

namespace privfunnel {
namespace {

std::vector<std::string> SplitCsvLine(absl::string_view line) {
  std::vector<std::string> fields;
  for (absl::string_view field : absl::StrSplit(line, ',')) {
    fields.emplace_back(absl::StripAsciiWhitespace(field));
  }
  return fields;
}

}  // namespace

absl::StatusOr<TableSchema> ParseTableSchemaJson(std::string_view text) {
  using nlohmann::json;
  json doc = json::parse(text.begin(), text.end(), nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) {
    return MakeError(ErrorKind::kParseError, "malformed table schema");
  }
  auto attributes = doc.find("attributes");
  if (attributes == doc.end() || !attributes->is_array() ||
      attributes->empty()) {
    return MakeError(ErrorKind::kParseError,
                     "table schema needs an 'attributes' array");
  }
  std::vector<std::string> names;
  std::vector<int> sizes;
  for (const json& entry : *attributes) {
    if (!entry.is_object() || !entry.contains("name") ||
        !entry["name"].is_string() || !entry.contains("size") ||
        !entry["size"].is_number_integer()) {
      return MakeError(ErrorKind::kParseError,
                       "attributes entries are {\"name\": ..., \"size\": ...}");
    }
    names.push_back(entry["name"].get<std::string>());
    sizes.push_back(entry["size"].get<int>());
  }
  auto schema = AttributeSchema::Create(std::move(sizes));
  if (!schema.ok()) return schema.status();
  std::optional<std::string> secret;
  if (auto it = doc.find("secret"); it != doc.end() && !it->is_null()) {
    if (!it->is_string()) {
      return MakeError(ErrorKind::kParseError, "'secret' must be a string");
    }
    secret = it->get<std::string>();
  }
  return TableSchema{std::move(names), *std::move(schema), std::move(secret)};
}

absl::StatusOr<DatasetTable> ParseCsvTable(std::string_view text,
                                           const TableSchema& table_schema) {
  std::vector<absl::string_view> lines =
      absl::StrSplit(absl::string_view(text.data(), text.size()), '\n');
  while (!lines.empty() && absl::StripAsciiWhitespace(lines.back()).empty()) {
    lines.pop_back();
  }
  if (lines.empty()) return MakeError(ErrorKind::kParseError, "empty CSV");

  std::vector<std::string> header = SplitCsvLine(lines[0]);
  auto column_of = [&](const std::string& name) {
    for (size_t k = 0; k < header.size(); ++k) {
      if (header[k] == name) return static_cast<int>(k);
    }
    return -1;
  };
  const int m = table_schema.schema.num_attributes();
  std::vector<int> columns;
  for (const std::string& name : table_schema.names) {
    int k = column_of(name);
    if (k < 0) {
      return MakeError(ErrorKind::kSchemaMismatch,
                       absl::StrCat("CSV has no column '", name, "'"));
    }
    columns.push_back(k);
  }
  int secret_col = -1;
  if (table_schema.secret_column.has_value()) {
    secret_col = column_of(*table_schema.secret_column);
  }

  DatasetTable table{table_schema.names, table_schema.schema, {}, std::nullopt};
  if (secret_col >= 0) table.secrets.emplace();
  for (size_t line = 1; line < lines.size(); ++line) {
    if (absl::StripAsciiWhitespace(lines[line]).empty()) continue;
    std::vector<std::string> fields = SplitCsvLine(lines[line]);
    if (fields.size() != header.size()) {
      return MakeError(ErrorKind::kParseError,
                       absl::StrCat("line ", line + 1, " has ", fields.size(),
                                    " fields, header has ", header.size()));
    }
    std::vector<int> row(m);
    for (int j = 0; j < m; ++j) {
      int value = 0;
      if (!absl::SimpleAtoi(fields[columns[j]], &value) || value < 1 ||
          value > table_schema.schema.size(j)) {
        return MakeError(ErrorKind::kOutOfRange,
                         absl::StrCat("line ", line + 1, ": '",
                                      fields[columns[j]], "' is not a symbol "
                                      "of ", table_schema.names[j]));
      }
      row[j] = value - 1;
    }
    table.rows.push_back(std::move(row));
    if (secret_col >= 0) {
      int secret = 0;
      if (!absl::SimpleAtoi(fields[secret_col], &secret) || secret < 1) {
        return MakeError(ErrorKind::kOutOfRange,
                         absl::StrCat("line ", line + 1, ": bad secret '",
                                      fields[secret_col], "'"));
      }
      table.secrets->push_back(secret - 1);
    }
  }
  return table;
}

std::string TableToCsv(const DatasetTable& table) {
  std::string out = absl::StrCat(absl::StrJoin(table.names, ","), "\n");
  for (const std::vector<int>& row : table.rows) {
    absl::StrAppend(&out, absl::StrJoin(row, ",", [](std::string* s, int v) {
                      absl::StrAppend(s, v + 1);
                    }),
                    "\n");
  }
  return out;
}

absl::StatusOr<DatasetTable> SanitizeDatabase(const DatasetTable& table,
                                              const Mechanism& mechanism,
                                              std::uint64_t seed) {
  const AttributeSchema& schema = table.schema;
  if (mechanism.num_inputs() != schema.flat_size()) {
    return MakeError(ErrorKind::kSchemaMismatch,
                     absl::StrCat("mechanism has ", mechanism.num_inputs(),
                                  " inputs, schema has ", schema.flat_size(),
                                  " values"));
  }
  const bool decode = mechanism.num_outputs() == schema.flat_size();
  DatasetTable out{
      decode ? table.names : std::vector<std::string>{"y"},
      decode ? schema : AttributeSchema::Single(mechanism.num_outputs()),
      {},
      std::nullopt,
  };
  out.rows.reserve(table.rows.size());
  Rng rng(seed);
  for (const std::vector<int>& row : table.rows) {
    if (static_cast<int>(row.size()) != schema.num_attributes()) {
      return MakeError(ErrorKind::kSchemaMismatch, "ragged row");
    }
    for (int j = 0; j < schema.num_attributes(); ++j) {
      if (row[j] < 0 || row[j] >= schema.size(j)) {
        return MakeError(ErrorKind::kOutOfRange,
                         absl::StrCat("unknown symbol ", row[j] + 1,
                                      " in attribute ", table.names[j]));
      }
    }
    auto y = Apply(mechanism, schema.Flatten(row), rng);
    if (!y.ok()) return y.status();
    out.rows.push_back(decode ? schema.Unflatten(*y) : std::vector<int>{*y});
  }
  return out;
}

}  // namespace privfunnel
