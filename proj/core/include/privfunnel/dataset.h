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

#ifndef PRIVFUNNEL_DATASET_H_
#define PRIVFUNNEL_DATASET_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "privfunnel/mechanism.h"
#include "privfunnel/probability.h"

namespace privfunnel {

// Sidecar describing an integer-coded CSV:
//   {"attributes": [{"name": "height", "size": 3}, ...], "secret": "obese"}
// The secret column is optional and only ever read, never written.
struct TableSchema {
  std::vector<std::string> names;
  AttributeSchema schema;
  std::optional<std::string> secret_column;
};

absl::StatusOr<TableSchema> ParseTableSchemaJson(std::string_view text);

// Rows hold 0-based attribute values; the CSV coding is 1-based.
struct DatasetTable {
  std::vector<std::string> names;
  AttributeSchema schema;
  std::vector<std::vector<int>> rows;
  std::optional<std::vector<int>> secrets;  // synthetic evaluation only
};

// Columns are matched by header name; their order in the file is free.
absl::StatusOr<DatasetTable> ParseCsvTable(std::string_view text,
                                           const TableSchema& table_schema);

// Attribute columns only, 1-based values. The secret column is never written.
std::string TableToCsv(const DatasetTable& table);

// Applies the mechanism to every row's flat value with one generator seeded
// by `seed`. Row order is preserved and the secret column is dropped. When
// the mechanism has as many outputs as the schema has values, outputs are
// decoded back into the input columns; otherwise the table has a single
// column "y".
absl::StatusOr<DatasetTable> SanitizeDatabase(const DatasetTable& table,
                                              const Mechanism& mechanism,
                                              std::uint64_t seed);

}  // namespace privfunnel

#endif  // PRIVFUNNEL_DATASET_H_
