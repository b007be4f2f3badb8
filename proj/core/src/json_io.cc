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

#include "privfunnel/json_io.h"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <utility>
#include <vector>

#include "absl/strings/str_cat.h"
#include "json.hpp"
#include "privfunnel/errors.h"
#include "privfunnel/polytope.h"

namespace privfunnel {
namespace {

using nlohmann::json;

absl::StatusOr<json> Parse(std::string_view text) {
  json doc = json::parse(text.begin(), text.end(), nullptr,
                         /*allow_exceptions=*/false);
  if (doc.is_discarded()) {
    return MakeError(ErrorKind::kParseError, "malformed JSON");
  }
  if (!doc.is_object()) {
    return MakeError(ErrorKind::kParseError, "expected a JSON object");
  }
  return doc;
}

absl::StatusOr<int> GetInt(const json& doc, const char* key) {
  auto it = doc.find(key);
  if (it == doc.end() || !it->is_number_integer()) {
    return MakeError(ErrorKind::kParseError,
                     absl::StrCat("missing integer field '", key, "'"));
  }
  return it->get<int>();
}

absl::StatusOr<Eigen::MatrixXd> GetMatrix(const json& doc, const char* key,
                                          int rows, int cols) {
  auto it = doc.find(key);
  if (it == doc.end() || !it->is_array()) {
    return MakeError(ErrorKind::kParseError,
                     absl::StrCat("field '", key, "' must be an array of rows"));
  }
  if (static_cast<int>(it->size()) != rows) {
    return MakeError(ErrorKind::kDimensionMismatch,
                     absl::StrCat("field '", key, "' has ", it->size(),
                                  " rows, expected ", rows));
  }
  Eigen::MatrixXd m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    const json& row = (*it)[i];
    if (!row.is_array()) {
      return MakeError(ErrorKind::kParseError,
                       absl::StrCat("row ", i, " of '", key, "' is not an array"));
    }
    if (static_cast<int>(row.size()) != cols) {
      return MakeError(ErrorKind::kDimensionMismatch,
                       absl::StrCat("row ", i, " of '", key, "' must hold ",
                                    cols, " numbers"));
    }
    for (int j = 0; j < cols; ++j) {
      if (!row[j].is_number()) {
        return MakeError(ErrorKind::kParseError,
                         absl::StrCat("non-numeric entry in '", key, "'"));
      }
      m(i, j) = row[j].get<double>();
    }
  }
  return m;
}

absl::StatusOr<AttributeSchema> SchemaFromJson(const json& doc) {
  auto it = doc.find("sizes");
  if (it == doc.end() || !it->is_array() || it->empty()) {
    return MakeError(ErrorKind::kParseError, "schema needs a 'sizes' array");
  }
  std::vector<int> sizes;
  for (const json& v : *it) {
    if (!v.is_number_integer()) {
      return MakeError(ErrorKind::kParseError, "sizes must be integers");
    }
    sizes.push_back(v.get<int>());
  }
  return AttributeSchema::Create(std::move(sizes));
}

json MatrixToJson(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

json Measure(double value) {
  if (std::isinf(value)) return "inf";
  return value;
}

json MechanismObject(const Mechanism& mechanism) {
  json doc;
  doc["a"] = mechanism.num_inputs();
  doc["b"] = mechanism.num_outputs();
  doc["Q"] = MatrixToJson(mechanism.matrix());
  return doc;
}

json ConstraintsToJson(const Eigen::MatrixXd& coeffs,
                       const Eigen::VectorXd& rhs) {
  json out = json::array();
  for (Eigen::Index i = 0; i < rhs.size(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < coeffs.cols(); ++j) row.push_back(coeffs(i, j));
    out.push_back(json::array({std::move(row), rhs[i]}));
  }
  return out;
}

absl::Status ConstraintsFromJson(const json& doc, const char* key, int dim,
                                 Eigen::MatrixXd& coeffs,
                                 Eigen::VectorXd& rhs) {
  coeffs.resize(0, dim);
  rhs.resize(0);
  auto it = doc.find(key);
  if (it == doc.end()) return absl::OkStatus();
  if (!it->is_array()) {
    return MakeError(ErrorKind::kParseError,
                     absl::StrCat("'", key, "' must be an array"));
  }
  coeffs.resize(it->size(), dim);
  rhs.resize(it->size());
  for (size_t i = 0; i < it->size(); ++i) {
    const json& entry = (*it)[i];
    if (!entry.is_array() || entry.size() != 2 || !entry[0].is_array() ||
        static_cast<int>(entry[0].size()) != dim || !entry[1].is_number()) {
      return MakeError(ErrorKind::kParseError,
                       absl::StrCat("'", key, "' entries are [coeffs, rhs]"));
    }
    for (int j = 0; j < dim; ++j) {
      if (!entry[0][j].is_number()) {
        return MakeError(ErrorKind::kParseError, "non-numeric coefficient");
      }
      coeffs(i, j) = entry[0][j].get<double>();
    }
    rhs[i] = entry[1].get<double>();
  }
  return absl::OkStatus();
}

}  // namespace

absl::StatusOr<PriorFile> ParsePriorJson(std::string_view text) {
  auto doc = Parse(text);
  if (!doc.ok()) return doc.status();
  auto c = GetInt(*doc, "c");
  if (!c.ok()) return c.status();
  auto a = GetInt(*doc, "a");
  if (!a.ok()) return a.status();
  if (*c < 1 || *a < 1) {
    return MakeError(ErrorKind::kParseError, "c and a must be positive");
  }
  auto p = GetMatrix(*doc, "p", *c, *a);
  if (!p.ok()) return p.status();
  auto joint = JointDistribution::Create(*std::move(p));
  if (!joint.ok()) return joint.status();
  std::optional<AttributeSchema> schema;
  if (auto it = doc->find("schema"); it != doc->end() && !it->is_null()) {
    auto parsed = SchemaFromJson(*it);
    if (!parsed.ok()) return parsed.status();
    if (parsed->flat_size() != *a) {
      return MakeError(ErrorKind::kSchemaMismatch,
                       absl::StrCat("schema sizes multiply to ",
                                    parsed->flat_size(), ", a is ", *a));
    }
    schema = *std::move(parsed);
  }
  return PriorFile{*std::move(joint), std::move(schema)};
}

std::string PriorToJson(const JointDistribution& joint,
                        const std::optional<AttributeSchema>& schema) {
  json doc;
  doc["c"] = joint.num_secrets();
  doc["a"] = joint.num_values();
  doc["p"] = MatrixToJson(joint.matrix());
  if (schema.has_value()) doc["schema"] = {{"sizes", schema->sizes()}};
  return doc.dump(2);
}

absl::StatusOr<Mechanism> ParseMechanismJson(std::string_view text) {
  auto doc = Parse(text);
  if (!doc.ok()) return doc.status();
  auto a = GetInt(*doc, "a");
  if (!a.ok()) return a.status();
  auto b = GetInt(*doc, "b");
  if (!b.ok()) return b.status();
  if (*a < 1 || *b < 1) {
    return MakeError(ErrorKind::kParseError, "a and b must be positive");
  }
  auto q = GetMatrix(*doc, "Q", *b, *a);
  if (!q.ok()) return q.status();
  return Mechanism::Create(*std::move(q));
}

std::string MechanismToJson(const Mechanism& mechanism) {
  return MechanismObject(mechanism).dump(2);
}

absl::StatusOr<AttributeSchema> ParseSchemaJson(std::string_view text) {
  auto doc = Parse(text);
  if (!doc.ok()) return doc.status();
  return SchemaFromJson(*doc);
}

std::string ResultToJson(const OptimizationResult& result) {
  json doc = MechanismObject(result.mechanism);
  doc["utility_nats"] = result.utility;
  doc["epsilon"] = Measure(result.epsilon);
  doc["notion"] = std::string(NotionName(result.notion));
  doc["vertex_count"] = result.total_vertex_count();
  doc["time_ms"] = result.time_ms;
  json polytopes = json::array();
  for (const PolytopeStats& s : result.polytopes) {
    polytopes.push_back({{"dimension", s.dimension},
                         {"inequalities", s.num_inequalities},
                         {"vertices", s.vertex_count}});
  }
  json diagnostics;
  diagnostics["polytopes"] = std::move(polytopes);
  if (!result.split.empty()) diagnostics["split"] = result.split;
  if (!result.factors.empty()) {
    json factors = json::array();
    for (const Mechanism& f : result.factors) {
      factors.push_back(MechanismObject(f));
    }
    diagnostics["factors"] = std::move(factors);
  }
  diagnostics["raw_mechanism"] = MechanismObject(result.raw_mechanism);
  doc["diagnostics"] = std::move(diagnostics);
  return doc.dump(2);
}

std::string ReportToJson(const PrivacyReport& report) {
  json doc;
  doc["eps_ldp"] = Measure(report.eps_ldp);
  doc["eps_lip"] = Measure(report.eps_lip);
  doc["eps_srlip"] =
      report.eps_srlip.has_value() ? Measure(*report.eps_srlip) : json(nullptr);
  doc["mi_sy"] = report.mi_sy;
  doc["mi_xy"] = report.mi_xy;
  json flags;
  flags["lip_within_ldp"] = report.lemma_flags.lip_within_ldp;
  flags["ldp_within_twice_lip"] = report.lemma_flags.ldp_within_twice_lip;
  flags["mi_within_lip"] = report.lemma_flags.mi_within_lip;
  flags["lip_within_srlip"] =
      report.lemma_flags.lip_within_srlip.has_value()
          ? json(*report.lemma_flags.lip_within_srlip)
          : json(nullptr);
  doc["lemma_flags"] = std::move(flags);
  doc["notes"] = json::array(
      {"outputs with P(y) = 0 are excluded from every maximum",
       "SRLIP contexts are restricted to P(x^J) > 0"});
  return doc.dump(2);
}

absl::StatusOr<ExperimentConfig> ParseExperimentConfigJson(
    std::string_view text) {
  auto doc = Parse(text);
  if (!doc.ok()) return doc.status();
  ExperimentConfig config;
  auto c = GetInt(*doc, "c");
  if (!c.ok()) return c.status();
  config.num_secrets = *c;
  if (doc->contains("sizes")) {
    auto schema = SchemaFromJson(*doc);
    if (!schema.ok()) return schema.status();
    config.sizes = schema->sizes();
  } else {
    auto a = GetInt(*doc, "a");
    if (!a.ok()) return a.status();
    config.sizes = {*a};
  }
  auto eps = doc->find("epsilons");
  if (eps == doc->end() || !eps->is_array()) {
    return MakeError(ErrorKind::kParseError, "missing 'epsilons' array");
  }
  for (const json& e : *eps) {
    if (!e.is_number()) {
      return MakeError(ErrorKind::kParseError, "epsilons must be numbers");
    }
    config.epsilons.push_back(e.get<double>());
  }
  if (doc->contains("trials")) {
    auto trials = GetInt(*doc, "trials");
    if (!trials.ok()) return trials.status();
    config.trials = *trials;
  }
  if (auto it = doc->find("seed"); it != doc->end()) {
    if (!it->is_number_unsigned() && !it->is_number_integer()) {
      return MakeError(ErrorKind::kParseError, "seed must be an integer");
    }
    config.seed = it->get<std::uint64_t>();
  }
  auto notions = doc->find("notions");
  if (notions == doc->end() || !notions->is_array()) {
    return MakeError(ErrorKind::kParseError, "missing 'notions' array");
  }
  for (const json& n : *notions) {
    if (!n.is_string()) {
      return MakeError(ErrorKind::kParseError, "notions must be strings");
    }
    auto notion = ParseNotion(n.get<std::string>());
    if (!notion.ok()) return notion.status();
    config.notions.push_back(*notion);
  }
  if (auto it = doc->find("record_time"); it != doc->end()) {
    if (!it->is_boolean()) {
      return MakeError(ErrorKind::kParseError, "record_time must be boolean");
    }
    config.record_time = it->get<bool>();
  }
  if (auto it = doc->find("max_dimension"); it != doc->end()) {
    if (!it->is_number_integer()) {
      return MakeError(ErrorKind::kParseError,
                       "max_dimension must be an integer");
    }
    config.enumeration.max_dimension = it->get<int>();
  }
  if (absl::Status s = config.Validate(); !s.ok()) return s;
  return config;
}

std::string PolytopeToJson(const HPolytope& polytope) {
  json doc;
  doc["dim"] = polytope.dim;
  doc["eq"] = ConstraintsToJson(polytope.eq_coeffs, polytope.eq_rhs);
  doc["ineq"] = ConstraintsToJson(polytope.ineq_coeffs, polytope.ineq_rhs);
  return doc.dump(2);
}

absl::StatusOr<HPolytope> PolytopeFromJson(const std::string& text) {
  auto doc = Parse(text);
  if (!doc.ok()) return doc.status();
  auto dim = GetInt(*doc, "dim");
  if (!dim.ok()) return dim.status();
  if (*dim < 1) return MakeError(ErrorKind::kParseError, "dim must be >= 1");
  HPolytope polytope = HPolytope::Empty(*dim);
  if (absl::Status s = ConstraintsFromJson(*doc, "eq", *dim,
                                           polytope.eq_coeffs, polytope.eq_rhs);
      !s.ok()) {
    return s;
  }
  if (absl::Status s =
          ConstraintsFromJson(*doc, "ineq", *dim, polytope.ineq_coeffs,
                              polytope.ineq_rhs);
      !s.ok()) {
    return s;
  }
  return polytope;
}

absl::StatusOr<std::string> ReadTextFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    return MakeError(ErrorKind::kIoError, absl::StrCat("cannot open ", path));
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

absl::Status WriteTextFile(const std::string& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    return MakeError(ErrorKind::kIoError, absl::StrCat("cannot write ", path));
  }
  out << content;
  if (!out) {
    return MakeError(ErrorKind::kIoError, absl::StrCat("write failed: ", path));
  }
  return absl::OkStatus();
}

}  // namespace privfunnel
