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

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "json.hpp"
#include "privfunnel/audit.h"
#include "privfunnel/dataset.h"
#include "privfunnel/errors.h"
#include "privfunnel/experiment.h"
#include "privfunnel/json_io.h"
#include "privfunnel/optimizers.h"
#include "privfunnel/polytope.h"
#include "privfunnel/probability.h"

namespace privfunnel::cli {
namespace {

// Writes to `path`, or to `out` when the path is empty or "-".
absl::Status Emit(const std::string& path, const std::string& content,
                  std::ostream& out) {
  if (path.empty() || path == "-") {
    out << content;
    if (!content.empty() && content.back() != '\n') out << '\n';
    return absl::OkStatus();
  }
  return WriteTextFile(path, content);
}

absl::StatusOr<PriorFile> LoadPrior(const std::string& path) {
  auto text = ReadTextFile(path);
  if (!text.ok()) return text.status();
  return ParsePriorJson(*text);
}

absl::StatusOr<AttributeSchema> LoadSchema(const std::string& path) {
  auto text = ReadTextFile(path);
  if (!text.ok()) return text.status();
  return ParseSchemaJson(*text);
}

absl::StatusOr<Mechanism> LoadMechanism(const std::string& path) {
  auto text = ReadTextFile(path);
  if (!text.ok()) return text.status();
  return ParseMechanismJson(*text);
}

// Schema from --schema when given, otherwise from the prior file.
absl::StatusOr<std::optional<AttributeSchema>> ResolveSchema(
    const std::string& schema_path, const PriorFile& prior) {
  if (schema_path.empty()) return prior.schema;
  auto schema = LoadSchema(schema_path);
  if (!schema.ok()) return schema.status();
  return std::optional<AttributeSchema>(*std::move(schema));
}

struct OptimizeArgs {
  std::string notion;
  std::string prior;
  std::string schema;
  double epsilon = 0.0;
  std::vector<double> split;
  std::string out;
  std::string dump_polytope;
};

absl::Status DumpPolytopes(const OptimizeArgs& args, Notion notion,
                           const PriorFile& prior,
                           const std::optional<AttributeSchema>& schema) {
  switch (notion) {
    case Notion::kLdp:
      return WriteTextFile(args.dump_polytope,
                           PolytopeToJson(BuildLdpPolytope(prior.joint,
                                                           args.epsilon)));
    case Notion::kLip:
      return WriteTextFile(args.dump_polytope,
                           PolytopeToJson(BuildLipPolytope(prior.joint,
                                                           args.epsilon)));
    case Notion::kSrlip: {
      const int m = schema->num_attributes();
      nlohmann::json all = nlohmann::json::array();
      for (int j = 0; j < m; ++j) {
        const double budget =
            args.split.empty() ? args.epsilon / m : args.split[j];
        auto polytope = BuildSrlipPolytope(prior.joint, *schema, j, budget);
        if (!polytope.ok()) return polytope.status();
        all.push_back(nlohmann::json::parse(PolytopeToJson(*polytope)));
      }
      return WriteTextFile(args.dump_polytope, all.dump(2));
    }
  }
  return MakeError(ErrorKind::kInternal, "unknown notion");
}

absl::Status RunOptimize(const OptimizeArgs& args, std::ostream& out) {
  auto notion = ParseNotion(args.notion);
  if (!notion.ok()) return notion.status();
  auto prior = LoadPrior(args.prior);
  if (!prior.ok()) return prior.status();
  auto schema = ResolveSchema(args.schema, *prior);
  if (!schema.ok()) return schema.status();
  if (*notion == Notion::kSrlip && !schema->has_value()) {
    return MakeError(ErrorKind::kSchemaMismatch,
                     "SRLIP needs an attribute schema (--schema or \"schema\" "
                     "in the prior)");
  }
  if (!args.split.empty() && *notion != Notion::kSrlip) {
    return MakeError(ErrorKind::kInvalidInput, "--split applies to srlip only");
  }
  if (!args.dump_polytope.empty()) {
    if (*notion == Notion::kSrlip && !args.split.empty() &&
        static_cast<int>(args.split.size()) != (*schema)->num_attributes()) {
      return MakeError(ErrorKind::kInvalidInput,
                       "split length differs from the attribute count");
    }
    if (absl::Status s = DumpPolytopes(args, *notion, *prior, *schema);
        !s.ok()) {
      return s;
    }
  }

  const EnumerationOptions options = EnumerationOptions::FromEnvironment();
  absl::StatusOr<OptimizationResult> result;
  switch (*notion) {
    case Notion::kLdp:
      result = OptimizeLdp(prior->joint, args.epsilon, options);
      break;
    case Notion::kLip:
      result = OptimizeLip(prior->joint, args.epsilon, options);
      break;
    case Notion::kSrlip:
      result = OptimizeSrlip(prior->joint, **schema, args.epsilon, args.split,
                             options);
      break;
  }
  if (!result.ok()) return result.status();
  return Emit(args.out, ResultToJson(*result), out);
}

struct AuditArgs {
  std::string prior;
  std::string mechanism;
  std::string schema;
};

absl::Status RunAudit(const AuditArgs& args, std::ostream& out) {
  auto prior = LoadPrior(args.prior);
  if (!prior.ok()) return prior.status();
  auto mechanism = LoadMechanism(args.mechanism);
  if (!mechanism.ok()) return mechanism.status();
  auto schema = ResolveSchema(args.schema, *prior);
  if (!schema.ok()) return schema.status();
  auto report = AuditReport(*mechanism, prior->joint, *schema);
  if (!report.ok()) return report.status();
  return Emit("", ReportToJson(*report), out);
}

struct SanitizeArgs {
  std::string input;
  std::string schema;
  std::string mechanism;
  std::uint64_t seed = 0;
  std::string out;
};

absl::Status RunSanitize(const SanitizeArgs& args, std::ostream& out) {
  auto schema_text = ReadTextFile(args.schema);
  if (!schema_text.ok()) return schema_text.status();
  auto table_schema = ParseTableSchemaJson(*schema_text);
  if (!table_schema.ok()) return table_schema.status();
  auto csv = ReadTextFile(args.input);
  if (!csv.ok()) return csv.status();
  auto table = ParseCsvTable(*csv, *table_schema);
  if (!table.ok()) return table.status();
  auto mechanism = LoadMechanism(args.mechanism);
  if (!mechanism.ok()) return mechanism.status();
  auto sanitized = SanitizeDatabase(*table, *mechanism, args.seed);
  if (!sanitized.ok()) return sanitized.status();
  return Emit(args.out, TableToCsv(*sanitized), out);
}

struct ExperimentArgs {
  std::string config;
  std::string out;
  std::string aggregate;
};

absl::Status RunExperimentCommand(const ExperimentArgs& args,
                                  std::ostream& out) {
  auto text = ReadTextFile(args.config);
  if (!text.ok()) return text.status();
  auto config = ParseExperimentConfigJson(*text);
  if (!config.ok()) return config.status();
  // The environment guard applies unless the config sets its own.
  if (!nlohmann::json::parse(*text, nullptr, false).contains("max_dimension")) {
    config->enumeration = EnumerationOptions::FromEnvironment();
  }
  auto rows = RunExperiment(*config);
  if (!rows.ok()) return rows.status();
  if (absl::Status s = Emit(args.out, ExperimentCsv(*rows), out); !s.ok()) {
    return s;
  }
  if (!args.aggregate.empty()) {
    return WriteTextFile(args.aggregate, AggregateCsv(*rows));
  }
  return absl::OkStatus();
}

struct GenPriorArgs {
  int c = 2;
  int a = 0;
  std::vector<int> sizes;
  std::uint64_t seed = 0;
  std::string out;
};

absl::Status RunGenPrior(const GenPriorArgs& args, std::ostream& out) {
  if (args.c < 2) {
    return MakeError(ErrorKind::kInvalidInput, "--c must be at least 2");
  }
  std::optional<AttributeSchema> schema;
  int a = args.a;
  if (!args.sizes.empty()) {
    auto parsed = AttributeSchema::Create(args.sizes);
    if (!parsed.ok()) return parsed.status();
    schema = *std::move(parsed);
    a = schema->flat_size();
  }
  if (a < 2) {
    return MakeError(ErrorKind::kInvalidInput,
                     "give --a of at least 2 or --sizes");
  }
  const JointDistribution joint = RandomJoint(args.c, a, args.seed);
  return Emit(args.out, PriorToJson(joint, schema), out);
}

}  // namespace

int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err) {
  CLI::App app{"Privacy-constrained local mechanism design and auditing",
               "privfunnel"};
  app.require_subcommand(1);

  OptimizeArgs optimize_args;
  CLI::App* optimize =
      app.add_subcommand("optimize", "Compute an optimal mechanism");
  optimize->add_option("--notion", optimize_args.notion, "ldp, lip or srlip")
      ->required();
  optimize->add_option("--prior", optimize_args.prior, "Prior JSON file")
      ->required();
  optimize->add_option("--epsilon", optimize_args.epsilon, "Privacy budget")
      ->required();
  optimize->add_option("--schema", optimize_args.schema,
                       "Attribute schema JSON (overrides the prior's)");
  optimize->add_option("--split", optimize_args.split,
                       "Per-attribute SRLIP budgets, comma separated")
      ->delimiter(',');
  optimize->add_option("--out", optimize_args.out,
                       "Result JSON file (default: stdout)");
  optimize->add_option("--dump-polytope", optimize_args.dump_polytope,
                       "Write the constraint polytope(s) as JSON");

  AuditArgs audit_args;
  CLI::App* audit = app.add_subcommand("audit", "Measure leakage of a mechanism");
  audit->add_option("--prior", audit_args.prior, "Prior JSON file")->required();
  audit->add_option("--mechanism", audit_args.mechanism,
                    "Mechanism or result JSON file")
      ->required();
  audit->add_option("--schema", audit_args.schema,
                    "Attribute schema JSON; enables the SRLIP audit");

  SanitizeArgs sanitize_args;
  CLI::App* sanitize =
      app.add_subcommand("sanitize", "Apply a mechanism to every table row");
  sanitize->add_option("--input", sanitize_args.input, "Input CSV")->required();
  sanitize->add_option("--schema", sanitize_args.schema, "Table schema JSON")
      ->required();
  sanitize->add_option("--mechanism", sanitize_args.mechanism,
                       "Mechanism or result JSON file")
      ->required();
  sanitize->add_option("--seed", sanitize_args.seed, "Sampling seed");
  sanitize->add_option("--out", sanitize_args.out,
                       "Output CSV (default: stdout)");

  ExperimentArgs experiment_args;
  CLI::App* experiment =
      app.add_subcommand("experiment", "Run a randomized comparison");
  experiment->add_option("--config", experiment_args.config,
                         "Experiment config JSON")
      ->required();
  experiment->add_option("--out", experiment_args.out,
                         "Per-run CSV (default: stdout)");
  experiment->add_option("--aggregate", experiment_args.aggregate,
                         "Aggregate CSV for plotting");

  GenPriorArgs gen_args;
  CLI::App* gen_prior =
      app.add_subcommand("gen-prior", "Draw a random prior p_{S,X}");
  gen_prior->add_option("--c", gen_args.c, "Number of secrets");
  CLI::Option* a_option =
      gen_prior->add_option("--a", gen_args.a, "Alphabet size");
  gen_prior->add_option("--sizes", gen_args.sizes,
                        "Attribute sizes, comma separated")
      ->delimiter(',')
      ->excludes(a_option);
  gen_prior->add_option("--seed", gen_args.seed, "Generator seed");
  gen_prior->add_option("--out", gen_args.out,
                        "Prior JSON file (default: stdout)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "error: Usage: " << e.what() << "\n";
    return 2;
  }

  absl::Status status;
  if (optimize->parsed()) {
    status = RunOptimize(optimize_args, out);
  } else if (audit->parsed()) {
    status = RunAudit(audit_args, out);
  } else if (sanitize->parsed()) {
    status = RunSanitize(sanitize_args, out);
  } else if (experiment->parsed()) {
    status = RunExperimentCommand(experiment_args, out);
  } else if (gen_prior->parsed()) {
    status = RunGenPrior(gen_args, out);
  }
  if (!status.ok()) {
    err << "error: " << status.message() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace privfunnel::cli
