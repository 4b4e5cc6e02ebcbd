#pragma once

#include <json.hpp>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rvnli/formaliser/formaliser.hpp"
#include "rvnli/llm/client.hpp"
#include "rvnli/metrics/dataset.hpp"
#include "rvnli/metrics/metrics.hpp"
#include "rvnli/prover/prover.hpp"
#include "rvnli/verify/verify.hpp"

namespace rvnli::metrics {

struct RunConfig {
  std::string name;
  std::string dataset;
  Format format = Format::GenericJsonl;
  bool refinement_mode = true;
  // fixture | http
  std::string client = "fixture";
  std::string fixtures = "fixtures/llm";
  // Also store every answer under this directory (fixture layout).
  std::string record;
  llm::HttpConfig http;
  bool serialize_llm = false;
  // builtin | external
  std::string prover = "builtin";
  std::string prover_command;
  prover::ProverBudget budget;
  verify::Caps caps;
  std::string scorer = "lexical";
  std::string scorer_endpoint;
  double threshold = 0.9;
  formaliser::EventQuantifier event_quantifier = formaliser::EventQuantifier::Paper;
  std::string out;
  std::string emit_theories;
  int workers = 1;

  // Throws ConfigError on unknown keys or bad values.
  static RunConfig from_json(const nlohmann::json& j);
  static RunConfig load(const std::string& path);
  void validate() const;
};

struct StageTimings {
  double tree = 0, atomize = 0, formalise = 0, verify = 0, certificate = 0;
};

struct InstanceRow {
  std::string id;
  Label label = Label::Entailment;
  std::optional<int> gold_depth;
  // Unknown-labelled instances are carried but not verified.
  bool evaluated = true;
  bool init_valid = false;
  bool fin_valid = false;
  int iterations = 0;
  double runtime = 0;
  StageTimings timings;
  ErrorType error_type = ErrorType::None;
  std::optional<double> faithfulness;
  std::optional<int> used_depth;
  bool certificate_valid = false;
  bool certificate_reverified = false;
  std::string note;
};

struct Aggregate {
  std::size_t instances = 0;
  std::size_t evaluated = 0;
  std::size_t init_valid = 0;
  std::size_t fin_valid = 0;
  double init_rate = 0, fin_rate = 0;
  double mean_iterations = 0;
  std::optional<double> mean_faithfulness;
  std::map<std::string, std::size_t> error_types;
  double total_runtime = 0;

  friend bool operator==(const Aggregate&, const Aggregate&) = default;
};

Aggregate aggregate(const std::vector<InstanceRow>& rows);

struct RunReport {
  std::string dataset;
  std::vector<InstanceRow> rows;
  Aggregate totals;
  std::size_t dropped_unknown = 0;
  // Failures that are not verification outcomes.
  std::vector<std::string> internal_errors;

  std::vector<DepthRecord> depth_records() const;
};

nlohmann::json to_json(const InstanceRow& r);
nlohmann::json to_json(const Aggregate& a);
nlohmann::json to_json(const RunReport& r);

struct RunOutputs {
  // Per instance, in row order.
  std::vector<std::string> events;
  std::map<std::string, nlohmann::json> certificates;
};

// One instance through tree → atomize → formalise → verify_tree → metrics.
InstanceRow run_instance(const DatasetInstance& instance, const RunConfig& config, llm::LlmClient& llm,
                         const prover::Prover& prover, std::string* events = nullptr,
                         nlohmann::json* certificate = nullptr);

// Ingests, runs every instance and writes the outputs under config.out (when set).
// `client` overrides the configured client.
RunReport run(const RunConfig& config, llm::LlmClient* client = nullptr);

// Writes report.json, instances.csv, aggregate.csv, depth_alignment.csv, error_types.csv, events.jsonl, certificates/.
void write_outputs(const RunReport& report, const RunOutputs& outputs, const std::string& dir);

}  // namespace rvnli::metrics
