#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include "rvnli/error.hpp"
#include "rvnli/formaliser/formaliser.hpp"
#include "rvnli/llm/client.hpp"
#include "rvnli/logic/render.hpp"
#include "rvnli/metrics/harness.hpp"
#include "rvnli/prover/export.hpp"
#include "rvnli/prover/prover.hpp"

using namespace rvnli;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

struct RunArgs {
  std::string config, dataset, format, client, fixtures, record, prover, prover_command, budget, caps, out, emit, events,
      scorer;
  int workers = 0;
  double threshold = -1;
  bool keep_unknown = false;
};

int cmd_run(const RunArgs& a) {
  auto c = a.config.empty() ? metrics::RunConfig{} : metrics::RunConfig::load(a.config);
  if (!a.dataset.empty()) c.dataset = a.dataset;
  if (!a.format.empty()) c.format = metrics::format_from_string(a.format);
  if (!a.client.empty()) c.client = a.client;
  if (!a.fixtures.empty()) c.fixtures = a.fixtures;
  if (!a.record.empty()) c.record = a.record;
  if (!a.prover.empty()) c.prover = a.prover;
  if (!a.prover_command.empty()) c.prover_command = a.prover_command;
  if (!a.budget.empty()) c.budget = prover::ProverBudget::parse(a.budget);
  if (!a.caps.empty()) c.caps = verify::Caps::parse(a.caps);
  if (!a.out.empty()) c.out = a.out;
  if (!a.emit.empty()) c.emit_theories = a.emit;
  if (!a.scorer.empty()) c.scorer = a.scorer;
  if (!a.events.empty()) {
    auto q = formaliser::event_quantifier_from_string(a.events);
    if (!q) throw ConfigError("event quantifier must be paper or existential");
    c.event_quantifier = *q;
  }
  if (a.workers > 0) c.workers = a.workers;
  if (a.threshold >= 0) c.threshold = a.threshold;
  if (a.keep_unknown) c.refinement_mode = false;
  if (c.dataset.empty()) throw ConfigError("no dataset given (--dataset or the config file)");
  c.validate();

  auto report = metrics::run(c);
  const auto& t = report.totals;
  std::printf("%s: %zu instances (%zu evaluated, %zu unknown dropped)\n", c.dataset.c_str(), t.instances, t.evaluated,
              report.dropped_unknown);
  std::printf("Init. %zu (%.2f)  Fin. %zu (%.2f)  mean iterations %.2f  runtime %.2f s\n", t.init_valid, t.init_rate,
              t.fin_valid, t.fin_rate, t.mean_iterations, t.total_runtime);
  if (t.mean_faithfulness) std::printf("faithfulness %.3f\n", *t.mean_faithfulness);
  for (const auto& e : report.internal_errors) std::fprintf(stderr, "internal error: %s\n", e.c_str());
  if (!c.out.empty()) std::printf("outputs in %s\n", c.out.c_str());
  return report.internal_errors.empty() ? 0 : 3;
}

int cmd_prove(const std::string& path, const std::string& budget, const std::string& command, const std::string& export_to) {
  auto text = slurp(path);
  auto theory = ends_with(path, ".thy") ? prover::parse_isabelle(text) : prover::parse_tptp(text);
  if (export_to == "isabelle") {
    std::cout << prover::export_isabelle(theory);
    return 0;
  }
  if (export_to == "tptp") {
    std::cout << prover::export_tptp(theory);
    return 0;
  }
  if (!export_to.empty()) throw ConfigError("--export takes isabelle or tptp");
  std::unique_ptr<prover::Prover> p;
  if (command.empty())
    p = std::make_unique<prover::BuiltinProver>();
  else
    p = std::make_unique<prover::ExternalProver>(command);
  auto o = p->prove(theory, prover::ProverBudget::parse(budget));
  std::cout << theory.name << ": " << prover::to_string(o.status) << "\n";
  if (o.proved()) {
    std::cout << "used:";
    for (const auto& a : o.used_axioms) std::cout << " " << a;
    std::cout << "\ndepth: " << o.depth << "\n";
  }
  if (o.diagnostics.countermodel) std::cout << "countermodel:\n" << o.diagnostics.countermodel->describe() << "\n";
  if (!o.diagnostics.resource_note.empty()) std::cout << "note: " << o.diagnostics.resource_note << "\n";
  return o.proved() ? 0 : 1;
}

int cmd_formalise(const std::string& sentence, const std::string& config_path, const std::string& client,
                  const std::string& fixtures, const std::string& events) {
  auto c = config_path.empty() ? metrics::RunConfig{} : metrics::RunConfig::load(config_path);
  if (!client.empty()) c.client = client;
  if (!fixtures.empty()) c.fixtures = fixtures;
  formaliser::FormaliserOptions options;
  options.event_quantifier = c.event_quantifier;
  if (!events.empty()) {
    auto q = formaliser::event_quantifier_from_string(events);
    if (!q) throw ConfigError("event quantifier must be paper or existential");
    options.event_quantifier = *q;
  }
  std::unique_ptr<llm::LlmClient> llm;
  if (c.client == "http")
    llm = std::make_unique<llm::HttpClient>(c.http);
  else
    llm = std::make_unique<llm::FixtureClient>(c.fixtures);
  auto trace = formaliser::formalise(sentence, *llm, options);
  std::cout << "template: " << logic::render_formula(trace.template_formula) << "\n";
  for (const auto& s : trace.stages) {
    std::cout << formaliser::to_string(s.stage) << ": " << logic::render_formula(s.result) << "\n";
    for (const auto& w : s.warnings) std::cout << "  warning: " << w << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Recursively verifiable NLI: entailment trees, theta-substitution formalisation, local refinement"};
  app.require_subcommand(1);

  RunArgs ra;
  auto* run = app.add_subcommand("run", "Run the pipeline over a dataset and write the report");
  run->add_option("--config", ra.config, "JSON run configuration; flags override it");
  run->add_option("--dataset", ra.dataset, "Dataset file");
  run->add_option("--format", ra.format, "generic-jsonl | proofwriter | prontoqa | folio | entailmentbank");
  run->add_option("--client", ra.client, "fixture | http");
  run->add_option("--fixtures", ra.fixtures, "Directory of recorded LLM answers");
  run->add_option("--record", ra.record, "Also store every LLM answer under this directory");
  run->add_option("--prover", ra.prover, "builtin | external");
  run->add_option("--prover-command", ra.prover_command, "External prover command with {file} and {seconds}");
  run->add_option("--prover-budget", ra.budget, "e.g. clauses=50000,seconds=5,domain=4");
  run->add_option("--caps", ra.caps, "e.g. iterations=5,k=2,reopen=0");
  run->add_option("--out", ra.out, "Output directory");
  run->add_option("--emit-theories", ra.emit, "Write a .thy and a .p file per obligation here");
  run->add_option("--event-quantifier", ra.events, "paper | existential");
  run->add_option("--scorer", ra.scorer, "lexical | http");
  run->add_option("--threshold", ra.threshold, "Atom entailment threshold");
  run->add_option("--workers", ra.workers, "Parallel instances");
  run->add_flag("--keep-unknown", ra.keep_unknown, "Keep unknown-labelled instances (not evaluated)");

  std::string theory_path, budget, command, export_to;
  auto* prove = app.add_subcommand("prove", "Prove a TPTP (.p) or Isabelle (.thy) theory");
  prove->add_option("theory", theory_path, "Theory file")->required();
  prove->add_option("--prover-budget", budget, "e.g. seconds=5,domain=4");
  prove->add_option("--prover-command", command, "External prover command with {file} and {seconds}");
  prove->add_option("--export", export_to, "Print the theory as isabelle or tptp instead of proving");

  std::string sentence, fconfig, fclient, ffixtures, fevents;
  auto* form = app.add_subcommand("formalise", "Show the theta-substitution stages for one sentence");
  form->add_option("sentence", sentence, "Sentence")->required();
  form->add_option("--config", fconfig, "JSON run configuration (client settings)");
  form->add_option("--client", fclient, "fixture | http");
  form->add_option("--fixtures", ffixtures, "Directory of recorded LLM answers");
  form->add_option("--event-quantifier", fevents, "paper | existential");

  CLI11_PARSE(app, argc, argv);
  try {
    if (*run) return cmd_run(ra);
    if (*prove) return cmd_prove(theory_path, budget, command, export_to);
    if (*form) return cmd_formalise(sentence, fconfig, fclient, ffixtures, fevents);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "rvnli: %s\n", e.what());
    return 2;
  }
  return 0;
}
