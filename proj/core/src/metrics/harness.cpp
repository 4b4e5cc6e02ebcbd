#include "rvnli/metrics/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include "rvnli/atomizer/atomizer.hpp"
#include "rvnli/error.hpp"
#include "rvnli/logic/render.hpp"
#include "rvnli/prover/export.hpp"
#include "rvnli/tree/tree.hpp"

namespace rvnli::metrics {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

double since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

template <class T>
T get(const json& j, const char* key, T fallback) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return fallback;
  try {
    return it->get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string("config: bad value for '") + key + "'");
  }
}

}  // namespace

RunConfig RunConfig::from_json(const json& j) {
  static const std::vector<std::string> known{
      "name",  "dataset", "format",       "refinement_mode", "client",        "fixtures",  "record",
      "http",  "serialize_llm", "prover", "prover_command",  "prover_budget", "caps",      "scorer",
      "scorer_endpoint", "threshold", "event_quantifier", "out", "emit_theories", "workers"};
  if (!j.is_object()) throw ConfigError("config: expected a JSON object");
  for (const auto& [k, v] : j.items())
    if (std::find(known.begin(), known.end(), k) == known.end()) throw ConfigError("config: unknown key '" + k + "'");
  RunConfig c;
  c.name = get<std::string>(j, "name", "");
  c.dataset = get<std::string>(j, "dataset", "");
  try {
    c.format = format_from_string(get<std::string>(j, "format", "generic-jsonl"));
  } catch (const UnknownFormat& e) {
    throw ConfigError(e.what());
  }
  c.refinement_mode = get<bool>(j, "refinement_mode", true);
  c.client = get<std::string>(j, "client", c.client);
  c.fixtures = get<std::string>(j, "fixtures", c.fixtures);
  c.record = get<std::string>(j, "record", "");
  if (j.contains("http")) c.http = llm::HttpConfig::from_json(j["http"]);
  c.serialize_llm = get<bool>(j, "serialize_llm", false);
  c.prover = get<std::string>(j, "prover", c.prover);
  c.prover_command = get<std::string>(j, "prover_command", "");
  try {
    c.budget = prover::ProverBudget::parse(get<std::string>(j, "prover_budget", ""));
  } catch (const BudgetInvalid& e) {
    throw ConfigError(e.what());
  }
  c.caps = verify::Caps::parse(get<std::string>(j, "caps", ""));
  c.scorer = get<std::string>(j, "scorer", c.scorer);
  c.scorer_endpoint = get<std::string>(j, "scorer_endpoint", "");
  c.threshold = get<double>(j, "threshold", c.threshold);
  auto eq = get<std::string>(j, "event_quantifier", "paper");
  auto q = formaliser::event_quantifier_from_string(eq);
  if (!q) throw ConfigError("config: unknown event_quantifier '" + eq + "'");
  c.event_quantifier = *q;
  c.out = get<std::string>(j, "out", "");
  c.emit_theories = get<std::string>(j, "emit_theories", "");
  c.workers = get<int>(j, "workers", 1);
  c.validate();
  return c;
}

RunConfig RunConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path);
  try {
    return from_json(json::parse(in));
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
}

void RunConfig::validate() const {
  if (client != "fixture" && client != "http") throw ConfigError("config: client must be fixture or http");
  if (prover != "builtin" && prover != "external") throw ConfigError("config: prover must be builtin or external");
  if (prover == "external" && prover_command.find("{file}") == std::string::npos)
    throw ConfigError("config: prover_command must contain {file}");
  if (scorer != "lexical" && scorer != "http") throw ConfigError("config: scorer must be lexical or http");
  if (scorer == "http" && scorer_endpoint.empty()) throw ConfigError("config: scorer_endpoint is required");
  if (threshold < 0 || threshold > 1) throw ConfigError("config: threshold must lie in [0, 1]");
  if (workers < 1) throw ConfigError("config: workers must be at least 1");
  budget.validate();
  caps.validate();
}

Aggregate aggregate(const std::vector<InstanceRow>& rows) {
  Aggregate a;
  a.instances = rows.size();
  double iters = 0, faith = 0;
  std::size_t nfaith = 0;
  for (const auto& r : rows) {
    a.total_runtime += r.runtime;
    if (!r.evaluated) continue;
    ++a.evaluated;
    a.init_valid += r.init_valid;
    a.fin_valid += r.fin_valid;
    iters += r.iterations;
    ++a.error_types[std::string(to_string(r.error_type))];
    if (r.faithfulness) {
      faith += *r.faithfulness;
      ++nfaith;
    }
  }
  if (a.evaluated) {
    double n = static_cast<double>(a.evaluated);
    a.init_rate = static_cast<double>(a.init_valid) / n;
    a.fin_rate = static_cast<double>(a.fin_valid) / n;
    a.mean_iterations = iters / n;
  }
  if (nfaith) a.mean_faithfulness = faith / static_cast<double>(nfaith);
  return a;
}

std::vector<DepthRecord> RunReport::depth_records() const {
  std::vector<DepthRecord> out;
  for (const auto& r : rows)
    if (r.evaluated && r.gold_depth && r.used_depth) out.push_back({r.id, *r.gold_depth, *r.used_depth, r.iterations > 0});
  return out;
}

json to_json(const InstanceRow& r) {
  json j{{"id", r.id},
         {"label", std::string(to_string(r.label))},
         {"evaluated", r.evaluated},
         {"init_valid", r.init_valid},
         {"fin_valid", r.fin_valid},
         {"iterations", r.iterations},
         {"runtime", r.runtime},
         {"timings",
          {{"tree", r.timings.tree},
           {"atomize", r.timings.atomize},
           {"formalise", r.timings.formalise},
           {"verify", r.timings.verify},
           {"certificate", r.timings.certificate}}},
         {"error_type", std::string(to_string(r.error_type))},
         {"certificate_valid", r.certificate_valid},
         {"certificate_reverified", r.certificate_reverified}};
  j["gold_depth"] = r.gold_depth ? json(*r.gold_depth) : json(nullptr);
  j["used_depth"] = r.used_depth ? json(*r.used_depth) : json(nullptr);
  j["faithfulness"] = r.faithfulness ? json(*r.faithfulness) : json(nullptr);
  if (!r.note.empty()) j["note"] = r.note;
  return j;
}

json to_json(const Aggregate& a) {
  json j{{"instances", a.instances},   {"evaluated", a.evaluated},   {"init_valid", a.init_valid},
         {"fin_valid", a.fin_valid},   {"init_rate", a.init_rate},   {"fin_rate", a.fin_rate},
         {"mean_iterations", a.mean_iterations}, {"error_types", a.error_types}, {"total_runtime", a.total_runtime}};
  j["mean_faithfulness"] = a.mean_faithfulness ? json(*a.mean_faithfulness) : json(nullptr);
  return j;
}

json to_json(const RunReport& r) {
  json rows = json::array();
  for (const auto& row : r.rows) rows.push_back(to_json(row));
  json depth = json::object();
  auto records = r.depth_records();
  for (auto v : {DepthView::All, DepthView::Refined, DepthView::Unrefined}) {
    json buckets = json::array();
    for (const auto& b : depth_alignment(records, v))
      buckets.push_back({{"gold_depth", b.gold_depth}, {"count", b.count}, {"mean_used", b.mean_used}});
    depth[std::string(to_string(v))] = buckets;
  }
  return {{"dataset", r.dataset},
          {"aggregate", to_json(r.totals)},
          {"rows", rows},
          {"depth_alignment", depth},
          {"dropped_unknown", r.dropped_unknown},
          {"internal_errors", r.internal_errors}};
}

namespace {

int severity(ErrorType e) {
  switch (e) {
    case ErrorType::Syntax: return 4;
    case ErrorType::Implication: return 3;
    case ErrorType::Quantifier: return 2;
    case ErrorType::Variable: return 1;
    case ErrorType::None: return 0;
  }
  return 0;
}

std::string sanitize(const std::string& s) {
  std::string out;
  for (char c : s) out += std::isalnum(static_cast<unsigned char>(c)) ? c : '_';
  return out;
}

std::vector<verify::FormalStatement> premise_statements(const tree::EntailmentTree& t) {
  std::vector<const tree::TreeNode*> leaves;
  for (const auto& [id, n] : t.nodes)
    if (n.origin == tree::Origin::Premise) leaves.push_back(&n);
  std::sort(leaves.begin(), leaves.end(), [](const auto* a, const auto* b) { return a->premise_index < b->premise_index; });
  std::vector<verify::FormalStatement> out;
  for (const auto* n : leaves) out.push_back({n->statement, n->formal_atoms});
  return out;
}

// Deepest proof of the hypothesis atoms straight from the premise atoms.
std::optional<int> used_depth(const tree::EntailmentTree& t, bool negate, const prover::Prover& prover,
                              const prover::ProverBudget& budget) {
  const auto& h = t.node(t.root);
  if (h.formal_atoms.empty()) return std::nullopt;
  std::vector<prover::Axiom> axioms;
  int k = 0;
  for (const auto& p : premise_statements(t))
    for (const auto& f : p.formulas) axioms.push_back({"premise_" + std::to_string(++k), f, p.text});
  std::vector<logic::Formula> goals = h.formal_atoms;
  if (negate) goals = {logic::Formula::negation(logic::Formula::conj_all(h.formal_atoms))};
  int depth = 0;
  for (const auto& g : goals) {
    auto o = prover.prove(prover::make_theory("depth", axioms, g), budget);
    if (!o.proved()) return std::nullopt;
    depth = std::max(depth, o.depth);
  }
  return depth;
}

// Contradiction label: subtrees below the root are refined as usual, the root is checked against ¬Φ(h).
verify::TreeVerification verify_contradiction(tree::EntailmentTree t, verify::VerifyContext& ctx) {
  verify::TreeVerification out;
  for (const auto& id : tree::bottom_up_frontier(t)) {
    if (id == t.root) continue;
    bool blocked = false;
    for (const auto& c : t.node(id).children)
      if (!t.node(c).children.empty() && !t.node(c).verified) blocked = true;
    if (blocked) {
      verify::RefinementTrace b;
      b.subtree_root = id;
      b.final_status = verify::FinalStatus::Blocked;
      out.traces.push_back(b);
      continue;
    }
    out.traces.push_back(verify::verify_subtree(t, id, ctx));
    out.iterations += out.traces.back().iteration_count;
  }
  auto& root = t.node(t.root);
  if (!root.decomposition && root.formalisation_error.empty()) ctx.annotator.annotate(root);
  std::vector<prover::Axiom> axioms;
  bool ready = root.formalised();
  for (const auto& c : root.children) {
    auto& n = t.node(c);
    if (!n.decomposition && n.formalisation_error.empty()) ctx.annotator.annotate(n);
    if (!n.formalised() || (!n.children.empty() && !n.verified)) ready = false;
    for (const auto& f : n.formal_atoms) axioms.push_back({"explanation_" + std::to_string(axioms.size() + 1), f, n.statement});
  }
  verify::RefinementTrace rt;
  rt.subtree_root = t.root;
  rt.final_status = verify::FinalStatus::Exhausted;
  if (ready) {
    auto goal = logic::Formula::negation(logic::Formula::conj_all(root.formal_atoms));
    verify::Obligation o;
    o.subtree_root = t.root;
    o.goal_text = "not: " + root.statement;
    o.goal_atom = goal;
    o.axioms = axioms;
    auto outcome = ctx.prover.prove(o.theory(), ctx.budget);
    rt.last_attempt.push_back({o, outcome});
    if (outcome.proved()) {
      root.verified = true;
      rt.final_status = verify::FinalStatus::Verified;
    }
  }
  out.traces.push_back(rt);
  out.fin_valid = root.verified;
  bool any_event = false;
  for (const auto& tr : out.traces) any_event = any_event || !tr.events.empty();
  out.init_valid = out.fin_valid && !any_event;
  out.tree = std::move(t);
  return out;
}

void emit_theories(const std::string& dir, const std::string& instance, const verify::TreeVerification& tv) {
  fs::create_directories(dir);
  for (const auto& tr : tv.traces)
    for (const auto& r : tr.last_attempt) {
      auto th = r.obligation.theory();
      th.name = sanitize(instance + "_" + tr.subtree_root + "_" + std::to_string(r.obligation.atom_index + 1));
      std::ofstream(fs::path(dir) / (th.name + ".thy")) << prover::export_isabelle(th);
      std::ofstream(fs::path(dir) / (th.name + ".p")) << prover::export_tptp(th);
    }
}

}  // namespace

InstanceRow run_instance(const DatasetInstance& instance, const RunConfig& config, llm::LlmClient& llm,
                         const prover::Prover& prover, std::string* events, json* certificate) {
  auto start = std::chrono::steady_clock::now();
  InstanceRow row;
  row.id = instance.id;
  row.label = instance.label;
  row.gold_depth = instance.gold_depth;
  if (instance.label == Label::Unknown) {
    row.evaluated = false;
    row.note = "unknown label: not verified";
    row.runtime = since(start);
    return row;
  }

  tree::EntailmentTree t;
  auto t0 = std::chrono::steady_clock::now();
  try {
    t = tree::construct_tree(instance.premises, instance.hypothesis, llm);
  } catch (const Error& e) {
    row.note = std::string("tree construction failed: ") + e.what();
    row.timings.tree = since(t0);
    row.runtime = since(start);
    return row;
  }
  row.timings.tree = since(t0);

  auto scorer = atomizer::make_scorer(config.scorer, config.scorer_endpoint);
  formaliser::FormaliserOptions fo;
  fo.event_quantifier = config.event_quantifier;
  verify::PipelineAnnotator annotator(llm, *scorer, config.threshold, fo);
  verify::VerifyContext ctx{prover, config.budget, llm, annotator, config.caps};
  bool negate = instance.label == Label::Contradiction;

  t0 = std::chrono::steady_clock::now();
  auto tv = negate ? verify_contradiction(std::move(t), ctx) : verify::verify_tree(std::move(t), ctx);
  row.timings.atomize = annotator.atomize_seconds();
  row.timings.formalise = annotator.formalise_seconds();
  row.timings.verify = std::max(0.0, since(t0) - row.timings.atomize - row.timings.formalise);
  row.init_valid = tv.init_valid;
  row.fin_valid = tv.fin_valid;
  row.iterations = tv.iterations;
  if (events)
    for (const auto& tr : tv.traces) {
      std::istringstream lines(verify::to_jsonl(tr));
      std::string line;
      while (std::getline(lines, line)) {
        auto j = json::parse(line);
        j["instance"] = instance.id;
        *events += j.dump() + "\n";
      }
    }

  // Taxonomy and faithfulness over every formalised atom of the final tree.
  double faith = 0;
  std::size_t nfaith = 0;
  for (const auto& [id, n] : tv.tree.nodes) {
    if (!n.formalisation_error.empty()) row.error_type = ErrorType::Syntax;
    auto texts = n.decomposition ? n.decomposition->kept_atoms() : std::vector<std::string>{};
    for (std::size_t i = 0; i < n.formal_atoms.size() && i < texts.size(); ++i) {
      faith += faithfulness(texts[i], n.formal_atoms[i]);
      ++nfaith;
      auto ref = instance.references.find(texts[i]);
      if (ref == instance.references.end()) continue;
      auto e = classify_error(logic::render_formula(n.formal_atoms[i]), ref->second);
      if (severity(e) > severity(row.error_type)) row.error_type = e;
    }
  }
  if (nfaith) row.faithfulness = faith / static_cast<double>(nfaith);
  row.used_depth = used_depth(tv.tree, negate, prover, config.budget);

  t0 = std::chrono::steady_clock::now();
  if (row.fin_valid) {
    std::vector<verify::FormalStatement> chain;
    for (const auto& id : tree::bottom_up_frontier(tv.tree))
      if (id != tv.tree.root) chain.push_back({tv.tree.node(id).statement, tv.tree.node(id).formal_atoms});
    const auto& h = tv.tree.node(tv.tree.root);
    auto cert = verify::check_recursive_witness(instance.id, premise_statements(tv.tree), chain,
                                                {h.statement, h.formal_atoms}, prover, config.budget, negate);
    row.certificate_valid = cert.valid;
    auto cj = verify::to_json(cert);
    row.certificate_reverified = cert.valid && verify::reverify(cj, prover, config.budget);
    if (certificate) *certificate = std::move(cj);
  }
  row.timings.certificate = since(t0);
  if (!config.emit_theories.empty()) emit_theories(config.emit_theories, instance.id, tv);
  row.runtime = since(start);
  return row;
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
  return out + "\"";
}

std::string opt(const std::optional<int>& v) { return v ? std::to_string(*v) : ""; }
std::string opt(const std::optional<double>& v) {
  if (!v) return "";
  std::ostringstream os;
  os << *v;
  return os.str();
}

}  // namespace

void write_outputs(const RunReport& report, const RunOutputs& outputs, const std::string& dir) {
  fs::create_directories(dir);
  std::ofstream(fs::path(dir) / "report.json") << to_json(report).dump(2) << "\n";
  {
    std::ofstream csv(fs::path(dir) / "instances.csv");
    csv << "id,label,evaluated,init_valid,fin_valid,iterations,runtime,tree_s,atomize_s,formalise_s,verify_s,"
           "certificate_s,error_type,faithfulness,gold_depth,used_depth,certificate_valid\n";
    for (const auto& r : report.rows)
      csv << csv_field(r.id) << ',' << to_string(r.label) << ',' << r.evaluated << ',' << r.init_valid << ','
          << r.fin_valid << ',' << r.iterations << ',' << r.runtime << ',' << r.timings.tree << ','
          << r.timings.atomize << ',' << r.timings.formalise << ',' << r.timings.verify << ','
          << r.timings.certificate << ',' << to_string(r.error_type) << ',' << opt(r.faithfulness) << ','
          << opt(r.gold_depth) << ',' << opt(r.used_depth) << ',' << r.certificate_valid << '\n';
  }
  {
    const auto& a = report.totals;
    std::ofstream csv(fs::path(dir) / "aggregate.csv");
    csv << "dataset,instances,evaluated,init_valid,fin_valid,init_rate,fin_rate,mean_iterations,mean_faithfulness\n";
    csv << csv_field(report.dataset) << ',' << a.instances << ',' << a.evaluated << ',' << a.init_valid << ','
        << a.fin_valid << ',' << a.init_rate << ',' << a.fin_rate << ',' << a.mean_iterations << ','
        << opt(a.mean_faithfulness) << '\n';
  }
  {
    std::ofstream csv(fs::path(dir) / "depth_alignment.csv");
    csv << "view,gold_depth,count,mean_used\n";
    auto records = report.depth_records();
    for (auto v : {DepthView::All, DepthView::Refined, DepthView::Unrefined})
      for (const auto& b : depth_alignment(records, v))
        csv << to_string(v) << ',' << b.gold_depth << ',' << b.count << ',' << b.mean_used << '\n';
  }
  {
    std::ofstream csv(fs::path(dir) / "error_types.csv");
    csv << "error_type,count\n";
    for (const auto& [k, n] : report.totals.error_types) csv << k << ',' << n << '\n';
  }
  {
    std::ofstream ev(fs::path(dir) / "events.jsonl");
    for (const auto& e : outputs.events) ev << e;
  }
  if (!outputs.certificates.empty()) {
    fs::create_directories(fs::path(dir) / "certificates");
    for (const auto& [id, c] : outputs.certificates)
      std::ofstream(fs::path(dir) / "certificates" / (sanitize(id) + ".json")) << c.dump(2) << "\n";
  }
}

RunReport run(const RunConfig& config, llm::LlmClient* client) {
  config.validate();
  RunReport report;
  report.dataset = config.name.empty() ? fs::path(config.dataset).stem().string() : config.name;
  IngestOptions io;
  io.refinement_mode = config.refinement_mode;
  IngestStats stats;
  auto instances = config.dataset.empty() ? std::vector<DatasetInstance>{}
                                          : ingest(config.dataset, config.format, io, &stats);
  report.dropped_unknown = stats.dropped_unknown;

  std::unique_ptr<llm::LlmClient> owned;
  if (!client) {
    if (config.client == "http")
      owned = std::make_unique<llm::HttpClient>(config.http);
    else
      owned = std::make_unique<llm::FixtureClient>(config.fixtures);
    client = owned.get();
  }
  std::unique_ptr<llm::LlmClient> recorder, serial;
  if (!config.record.empty()) {
    recorder = std::make_unique<llm::RecordingClient>(*client, config.record);
    client = recorder.get();
  }
  if (config.serialize_llm || !config.record.empty()) {
    serial = std::make_unique<llm::SerializingClient>(*client);
    client = serial.get();
  }
  std::unique_ptr<prover::Prover> prover;
  if (config.prover == "external")
    prover = std::make_unique<prover::ExternalProver>(config.prover_command);
  else
    prover = std::make_unique<prover::BuiltinProver>();

  std::vector<InstanceRow> rows(instances.size());
  std::vector<std::string> events(instances.size());
  std::vector<json> certs(instances.size());
  std::vector<std::string> errors(instances.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < instances.size(); i = next++) {
      try {
        rows[i] = run_instance(instances[i], config, *client, *prover, &events[i], &certs[i]);
      } catch (const std::exception& e) {
        rows[i].id = instances[i].id;
        rows[i].label = instances[i].label;
        rows[i].note = std::string("internal error: ") + e.what();
        errors[i] = instances[i].id + ": " + e.what();
      }
    }
  };
  std::size_t nthreads = std::min<std::size_t>(static_cast<std::size_t>(config.workers), instances.size());
  if (nthreads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t i = 0; i < nthreads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  RunOutputs outputs;
  for (std::size_t i = 0; i < instances.size(); ++i) {
    if (!errors[i].empty()) report.internal_errors.push_back(errors[i]);
    outputs.events.push_back(events[i]);
    if (!certs[i].is_null()) outputs.certificates[instances[i].id] = certs[i];
  }
  report.rows = std::move(rows);
  report.totals = aggregate(report.rows);
  if (!config.out.empty()) write_outputs(report, outputs, config.out);
  return report;
}

}  // namespace rvnli::metrics
