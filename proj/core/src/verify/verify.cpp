#include "rvnli/verify/verify.hpp"

#include <algorithm>
#include <chrono>
#include <future>
#include <set>
#include <sstream>

#include "rvnli/error.hpp"
#include "rvnli/llm/parsers.hpp"
#include "rvnli/llm/prompts.hpp"
#include "rvnli/logic/render.hpp"
#include "rvnli/logic/signature.hpp"
#include "rvnli/prover/export.hpp"

namespace rvnli::verify {

using logic::Formula;
using nlohmann::json;

namespace {

double since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::set<std::string> content_symbols(const Formula& f) {
  const auto& roles = logic::default_role_vocabulary();
  std::set<std::string> out;
  for (const auto& s : predicate_symbols(f))
    if (std::find(roles.begin(), roles.end(), s) == roles.end()) out.insert(s);
  for (const auto& c : constants(f)) out.insert("@" + c.name);
  return out;
}

std::string status_word(const prover::ProofOutcome& o) { return std::string(prover::to_string(o.status)); }

}  // namespace

prover::Theory Obligation::theory() const {
  return prover::make_theory("lemma_" + subtree_root + "_" + std::to_string(atom_index + 1), axioms, goal_atom,
                             goal_text);
}

std::vector<Obligation> build_obligations(const tree::EntailmentTree& t, const std::string& subtree_root) {
  const auto& root = t.node(subtree_root);
  if (!root.formalised())
    throw UnformalisedAtom("node " + subtree_root + " is not formalised" +
                           (root.formalisation_error.empty() ? "" : ": " + root.formalisation_error));
  std::vector<prover::Axiom> axioms;
  std::map<std::string, AxiomSource> sources;
  for (const auto& child : root.children) {
    const auto& n = t.node(child);
    if (!n.formalised())
      throw UnformalisedAtom("node " + child + " is not formalised" +
                             (n.formalisation_error.empty() ? "" : ": " + n.formalisation_error));
    auto texts = n.decomposition ? n.decomposition->kept_atoms() : std::vector<std::string>{};
    for (std::size_t i = 0; i < n.formal_atoms.size(); ++i) {
      std::string name = "explanation_" + std::to_string(axioms.size() + 1);
      axioms.push_back({name, n.formal_atoms[i], i < texts.size() ? texts[i] : n.statement});
      sources[name] = {child, i};
    }
  }
  auto goals = root.decomposition ? root.decomposition->kept_atoms() : std::vector<std::string>{};
  std::vector<Obligation> out;
  for (std::size_t i = 0; i < root.formal_atoms.size(); ++i) {
    Obligation o;
    o.subtree_root = subtree_root;
    o.atom_index = i;
    o.goal_text = i < goals.size() ? goals[i] : root.statement;
    o.goal_atom = root.formal_atoms[i];
    o.axioms = axioms;
    o.sources = sources;
    out.push_back(std::move(o));
  }
  return out;
}

std::vector<std::string> localise_failure(const tree::EntailmentTree& t, const Obligation& obligation,
                                          const prover::ProofOutcome& outcome, std::size_t k,
                                          std::map<std::string, double>* evidence) {
  const auto& root = t.node(obligation.subtree_root);
  std::vector<std::string> candidates = root.children;
  std::sort(candidates.begin(), candidates.end(), tree::natural_less);
  if (candidates.empty()) return {};

  std::set<std::string> goal = content_symbols(obligation.goal_atom);
  std::map<std::string, std::set<std::string>> syms;
  for (const auto& id : candidates)
    for (const auto& f : t.node(id).formal_atoms) {
      auto s = content_symbols(f);
      syms[id].insert(s.begin(), s.end());
    }
  std::map<std::string, double> score, link;
  for (const auto& id : candidates) {
    std::size_t hit = 0;
    for (const auto& s : goal) hit += syms[id].count(s);
    double v = goal.empty() ? 0.0 : static_cast<double>(hit) / static_cast<double>(goal.size());
    if (!t.node(id).formalised()) v += 1.0;
    score[id] = v;
    // Tie-break: non-goal symbols shared with other explanation nodes, which any derivation
    // combining this node with the rest has to cancel.
    std::size_t bridges = 0;
    for (const auto& s : syms[id]) {
      if (goal.count(s)) continue;
      for (const auto& other : candidates)
        if (other != id && syms[other].count(s)) {
          ++bridges;
          break;
        }
    }
    link[id] = static_cast<double>(bridges);
  }
  if (const auto& m = outcome.diagnostics.countermodel) {
    std::set<std::string> boosted;
    for (const auto& ax : obligation.axioms) {
      auto src = obligation.sources.find(ax.name);
      if (src == obligation.sources.end() || boosted.count(src->second.node)) continue;
      if (!m->holds(ax.formula)) {
        score[src->second.node] += 1.0;
        boosted.insert(src->second.node);
      }
    }
  }
  if (evidence) *evidence = score;

  std::vector<std::string> ranked;
  for (const auto& id : candidates)
    if (score[id] > 0) ranked.push_back(id);
  if (ranked.empty()) return candidates;
  std::stable_sort(ranked.begin(), ranked.end(), [&](const std::string& a, const std::string& b) {
    if (score[a] != score[b]) return score[a] > score[b];
    return link[a] > link[b];
  });
  if (ranked.size() > k) ranked.resize(k);
  return ranked;
}

void Caps::validate() const {
  if (iterations < 0) throw ConfigError("caps: iterations must be non-negative");
  if (implicated == 0) throw ConfigError("caps: k must be positive");
}

Caps Caps::parse(const std::string& spec) {
  Caps c;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    auto eq = item.find('=');
    if (eq == std::string::npos) throw ConfigError("caps: expected key=value, got '" + item + "'");
    std::string key = item.substr(0, eq), value = item.substr(eq + 1);
    try {
      if (key == "iterations")
        c.iterations = std::stoi(value);
      else if (key == "k" || key == "implicated")
        c.implicated = static_cast<std::size_t>(std::stoul(value));
      else if (key == "reopen")
        c.reopen = value == "1" || value == "true";
      else
        throw ConfigError("caps: unknown key '" + key + "'");
    } catch (const std::logic_error&) {
      throw ConfigError("caps: bad value for " + key + ": '" + value + "'");
    }
  }
  c.validate();
  return c;
}

std::string Caps::to_string() const {
  return "iterations=" + std::to_string(iterations) + ",k=" + std::to_string(implicated) +
         ",reopen=" + (reopen ? "1" : "0");
}

void PipelineAnnotator::annotate(tree::TreeNode& node) {
  auto it = cache_.find(node.statement);
  if (it == cache_.end()) {
    Cached c;
    try {
      auto t0 = std::chrono::steady_clock::now();
      c.decomposition = atomizer::atomize(node.statement, llm_, scorer_, threshold_);
      atomize_seconds_ += since(t0);
      t0 = std::chrono::steady_clock::now();
      for (const auto& a : c.decomposition.kept_atoms()) {
        auto trace = formaliser::formalise(a, llm_, options_);
        c.atoms.push_back(trace.final_formula());
        traces_[a] = std::move(trace);
      }
      formalise_seconds_ += since(t0);
      if (c.atoms.empty()) c.error = "no atom passed the entailment filter";
    } catch (const Error& e) {
      c.atoms.clear();
      c.error = e.what();
    }
    it = cache_.emplace(node.statement, std::move(c)).first;
  }
  node.decomposition = it->second.decomposition;
  node.formal_atoms = it->second.atoms;
  node.formalisation_error = it->second.error;
  if (!node.formalisation_error.empty()) node.formal_atoms.clear();
}

std::string_view to_string(FinalStatus s) noexcept {
  switch (s) {
    case FinalStatus::Verified: return "verified";
    case FinalStatus::Exhausted: return "exhausted";
    case FinalStatus::Blocked: return "blocked";
  }
  return "?";
}

json to_json(const RefinementEvent& e) {
  return {{"iteration", e.iteration},
          {"subtree_root", e.subtree_root},
          {"failed_atom", e.failed_atom},
          {"failed_formula", e.failed_formula},
          {"failure", e.failure},
          {"implicated", e.implicated},
          {"old_statements", e.old_statements},
          {"new_statements", e.new_statements},
          {"reopened", e.reopened},
          {"note", e.note},
          {"reverification", e.reverification}};
}

std::string to_jsonl(const RefinementTrace& t) {
  std::string out;
  for (const auto& e : t.events) out += to_json(e).dump() + "\n";
  json summary{{"subtree_root", t.subtree_root},
               {"iteration_count", t.iteration_count},
               {"final_status", std::string(to_string(t.final_status))}};
  out += summary.dump() + "\n";
  return out;
}

namespace {

bool needs_annotation(const tree::TreeNode& n) { return !n.decomposition && n.formalisation_error.empty(); }

struct Attempt {
  std::vector<ObligationResult> results;
  // Index into results of the first failure, or a node-level failure.
  std::optional<std::size_t> failed;
  std::string unformalised;
};

Attempt attempt(const tree::EntailmentTree& t, const std::string& root, VerifyContext& ctx) {
  Attempt a;
  const auto& r = t.node(root);
  auto kids = r.children;
  std::sort(kids.begin(), kids.end(), tree::natural_less);
  for (const auto& id : kids)
    if (!t.node(id).formalised()) {
      a.unformalised = id;
      return a;
    }
  if (!r.formalised()) {
    a.unformalised = root;
    return a;
  }
  auto obligations = build_obligations(t, root);
  std::vector<std::future<prover::ProofOutcome>> futures;
  for (const auto& o : obligations)
    futures.push_back(std::async(std::launch::async, [&ctx, th = o.theory()] { return ctx.prover.prove(th, ctx.budget); }));
  for (std::size_t i = 0; i < obligations.size(); ++i) {
    a.results.push_back({obligations[i], futures[i].get()});
    if (!a.failed && !a.results.back().outcome.proved()) a.failed = i;
  }
  return a;
}

std::string diagnostics_text(const prover::ProofOutcome& o) {
  std::string out = "status: " + status_word(o);
  if (o.diagnostics.countermodel) out += "\ncountermodel:\n" + o.diagnostics.countermodel->describe();
  if (!o.diagnostics.resource_note.empty()) out += "\nnote: " + o.diagnostics.resource_note;
  return out;
}

std::string node_lines(const tree::EntailmentTree& t, const std::vector<std::string>& ids) {
  std::string out;
  for (const auto& id : ids) out += "Node " + id + ": " + t.node(id).statement + "\n";
  if (out.empty()) return "(none)";
  out.pop_back();
  return out;
}

}  // namespace

RefinementTrace verify_subtree(tree::EntailmentTree& t, const std::string& subtree_root, VerifyContext& ctx) {
  ctx.caps.validate();
  RefinementTrace trace;
  trace.subtree_root = subtree_root;
  {
    auto& r = t.node(subtree_root);
    if (needs_annotation(r)) ctx.annotator.annotate(r);
    for (const auto& c : r.children)
      if (needs_annotation(t.node(c))) ctx.annotator.annotate(t.node(c));
  }

  for (int iteration = 0;; ++iteration) {
    Attempt a = attempt(t, subtree_root, ctx);
    trace.last_attempt = a.results;
    bool ok = a.unformalised.empty() && !a.failed;
    if (!trace.events.empty()) trace.events.back().reverification = ok ? "verified" : "failed";
    if (ok) {
      t.node(subtree_root).verified = true;
      trace.final_status = FinalStatus::Verified;
      trace.iteration_count = iteration;
      return trace;
    }
    if (iteration >= ctx.caps.iterations || a.unformalised == subtree_root) {
      // The hypothesis of the subtree is never rewritten, so a failure to formalise it is final.
      if (!trace.events.empty()) trace.events.back().reverification = "exhausted";
      trace.final_status = FinalStatus::Exhausted;
      trace.iteration_count = iteration;
      return trace;
    }

    RefinementEvent ev;
    ev.iteration = iteration + 1;
    ev.subtree_root = subtree_root;
    std::string goal_formula, diagnostics;
    const auto& root = t.node(subtree_root);
    if (!a.unformalised.empty()) {
      ev.failure = "unformalised";
      for (const auto& c : root.children)
        if (!t.node(c).formalised()) ev.implicated.push_back(c);
      std::sort(ev.implicated.begin(), ev.implicated.end(), tree::natural_less);
      if (ev.implicated.size() > ctx.caps.implicated) ev.implicated.resize(ctx.caps.implicated);
      ev.failed_atom = root.statement;
      diagnostics = "formalisation failed: " + t.node(ev.implicated.front()).formalisation_error;
      goal_formula = "(not formalised)";
    } else {
      const auto& r = a.results[*a.failed];
      ev.failure = status_word(r.outcome);
      ev.failed_atom = r.obligation.goal_text;
      ev.failed_formula = logic::render_formula(r.obligation.goal_atom);
      goal_formula = ev.failed_formula;
      diagnostics = diagnostics_text(r.outcome);
      ev.implicated = localise_failure(t, r.obligation, r.outcome, ctx.caps.implicated);
    }

    // Verified intermediates stay locked unless re-opening is enabled.
    std::vector<std::string> editable;
    for (const auto& id : ev.implicated) {
      const auto& n = t.node(id);
      if (n.verified && n.origin == tree::Origin::Intermediate && !ctx.caps.reopen) continue;
      editable.push_back(id);
    }
    if (editable.empty()) {
      ev.note = "all implicated nodes are verified and locked";
      trace.events.push_back(std::move(ev));
      continue;
    }
    std::vector<std::string> context;
    for (const auto& c : root.children)
      if (std::find(editable.begin(), editable.end(), c) == editable.end()) context.push_back(c);
    std::sort(context.begin(), context.end(), tree::natural_less);

    std::map<std::string, std::string> answer;
    try {
      llm::Slots slots{{"goal", ev.failed_atom},
                       {"goal_formula", goal_formula},
                       {"statements", node_lines(t, editable)},
                       {"context", node_lines(t, context)},
                       {"diagnostics", diagnostics}};
      answer = llm::parse_refine_response(ctx.llm.complete(llm::render(llm::TemplateId::Refine, slots), {}));
    } catch (const Error& e) {
      ev.note = std::string("refinement request failed: ") + e.what();
      trace.events.push_back(std::move(ev));
      continue;
    }

    std::vector<std::string> ignored;
    for (const auto& [id, text] : answer) {
      if (std::find(editable.begin(), editable.end(), id) == editable.end()) {
        ignored.push_back(id);
        continue;
      }
      auto& n = t.node(id);
      if (text == n.statement) continue;
      ev.old_statements[id] = n.statement;
      ev.new_statements[id] = text;
      n.statement = text;
      n.decomposition.reset();
      n.formal_atoms.clear();
      n.formalisation_error.clear();
      if (n.verified) {
        n.verified = false;
        ev.reopened.push_back(id);
      }
      ctx.annotator.annotate(n);
    }
    if (!ignored.empty()) {
      ev.note = "ignored rewrites for nodes outside the implicated set:";
      for (const auto& id : ignored) ev.note += " " + id;
    }
    // A re-opened intermediate must stand on its own children again before it supports this root.
    for (const auto& id : ev.reopened) {
      if (t.node(id).children.empty()) {
        t.node(id).verified = true;
        continue;
      }
      auto sub = verify_subtree(t, id, ctx);
      if (!ev.note.empty()) ev.note += "; ";
      ev.note += "re-opened " + id + ": " + std::string(to_string(sub.final_status));
    }
    if (ev.new_statements.empty() && ev.note.empty()) ev.note = "no statement changed";
    trace.events.push_back(std::move(ev));
  }
}

TreeVerification verify_tree(tree::EntailmentTree t, VerifyContext& ctx) {
  TreeVerification out;
  for (const auto& id : tree::bottom_up_frontier(t)) {
    bool blocked = false;
    for (const auto& c : t.node(id).children) {
      const auto& n = t.node(c);
      if (!n.children.empty() && !n.verified) blocked = true;
    }
    if (blocked) {
      RefinementTrace b;
      b.subtree_root = id;
      b.final_status = FinalStatus::Blocked;
      out.traces.push_back(std::move(b));
      continue;
    }
    out.traces.push_back(verify_subtree(t, id, ctx));
    out.iterations += out.traces.back().iteration_count;
  }
  out.fin_valid = t.contains(t.root) && t.node(t.root).verified;
  bool any_event = false;
  for (const auto& tr : out.traces) any_event = any_event || !tr.events.empty();
  out.init_valid = out.fin_valid && !any_event;
  out.tree = std::move(t);
  return out;
}

namespace {

void add_axioms(std::vector<prover::Axiom>& axioms, const std::string& prefix, const FormalStatement& s) {
  for (std::size_t i = 0; i < s.formulas.size(); ++i)
    axioms.push_back({s.formulas.size() == 1 ? prefix : prefix + "_" + std::to_string(i + 1), s.formulas[i], s.text});
}

}  // namespace

Certificate check_recursive_witness(const std::string& instance_id, const std::vector<FormalStatement>& premises,
                                    const std::vector<FormalStatement>& chain, const FormalStatement& hypothesis,
                                    const prover::Prover& prover, const prover::ProverBudget& budget, bool negate) {
  Certificate c;
  c.instance_id = instance_id;
  for (const auto& s : chain) c.chain.push_back(s.text);
  std::vector<prover::Axiom> axioms;
  for (std::size_t i = 0; i < premises.size(); ++i) add_axioms(axioms, "premise_" + std::to_string(i + 1), premises[i]);

  auto run = [&](std::size_t index, std::size_t fi, const Formula& goal, const std::string& text) {
    CertificateStep step;
    step.index = index;
    step.formula_index = fi;
    step.theory = prover::make_theory("witness_" + std::to_string(index), axioms, goal, text);
    step.outcome = prover.prove(step.theory, budget);
    if (!step.outcome.proved() && c.first_failure == 0) c.first_failure = index;
    c.steps.push_back(std::move(step));
  };
  for (std::size_t j = 0; j < chain.size(); ++j) {
    for (std::size_t i = 0; i < chain[j].formulas.size(); ++i) run(j + 1, i, chain[j].formulas[i], chain[j].text);
    add_axioms(axioms, "step_" + std::to_string(j + 1), chain[j]);
  }
  if (negate)
    run(chain.size() + 1, 0, Formula::negation(Formula::conj_all(hypothesis.formulas)), hypothesis.text);
  else
    for (std::size_t i = 0; i < hypothesis.formulas.size(); ++i)
      run(chain.size() + 1, i, hypothesis.formulas[i], hypothesis.text);
  if (hypothesis.formulas.empty() && c.first_failure == 0) c.first_failure = chain.size() + 1;
  c.valid = c.first_failure == 0;
  return c;
}

Certificate certificate_from_tree(const std::string& instance_id, const tree::EntailmentTree& t,
                                  const prover::Prover& prover, const prover::ProverBudget& budget) {
  std::vector<const tree::TreeNode*> leaves;
  for (const auto& [id, n] : t.nodes)
    if (n.origin == tree::Origin::Premise) leaves.push_back(&n);
  std::sort(leaves.begin(), leaves.end(),
            [](const auto* a, const auto* b) { return a->premise_index < b->premise_index; });
  std::vector<FormalStatement> premises, chain;
  for (const auto* n : leaves) premises.push_back({n->statement, n->formal_atoms});
  for (const auto& id : tree::bottom_up_frontier(t))
    if (id != t.root) chain.push_back({t.node(id).statement, t.node(id).formal_atoms});
  const auto& h = t.node(t.root);
  return check_recursive_witness(instance_id, premises, chain, {h.statement, h.formal_atoms}, prover, budget);
}

json to_json(const Certificate& c) {
  json steps = json::array();
  for (const auto& s : c.steps) {
    std::vector<std::string> used(s.outcome.used_axioms.begin(), s.outcome.used_axioms.end());
    steps.push_back({{"index", s.index},
                     {"formula_index", s.formula_index},
                     {"status", status_word(s.outcome)},
                     {"used_axioms", used},
                     {"depth", s.outcome.depth},
                     {"tptp", prover::export_tptp(s.theory)}});
  }
  return {{"instance_id", c.instance_id},
          {"chain", c.chain},
          {"valid", c.valid},
          {"first_failure", c.first_failure},
          {"steps", steps}};
}

bool reverify(const json& certificate, const prover::Prover& prover, const prover::ProverBudget& budget) {
  for (const auto& s : certificate.at("steps")) {
    if (s.at("status").get<std::string>() != "proved") continue;
    auto th = prover::parse_tptp(s.at("tptp").get<std::string>());
    if (!prover.prove(th, budget).proved()) return false;
  }
  return true;
}

}  // namespace rvnli::verify
