// One line per acceptance criterion; exit status is non-zero when any fails.
#include <chrono>
#include <cstdio>
#include <functional>
#include <json.hpp>
#include <sstream>
#include <string>

#include "depth.hpp"
#include "files.hpp"
#include "laws.hpp"
#include "oracles.hpp"
#include "worked_examples.hpp"
#include "planted.hpp"
#include "rvnli/atomizer/atomizer.hpp"
#include "rvnli/formaliser/formaliser.hpp"
#include "rvnli/llm/client.hpp"
#include "rvnli/metrics/metrics.hpp"
#include "rvnli/prover/export.hpp"
#include "rvnli/prover/prover.hpp"
#include "rvnli/verify/verify.hpp"

using namespace rvnli;

namespace {

struct Verdict {
  bool ok = false;
  std::string detail;
};

// Only fixture and scripted clients are constructed below; this counts how many answered.
int g_fixture_calls = 0;

class CountingClient final : public llm::LlmClient {
 public:
  explicit CountingClient(llm::LlmClient& inner) : inner_(inner) {}
  std::string name() const override { return inner_.name(); }
  std::string complete(const llm::Prompt& p, const llm::CompletionParams& params) override {
    ++g_fixture_calls;
    return inner_.complete(p, params);
  }

 private:
  llm::LlmClient& inner_;
};

Verdict forest_fire() {
  llm::FixtureClient fixtures(testkit::source_path("fixtures/llm/forest_fire"));
  CountingClient llm(fixtures);
  auto trace = formaliser::formalise(testkit::kForestFireSentence, llm);
  auto expected = testkit::forest_fire_sequence();
  bool staged = trace.stages.size() == 3 && trace.template_formula == expected[0] &&
                trace.stages[0].result == expected[1] && trace.stages[1].result == expected[2] &&
                trace.final_formula() == expected[3];
  bool composed = formaliser::composition_agrees(trace);
  return {staged && composed, std::string("staged ") + (staged ? "equal" : "differs") + ", composed " +
                                  (composed ? "equal" : "differs")};
}

Verdict melting() {
  prover::IsabelleOptions opts;
  opts.goal_form = prover::GoalForm::Contradiction;
  opts.declare_constants = false;
  auto golden = testkit::read_file(testkit::source_path("fixtures/golden/melting.thy"));
  bool bytes = prover::export_isabelle(testkit::melting_theory(), opts) == golden;
  prover::BuiltinProver p;
  std::set<std::string> used;
  bool all = true;
  for (const auto& atom : testkit::melting_entailed_atoms()) {
    auto t = testkit::melting_theory();
    t.goal = atom.formula;
    auto o = p.prove(t, {});
    all = all && o.proved();
    used.insert(o.used_axioms.begin(), o.used_axioms.end());
  }
  bool exact = used == std::set<std::string>{"explanation_1", "explanation_2"};
  std::string names;
  for (const auto& u : used) names += (names.empty() ? "" : ",") + u;
  return {bytes && all && exact,
          std::string("golden ") + (bytes ? "byte-equal" : "differs") + ", used {" + names + "}"};
}

Verdict prover_oracle() {
  auto r = testkit::prover_oracle_agreement(20240601, 200, 100);
  std::ostringstream s;
  s << "ground " << r.ground_agree << "/" << r.ground << ", quantified " << r.quantified_agree << "/" << r.quantified
    << " (proved " << r.proved << ", refuted " << r.refuted << ", unknown " << r.unknown << ")";
  if (!r.disagreements.empty()) s << "; first: " << r.disagreements.front();
  return {r.ok() && r.ground == 200 && r.quantified == 100, s.str()};
}

Verdict laws() {
  std::vector<std::pair<const char*, testkit::LawReport>> rs = {
      {"composition", testkit::composition_law(101, 1000)},
      {"associativity", testkit::composition_associativity(103, 1000)},
      {"identity", testkit::identity_laws(107, 1000)},
      {"sorts", testkit::sort_preservation(109, 1000)},
  };
  bool ok = true;
  std::ostringstream s;
  for (const auto& [name, r] : rs) {
    ok = ok && r.ok() && r.cases == 1000;
    s << name << " " << r.cases - r.failures << "/" << r.cases << " ";
    if (!r.ok()) s << "(" << r.first_failure << ") ";
  }
  return {ok, s.str()};
}

Verdict refinement() {
  auto fixing = testkit::planted_suite(2024, 50, true);
  verify::Caps caps;
  auto stuck = testkit::planted_suite(2024, 50, false, caps);
  double rate = fixing.localised / 50.0;
  bool ok = fixing.cases == 50 && fixing.converged == 50 && fixing.mean_iterations <= 1.5 && rate >= 0.9 &&
            stuck.capped_complete == 50;
  std::ostringstream s;
  s << "localised " << fixing.localised << "/50, converged " << fixing.converged << "/50, mean iterations "
    << fixing.mean_iterations << ", non-repairing capped with full trace " << stuck.capped_complete << "/50";
  return {ok, s.str()};
}

Verdict witness() {
  prover::BuiltinProver p;
  auto good = verify::check_recursive_witness("monkeypox", testkit::monkeypox_formal_premises(),
                                              testkit::monkeypox_chain(), testkit::monkeypox_hypothesis(), p);
  auto bad = verify::check_recursive_witness("monkeypox-broken", testkit::monkeypox_formal_premises(),
                                             testkit::monkeypox_broken_chain(), testkit::monkeypox_hypothesis(), p);
  // Stored as JSON text, read back and re-proved from the embedded theories.
  auto stored = nlohmann::json::parse(verify::to_json(good).dump());
  bool re = verify::reverify(stored, p);
  std::ostringstream s;
  s << "certificate " << (good.valid ? "valid" : "invalid") << " (" << good.steps.size() << " steps), negative case fails at "
    << bad.first_failure << ", re-verified " << (re ? "yes" : "no");
  return {good.valid && !bad.valid && bad.first_failure == 2 && re, s.str()};
}

Verdict depth() {
  auto curves = testkit::depth_curves(3);
  auto tree = metrics::depth_alignment(curves.tree);
  auto holistic = metrics::depth_alignment(curves.holistic);
  std::ostringstream s;
  s << "tree";
  for (const auto& b : tree) s << " " << b.mean_used;
  s << "; compressed";
  for (const auto& b : holistic) s << " " << b.mean_used;
  return {testkit::on_diagonal(tree) && testkit::saturates(holistic), s.str()};
}

Verdict threshold() {
  auto corpus = nlohmann::json::parse(testkit::read_file(testkit::source_path("fixtures/atoms/corpus.json")));
  llm::FixtureClient fixtures(testkit::source_path("fixtures/llm/atoms"));
  CountingClient llm(fixtures);
  atomizer::LexicalScorer lex;
  int violations = 0, kept_at_09 = 0, candidates = 0;
  for (const auto& e : corpus) {
    std::string s = e["sentence"];
    auto cands = atomizer::decompose(s, llm);
    candidates += static_cast<int>(cands.size());
    std::vector<std::string> prev;
    bool first = true;
    for (double t : {0.0, 0.5, 0.9, 1.0}) {
      auto kept = atomizer::filter_entailed(s, cands, lex, t).kept_atoms();
      if (t == 0.9) kept_at_09 += static_cast<int>(kept.size());
      if (!first)
        for (const auto& a : kept)
          if (std::find(prev.begin(), prev.end(), a) == prev.end()) ++violations;
      prev = kept;
      first = false;
    }
  }
  std::ostringstream s;
  s << corpus.size() << " sentences, " << candidates << " candidates, kept at 0.9: " << kept_at_09
    << ", monotonicity violations " << violations;
  return {corpus.size() == 30 && violations == 0, s.str()};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* title;
    double limit_seconds;
    std::function<Verdict()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "forest-fire theta-substitution reproduction", 1, forest_fire},
      {2, "chocolate-melting Isabelle golden and used axioms", 2, melting},
      {3, "prover agrees with truth-table and finite-model oracles", 60, prover_oracle},
      {4, "substitution laws (1000 cases each)", 10, laws},
      {5, "refinement loop on the planted-fault suite", 30, refinement},
      {6, "recursive-witness certificate (monkeypox tree)", 5, witness},
      {7, "proof-depth fidelity and compression drift", 10, depth},
      {8, "atomizer threshold monotonicity on the fixture corpus", 0, threshold},
  };
  int failed = 0;
  bool all_offline = true;
  for (const auto& c : criteria) {
    auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    bool in_time = c.limit_seconds <= 0 || secs < c.limit_seconds;
    bool pass = v.ok && in_time;
    failed += !pass;
    all_offline = all_offline && pass;
    std::printf("criterion %d: %s  %s — %s [%.2f s%s]\n", c.id, pass ? "PASS" : "FAIL", c.title, v.detail.c_str(), secs,
                c.limit_seconds > 0 ? (in_time ? " within limit" : " OVER LIMIT") : "");
  }
  // Every LLM answer above came from committed fixtures or the in-process scripted client.
  std::printf("criterion 9: %s  offline completeness — criteria 1-8 %s with fixture clients only (%d recorded answers "
              "replayed)\n",
              all_offline ? "PASS" : "FAIL", all_offline ? "all passed" : "not all passed", g_fixture_calls);
  failed += !all_offline;
  return failed == 0 ? 0 : 1;
}
