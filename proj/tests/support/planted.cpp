#include "planted.hpp"

#include <algorithm>
#include <chrono>
#include <random>

#include "rvnli/atomizer/atomizer.hpp"
#include "rvnli/prover/prover.hpp"

namespace rvnli::testkit {

namespace {

const std::vector<std::string> kNames = {"alice", "bob", "carol", "dave", "erin", "frank", "gina", "hank"};
const std::vector<std::string> kVerbs = {"chases", "likes", "sees", "visits", "helps", "pushes", "calls", "meets"};
const std::vector<std::string> kAdjectives = {"happy", "kind", "big", "red", "young", "rough", "quiet", "round"};

std::string cap(std::string s) {
  if (!s.empty()) s[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(s[0])));
  return s;
}

template <class T>
const T& pick(std::mt19937_64& rng, const std::vector<T>& v) {
  return v[std::uniform_int_distribution<std::size_t>(0, v.size() - 1)(rng)];
}

std::string node_with(const tree::EntailmentTree& t, const std::string& statement) {
  for (const auto& [id, n] : t.nodes)
    if (n.statement == statement) return id;
  return {};
}

}  // namespace

std::vector<PlantedCase> planted_cases(std::uint64_t seed, int count) {
  std::mt19937_64 rng(seed);
  std::vector<PlantedCase> out;
  for (int i = 0; i < count; ++i) {
    auto names = kNames;
    std::shuffle(names.begin(), names.end(), rng);
    auto adjectives = kAdjectives;
    std::shuffle(adjectives.begin(), adjectives.end(), rng);
    const std::string a = names[0], b = names[1], c = names[2], d = names[3];
    const std::string verb = pick(rng, kVerbs), q = adjectives[0], r = adjectives[1];

    std::string fact = cap(a) + " " + verb + " " + cap(b) + ".";
    std::string rule = "If something " + verb + " " + cap(b) + " then it is " + q + ".";
    bool fault_in_fact = std::bernoulli_distribution(0.5)(rng);
    std::string correct = fault_in_fact ? fact : rule;
    std::string faulty = fault_in_fact ? cap(b) + " " + verb + " " + cap(a) + "."
                                       : "If " + cap(b) + " " + verb + " something then it is " + q + ".";
    (fault_in_fact ? fact : rule) = faulty;

    std::vector<std::string> premises = {fact, rule};
    const std::vector<std::string> distractors = {
        cap(a) + " is " + r + ".",                     // same subject, unrelated property
        cap(c) + " is " + r + ".",                     // nothing in common
        cap(c) + " is " + q + ".",                     // the goal's property, someone else
        cap(c) + " " + verb + " " + cap(d) + ".",      // the rule's verb, other parties
    };
    int extra = std::uniform_int_distribution<int>(1, 3)(rng);
    auto pool = distractors;
    std::shuffle(pool.begin(), pool.end(), rng);
    for (int k = 0; k < extra; ++k) premises.push_back(pool[k]);
    std::shuffle(premises.begin(), premises.end(), rng);

    PlantedCase pc;
    pc.id = "planted-" + std::to_string(i + 1);
    pc.tree = tree::build_tree(premises, cap(a) + " is " + q + ".", {});
    pc.faulty_node = node_with(pc.tree, faulty);
    pc.faulty_statement = faulty;
    pc.correct_statement = correct;
    out.push_back(std::move(pc));
  }
  return out;
}

PlantedCase planted_deep_case() {
  const std::vector<std::string> premises = {
      "Alice chases Bob.",
      "If something chases Bob then it is happy.",
      "Bob helps Alice.",
      "If something helps Bob then it is kind.",
      "If something is kind then it is great.",
  };
  llm::TreeResponse r;
  r.steps = {{{premises[0], premises[1]}, "Alice is happy."},
             {{"Alice is happy.", premises[2], premises[3]}, "Alice is kind."},
             {{"Alice is kind.", premises[4]}, "Alice is great."}};
  PlantedCase pc;
  pc.id = "planted-deep";
  pc.tree = tree::build_tree(premises, "Alice is great.", r);
  pc.faulty_node = "p3";
  pc.faulty_statement = premises[2];
  pc.correct_statement = "Alice helps Bob.";
  return pc;
}

Script repair_script(const PlantedCase& c) {
  Script s;
  s.repairs[c.faulty_statement] = c.correct_statement;
  return s;
}

PlantedRun run_planted(const PlantedCase& c, bool repairing, const verify::Caps& caps) {
  ScriptedClient llm(repairing ? repair_script(c) : Script{});
  atomizer::LexicalScorer scorer;
  formaliser::FormaliserOptions options;
  options.event_quantifier = formaliser::EventQuantifier::Existential;
  verify::PipelineAnnotator annotator(llm, scorer, 0.9, options);
  prover::BuiltinProver prover;
  verify::VerifyContext ctx{prover, {}, llm, annotator, caps};
  PlantedRun run;
  run.result = verify::verify_tree(c.tree, ctx);
  for (const auto& tr : run.result.traces)
    if (!tr.events.empty()) {
      const auto& e = tr.events.front().implicated;
      run.localised = std::find(e.begin(), e.end(), c.faulty_node) != e.end();
      break;
    }
  return run;
}

PlantedReport planted_suite(std::uint64_t seed, int count, bool repairing, const verify::Caps& caps) {
  auto t0 = std::chrono::steady_clock::now();
  PlantedReport rep;
  int total_iterations = 0;
  for (const auto& c : planted_cases(seed, count)) {
    auto run = run_planted(c, repairing, caps);
    ++rep.cases;
    rep.converged += run.result.fin_valid;
    rep.localised += run.localised;
    total_iterations += run.result.iterations;
    const auto& tr = run.result.traces.back();
    bool complete = tr.final_status == verify::FinalStatus::Exhausted &&
                    static_cast<int>(tr.events.size()) == caps.iterations && tr.iteration_count == caps.iterations;
    for (std::size_t i = 0; complete && i < tr.events.size(); ++i)
      complete = tr.events[i].iteration == static_cast<int>(i + 1) && !tr.events[i].implicated.empty();
    rep.capped_complete += complete;
    if (!run.localised) rep.misses.push_back(c.id + " (" + c.faulty_node + ": " + c.faulty_statement + ")");
  }
  rep.mean_iterations = rep.cases ? static_cast<double>(total_iterations) / rep.cases : 0;
  rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

}  // namespace rvnli::testkit
