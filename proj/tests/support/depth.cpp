#include "depth.hpp"

#include "rvnli/metrics/harness.hpp"
#include "rvnli/prover/prover.hpp"
#include "scripted.hpp"

namespace rvnli::testkit {

namespace {

const std::vector<std::string> kNames = {"alex", "bob", "carol", "dave", "erin"};
const std::vector<std::string> kWords = {"big", "kind", "red", "quiet", "round", "young", "rough", "happy", "green", "cold", "smart", "nice"};

std::string cap(std::string s) {
  s[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(s[0])));
  return s;
}

}  // namespace

metrics::DatasetInstance chain_instance(int depth, int variant) {
  auto word = [&](int i) { return kWords[(i + 3 * variant) % kWords.size()]; };
  std::string name = cap(kNames[variant % kNames.size()]);
  metrics::DatasetInstance d;
  d.id = "chain-d" + std::to_string(depth) + "-" + std::to_string(variant + 1);
  d.premises.push_back(name + " is " + word(0) + ".");
  for (int i = 0; i < depth; ++i)
    d.premises.push_back("If something is " + word(i) + " then it is " + word(i + 1) + ".");
  d.hypothesis = name + " is " + word(depth) + ".";
  d.label = metrics::Label::Entailment;
  d.gold_depth = depth;
  return d;
}

DepthCurves depth_curves(int per_depth) {
  DepthCurves out;
  metrics::RunConfig config;
  config.event_quantifier = formaliser::EventQuantifier::Existential;
  prover::BuiltinProver prover;
  for (int depth = 1; depth <= 5; ++depth)
    for (int v = 0; v < per_depth; ++v) {
      auto inst = chain_instance(depth, v);
      ScriptedClient llm;
      auto row = metrics::run_instance(inst, config, llm, prover);
      out.tree.push_back({inst.id, depth, row.used_depth.value_or(-1), row.iterations > 0});

      std::vector<prover::Axiom> axioms;
      std::vector<logic::Formula> premises;
      for (const auto& p : inst.premises) premises.push_back(controlled_formula(p));
      auto fused = metrics::compress_chain(premises, 2);
      for (std::size_t i = 0; i < fused.size(); ++i) axioms.push_back({"premise_" + std::to_string(i + 1), fused[i], ""});
      auto outcome = prover.prove(prover::make_theory("holistic", axioms, controlled_formula(inst.hypothesis)), {});
      out.holistic.push_back({inst.id, depth, outcome.status == prover::ProofStatus::Proved ? outcome.depth : -1, false});
    }
  return out;
}

bool on_diagonal(const std::vector<metrics::DepthBucket>& curve) {
  if (curve.size() != 5) return false;
  for (std::size_t i = 0; i < curve.size(); ++i)
    if (curve[i].gold_depth != static_cast<int>(i + 1) || curve[i].mean_used != curve[i].gold_depth) return false;
  return true;
}

bool saturates(const std::vector<metrics::DepthBucket>& curve) {
  if (curve.size() != 5 || curve.front().mean_used != 1.0) return false;
  for (std::size_t i = 1; i < curve.size(); ++i) {
    if (curve[i].mean_used < curve[i - 1].mean_used) return false;
    if (i >= 2 && curve[i].mean_used != curve[i - 1].mean_used) return false;
  }
  return curve.back().mean_used < curve.back().gold_depth;
}

}  // namespace rvnli::testkit
