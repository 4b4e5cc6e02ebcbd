#include <benchmark/benchmark.h>

#include "rvnli/logic/parser.hpp"
#include "rvnli/metrics/harness.hpp"
#include "rvnli/prover/export.hpp"
#include "rvnli/prover/prover.hpp"

using namespace rvnli;

namespace {

// w0(alex), w_i(x) -> w_{i+1}(x) ... ⊢ w_n(alex)
prover::Theory chain(int n) {
  std::vector<prover::Axiom> axioms;
  axioms.push_back({"fact", logic::parse_formula("W0(alex)"), ""});
  for (int i = 0; i < n; ++i)
    axioms.push_back({"rule_" + std::to_string(i + 1),
                      logic::parse_formula("forall x. W" + std::to_string(i) + "(x) -> W" + std::to_string(i + 1) + "(x)"),
                      ""});
  return prover::make_theory("chain", axioms, logic::parse_formula("W" + std::to_string(n) + "(alex)"));
}

void BM_ProveChain(benchmark::State& state) {
  auto t = chain(static_cast<int>(state.range(0)));
  prover::BuiltinProver p;
  for (auto _ : state) benchmark::DoNotOptimize(p.prove(t, {}));
}
BENCHMARK(BM_ProveChain)->Arg(1)->Arg(3)->Arg(5)->Arg(10);

void BM_Countermodel(benchmark::State& state) {
  auto t = chain(3);
  t.goal = logic::parse_formula("W3(bob)");
  for (auto _ : state) benchmark::DoNotOptimize(prover::find_countermodel(t, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_Countermodel)->Arg(1)->Arg(2)->Arg(3);

void BM_TptpRoundTrip(benchmark::State& state) {
  auto t = chain(5);
  for (auto _ : state) benchmark::DoNotOptimize(prover::parse_tptp(prover::export_tptp(t)));
}
BENCHMARK(BM_TptpRoundTrip);

void BM_RunE2E(benchmark::State& state) {
  metrics::RunConfig c;
  c.dataset = RVNLI_FIXTURES "/datasets/e2e.jsonl";
  c.fixtures = RVNLI_FIXTURES "/llm/e2e";
  c.event_quantifier = formaliser::EventQuantifier::Existential;
  for (auto _ : state) benchmark::DoNotOptimize(metrics::run(c));
}
BENCHMARK(BM_RunE2E)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
