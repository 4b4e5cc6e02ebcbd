#include <benchmark/benchmark.h>

#include "rvnli/formaliser/formaliser.hpp"
#include "rvnli/llm/client.hpp"
#include "rvnli/logic/parser.hpp"
#include "rvnli/logic/render.hpp"
#include "rvnli/logic/signature.hpp"
#include "rvnli/prover/clause.hpp"

using namespace rvnli;

namespace {

const char* kRole =
    "forall x y z e1 e2. ForestFire(x) & Deer(y) & Woodland(z) -> "
    "(Die(e1) & Agent(e1, y)) | (Leave(e2) & Agent(e2, y) & Patient(e2, z))";

void BM_ParseFormula(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(logic::parse_formula(kRole));
}
BENCHMARK(BM_ParseFormula);

void BM_RenderTptp(benchmark::State& state) {
  auto f = logic::parse_formula(kRole);
  for (auto _ : state) benchmark::DoNotOptimize(logic::render_formula(f, logic::Dialect::TptpFof));
}
BENCHMARK(BM_RenderTptp);

void BM_InferSignature(benchmark::State& state) {
  std::vector<logic::Formula> fs{logic::parse_formula(kRole)};
  for (auto _ : state) benchmark::DoNotOptimize(logic::infer_signature(fs));
}
BENCHMARK(BM_InferSignature);

void BM_Clausify(benchmark::State& state) {
  auto f = logic::parse_formula(
      "forall e x y z. Melting(e) <-> (Change(e) & Source(e, x) & Destination(e, y) & Solid(x) & Liquid(y))");
  for (auto _ : state) benchmark::DoNotOptimize(prover::clausify(f));
}
BENCHMARK(BM_Clausify);

void BM_FormaliseFixture(benchmark::State& state) {
  llm::FixtureClient llm(RVNLI_FIXTURES "/llm/forest_fire");
  formaliser::FormaliserOptions options;
  for (auto _ : state)
    benchmark::DoNotOptimize(
        formaliser::formalise("A forest fire would cause deer to die or leave a woodland.", llm, options));
}
BENCHMARK(BM_FormaliseFixture);

}  // namespace
