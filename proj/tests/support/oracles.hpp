#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "rvnli/logic/formula.hpp"
#include "rvnli/prover/model.hpp"
#include "rvnli/prover/prover.hpp"

namespace rvnli::testkit {

// Entailment of quantifier-free formulas by enumerating all assignments to their atoms.
bool truth_table_entails(const std::vector<logic::Formula>& axioms, const logic::Formula& goal);

// Vocabulary of a single-sort (entity) finite-model search.
struct Vocabulary {
  std::vector<std::pair<std::string, int>> predicates;  // name, arity
  std::vector<std::string> constants;
};

// Enumerates every entity-only interpretation with 1..max_size elements and returns the size
// of the first one satisfying the axioms and falsifying the goal.
std::optional<int> brute_force_countermodel(const std::vector<logic::Formula>& axioms, const logic::Formula& goal,
                                            const Vocabulary& vocabulary, int max_size);

// Re-evaluates a prover model with an evaluator that shares no code with the library.
bool independent_holds(const prover::Model& model, const logic::Formula& f);

// Random theories for the oracle comparisons.
prover::Theory random_ground_theory(std::mt19937_64& rng);
prover::Theory random_quantified_theory(std::mt19937_64& rng);
const Vocabulary& quantified_vocabulary();

struct AgreementReport {
  int ground = 0, ground_agree = 0;
  int quantified = 0, quantified_agree = 0;
  int proved = 0, refuted = 0, unknown = 0;
  double seconds = 0;
  std::vector<std::string> disagreements;

  bool ok() const { return disagreements.empty() && ground > 0 && quantified > 0; }
};

// Compares prove() with the truth-table oracle (ground) and the brute-force model oracle
// (quantified, sizes <= 3, prover model search capped at 3).
AgreementReport prover_oracle_agreement(std::uint64_t seed, int ground, int quantified);

}  // namespace rvnli::testkit
