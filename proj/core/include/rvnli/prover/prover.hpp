#pragma once

#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "rvnli/prover/model.hpp"
#include "rvnli/prover/theory.hpp"

namespace rvnli::prover {

struct ProverBudget {
  std::size_t max_clauses = 50000;
  double max_seconds = 5.0;
  int max_model_domain = 4;

  // Throws BudgetInvalid unless every field is positive.
  void validate() const;
  // "clauses=50000,seconds=5,domain=4"; omitted keys keep their defaults.
  static ProverBudget parse(const std::string& spec);
  std::string to_string() const;
};

enum class ProofStatus { Proved, Refuted, Unknown };
std::string_view to_string(ProofStatus s);

struct DerivationStep {
  int id = 0;
  std::string clause;
  std::vector<int> premises;
  // "axiom", "negated_goal", "resolution", "factoring" or "member".
  std::string rule;
  std::string axiom;
  // Number of completed rule applications below this step.
  int level = 0;
};

struct Diagnostics {
  logic::Formula failed_goal;
  std::optional<Model> countermodel;
  std::string resource_note;
};

struct ProofOutcome {
  ProofStatus status = ProofStatus::Unknown;
  std::set<std::string> used_axioms;
  // Ancestry of the refutation, premises before conclusions; empty unless proved.
  std::vector<DerivationStep> derivation;
  int depth = 0;
  Diagnostics diagnostics;
  std::size_t clauses_generated = 0;
  double seconds = 0.0;

  bool proved() const noexcept { return status == ProofStatus::Proved; }
};

// Pluggable backend.
class Prover {
 public:
  virtual ~Prover() = default;
  virtual std::string name() const = 0;
  virtual ProofOutcome prove(const Theory& theory, const ProverBudget& budget) const = 0;
};

// Membership check, short resolution run, finite countermodel search over sizes
// 1..max_model_domain, then resolution with the full budget.
class BuiltinProver final : public Prover {
 public:
  std::string name() const override { return "builtin"; }
  ProofOutcome prove(const Theory& theory, const ProverBudget& budget) const override;
};

// Runs an external TPTP prover. `command` contains `{file}` and optionally `{seconds}`;
// the SZS status line of the output decides the verdict (no countermodel is extracted, so a
// CounterSatisfiable answer yields unknown with a note).
class ExternalProver final : public Prover {
 public:
  explicit ExternalProver(std::string command) : command_(std::move(command)) {}
  std::string name() const override { return "external"; }
  ProofOutcome prove(const Theory& theory, const ProverBudget& budget) const override;

 private:
  std::string command_;
};

ProofOutcome prove(const Theory& theory, const ProverBudget& budget = {});

// Searches for a model of axioms ∪ {¬goal} with exactly `domain_size` elements per sort.
// Any returned model has been re-checked by direct evaluation.
std::optional<Model> find_countermodel(const Theory& theory, int domain_size);

// Throws NotProved unless the outcome is proved.
int proof_depth(const ProofOutcome& outcome);

// Parses an "SZS status <Status>" line out of prover output; empty when none is present.
std::string szs_status(const std::string& output);

}  // namespace rvnli::prover
