#pragma once

#include <json.hpp>
#include <map>
#include <string>
#include <vector>

#include "rvnli/atomizer/atomizer.hpp"
#include "rvnli/formaliser/formaliser.hpp"
#include "rvnli/llm/client.hpp"
#include "rvnli/prover/prover.hpp"
#include "rvnli/tree/tree.hpp"

namespace rvnli::verify {

struct AxiomSource {
  std::string node;
  std::size_t atom_index = 0;
  friend bool operator==(const AxiomSource&, const AxiomSource&) = default;
};

// lemma(h, a): A(E) ⊢ Φ(a) for one kept atom a of the subtree root.
struct Obligation {
  std::string subtree_root;
  std::size_t atom_index = 0;
  std::string goal_text;
  logic::Formula goal_atom;
  std::vector<prover::Axiom> axioms;
  std::map<std::string, AxiomSource> sources;

  prover::Theory theory() const;
};

// Axioms are named explanation_1, explanation_2, ... over the children in order.
std::vector<Obligation> build_obligations(const tree::EntailmentTree& t, const std::string& subtree_root);

struct DiagnosticReport {
  Obligation obligation;
  prover::ProofOutcome outcome;
  std::vector<std::string> implicated;
  std::map<std::string, double> evidence;
};

// Ranks the subtree's explanation nodes by the share of the failed goal's non-role symbols their atoms
// mention; axioms falsified by a supplied model and unformalised nodes are boosted, ties go to nodes sharing
// more non-goal symbols with the other explanation nodes. Returns the top `k` with positive score, or every
// explanation node when nothing overlaps.
std::vector<std::string> localise_failure(const tree::EntailmentTree& t, const Obligation& obligation,
                                          const prover::ProofOutcome& outcome, std::size_t k = 2,
                                          std::map<std::string, double>* evidence = nullptr);

struct Caps {
  int iterations = 5;
  std::size_t implicated = 2;
  // Allow refinement of already verified intermediates (re-verified before the retry).
  bool reopen = false;

  void validate() const;
  // "iterations=5,k=2,reopen=0"
  static Caps parse(const std::string& spec);
  std::string to_string() const;
};

// Recomputes D(n) and Φ for a node.
class Annotator {
 public:
  virtual ~Annotator() = default;
  virtual void annotate(tree::TreeNode& node) = 0;
};

// Atomizer + θ-formaliser over an LLM; results are cached per statement text.
class PipelineAnnotator final : public Annotator {
 public:
  PipelineAnnotator(llm::LlmClient& llm, const atomizer::EntailmentScorer& scorer, double threshold = 0.9,
                    formaliser::FormaliserOptions options = {})
      : llm_(llm), scorer_(scorer), threshold_(threshold), options_(std::move(options)) {}
  void annotate(tree::TreeNode& node) override;

  const std::map<std::string, formaliser::StageTrace>& traces() const { return traces_; }
  double formalise_seconds() const { return formalise_seconds_; }
  double atomize_seconds() const { return atomize_seconds_; }

 private:
  struct Cached {
    atomizer::AtomicDecomposition decomposition;
    std::vector<logic::Formula> atoms;
    std::string error;
  };
  llm::LlmClient& llm_;
  const atomizer::EntailmentScorer& scorer_;
  double threshold_;
  formaliser::FormaliserOptions options_;
  std::map<std::string, Cached> cache_;
  std::map<std::string, formaliser::StageTrace> traces_;
  double formalise_seconds_ = 0, atomize_seconds_ = 0;
};

struct VerifyContext {
  const prover::Prover& prover;
  prover::ProverBudget budget;
  llm::LlmClient& llm;
  Annotator& annotator;
  Caps caps;
};

struct RefinementEvent {
  int iteration = 0;
  std::string subtree_root;
  std::string failed_atom;
  std::string failed_formula;
  // proved / refuted / unknown / unformalised.
  std::string failure;
  std::vector<std::string> implicated;
  std::map<std::string, std::string> old_statements;
  std::map<std::string, std::string> new_statements;
  std::vector<std::string> reopened;
  std::string note;
  // Outcome of the retry that follows: verified, failed or exhausted.
  std::string reverification;
};

enum class FinalStatus { Verified, Exhausted, Blocked };
std::string_view to_string(FinalStatus s) noexcept;

struct ObligationResult {
  Obligation obligation;
  prover::ProofOutcome outcome;
};

struct RefinementTrace {
  std::string subtree_root;
  std::vector<RefinementEvent> events;
  int iteration_count = 0;
  FinalStatus final_status = FinalStatus::Exhausted;
  // Obligations of the last attempt.
  std::vector<ObligationResult> last_attempt;
};

nlohmann::json to_json(const RefinementEvent& e);
// One JSON object per line.
std::string to_jsonl(const RefinementTrace& t);

// Verify-and-refine loop on the node `subtree_root` and its immediate children.
RefinementTrace verify_subtree(tree::EntailmentTree& t, const std::string& subtree_root, VerifyContext& ctx);

struct TreeVerification {
  tree::EntailmentTree tree;
  std::vector<RefinementTrace> traces;
  // Verified with no refinement event at all.
  bool init_valid = false;
  bool fin_valid = false;
  int iterations = 0;
};

TreeVerification verify_tree(tree::EntailmentTree t, VerifyContext& ctx);

// A statement with its formalised atoms.
struct FormalStatement {
  std::string text;
  std::vector<logic::Formula> formulas;
};

struct CertificateStep {
  // 1..k for δ_j, k+1 for the hypothesis.
  std::size_t index = 0;
  std::size_t formula_index = 0;
  prover::Theory theory;
  prover::ProofOutcome outcome;
};

struct Certificate {
  std::string instance_id;
  std::vector<std::string> chain;
  std::vector<CertificateStep> steps;
  bool valid = false;
  // 0 when valid.
  std::size_t first_failure = 0;
};

// Recursive-witness check: Φ(P ∪ Π^{<j}) ⊢ Φ(δ_j) for every j, then Φ(P ∪ Π) ⊢ Φ(h) (¬Φ(h) when `negate`).
Certificate check_recursive_witness(const std::string& instance_id, const std::vector<FormalStatement>& premises,
                                    const std::vector<FormalStatement>& chain, const FormalStatement& hypothesis,
                                    const prover::Prover& prover, const prover::ProverBudget& budget = {},
                                    bool negate = false);

// Premise leaves, intermediates in frontier order and the root of a formalised tree.
Certificate certificate_from_tree(const std::string& instance_id, const tree::EntailmentTree& t,
                                  const prover::Prover& prover, const prover::ProverBudget& budget = {});

// Embeds every step's theory as TPTP.
nlohmann::json to_json(const Certificate& c);
// Re-parses the embedded theories and re-proves them; true iff every stored proved step proves again.
bool reverify(const nlohmann::json& certificate, const prover::Prover& prover, const prover::ProverBudget& budget = {});

}  // namespace rvnli::verify
