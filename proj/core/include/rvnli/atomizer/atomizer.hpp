#pragma once

#include <json.hpp>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "rvnli/llm/client.hpp"

namespace rvnli::atomizer {

struct Atom {
  std::string text;
  double score = 0.0;
  bool kept = false;
  friend bool operator==(const Atom&, const Atom&) = default;
};

struct AtomicDecomposition {
  std::string source;
  std::vector<Atom> atoms;
  double threshold = 0.9;

  std::vector<std::string> kept_atoms() const;
  std::size_t kept_count() const;
  friend bool operator==(const AtomicDecomposition&, const AtomicDecomposition&) = default;
};

void to_json(nlohmann::json& j, const AtomicDecomposition& d);
void from_json(const nlohmann::json& j, AtomicDecomposition& d);

class EntailmentScorer {
 public:
  virtual ~EntailmentScorer() = default;
  virtual std::string name() const = 0;
  // Probability-like score in [0, 1] that `premise` entails `hypothesis`.
  virtual double score(const std::string& premise, const std::string& hypothesis) const = 0;
};

// Fraction of the hypothesis' content tokens that also occur in the premise.
class LexicalScorer final : public EntailmentScorer {
 public:
  std::string name() const override { return "lexical"; }
  double score(const std::string& premise, const std::string& hypothesis) const override;
};

// POSTs {"premise", "hypothesis"} and reads {"score"}.
class HttpScorer final : public EntailmentScorer {
 public:
  explicit HttpScorer(std::string endpoint, int timeout_seconds = 30)
      : endpoint_(std::move(endpoint)), timeout_(timeout_seconds) {}
  std::string name() const override { return "http"; }
  double score(const std::string& premise, const std::string& hypothesis) const override;

 private:
  std::string endpoint_;
  int timeout_;
};

// `lexical` or `http` (which needs `endpoint`).
std::unique_ptr<EntailmentScorer> make_scorer(const std::string& kind, const std::string& endpoint = "");

// Candidate atoms for `sentence` from the decomposition prompt.
std::vector<std::string> decompose(const std::string& sentence, llm::LlmClient& llm);

// Scores every candidate against the source; duplicated texts collapse to one entry with the maximum score.
AtomicDecomposition filter_entailed(const std::string& source, const std::vector<std::string>& candidates,
                                    const EntailmentScorer& scorer, double threshold = 0.9);

// decompose + filter_entailed.
AtomicDecomposition atomize(const std::string& sentence, llm::LlmClient& llm, const EntailmentScorer& scorer,
                            double threshold = 0.9);

std::vector<std::string> conjunction_of(const AtomicDecomposition& d);
std::set<std::string> global_atom_set(const std::vector<AtomicDecomposition>& premises);

}  // namespace rvnli::atomizer
