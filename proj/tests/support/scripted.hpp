#pragma once

#include <json.hpp>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rvnli/llm/client.hpp"
#include "rvnli/llm/parsers.hpp"
#include "rvnli/logic/formula.hpp"
#include "rvnli/verify/verify.hpp"

namespace rvnli::testkit {

// Answers of the template prompt and the three θ stages for one sentence.
struct FormalisationPlan {
  std::string template_text;
  nlohmann::json entity, event, role;  // binding lists
};

// The controlled grammar understood by ScriptedClient:
//   <name> is [not] [a] <np>.                 Every/All <np>s are <np>.
//   If something is <np> [and <np>] then it is <np>.
//   <name> <verb>s [<name>].                  Every <np> <verb>s <name>.
//   If something is <np> then it <verb>s <name>.
//   If something <verb>s <name> then it is <np>.     If <name> <verb>s something then it is <np>.
// Events are read existentially.
std::optional<FormalisationPlan> controlled_plan(const std::string& sentence);
// The formula the plan should yield under existential event closure; throws when outside the grammar.
logic::Formula controlled_formula(const std::string& sentence);

struct Script {
  // Tree answers keyed by the conclusion.
  std::map<std::string, std::vector<llm::TreeStep>> trees;
  // Candidate atoms keyed by sentence.
  std::map<std::string, std::vector<std::string>> atoms;
  // Formalisations outside the controlled grammar.
  std::map<std::string, FormalisationPlan> plans;
  // Refinement answers: statement -> rewrite.
  std::map<std::string, std::string> repairs;

  static Script from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
  void merge(const Script& other);
};

// Deterministic stand-in for the LLM. Unscripted trees use every premise in one step; unscripted
// sentences are one atom, split at "and" for "<name> is <np> and <np>."; refinement rewrites the
// listed statements through `repairs` and echoes the others.
class ScriptedClient final : public llm::LlmClient {
 public:
  explicit ScriptedClient(Script script = {}) : script_(std::move(script)) {}
  std::string name() const override { return "scripted"; }
  std::string complete(const llm::Prompt& prompt, const llm::CompletionParams& params = {}) override;

  Script& script() { return script_; }
  int calls(llm::TemplateId id) const;

 private:
  Script script_;
  std::map<llm::TemplateId, int> calls_;
};

std::string render_tree_answer(const std::vector<llm::TreeStep>& steps);

// Annotates from fixed statement -> formula lists; unknown statements become unformalised.
class MapAnnotator final : public verify::Annotator {
 public:
  explicit MapAnnotator(std::map<std::string, std::vector<logic::Formula>> table) : table_(std::move(table)) {}
  void annotate(tree::TreeNode& node) override;
  int calls() const { return calls_; }

 private:
  std::map<std::string, std::vector<logic::Formula>> table_;
  int calls_ = 0;
};

}  // namespace rvnli::testkit
