#include "rvnli/llm/prompts.hpp"

#include <json.hpp>
#include <algorithm>
#include <regex>

#include "rvnli/error.hpp"
#include "rvnli/text/tokenize.hpp"

namespace rvnli::llm {

namespace {

// Atomic decomposition.
const char* const kAtomsSystem =
    "You are an expert in symbolic/logical reasoning, linguistic and natural language inference. You are given a "
    "sentence and its logical information. Generate a list of atomic facts that are strictly logically entailed "
    "from the given sentence.\n"
    "\n"
    "Instructions:\n"
    "1. Keep each fact independent and self-contained.\n"
    "2. Each fact should make sense when read on its own.\n"
    "3. Only write facts that are directly described or supported by the sentence.\n"
    "4. The atomic facts must be logically entailed from the given sentence.";

const char* const kAtomsUser =
    "Here are some examples:\n"
    "\n"
    "Example:\n"
    "Provided Sentence:\n"
    "Professional actors are in a summer performance.\n"
    "\n"
    "Answer:\n"
    "Atom 1: The people are professional.\n"
    "Atom 2: The people are actors.\n"
    "Atom 3: The performance is during summer.\n"
    "\n"
    "Task:\n"
    "Provided Sentence: {sentence}\n"
    "\n"
    "Answer:";

// Entailment tree.
const char* const kTreeSystem =
    "You are an expert in natural language inference and textual entailment. Given the following premise sentences "
    "and a final conclusion, generate some step-by-step intermediate conclusion sentences to finally infer the "
    "final conclusion.\n"
    "Instructions:\n"
    "1. The intermediate conclusion sentences must be strictly logical entailed from the premise sentences.\n"
    "2. Since the reasoning is step-by-step, the intermediate conclusion sentences can be the new premise sentences "
    "for next step.\n"
    "3. One intermediate conclusion sentence can be generated from multiple premise sentences.\n"
    "4. If the final conclusion can be directly inferred from the premise sentences, you need to state the "
    "intermediate conclusion sentences are empty.\n"
    "5. There might be redundant premise sentences.";

const char* const kTreeUser =
    "Here are some examples:\n"
    "\n"
    "Example:\n"
    "Initial Premises:\n"
    "1. Monkeypox is an infectious disease caused by the monkeypox virus.\n"
    "2. Monkeypox virus can occur in certain animals, including humans.\n"
    "3. Humans are mammals.\n"
    "4. Mammals are animals.\n"
    "5. Symptoms of Monkeypox include fever, headache, muscle pains, feeling tired, and so on.\n"
    "6. People feel tired when they get a flu.\n"
    "\n"
    "Final Conclusion:\n"
    "There is an animal.\n"
    "\n"
    "Answer:\n"
    "Monkeypox is an infectious disease caused by the monkeypox virus.\n"
    "Monkeypox virus can occur in certain animals, including humans.\n"
    "Conclusion: Humans can get monkeypox.\n"
    "\n"
    "Humans are mammals.\n"
    "Mammals are animals.\n"
    "Conclusion:Humans are animals.\n"
    "\n"
    "...\n"
    "\n"
    "Humans are animals.\n"
    "Therefore, there is an animal (humans) that can get monkeypox and feel tired.\n"
    "Conclusion:Therefore, there is an animal.\n"
    "\n"
    "Initial Premises:\n"
    "{premises}\n"
    "\n"
    "Final Conclusion:\n"
    "{conclusion}\n"
    "\n"
    "Answer:";

// Logical template. There is no USER part.
const char* const kTemplateSystem =
    "You are an expert in symbolic/logical reasoning and autoformalisation. You are given a sentence.Extract the "
    "logical relation from a given natural language sentence and construct a logical template representing its "
    "structure, following the format demonstrated in the examples.\n"
    "\n"
    "Instructions:\n"
    "1. Read and understand the provided sentence.\n"
    "2. Identify key entities, relationships, and logical structure (e.g., quantifiers, conjunctions, "
    "disjunctions, implications).\n"
    "3. Abstract the sentence into a logical template using placeholders (e.g., ∀ x y z. P(x) ∧ Q(y) "
    "∧ R(z) → S) that capture the logical form, not the specific content.\n"
    "Follow these steps:\n"
    "1. Parse the sentence and reason step-by-step about its logical components: What are its predicates, "
    "quantifiers, variables, and connectives?\n"
    "2. Formulate the logical template, using generic predicate letters (P, Q, R, S, etc.) and variable "
    "placeholders (x, y, z, etc.), mirroring the schema shown in the examples.\n"
    "...\n"
    "\n"
    "Example 1:\n"
    "Sentence: If someone wins the lottery, they will buy a new house or a car.\n"
    "\n"
    "Example 1 Answer:\n"
    "Logical Template: ∀x y z. P(x) ∧ Q(y) → (R(z) ∨ S(z))\n"
    "...\n"
    "Provided Sentence: {sentence}\n"
    "\n"
    "Answer:";

const char* const kThetaSystem =
    "You are an expert in symbolic/logical reasoning and autoformalisation with Neo-Davidsonian event semantics. "
    "You instantiate a logical template one substitution stage at a time. Return only a JSON object "
    "{\"stage\": ..., \"bindings\": [...]} for the requested stage.";

const char* const kThetaUser =
    "Sentence: {sentence}\n"
    "Current formula: {formula}\n"
    "Stage: {stage}\n"
    "{stage_instructions}\n"
    "Allowed role predicates: {roles}\n"
    "\n"
    "Answer:";

const char* const kRefineSystem =
    "You are an expert in natural language inference and formal verification. A theorem prover could not derive a "
    "goal from a set of explanation sentences. Rewrite only the listed explanation sentences so that, together, "
    "they strictly entail the goal. Keep every other sentence unchanged and keep each rewritten sentence "
    "self-contained.";

const char* const kRefineUser =
    "Goal sentence: {goal}\n"
    "Goal formula: {goal_formula}\n"
    "\n"
    "Sentences to rewrite:\n"
    "{statements}\n"
    "\n"
    "Other explanation sentences:\n"
    "{context}\n"
    "\n"
    "Prover diagnostics:\n"
    "{diagnostics}\n"
    "\n"
    "Answer with one line per rewritten sentence, formatted as \"Node <id>: <sentence>\".\n"
    "\n"
    "Answer:";

const std::regex& slot_re() {
  static const std::regex re(R"(\{([a-z_]+)\})");
  return re;
}

void collect(const std::string& s, std::vector<std::string>& out) {
  for (auto it = std::sregex_iterator(s.begin(), s.end(), slot_re()); it != std::sregex_iterator(); ++it) {
    std::string name = (*it)[1];
    if (std::find(out.begin(), out.end(), name) == out.end()) out.push_back(name);
  }
}

std::string fill(const std::string& s, const Slots& slots) {
  std::string out;
  std::size_t last = 0;
  for (auto it = std::sregex_iterator(s.begin(), s.end(), slot_re()); it != std::sregex_iterator(); ++it) {
    out.append(s, last, static_cast<std::size_t>(it->position()) - last);
    auto found = slots.find((*it)[1]);
    if (found == slots.end()) throw MissingSlot("missing prompt slot '" + std::string((*it)[1]) + "'");
    out += found->second;
    last = static_cast<std::size_t>(it->position() + it->length());
  }
  out.append(s, last, std::string::npos);
  return out;
}

}  // namespace

std::string_view to_string(TemplateId id) noexcept {
  switch (id) {
    case TemplateId::Tree: return "tree";
    case TemplateId::Atoms: return "atoms";
    case TemplateId::Template: return "template";
    case TemplateId::ThetaStage: return "theta_stage";
    case TemplateId::Refine: return "refine";
  }
  return "?";
}

std::optional<TemplateId> template_id_from_string(std::string_view s) noexcept {
  for (auto id : {TemplateId::Tree, TemplateId::Atoms, TemplateId::Template, TemplateId::ThetaStage, TemplateId::Refine})
    if (to_string(id) == s) return id;
  return std::nullopt;
}

std::vector<std::string> PromptTemplate::slots() const {
  std::vector<std::string> out;
  collect(system, out);
  collect(user, out);
  return out;
}

const PromptTemplate& prompt_template(TemplateId id) {
  static const PromptTemplate tree{TemplateId::Tree, kTreeSystem, kTreeUser};
  static const PromptTemplate atoms{TemplateId::Atoms, kAtomsSystem, kAtomsUser};
  static const PromptTemplate tmpl{TemplateId::Template, kTemplateSystem, ""};
  static const PromptTemplate theta{TemplateId::ThetaStage, kThetaSystem, kThetaUser};
  static const PromptTemplate refine{TemplateId::Refine, kRefineSystem, kRefineUser};
  switch (id) {
    case TemplateId::Tree: return tree;
    case TemplateId::Atoms: return atoms;
    case TemplateId::Template: return tmpl;
    case TemplateId::ThetaStage: return theta;
    case TemplateId::Refine: return refine;
  }
  return tree;
}

std::string Prompt::text() const {
  std::string out = "SYSTEM: " + system;
  if (!user.empty()) out += "\n\nUSER: " + user;
  return out;
}

std::string Prompt::key() const { return slot_hash(slots); }

std::string slot_hash(const Slots& slots) {
  nlohmann::json j = slots;  // std::map serialises in key order
  return text::hex64(text::fnv1a(j.dump()));
}

Prompt render(const PromptTemplate& tmpl, const Slots& slots) {
  return Prompt{tmpl.id, slots, fill(tmpl.system, slots), fill(tmpl.user, slots)};
}

Prompt render(TemplateId id, const Slots& slots) { return render(prompt_template(id), slots); }

}  // namespace rvnli::llm
