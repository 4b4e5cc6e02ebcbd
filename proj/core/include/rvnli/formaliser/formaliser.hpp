#pragma once

#include <json.hpp>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rvnli/llm/client.hpp"
#include "rvnli/logic/formula.hpp"
#include "rvnli/logic/signature.hpp"
#include "rvnli/logic/substitution.hpp"

namespace rvnli::formaliser {

enum class Stage { Entity, Event, Role };
std::string_view to_string(Stage s) noexcept;
std::optional<Stage> stage_from_string(std::string_view s) noexcept;

// How event variables introduced by θ2 are bound once roles are attached.
//  paper:       appended to the leading ∀ block of the formula ("∀x y z e1 e2").
//  existential: ∃ over the smallest sub-formula containing every occurrence.
enum class EventQuantifier { Paper, Existential };
std::optional<EventQuantifier> event_quantifier_from_string(std::string_view s) noexcept;

struct FormaliserOptions {
  EventQuantifier event_quantifier = EventQuantifier::Paper;
  std::vector<std::string> roles = logic::default_role_vocabulary();
};

struct StageRecord {
  Stage stage;
  logic::Substitution theta;
  logic::Formula result;
  // Unused bindings, event atoms left without roles.
  std::vector<std::string> warnings;
};

struct StageTrace {
  std::string sentence;
  logic::Formula template_formula;
  std::vector<StageRecord> stages;

  const logic::Formula& final_formula() const;
  // Closed, placeholder-free and every event atom carries at least one role.
  bool complete() const;
};

bool operator==(const StageRecord& a, const StageRecord& b);
bool operator==(const StageTrace& a, const StageTrace& b);

// Written with "version": kSchemaVersion; a document carrying another version is rejected.
inline constexpr int kSchemaVersion = 1;

nlohmann::json to_json(const StageTrace& t);
StageTrace trace_from_json(const nlohmann::json& j);

// Stage-binding documents (see docs/stage_bindings.md).
nlohmann::json bindings_to_json(Stage stage, const logic::Substitution& theta);
// `context` supplies variable sorts for formula fragments. A document for another stage is a StageViolation.
logic::Substitution bindings_from_json(const nlohmann::json& j, Stage expected, const logic::Formula& context);

// Template prompt; the answer must parse in template mode (TemplateParseError otherwise).
logic::Formula generate_template(const std::string& sentence, llm::LlmClient& llm);

// Each stage checks its discipline and throws StageViolation when θ steps outside it.
logic::Formula stage_entity(const logic::Formula& phi0, const logic::Substitution& theta1,
                            const FormaliserOptions& options = {}, std::vector<std::string>* warnings = nullptr);
logic::Formula stage_event(const logic::Formula& phi1, const logic::Substitution& theta2,
                           const FormaliserOptions& options = {}, std::vector<std::string>* warnings = nullptr);
// Also binds the free event variables per `options.event_quantifier`; the output is closed.
logic::Formula stage_role(const logic::Formula& phi2, const logic::Substitution& theta3,
                          const FormaliserOptions& options = {}, std::vector<std::string>* warnings = nullptr);

// Binds the free event variables of `f`.
logic::Formula close_events(const logic::Formula& f, EventQuantifier q);

// close_events(φ0[θ1∘θ2∘θ3]) == φ_final.
bool composition_agrees(const StageTrace& trace, const FormaliserOptions& options = {});

// Template generation and three stage calls to the LLM.
StageTrace formalise(const std::string& sentence, llm::LlmClient& llm, const FormaliserOptions& options = {});

// Slots of the θ-stage prompt for `stage` applied to `current`.
llm::Slots theta_prompt_slots(const std::string& sentence, Stage stage, const logic::Formula& current,
                              const FormaliserOptions& options);

}  // namespace rvnli::formaliser
