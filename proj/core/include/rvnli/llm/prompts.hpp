#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace rvnli::llm {

enum class TemplateId { Tree, Atoms, Template, ThetaStage, Refine };

std::string_view to_string(TemplateId id) noexcept;
std::optional<TemplateId> template_id_from_string(std::string_view s) noexcept;

// Slots are written `{name}` with a lower-case name.
struct PromptTemplate {
  TemplateId id;
  std::string system;
  std::string user;

  std::vector<std::string> slots() const;
};

const PromptTemplate& prompt_template(TemplateId id);

using Slots = std::map<std::string, std::string>;

struct Prompt {
  TemplateId id;
  Slots slots;
  std::string system;
  std::string user;

  // Both roles joined as SYSTEM / USER blocks.
  std::string text() const;
  // Stable hash of the slot values; names fixture files.
  std::string key() const;
};

// Throws MissingSlot when a slot of the template is absent from `slots`.
Prompt render(TemplateId id, const Slots& slots);
Prompt render(const PromptTemplate& tmpl, const Slots& slots);

std::string slot_hash(const Slots& slots);

}  // namespace rvnli::llm
