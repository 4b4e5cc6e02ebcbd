#pragma once

#include <optional>
#include <string_view>

namespace rvnli::logic {

// The two sorts of the event-semantics fragment.
enum class Sort { Entity, Event };

constexpr std::string_view to_string(Sort s) noexcept { return s == Sort::Entity ? "entity" : "event"; }

constexpr std::optional<Sort> sort_from_string(std::string_view s) noexcept {
  if (s == "entity") return Sort::Entity;
  if (s == "event") return Sort::Event;
  return std::nullopt;
}

// Sort assumed for an identifier when nothing else constrains it: `e`, `e1`, `e2`, ... are events.
Sort default_sort_for_name(std::string_view name) noexcept;

}  // namespace rvnli::logic
