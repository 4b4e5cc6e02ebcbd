#pragma once

#include <string>
#include <vector>

#include "rvnli/logic/sort.hpp"

namespace rvnli::logic {

// Variable, constant or Skolem application. Skolem names live in the reserved `sk!` namespace,
// which the lexer can never produce.
struct Term {
  enum class Kind { Variable, Constant, Skolem };

  Kind kind = Kind::Variable;
  std::string name;
  Sort sort = Sort::Entity;
  std::vector<Term> args;

  static Term variable(std::string name, Sort sort) { return {Kind::Variable, std::move(name), sort, {}}; }
  static Term constant(std::string name, Sort sort) { return {Kind::Constant, std::move(name), sort, {}}; }
  static Term skolem(std::string name, std::vector<Term> args, Sort sort) {
    return {Kind::Skolem, std::move(name), sort, std::move(args)};
  }

  bool is_variable() const noexcept { return kind == Kind::Variable; }
  bool is_constant() const noexcept { return kind == Kind::Constant; }
  bool is_skolem() const noexcept { return kind == Kind::Skolem; }

  friend bool operator==(const Term&, const Term&) = default;
  friend auto operator<=>(const Term& a, const Term& b) {
    if (auto c = a.kind <=> b.kind; c != 0) return c;
    if (auto c = a.name <=> b.name; c != 0) return c;
    if (auto c = a.sort <=> b.sort; c != 0) return c;
    return a.args <=> b.args;
  }
};

inline constexpr std::string_view kSkolemPrefix = "sk!";

}  // namespace rvnli::logic
