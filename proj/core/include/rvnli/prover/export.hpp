#pragma once

#include <string>
#include <string_view>

#include "rvnli/prover/theory.hpp"

namespace rvnli::prover {

enum class GoalForm {
  // `shows "<goal>"`, with a leading implication under universal quantifiers split into
  // `assumes asm: "<antecedent>"` / `shows "<consequent>"`.
  Direct,
  // `assumes asm: "<goal without its ∃ prefix>" shows False`.
  Contradiction,
};

struct IsabelleOptions {
  GoalForm goal_form = GoalForm::Direct;
  // Constants get `c :: "entity"` declarations after the predicates.
  bool declare_constants = true;
};

// Theory file in the usual typedecl / consts / axiomatization layout. Throws NameCollision for clashing names.
std::string export_isabelle(const Theory& theory, const IsabelleOptions& options = {});

// Reads a theory file in the exported layout. The goal is reconstructed from the
// assumes/shows pair (for the contradiction form, the ∃-closure of the assumption).
// Throws SyntaxError, or SortError when a formula does not type-check against the consts.
Theory parse_isabelle(std::string_view text);

// TPTP FOF problem with sort guard predicates. Throws NameCollision when symbol mangling
// is not invertible for this theory.
std::string export_tptp(const Theory& theory);

// Inverse of export_tptp. Throws SyntaxError.
Theory parse_tptp(std::string_view text);

}  // namespace rvnli::prover
