#pragma once

#include <string>
#include <vector>

#include "rvnli/logic/formula.hpp"
#include "rvnli/logic/signature.hpp"

namespace rvnli::prover {

struct Axiom {
  std::string name;
  logic::Formula formula;
  // Natural-language source, emitted as a comment.
  std::string comment;

  friend bool operator==(const Axiom&, const Axiom&) = default;
};

// Named axioms and a goal over the fixed entity/event sorts.
struct Theory {
  std::string name = "data_0";
  logic::Signature signature;
  std::vector<Axiom> axioms;
  logic::Formula goal;
  std::string goal_comment;

  const Axiom* find(const std::string& axiom_name) const;
  friend bool operator==(const Theory&, const Theory&) = default;
};

// Builds a theory whose signature is inferred from the formulas in order of first appearance.
Theory make_theory(std::string name, std::vector<Axiom> axioms, logic::Formula goal, std::string goal_comment = {});

// Checks the theory invariants: closed, placeholder-free, well-sorted against the signature
// (which is extended with undeclared symbols), unique axiom names.
void validate(const Theory& theory);

}  // namespace rvnli::prover
