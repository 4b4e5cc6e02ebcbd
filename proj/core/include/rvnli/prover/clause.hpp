#pragma once

#include <string>
#include <vector>

#include "rvnli/logic/formula.hpp"

namespace rvnli::prover {

struct Literal {
  bool positive = true;
  std::string predicate;
  std::vector<logic::Term> args;

  friend bool operator==(const Literal&, const Literal&) = default;
};

// Disjunction of literals; variables are implicitly universally quantified.
struct Clause {
  std::vector<Literal> literals;

  bool empty() const noexcept { return literals.empty(); }
  friend bool operator==(const Clause&, const Clause&) = default;
};

struct ClausifyOptions {
  // Skolem symbols are numbered from here; callers clausifying several formulas into one set
  // pass the counter through to keep symbols fresh.
  int* skolem_counter = nullptr;
  std::size_t max_clauses = 100000;
};

// NNF, Skolemisation and CNF of a closed, placeholder-free formula. The result is
// equisatisfiable with the input. Tautologies are dropped.
std::vector<Clause> clausify(const logic::Formula& f, const ClausifyOptions& options = {});

std::string to_string(const Literal& l);
std::string to_string(const Clause& c);

}  // namespace rvnli::prover
