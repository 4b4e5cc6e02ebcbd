#pragma once

#include <chrono>
#include <set>
#include <string>
#include <vector>

#include "rvnli/prover/clause.hpp"
#include "rvnli/prover/prover.hpp"

namespace rvnli::prover::detail {

struct InputClause {
  Clause clause;
  // Index of the source axiom, or -1 for the negated goal.
  int origin = -1;
};

struct SaturationResult {
  enum class Kind { Refutation, Saturated, ClauseLimit, Timeout } kind = Kind::Saturated;
  std::vector<DerivationStep> derivation;
  std::set<int> used_origins;
  // Completed rule applications on the longest path to the empty clause.
  int level = 0;
  std::size_t generated = 0;
};

// Given-clause binary resolution with negative literal selection and positive factoring.
SaturationResult saturate(const std::vector<InputClause>& input, std::size_t max_clauses,
                          std::chrono::steady_clock::time_point deadline);

}  // namespace rvnli::prover::detail
