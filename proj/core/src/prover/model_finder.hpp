#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <vector>

#include "rvnli/prover/clause.hpp"
#include "rvnli/prover/model.hpp"

namespace rvnli::prover::detail {

struct ModelSearch {
  std::optional<Model> model;
  // Set when the size was skipped or the solver ran out of time.
  std::string note;
};

// Looks for a model of `clauses` with `n` elements in each sort. Function symbols are turned
// into graph predicates with totality and functionality constraints, then the clause set is
// grounded and handed to the SAT solver.
ModelSearch search_model(const std::vector<Clause>& clauses, int n, std::chrono::steady_clock::time_point deadline,
                         std::size_t max_ground_literals = 4'000'000);

}  // namespace rvnli::prover::detail
