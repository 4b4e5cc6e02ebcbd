#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "rvnli/logic/formula.hpp"

namespace rvnli::prover {

// Finite interpretation: elements 0..n-1 of each sort, constants, predicate extensions.
struct Model {
  int entity_size = 1;
  int event_size = 1;
  std::map<std::string, int> constants;
  std::map<std::string, std::set<std::vector<int>>> relations;

  int size(logic::Sort s) const { return s == logic::Sort::Entity ? entity_size : event_size; }
  // Closed formulas only; unknown constants denote element 0.
  bool holds(const logic::Formula& f) const;
  bool holds_atom(const std::string& predicate, const std::vector<int>& args) const;
  std::string describe() const;

  friend bool operator==(const Model&, const Model&) = default;
};

}  // namespace rvnli::prover
