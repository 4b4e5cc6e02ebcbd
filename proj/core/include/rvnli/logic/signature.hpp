#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "rvnli/logic/formula.hpp"

namespace rvnli::logic {

// Predicate symbol -> argument sorts, remembering declaration order.
class Signature {
 public:
  // Declares `symbol`; re-declaring with identical sorts is a no-op, anything else is a SortError.
  void declare(const std::string& symbol, std::vector<Sort> arg_sorts);
  const std::vector<Sort>* find(std::string_view symbol) const;
  bool contains(std::string_view symbol) const { return find(symbol) != nullptr; }
  const std::vector<std::string>& symbols() const noexcept { return order_; }
  std::size_t size() const noexcept { return order_.size(); }
  bool empty() const noexcept { return order_.empty(); }

  // Adds every declaration of `other` (conflicts are SortErrors).
  void merge(const Signature& other);

  friend bool operator==(const Signature&, const Signature&) = default;

 private:
  std::map<std::string, std::vector<Sort>, std::less<>> sorts_;
  std::vector<std::string> order_;
};

// Default role vocabulary: binary predicates whose first argument is the event.
const std::vector<std::string>& default_role_vocabulary();

// Signature declaring each role as (event, entity).
Signature role_signature(const std::vector<std::string>& roles = default_role_vocabulary());

// Signature induced by the formulas in order of first appearance. Conflicting uses throw SortError.
Signature infer_signature(const std::vector<Formula>& formulas);

// Throws SortError when `f` uses a symbol with an arity or argument sort that disagrees with `sig`.
// Undeclared symbols are added to `sig` when `extend` is set, and rejected otherwise.
void check_sorts(const Formula& f, Signature& sig, bool extend = true);
bool well_sorted(const Formula& f, const Signature& sig);

}  // namespace rvnli::logic
