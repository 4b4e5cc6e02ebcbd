#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "rvnli/logic/formula.hpp"
#include "rvnli/logic/signature.hpp"

namespace rvnli::logic {

// Replacement of a placeholder by a predicate symbol: P(x) becomes Symbol(x).
struct PredicateSymbol {
  std::string name;
  friend bool operator==(const PredicateSymbol&, const PredicateSymbol&) = default;
};

// What a binding matches:
//  - a name: a placeholder of that name, or a free variable of that name for Term replacements;
//  - a Pred pattern: an atom structurally equal to the pattern (a rewrite rule).
using BindingKey = std::variant<std::string, Formula>;
using Replacement = std::variant<Term, PredicateSymbol, Formula>;

struct Binding {
  BindingKey key;
  Replacement replacement;

  bool is_rewrite() const noexcept { return std::holds_alternative<Formula>(key); }
  friend bool operator==(const Binding&, const Binding&) = default;
};

// An ordered set of bindings applied simultaneously. Composition of two substitutions is
// sequential; when the result cannot be flattened into one simultaneous layer it keeps the
// layers and applies them in order.
class Substitution {
 public:
  Substitution() = default;
  explicit Substitution(std::vector<Binding> bindings);

  // Throws IllFormedReplacement on duplicate keys.
  void bind(BindingKey key, Replacement replacement);
  void bind_symbol(const std::string& placeholder, const std::string& symbol);
  void bind_formula(const std::string& placeholder, Formula f);
  void bind_term(const std::string& variable, Term t);
  void bind_rewrite(Formula pattern, Formula replacement);

  bool empty() const noexcept;
  // Bindings of a single-layer substitution (first layer otherwise).
  const std::vector<Binding>& bindings() const;
  const std::vector<std::vector<Binding>>& layers() const noexcept { return layers_; }
  bool single_layer() const noexcept { return layers_.size() <= 1; }
  std::size_t size() const noexcept;

  friend bool operator==(const Substitution&, const Substitution&) = default;

 private:
  friend Substitution compose(const Substitution&, const Substitution&);
  std::vector<std::vector<Binding>> layers_;
};

struct ApplyReport {
  Formula result;
  // Names/patterns of bindings that matched nothing.
  std::vector<std::string> unused;
};

Formula apply_substitution(const Formula& f, const Substitution& theta, const Signature* signature = nullptr);
ApplyReport apply_with_report(const Formula& f, const Substitution& theta, const Signature* signature = nullptr);

// apply(f, compose(a, b)) == apply(apply(f, a), b).
Substitution compose(const Substitution& a, const Substitution& b);

std::string describe(const BindingKey& key);
std::string describe(const Replacement& r);

}  // namespace rvnli::logic
