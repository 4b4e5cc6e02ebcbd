#pragma once

#include <functional>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "rvnli/logic/term.hpp"

namespace rvnli::logic {

// Immutable first-order formula over the entity/event sorts. Copies share structure.
class Formula {
 public:
  enum class Kind { Pred, Placeholder, Not, And, Or, Implies, Iff, Forall, Exists };

  Formula() = default;

  static Formula pred(std::string symbol, std::vector<Term> args = {});
  static Formula placeholder(std::string name, std::vector<Term> args = {});
  static Formula negation(Formula f);
  static Formula conj(Formula l, Formula r);
  static Formula disj(Formula l, Formula r);
  static Formula implies(Formula l, Formula r);
  static Formula iff(Formula l, Formula r);
  static Formula forall(Term var, Formula body);
  static Formula exists(Term var, Formula body);
  static Formula binary(Kind kind, Formula l, Formula r);
  static Formula quantifier(Kind kind, Term var, Formula body);

  // Right-nested conjunction / disjunction; the list must be non-empty.
  static Formula conj_all(const std::vector<Formula>& parts);
  static Formula disj_all(const std::vector<Formula>& parts);

  bool valid() const noexcept { return node_ != nullptr; }
  explicit operator bool() const noexcept { return valid(); }

  Kind kind() const;
  bool is_atom() const { return kind() == Kind::Pred; }
  bool is_placeholder() const { return kind() == Kind::Placeholder; }
  bool is_binary() const;
  bool is_quantifier() const;

  // Pred and Placeholder.
  const std::string& symbol() const;
  const std::vector<Term>& args() const;
  // Not.
  const Formula& operand() const;
  // And, Or, Implies, Iff.
  const Formula& lhs() const;
  const Formula& rhs() const;
  // Forall, Exists.
  const Term& bound() const;
  const Formula& body() const;

  friend bool operator==(const Formula& a, const Formula& b);
  friend bool operator!=(const Formula& a, const Formula& b) { return !(a == b); }

  std::size_t hash() const;

 private:
  struct Node;
  explicit Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  const Node& node() const;

  std::shared_ptr<const Node> node_;
};

// Free variables in order of first occurrence.
std::vector<Term> free_variables(const Formula& f);
bool is_closed(const Formula& f);
// Placeholder names in order of first occurrence.
std::vector<std::string> placeholders(const Formula& f);
bool has_placeholders(const Formula& f);
// Predicate symbols in order of first occurrence.
std::vector<std::string> predicate_symbols(const Formula& f);
// Constants (including those nested in Skolem applications) in order of first occurrence.
std::vector<Term> constants(const Formula& f);
// Every Pred node, in pre-order.
std::vector<Formula> atoms(const Formula& f);
std::size_t node_count(const Formula& f);

// Pre-order visit of every sub-formula.
void visit(const Formula& f, const std::function<void(const Formula&)>& fn);

// Variables bound anywhere in `f`, with their sorts, in order of binding.
std::vector<Term> bound_variables(const Formula& f);

}  // namespace rvnli::logic

template <>
struct std::hash<rvnli::logic::Formula> {
  std::size_t operator()(const rvnli::logic::Formula& f) const { return f.hash(); }
};
