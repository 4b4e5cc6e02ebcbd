#include "rvnli/logic/signature.hpp"

#include <algorithm>

#include "rvnli/error.hpp"

namespace rvnli::logic {

Sort default_sort_for_name(std::string_view name) noexcept {
  if (name.empty() || name[0] != 'e') return Sort::Entity;
  return std::all_of(name.begin() + 1, name.end(), [](char c) { return c >= '0' && c <= '9'; }) ? Sort::Event
                                                                                                : Sort::Entity;
}

namespace {

std::string sorts_to_string(const std::vector<Sort>& sorts) {
  std::string s = "(";
  for (std::size_t i = 0; i < sorts.size(); ++i) {
    if (i) s += ", ";
    s += to_string(sorts[i]);
  }
  return s + ")";
}

}  // namespace

void Signature::declare(const std::string& symbol, std::vector<Sort> arg_sorts) {
  if (auto it = sorts_.find(symbol); it != sorts_.end()) {
    if (it->second != arg_sorts) throw SortError(symbol, sorts_to_string(it->second), sorts_to_string(arg_sorts));
    return;
  }
  sorts_.emplace(symbol, std::move(arg_sorts));
  order_.push_back(symbol);
}

const std::vector<Sort>* Signature::find(std::string_view symbol) const {
  auto it = sorts_.find(symbol);
  return it == sorts_.end() ? nullptr : &it->second;
}

void Signature::merge(const Signature& other) {
  for (const auto& s : other.order_) declare(s, *other.find(s));
}

const std::vector<std::string>& default_role_vocabulary() {
  static const std::vector<std::string> roles{"Agent", "Patient", "Source", "Destination", "In", "By"};
  return roles;
}

Signature role_signature(const std::vector<std::string>& roles) {
  Signature sig;
  for (const auto& r : roles) sig.declare(r, {Sort::Event, Sort::Entity});
  return sig;
}

namespace {

void check_term(const Term& t, const std::vector<Term>& bound) {
  if (t.is_variable()) {
    for (auto it = bound.rbegin(); it != bound.rend(); ++it) {
      if (it->name == t.name) {
        if (it->sort != t.sort)
          throw SortError(t.name, std::string(to_string(it->sort)), std::string(to_string(t.sort)));
        return;
      }
    }
  }
  for (const auto& a : t.args) check_term(a, bound);
}

void check(const Formula& f, Signature& sig, bool extend, std::vector<Term>& bound) {
  switch (f.kind()) {
    case Formula::Kind::Pred: {
      std::vector<Sort> sorts;
      for (const auto& a : f.args()) {
        check_term(a, bound);
        sorts.push_back(a.sort);
      }
      if (const auto* declared = sig.find(f.symbol())) {
        if (*declared != sorts) throw SortError(f.symbol(), sorts_to_string(*declared), sorts_to_string(sorts));
      } else if (extend) {
        sig.declare(f.symbol(), std::move(sorts));
      } else {
        throw SortError(f.symbol(), "a declared symbol", "undeclared");
      }
      return;
    }
    case Formula::Kind::Placeholder:
      for (const auto& a : f.args()) check_term(a, bound);
      return;
    case Formula::Kind::Not:
      check(f.operand(), sig, extend, bound);
      return;
    case Formula::Kind::Forall:
    case Formula::Kind::Exists:
      bound.push_back(f.bound());
      check(f.body(), sig, extend, bound);
      bound.pop_back();
      return;
    default:
      check(f.lhs(), sig, extend, bound);
      check(f.rhs(), sig, extend, bound);
  }
}

}  // namespace

void check_sorts(const Formula& f, Signature& sig, bool extend) {
  std::vector<Term> bound;
  check(f, sig, extend, bound);
}

bool well_sorted(const Formula& f, const Signature& sig) {
  Signature copy = sig;
  try {
    check_sorts(f, copy, true);
    return true;
  } catch (const SortError&) {
    return false;
  }
}

Signature infer_signature(const std::vector<Formula>& formulas) {
  Signature sig;
  for (const auto& f : formulas) check_sorts(f, sig, true);
  return sig;
}

}  // namespace rvnli::logic
