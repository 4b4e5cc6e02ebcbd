#include "rvnli/logic/formula.hpp"

#include <algorithm>
#include <cassert>
#include <stdexcept>
#include <unordered_set>

namespace rvnli::logic {

struct Formula::Node {
  Kind kind;
  std::string symbol;
  std::vector<Term> args;
  Formula left;
  Formula right;
  Term var;
  std::size_t hash = 0;
};

namespace {

std::size_t mix(std::size_t seed, std::size_t v) { return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2)); }

std::size_t hash_term(const Term& t) {
  std::size_t h = std::hash<std::string>{}(t.name);
  h = mix(h, static_cast<std::size_t>(t.kind));
  h = mix(h, static_cast<std::size_t>(t.sort));
  for (const auto& a : t.args) h = mix(h, hash_term(a));
  return h;
}

}  // namespace

const Formula::Node& Formula::node() const {
  if (!node_) throw std::logic_error("use of an empty Formula");
  return *node_;
}

Formula::Kind Formula::kind() const { return node().kind; }
bool Formula::is_binary() const {
  auto k = kind();
  return k == Kind::And || k == Kind::Or || k == Kind::Implies || k == Kind::Iff;
}
bool Formula::is_quantifier() const { return kind() == Kind::Forall || kind() == Kind::Exists; }

const std::string& Formula::symbol() const { return node().symbol; }
const std::vector<Term>& Formula::args() const { return node().args; }
const Formula& Formula::operand() const { return node().left; }
const Formula& Formula::lhs() const { return node().left; }
const Formula& Formula::rhs() const { return node().right; }
const Term& Formula::bound() const { return node().var; }
const Formula& Formula::body() const { return node().left; }
std::size_t Formula::hash() const { return node_ ? node_->hash : 0; }

Formula Formula::pred(std::string symbol, std::vector<Term> args) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Pred;
  n->hash = mix(std::hash<std::string>{}(symbol), 1);
  for (const auto& a : args) n->hash = mix(n->hash, hash_term(a));
  n->symbol = std::move(symbol);
  n->args = std::move(args);
  return Formula(std::move(n));
}

Formula Formula::placeholder(std::string name, std::vector<Term> args) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Placeholder;
  n->hash = mix(std::hash<std::string>{}(name), 2);
  for (const auto& a : args) n->hash = mix(n->hash, hash_term(a));
  n->symbol = std::move(name);
  n->args = std::move(args);
  return Formula(std::move(n));
}

Formula Formula::negation(Formula f) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Not;
  n->hash = mix(f.hash(), 3);
  n->left = std::move(f);
  return Formula(std::move(n));
}

Formula Formula::binary(Kind kind, Formula l, Formula r) {
  assert(kind == Kind::And || kind == Kind::Or || kind == Kind::Implies || kind == Kind::Iff);
  auto n = std::make_shared<Node>();
  n->kind = kind;
  n->hash = mix(mix(l.hash(), static_cast<std::size_t>(kind) * 131), r.hash());
  n->left = std::move(l);
  n->right = std::move(r);
  return Formula(std::move(n));
}

Formula Formula::conj(Formula l, Formula r) { return binary(Kind::And, std::move(l), std::move(r)); }
Formula Formula::disj(Formula l, Formula r) { return binary(Kind::Or, std::move(l), std::move(r)); }
Formula Formula::implies(Formula l, Formula r) { return binary(Kind::Implies, std::move(l), std::move(r)); }
Formula Formula::iff(Formula l, Formula r) { return binary(Kind::Iff, std::move(l), std::move(r)); }

Formula Formula::quantifier(Kind kind, Term var, Formula body) {
  assert(kind == Kind::Forall || kind == Kind::Exists);
  assert(var.is_variable());
  auto n = std::make_shared<Node>();
  n->kind = kind;
  n->hash = mix(mix(hash_term(var), static_cast<std::size_t>(kind) * 977), body.hash());
  n->var = std::move(var);
  n->left = std::move(body);
  return Formula(std::move(n));
}

Formula Formula::forall(Term var, Formula body) { return quantifier(Kind::Forall, std::move(var), std::move(body)); }
Formula Formula::exists(Term var, Formula body) { return quantifier(Kind::Exists, std::move(var), std::move(body)); }

Formula Formula::conj_all(const std::vector<Formula>& parts) {
  if (parts.empty()) throw std::invalid_argument("conj_all of an empty list");
  Formula acc = parts.back();
  for (auto it = parts.rbegin() + 1; it != parts.rend(); ++it) acc = conj(*it, acc);
  return acc;
}

Formula Formula::disj_all(const std::vector<Formula>& parts) {
  if (parts.empty()) throw std::invalid_argument("disj_all of an empty list");
  Formula acc = parts.back();
  for (auto it = parts.rbegin() + 1; it != parts.rend(); ++it) acc = disj(*it, acc);
  return acc;
}

bool operator==(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return true;
  if (!a.node_ || !b.node_) return false;
  const auto& x = *a.node_;
  const auto& y = *b.node_;
  if (x.hash != y.hash || x.kind != y.kind) return false;
  switch (x.kind) {
    case Formula::Kind::Pred:
    case Formula::Kind::Placeholder:
      return x.symbol == y.symbol && x.args == y.args;
    case Formula::Kind::Not:
      return x.left == y.left;
    case Formula::Kind::Forall:
    case Formula::Kind::Exists:
      return x.var == y.var && x.left == y.left;
    default:
      return x.left == y.left && x.right == y.right;
  }
}

void visit(const Formula& f, const std::function<void(const Formula&)>& fn) {
  fn(f);
  switch (f.kind()) {
    case Formula::Kind::Pred:
    case Formula::Kind::Placeholder:
      return;
    case Formula::Kind::Not:
      visit(f.operand(), fn);
      return;
    case Formula::Kind::Forall:
    case Formula::Kind::Exists:
      visit(f.body(), fn);
      return;
    default:
      visit(f.lhs(), fn);
      visit(f.rhs(), fn);
  }
}

namespace {

void collect_free_term(const Term& t, std::vector<Term>& bound, std::vector<Term>& out) {
  if (t.is_variable()) {
    for (auto it = bound.rbegin(); it != bound.rend(); ++it)
      if (it->name == t.name) return;
    for (const auto& o : out)
      if (o == t) return;
    out.push_back(t);
    return;
  }
  for (const auto& a : t.args) collect_free_term(a, bound, out);
}

void collect_free(const Formula& f, std::vector<Term>& bound, std::vector<Term>& out) {
  switch (f.kind()) {
    case Formula::Kind::Pred:
    case Formula::Kind::Placeholder:
      for (const auto& a : f.args()) collect_free_term(a, bound, out);
      return;
    case Formula::Kind::Not:
      collect_free(f.operand(), bound, out);
      return;
    case Formula::Kind::Forall:
    case Formula::Kind::Exists:
      bound.push_back(f.bound());
      collect_free(f.body(), bound, out);
      bound.pop_back();
      return;
    default:
      collect_free(f.lhs(), bound, out);
      collect_free(f.rhs(), bound, out);
  }
}

void collect_constants(const Term& t, std::vector<Term>& out) {
  if (t.is_constant()) {
    for (const auto& o : out)
      if (o == t) return;
    out.push_back(t);
  }
  for (const auto& a : t.args) collect_constants(a, out);
}

}  // namespace

std::vector<Term> free_variables(const Formula& f) {
  std::vector<Term> bound, out;
  collect_free(f, bound, out);
  return out;
}

bool is_closed(const Formula& f) { return free_variables(f).empty(); }

std::vector<std::string> placeholders(const Formula& f) {
  std::vector<std::string> out;
  visit(f, [&](const Formula& g) {
    if (g.is_placeholder() && std::find(out.begin(), out.end(), g.symbol()) == out.end()) out.push_back(g.symbol());
  });
  return out;
}

bool has_placeholders(const Formula& f) { return !placeholders(f).empty(); }

std::vector<std::string> predicate_symbols(const Formula& f) {
  std::vector<std::string> out;
  visit(f, [&](const Formula& g) {
    if (g.is_atom() && std::find(out.begin(), out.end(), g.symbol()) == out.end()) out.push_back(g.symbol());
  });
  return out;
}

std::vector<Term> constants(const Formula& f) {
  std::vector<Term> out;
  visit(f, [&](const Formula& g) {
    if (g.is_atom() || g.is_placeholder())
      for (const auto& a : g.args()) collect_constants(a, out);
  });
  return out;
}

std::vector<Formula> atoms(const Formula& f) {
  std::vector<Formula> out;
  visit(f, [&](const Formula& g) {
    if (g.is_atom()) out.push_back(g);
  });
  return out;
}

std::size_t node_count(const Formula& f) {
  std::size_t n = 0;
  visit(f, [&](const Formula&) { ++n; });
  return n;
}

std::vector<Term> bound_variables(const Formula& f) {
  std::vector<Term> out;
  visit(f, [&](const Formula& g) {
    if (g.is_quantifier()) out.push_back(g.bound());
  });
  return out;
}

}  // namespace rvnli::logic
