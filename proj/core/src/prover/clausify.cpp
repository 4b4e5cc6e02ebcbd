#include <algorithm>
#include <set>
#include <sstream>

#include "rvnli/error.hpp"
#include "rvnli/logic/render.hpp"
#include "rvnli/prover/clause.hpp"

namespace rvnli::prover {

using logic::Formula;
using logic::Term;
using K = Formula::Kind;

namespace {

Formula nnf(const Formula& f, bool positive) {
  switch (f.kind()) {
    case K::Pred:
      return positive ? f : Formula::negation(f);
    case K::Placeholder:
      throw PlaceholderInClosedFormula("cannot clausify placeholder " + f.symbol());
    case K::Not:
      return nnf(f.operand(), !positive);
    case K::And:
    case K::Or: {
      bool is_and = (f.kind() == K::And) == positive;
      Formula l = nnf(f.lhs(), positive), r = nnf(f.rhs(), positive);
      return is_and ? Formula::conj(l, r) : Formula::disj(l, r);
    }
    case K::Implies:
      if (positive) return Formula::disj(nnf(f.lhs(), false), nnf(f.rhs(), true));
      return Formula::conj(nnf(f.lhs(), true), nnf(f.rhs(), false));
    case K::Iff:
      if (positive)
        return Formula::conj(Formula::disj(nnf(f.lhs(), false), nnf(f.rhs(), true)),
                             Formula::disj(nnf(f.lhs(), true), nnf(f.rhs(), false)));
      return Formula::disj(Formula::conj(nnf(f.lhs(), true), nnf(f.rhs(), false)),
                           Formula::conj(nnf(f.lhs(), false), nnf(f.rhs(), true)));
    case K::Forall:
    case K::Exists: {
      bool universal = (f.kind() == K::Forall) == positive;
      return Formula::quantifier(universal ? K::Forall : K::Exists, f.bound(), nnf(f.body(), positive));
    }
  }
  return f;
}

class Skolemizer {
 public:
  explicit Skolemizer(int& counter) : counter_(counter) {}

  Formula run(const Formula& f) {
    switch (f.kind()) {
      case K::Pred: {
        std::vector<Term> args;
        for (const auto& a : f.args()) args.push_back(map_term(a));
        return Formula::pred(f.symbol(), std::move(args));
      }
      case K::Not:
        return Formula::negation(run(f.operand()));
      case K::And:
      case K::Or:
        return Formula::binary(f.kind(), run(f.lhs()), run(f.rhs()));
      case K::Forall: {
        Term fresh = Term::variable(fresh_name(f.bound().name), f.bound().sort);
        env_.emplace_back(f.bound(), fresh);
        universals_.push_back(fresh);
        Formula body = run(f.body());
        universals_.pop_back();
        env_.pop_back();
        return body;
      }
      case K::Exists: {
        // Depend only on the universals the body can actually see.
        std::set<std::string> used;
        for (const auto& v : logic::free_variables(f.body())) {
          if (v == f.bound()) continue;
          collect_variables(map_term(v), used);
        }
        std::vector<Term> args;
        for (const auto& u : universals_)
          if (used.count(u.name)) args.push_back(u);
        Term sk = Term::skolem(std::string(logic::kSkolemPrefix) + std::to_string(++counter_), std::move(args),
                               f.bound().sort);
        env_.emplace_back(f.bound(), sk);
        Formula body = run(f.body());
        env_.pop_back();
        return body;
      }
      default:
        throw Error("unexpected connective after NNF");
    }
  }

 private:
  Term map_term(const Term& t) const {
    if (t.is_variable()) {
      for (auto it = env_.rbegin(); it != env_.rend(); ++it)
        if (it->first == t) return it->second;
      throw Error("free variable " + t.name + " in clausified formula");
    }
    if (t.is_skolem()) {
      Term out = t;
      for (auto& a : out.args) a = map_term(a);
      return out;
    }
    return t;
  }

  static void collect_variables(const Term& t, std::set<std::string>& out) {
    if (t.is_variable()) out.insert(t.name);
    for (const auto& a : t.args) collect_variables(a, out);
  }

  std::string fresh_name(const std::string& base) {
    std::string name = base;
    for (int k = 1; taken_.count(name); ++k) name = base + "_" + std::to_string(k);
    taken_.insert(name);
    return name;
  }

  int& counter_;
  std::vector<std::pair<Term, Term>> env_;
  std::vector<Term> universals_;
  std::set<std::string> taken_;
};

using Cnf = std::vector<std::vector<Literal>>;

Cnf cnf(const Formula& f, std::size_t limit) {
  switch (f.kind()) {
    case K::Pred:
      return {{Literal{true, f.symbol(), f.args()}}};
    case K::Not:
      return {{Literal{false, f.operand().symbol(), f.operand().args()}}};
    case K::And: {
      Cnf l = cnf(f.lhs(), limit), r = cnf(f.rhs(), limit);
      l.insert(l.end(), r.begin(), r.end());
      if (l.size() > limit) throw Error("clause limit exceeded during CNF conversion");
      return l;
    }
    case K::Or: {
      Cnf l = cnf(f.lhs(), limit), r = cnf(f.rhs(), limit);
      if (l.size() * r.size() > limit) throw Error("clause limit exceeded during CNF conversion");
      Cnf out;
      out.reserve(l.size() * r.size());
      for (const auto& a : l)
        for (const auto& b : r) {
          auto c = a;
          c.insert(c.end(), b.begin(), b.end());
          out.push_back(std::move(c));
        }
      return out;
    }
    default:
      throw Error("unexpected connective in CNF conversion");
  }
}

}  // namespace

std::vector<Clause> clausify(const Formula& f, const ClausifyOptions& options) {
  if (!logic::is_closed(f)) throw Error("cannot clausify open formula " + logic::render_formula(f));
  int local = 0;
  int& counter = options.skolem_counter ? *options.skolem_counter : local;
  Formula matrix = Skolemizer(counter).run(nnf(f, true));
  std::vector<Clause> out;
  for (auto& lits : cnf(matrix, options.max_clauses)) {
    Clause c;
    bool tautology = false;
    for (auto& l : lits) {
      if (std::find(c.literals.begin(), c.literals.end(), l) != c.literals.end()) continue;
      Literal neg = l;
      neg.positive = !neg.positive;
      if (std::find(c.literals.begin(), c.literals.end(), neg) != c.literals.end()) tautology = true;
      c.literals.push_back(std::move(l));
    }
    if (!tautology && std::find(out.begin(), out.end(), c) == out.end()) out.push_back(std::move(c));
  }
  return out;
}

std::string to_string(const Literal& l) {
  std::string s = l.positive ? "" : "~";
  s += l.predicate;
  if (!l.args.empty()) {
    s += "(";
    for (std::size_t i = 0; i < l.args.size(); ++i) s += (i ? ", " : "") + logic::render_term(l.args[i]);
    s += ")";
  }
  return s;
}

std::string to_string(const Clause& c) {
  if (c.literals.empty()) return "$false";
  std::string s;
  for (std::size_t i = 0; i < c.literals.size(); ++i) s += (i ? " | " : "") + to_string(c.literals[i]);
  return s;
}

}  // namespace rvnli::prover
