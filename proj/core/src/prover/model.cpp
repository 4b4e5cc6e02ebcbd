#include "rvnli/prover/model.hpp"

#include <sstream>
#include <unordered_map>

#include "rvnli/error.hpp"

namespace rvnli::prover {

using logic::Formula;
using logic::Term;

namespace {

struct Env {
  std::vector<std::pair<const Term*, int>> frames;

  int lookup(const Term& v) const {
    for (auto it = frames.rbegin(); it != frames.rend(); ++it)
      if (it->first->name == v.name && it->first->sort == v.sort) return it->second;
    throw Error("unbound variable " + v.name + " during evaluation");
  }
};

int value_of(const Model& m, const Term& t, const Env& env) {
  switch (t.kind) {
    case Term::Kind::Variable:
      return env.lookup(t);
    case Term::Kind::Constant: {
      auto it = m.constants.find(t.name);
      return it == m.constants.end() ? 0 : it->second;
    }
    case Term::Kind::Skolem:
      break;
  }
  throw Error("Skolem term " + t.name + " cannot be evaluated in a model");
}

bool eval(const Model& m, const Formula& f, Env& env) {
  switch (f.kind()) {
    case Formula::Kind::Pred: {
      std::vector<int> args;
      args.reserve(f.args().size());
      for (const auto& a : f.args()) args.push_back(value_of(m, a, env));
      return m.holds_atom(f.symbol(), args);
    }
    case Formula::Kind::Placeholder:
      throw Error("placeholder " + f.symbol() + " cannot be evaluated");
    case Formula::Kind::Not:
      return !eval(m, f.operand(), env);
    case Formula::Kind::And:
      return eval(m, f.lhs(), env) && eval(m, f.rhs(), env);
    case Formula::Kind::Or:
      return eval(m, f.lhs(), env) || eval(m, f.rhs(), env);
    case Formula::Kind::Implies:
      return !eval(m, f.lhs(), env) || eval(m, f.rhs(), env);
    case Formula::Kind::Iff:
      return eval(m, f.lhs(), env) == eval(m, f.rhs(), env);
    case Formula::Kind::Forall:
    case Formula::Kind::Exists: {
      const bool universal = f.kind() == Formula::Kind::Forall;
      const int n = m.size(f.bound().sort);
      env.frames.emplace_back(&f.bound(), 0);
      bool result = universal;
      for (int d = 0; d < n; ++d) {
        env.frames.back().second = d;
        if (eval(m, f.body(), env) != universal) {
          result = !universal;
          break;
        }
      }
      env.frames.pop_back();
      return result;
    }
  }
  return false;
}

}  // namespace

bool Model::holds_atom(const std::string& predicate, const std::vector<int>& args) const {
  auto it = relations.find(predicate);
  return it != relations.end() && it->second.count(args) > 0;
}

bool Model::holds(const Formula& f) const {
  Env env;
  return eval(*this, f, env);
}

std::string Model::describe() const {
  std::ostringstream os;
  os << "entities=" << entity_size << " events=" << event_size;
  for (const auto& [c, v] : constants) os << "; " << c << "=" << v;
  for (const auto& [p, tuples] : relations) {
    os << "; " << p << "={";
    bool first = true;
    for (const auto& t : tuples) {
      if (!first) os << ",";
      first = false;
      os << "(";
      for (std::size_t i = 0; i < t.size(); ++i) os << (i ? "," : "") << t[i];
      os << ")";
    }
    os << "}";
  }
  return os.str();
}

}  // namespace rvnli::prover
