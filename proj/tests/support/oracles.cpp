#include "oracles.hpp"

#include <algorithm>
#include <chrono>
#include <functional>
#include <set>

#include "generators.hpp"
#include "rvnli/logic/render.hpp"
#include "rvnli/logic/substitution.hpp"

namespace rvnli::testkit {

using logic::Formula;
using logic::Sort;
using logic::Term;
using K = Formula::Kind;

namespace {

bool eval_assignment(const Formula& f, const std::map<std::string, bool>& val) {
  switch (f.kind()) {
    case K::Pred: return val.at(logic::render_formula(f));
    case K::Not: return !eval_assignment(f.operand(), val);
    case K::And: return eval_assignment(f.lhs(), val) && eval_assignment(f.rhs(), val);
    case K::Or: return eval_assignment(f.lhs(), val) || eval_assignment(f.rhs(), val);
    case K::Implies: return !eval_assignment(f.lhs(), val) || eval_assignment(f.rhs(), val);
    case K::Iff: return eval_assignment(f.lhs(), val) == eval_assignment(f.rhs(), val);
    default: throw std::logic_error("truth tables need quantifier-free formulas");
  }
}

// Single-sort interpretation encoded as a bit mask over all predicate tuples.
struct BruteInterp {
  int n = 1;
  std::map<std::string, int> constants;
  std::map<std::string, std::pair<int, int>> layout;  // predicate -> (bit offset, arity)
  std::uint64_t bits = 0;

  bool atom(const std::string& p, const std::vector<int>& args) const {
    auto it = layout.find(p);
    if (it == layout.end()) return false;
    int idx = 0;
    for (int a : args) idx = idx * n + a;
    return (bits >> (it->second.first + idx)) & 1u;
  }
};

using Env = std::vector<std::pair<std::string, int>>;

int lookup(const Term& t, const Env& env, const std::map<std::string, int>& constants) {
  if (t.kind == Term::Kind::Constant) {
    auto it = constants.find(t.name);
    return it == constants.end() ? 0 : it->second;
  }
  for (auto it = env.rbegin(); it != env.rend(); ++it)
    if (it->first == t.name) return it->second;
  throw std::logic_error("unbound " + t.name);
}

template <typename AtomFn, typename SizeFn>
bool eval_model(const Formula& f, Env& env, const std::map<std::string, int>& constants, const AtomFn& atom,
                const SizeFn& size) {
  switch (f.kind()) {
    case K::Pred: {
      std::vector<int> args;
      for (const auto& a : f.args()) args.push_back(lookup(a, env, constants));
      return atom(f.symbol(), args);
    }
    case K::Not: return !eval_model(f.operand(), env, constants, atom, size);
    case K::And:
      return eval_model(f.lhs(), env, constants, atom, size) && eval_model(f.rhs(), env, constants, atom, size);
    case K::Or:
      return eval_model(f.lhs(), env, constants, atom, size) || eval_model(f.rhs(), env, constants, atom, size);
    case K::Implies:
      return !eval_model(f.lhs(), env, constants, atom, size) || eval_model(f.rhs(), env, constants, atom, size);
    case K::Iff:
      return eval_model(f.lhs(), env, constants, atom, size) == eval_model(f.rhs(), env, constants, atom, size);
    case K::Forall:
    case K::Exists: {
      bool all = f.kind() == K::Forall;
      int n = size(f.bound().sort);
      bool result = all;
      env.emplace_back(f.bound().name, 0);
      for (int d = 0; d < n; ++d) {
        env.back().second = d;
        if (eval_model(f.body(), env, constants, atom, size) != all) {
          result = !all;
          break;
        }
      }
      env.pop_back();
      return result;
    }
    default: throw std::logic_error("placeholder in oracle formula");
  }
}

}  // namespace

bool truth_table_entails(const std::vector<Formula>& axioms, const Formula& goal) {
  std::set<std::string> names;
  auto collect = [&](const Formula& f) {
    for (const auto& a : logic::atoms(f)) names.insert(logic::render_formula(a));
  };
  for (const auto& a : axioms) collect(a);
  collect(goal);
  std::vector<std::string> atoms(names.begin(), names.end());
  const std::uint64_t rows = std::uint64_t{1} << atoms.size();
  std::map<std::string, bool> val;
  for (std::uint64_t r = 0; r < rows; ++r) {
    for (std::size_t i = 0; i < atoms.size(); ++i) val[atoms[i]] = (r >> i) & 1u;
    bool premises = true;
    for (const auto& a : axioms) premises = premises && eval_assignment(a, val);
    if (premises && !eval_assignment(goal, val)) return false;
  }
  return true;
}

std::optional<int> brute_force_countermodel(const std::vector<Formula>& axioms, const Formula& goal,
                                            const Vocabulary& vocabulary, int max_size) {
  for (int n = 1; n <= max_size; ++n) {
    BruteInterp m;
    m.n = n;
    int offset = 0;
    for (const auto& [p, arity] : vocabulary.predicates) {
      int count = 1;
      for (int i = 0; i < arity; ++i) count *= n;
      m.layout[p] = {offset, arity};
      offset += count;
    }
    if (offset > 40) throw std::logic_error("vocabulary too large for brute force");
    std::size_t const_choices = 1;
    for (std::size_t i = 0; i < vocabulary.constants.size(); ++i) const_choices *= n;
    auto atom = [&](const std::string& p, const std::vector<int>& args) { return m.atom(p, args); };
    auto size = [&](Sort) { return n; };
    for (std::size_t cc = 0; cc < const_choices; ++cc) {
      std::size_t rest = cc;
      for (const auto& c : vocabulary.constants) {
        m.constants[c] = static_cast<int>(rest % n);
        rest /= n;
      }
      for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << offset); ++bits) {
        m.bits = bits;
        Env env;
        bool ok = true;
        for (const auto& a : axioms)
          if (!(ok = eval_model(a, env, m.constants, atom, size))) break;
        if (ok && !eval_model(goal, env, m.constants, atom, size)) return n;
      }
    }
  }
  return std::nullopt;
}

bool independent_holds(const prover::Model& model, const Formula& f) {
  auto atom = [&](const std::string& p, const std::vector<int>& args) {
    auto it = model.relations.find(p);
    return it != model.relations.end() && it->second.count(args) > 0;
  };
  auto size = [&](Sort s) { return s == Sort::Entity ? model.entity_size : model.event_size; };
  Env env;
  return eval_model(f, env, model.constants, atom, size);
}

namespace {

int pick(std::mt19937_64& rng, int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); }
bool coin(std::mt19937_64& rng, double p = 0.5) { return std::bernoulli_distribution(p)(rng); }

std::vector<prover::Axiom> name_axioms(const std::vector<Formula>& fs) {
  std::vector<prover::Axiom> out;
  for (std::size_t i = 0; i < fs.size(); ++i) out.push_back({"a" + std::to_string(i + 1), fs[i], ""});
  return out;
}

Formula quantified_formula(std::mt19937_64& rng, std::vector<Term>& scope, int depth, int& counter) {
  const Term c = Term::constant("c", Sort::Entity);
  auto term = [&]() { return scope.empty() || coin(rng, 0.25) ? c : scope[pick(rng, static_cast<int>(scope.size()))]; };
  if (depth <= 0 || coin(rng, 0.2)) {
    switch (pick(rng, 3)) {
      case 0: return Formula::pred("P", {term()});
      case 1: return Formula::pred("Q", {term()});
      default: return Formula::pred("R", {term(), term()});
    }
  }
  switch (pick(rng, 7)) {
    case 0: return Formula::negation(quantified_formula(rng, scope, depth - 1, counter));
    case 1:
      return Formula::conj(quantified_formula(rng, scope, depth - 1, counter),
                           quantified_formula(rng, scope, depth - 1, counter));
    case 2:
      return Formula::disj(quantified_formula(rng, scope, depth - 1, counter),
                           quantified_formula(rng, scope, depth - 1, counter));
    case 3:
      return Formula::implies(quantified_formula(rng, scope, depth - 1, counter),
                              quantified_formula(rng, scope, depth - 1, counter));
    default: {
      Term v = Term::variable(std::string(1, "xyz"[counter++ % 3]), Sort::Entity);
      scope.push_back(v);
      Formula body = quantified_formula(rng, scope, depth - 1, counter);
      scope.pop_back();
      return coin(rng) ? Formula::forall(v, body) : Formula::exists(v, body);
    }
  }
}

Formula random_quantified(std::mt19937_64& rng, int depth) {
  std::vector<Term> scope;
  int counter = 0;
  return quantified_formula(rng, scope, depth, counter);
}

}  // namespace

const Vocabulary& quantified_vocabulary() {
  static const Vocabulary v{{{"P", 1}, {"Q", 1}, {"R", 2}}, {"c"}};
  return v;
}

prover::Theory random_ground_theory(std::mt19937_64& rng) {
  const Term a = Term::constant("a", Sort::Entity), b = Term::constant("b", Sort::Entity);
  std::vector<Formula> all{Formula::pred("P", {a}), Formula::pred("P", {b}),    Formula::pred("Q", {a}),
                           Formula::pred("Q", {b}), Formula::pred("R", {a, b}), Formula::pred("R", {b, a})};
  std::shuffle(all.begin(), all.end(), rng);
  std::vector<Formula> pool(all.begin(), all.begin() + 2 + pick(rng, 5));
  std::vector<Formula> axioms;
  int n = 1 + pick(rng, 4);
  for (int i = 0; i < n; ++i) axioms.push_back(random_ground_formula(rng, pool, pick(rng, 4)));
  Formula goal = random_ground_formula(rng, pool, pick(rng, 3));
  // Bias towards entailed instances so both verdicts are well represented.
  if (coin(rng, 0.3)) {
    Formula x = random_ground_formula(rng, pool, 1);
    axioms.push_back(x);
    axioms.push_back(Formula::implies(x, goal));
  } else if (coin(rng, 0.2)) {
    Formula x = pool[pick(rng, static_cast<int>(pool.size()))];
    axioms.push_back(Formula::disj(goal, x));
    axioms.push_back(Formula::negation(x));
  }
  return prover::make_theory("ground", name_axioms(axioms), goal);
}

prover::Theory random_quantified_theory(std::mt19937_64& rng) {
  std::vector<Formula> axioms;
  int n = 1 + pick(rng, 3);
  for (int i = 0; i < n; ++i) axioms.push_back(random_quantified(rng, 1 + pick(rng, 3)));
  Formula goal;
  switch (pick(rng, 4)) {
    case 0: {
      // Instantiate a universal axiom at the constant.
      const Formula& ax = axioms[pick(rng, static_cast<int>(axioms.size()))];
      if (ax.kind() == K::Forall) {
        logic::Substitution th;
        th.bind_term(ax.bound().name, Term::constant("c", Sort::Entity));
        goal = logic::apply_substitution(ax.body(), th);
        if (!logic::is_closed(goal)) goal = {};
      }
      break;
    }
    case 1:
      goal = Formula::disj(axioms[pick(rng, static_cast<int>(axioms.size()))], random_quantified(rng, 1));
      break;
    default:
      break;
  }
  if (!goal) goal = random_quantified(rng, 1 + pick(rng, 2));
  return prover::make_theory("quantified", name_axioms(axioms), goal);
}

AgreementReport prover_oracle_agreement(std::uint64_t seed, int ground, int quantified) {
  const auto start = std::chrono::steady_clock::now();
  std::mt19937_64 rng(seed);
  AgreementReport r;
  auto tally = [&](const prover::ProofOutcome& o) {
    if (o.status == prover::ProofStatus::Proved) ++r.proved;
    else if (o.status == prover::ProofStatus::Refuted) ++r.refuted;
    else ++r.unknown;
  };
  auto describe = [](const prover::Theory& t) {
    std::string s;
    for (const auto& a : t.axioms) s += logic::render_formula(a.formula) + " ; ";
    return s + "|- " + logic::render_formula(t.goal);
  };
  auto countermodel_valid = [](const prover::Theory& t, const prover::ProofOutcome& o) {
    if (!o.diagnostics.countermodel) return false;
    for (const auto& a : t.axioms)
      if (!independent_holds(*o.diagnostics.countermodel, a.formula)) return false;
    return !independent_holds(*o.diagnostics.countermodel, t.goal);
  };

  for (int i = 0; i < ground; ++i) {
    auto t = random_ground_theory(rng);
    std::vector<Formula> ax;
    for (const auto& a : t.axioms) ax.push_back(a.formula);
    bool entailed = truth_table_entails(ax, t.goal);
    auto o = prover::prove(t);
    tally(o);
    ++r.ground;
    bool agree = entailed ? o.proved() : (o.status == prover::ProofStatus::Refuted && countermodel_valid(t, o));
    if (agree) ++r.ground_agree;
    else r.disagreements.push_back("ground " + std::string(entailed ? "entailed" : "refuted") + " but " +
                                   std::string(prover::to_string(o.status)) + ": " + describe(t));
  }
  prover::ProverBudget budget;
  budget.max_model_domain = 3;
  budget.max_seconds = 2;
  for (int i = 0; i < quantified; ++i) {
    auto t = random_quantified_theory(rng);
    std::vector<Formula> ax;
    for (const auto& a : t.axioms) ax.push_back(a.formula);
    auto oracle = brute_force_countermodel(ax, t.goal, quantified_vocabulary(), 3);
    auto o = prover::prove(t, budget);
    tally(o);
    ++r.quantified;
    bool agree;
    if (oracle) agree = o.status == prover::ProofStatus::Refuted && countermodel_valid(t, o);
    else agree = o.status != prover::ProofStatus::Refuted;
    if (agree) ++r.quantified_agree;
    else r.disagreements.push_back("quantified oracle " + std::string(oracle ? "refuted" : "no small model") +
                                   " but " + std::string(prover::to_string(o.status)) + ": " + describe(t));
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

}  // namespace rvnli::testkit
