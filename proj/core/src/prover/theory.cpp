#include "rvnli/prover/theory.hpp"

#include <set>

#include "rvnli/error.hpp"
#include "rvnli/logic/render.hpp"

namespace rvnli::prover {

const Axiom* Theory::find(const std::string& axiom_name) const {
  for (const auto& a : axioms)
    if (a.name == axiom_name) return &a;
  return nullptr;
}

Theory make_theory(std::string name, std::vector<Axiom> axioms, logic::Formula goal, std::string goal_comment) {
  Theory t;
  t.name = std::move(name);
  std::vector<logic::Formula> fs;
  for (const auto& a : axioms) fs.push_back(a.formula);
  if (goal) fs.push_back(goal);
  t.signature = logic::infer_signature(fs);
  t.axioms = std::move(axioms);
  t.goal = std::move(goal);
  t.goal_comment = std::move(goal_comment);
  return t;
}

namespace {

void check_formula(const logic::Formula& f, const std::string& what, logic::Signature& sig) {
  if (!f) throw Error(what + " is empty");
  if (logic::has_placeholders(f)) throw PlaceholderInClosedFormula(what + " contains placeholders");
  if (!logic::is_closed(f)) throw Error(what + " is not closed: " + logic::render_formula(f));
  logic::check_sorts(f, sig, true);
}

}  // namespace

void validate(const Theory& theory) {
  logic::Signature sig = theory.signature;
  std::set<std::string> names;
  for (const auto& a : theory.axioms) {
    if (a.name.empty()) throw Error("axiom without a name");
    if (!names.insert(a.name).second) throw NameCollision("duplicate axiom name " + a.name);
    check_formula(a.formula, "axiom " + a.name, sig);
  }
  check_formula(theory.goal, "goal", sig);
}

}  // namespace rvnli::prover
