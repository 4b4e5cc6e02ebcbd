#include "worked_examples.hpp"

#include "rvnli/logic/parser.hpp"

namespace rvnli::testkit {

using logic::Formula;
using logic::Sort;

namespace {

Formula closed(const std::string& s) { return logic::parse_formula(s); }

}  // namespace

prover::Theory melting_theory() {
  prover::Theory t;
  t.name = "data_0";
  const Sort E = Sort::Entity, V = Sort::Event;
  t.signature.declare("Melting", {V});
  t.signature.declare("Change", {V});
  t.signature.declare("Source", {V, E});
  t.signature.declare("Destination", {V, E});
  t.signature.declare("Solid", {E});
  t.signature.declare("Liquid", {E});
  t.signature.declare("IncreaseHeatEnergy", {E});
  t.signature.declare("By", {V, E});
  t.signature.declare("Chocolate", {E});
  t.signature.declare("Melts", {V});
  t.signature.declare("Agent", {V, E});
  t.signature.declare("In", {V, E});
  t.signature.declare("Sunlight", {E});
  t.axioms.push_back(
      {"explanation_1",
       closed("forall e x y z. Melting(e) <-> (Change(e) & Source(e, x) & Destination(e, y) & Solid(x) & Liquid(y) & "
              "IncreaseHeatEnergy(z) & By(e, z))"),
       "melting means changing from a solid to a liquid by increasing heat energy"});
  t.axioms.push_back({"explanation_2", closed("exists x e. Chocolate(x) & Melts(e) & Agent(e, x) & In(e, Sunlight)"),
                      "chocolate melts in the sunlight"});
  t.goal = closed("exists x y z. Chocolate(x) & Solid(y) & Liquid(z)");
  t.goal_comment = "chocolate changes from a solid to a liquid in the sunlight";
  return t;
}

std::vector<EntailedAtom> melting_entailed_atoms() {
  return {
      {"chocolate melts", closed("exists x e. Chocolate(x) & Melts(e) & Agent(e, x)"), {"explanation_2"}},
      {"changing from a solid to a liquid by increasing heat energy is melting",
       closed("forall e x y z. Change(e) & Source(e, x) & Destination(e, y) & Solid(x) & Liquid(y) & "
              "IncreaseHeatEnergy(z) & By(e, z) -> Melting(e)"),
       {"explanation_1"}},
  };
}

EntailedAtom melting_non_entailed_atom() {
  return {"chocolate changes from solid to liquid",
          closed("exists x y z e. Chocolate(x) & Change(e) & Agent(e, x) & Source(e, y) & Solid(y) & "
                 "Destination(e, z) & Liquid(z)"),
          {}};
}

const char* const kForestFireSentence = "A forest fire would cause deer to die or leave a woodland.";

FormalisationPlan forest_fire_plan() {
  using nlohmann::json;
  FormalisationPlan p;
  p.template_text = "forall x y z. P(x) & Q(y) & R(z) -> S";
  p.entity = json::array({{{"placeholder", "P"}, {"symbol", "ForestFire"}},
                          {{"placeholder", "Q"}, {"symbol", "Deer"}},
                          {{"placeholder", "R"}, {"symbol", "Woodland"}}});
  p.event = json::array({{{"placeholder", "S"}, {"formula", "Die(e1) | Leave(e2)"}}});
  p.role = json::array({{{"pattern", "Die(e1)"}, {"formula", "Die(e1) & Agent(e1, y)"}},
                        {{"pattern", "Leave(e2)"}, {"formula", "Leave(e2) & Agent(e2, y) & Patient(e2, z)"}}});
  return p;
}

std::vector<logic::Formula> forest_fire_sequence() {
  using logic::ParseMode;
  auto tmpl = [](const char* s) { return logic::parse_formula(s, ParseMode::Template); };
  return {tmpl("forall x y z. P(x) & Q(y) & R(z) -> S"),
          tmpl("forall x y z. ForestFire(x) & Deer(y) & Woodland(z) -> S"),
          tmpl("forall x y z. ForestFire(x) & Deer(y) & Woodland(z) -> Die(e1) | Leave(e2)"),
          closed("forall x y z e1 e2. ForestFire(x) & Deer(y) & Woodland(z) -> "
                 "(Die(e1) & Agent(e1, y)) | (Leave(e2) & Agent(e2, y) & Patient(e2, z))")};
}

std::vector<std::string> monkeypox_premises() {
  return {"Monkeypox is an infectious disease caused by the monkeypox virus.",
          "Monkeypox virus can occur in certain animals, including humans.",
          "Humans are mammals.",
          "Mammals are animals.",
          "Symptoms of Monkeypox include fever, headache, muscle pains, feeling tired, and so on.",
          "People feel tired when they get a flu."};
}

const char* const kMonkeypoxConclusion = "There is an animal.";

std::string monkeypox_answer() {
  return "Answer:\n"
         "Monkeypox is an infectious disease caused by the monkeypox virus.\n"
         "Monkeypox virus can occur in certain animals, including humans.\n"
         "Conclusion: Humans can get monkeypox.\n"
         "\n"
         "Humans are mammals.\n"
         "Mammals are animals.\n"
         "Conclusion:Humans are animals.\n"
         "\n"
         "...\n"
         "\n"
         "Humans are animals.\n"
         "Therefore, there is an animal (humans) that can get monkeypox and feel tired.\n"
         "Conclusion:Therefore, there is an animal.\n";
}

namespace {

const char* const kTired = "There is an animal (humans) that can get monkeypox and feel tired.";

}  // namespace

std::map<std::string, std::vector<logic::Formula>> monkeypox_formalisations() {
  auto p = monkeypox_premises();
  return {
      {p[0],
       {closed("InfectiousDisease(monkeypox)"), closed("CausedBy(monkeypox, monkeypoxvirus)"),
        closed("forall x. CanOccurIn(monkeypoxvirus, x) -> CanGet(x, monkeypox)")}},
      {p[1], {closed("exists x. Human(x)"), closed("forall x. Human(x) -> CanOccurIn(monkeypoxvirus, x)")}},
      {p[2], {closed("forall x. Human(x) -> Mammal(x)")}},
      {p[3], {closed("forall x. Mammal(x) -> Animal(x)")}},
      {p[4], {closed("forall x. CanGet(x, monkeypox) -> FeelTired(x)")}},
      {p[5], {closed("forall x y. Flu(y) & Get(x, y) -> FeelTired(x)")}},
      {"Humans can get monkeypox.", {closed("exists x. Human(x)"), closed("forall x. Human(x) -> CanGet(x, monkeypox)")}},
      {"Humans are animals.", {closed("forall x. Human(x) -> Animal(x)")}},
      {kTired, {closed("exists x. Human(x) & Animal(x) & CanGet(x, monkeypox) & FeelTired(x)")}},
      {kMonkeypoxConclusion, {closed("exists x. Animal(x)")}},
  };
}

std::vector<verify::FormalStatement> monkeypox_formal_premises() {
  auto table = monkeypox_formalisations();
  std::vector<verify::FormalStatement> out;
  for (const auto& p : monkeypox_premises()) out.push_back({p, table.at(p)});
  return out;
}

std::vector<verify::FormalStatement> monkeypox_chain() {
  auto table = monkeypox_formalisations();
  std::vector<verify::FormalStatement> out;
  for (const char* s : {"Humans can get monkeypox.", "Humans are animals.", kTired}) out.push_back({s, table.at(s)});
  return out;
}

verify::FormalStatement monkeypox_hypothesis() {
  return {kMonkeypoxConclusion, monkeypox_formalisations().at(kMonkeypoxConclusion)};
}

std::vector<verify::FormalStatement> monkeypox_broken_chain() {
  auto chain = monkeypox_chain();
  chain.insert(chain.begin() + 1, {"Humans can fly.", {closed("forall x. Human(x) -> CanFly(x)")}});
  return chain;
}

}  // namespace rvnli::testkit
