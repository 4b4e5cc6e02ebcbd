#include "rvnli/formaliser/formaliser.hpp"

#include <algorithm>
#include <set>

#include "rvnli/error.hpp"
#include "rvnli/llm/parsers.hpp"
#include "rvnli/logic/parser.hpp"
#include "rvnli/logic/render.hpp"

namespace rvnli::formaliser {

using logic::Formula;
using logic::Sort;
using logic::Substitution;
using logic::Term;

namespace {

std::string name_of(Stage s) { return std::string(to_string(s)); }

bool contains(const std::vector<std::string>& v, const std::string& s) {
  return std::find(v.begin(), v.end(), s) != v.end();
}

// Placeholder arities of `f`.
std::map<std::string, std::size_t> placeholder_arity(const Formula& f) {
  std::map<std::string, std::size_t> out;
  logic::visit(f, [&](const Formula& g) {
    if (g.is_placeholder()) out.emplace(g.symbol(), g.args().size());
  });
  return out;
}

bool has_event_arg(const Formula& atom) {
  return std::any_of(atom.args().begin(), atom.args().end(), [](const Term& t) { return t.sort == Sort::Event; });
}

std::vector<std::string> report_unused(const logic::ApplyReport& r) {
  std::vector<std::string> out;
  for (const auto& u : r.unused) out.push_back("unused binding " + u);
  return out;
}

void add(std::vector<std::string>* sink, std::vector<std::string> items) {
  if (sink) sink->insert(sink->end(), items.begin(), items.end());
}

logic::Signature checking_signature(const FormaliserOptions& o) { return logic::role_signature(o.roles); }

void check_sorted(Stage stage, const Formula& f, const FormaliserOptions& o) {
  auto sig = checking_signature(o);
  try {
    logic::check_sorts(f, sig, true);
  } catch (const SortError& e) {
    throw StageViolation(name_of(stage), e.what());
  }
}

std::vector<Term> free_events(const Formula& f) {
  std::vector<Term> out;
  for (auto& v : logic::free_variables(f))
    if (v.sort == Sort::Event) out.push_back(v);
  return out;
}

bool occurs_free(const Formula& f, const Term& v) {
  auto fv = logic::free_variables(f);
  return std::find(fv.begin(), fv.end(), v) != fv.end();
}

// ∃v over the smallest sub-formula holding every free occurrence of v.
Formula bind_tight(const Formula& f, const Term& v) {
  switch (f.kind()) {
    case Formula::Kind::Not:
      if (occurs_free(f.operand(), v)) return Formula::negation(bind_tight(f.operand(), v));
      return f;
    case Formula::Kind::And:
    case Formula::Kind::Or:
    case Formula::Kind::Implies:
    case Formula::Kind::Iff: {
      bool l = occurs_free(f.lhs(), v), r = occurs_free(f.rhs(), v);
      if (l && r) return Formula::exists(v, f);
      if (l) return Formula::binary(f.kind(), bind_tight(f.lhs(), v), f.rhs());
      if (r) return Formula::binary(f.kind(), f.lhs(), bind_tight(f.rhs(), v));
      return f;
    }
    case Formula::Kind::Forall:
    case Formula::Kind::Exists:
      if (f.bound() == v) return f;
      return Formula::quantifier(f.kind(), f.bound(), bind_tight(f.body(), v));
    default:
      return Formula::exists(v, f);
  }
}

Formula append_universals(const Formula& f, const std::vector<Term>& vars) {
  if (f.kind() == Formula::Kind::Forall) return Formula::forall(f.bound(), append_universals(f.body(), vars));
  Formula out = f;
  for (auto it = vars.rbegin(); it != vars.rend(); ++it) out = Formula::forall(*it, out);
  return out;
}

std::string stage_instructions(Stage s) {
  switch (s) {
    case Stage::Entity:
      return "Entity substitution (θ1): map each generic predicate placeholder applied to a variable to a specific "
             "entity predicate, e.g. {\"stage\": \"entity\", \"bindings\": [{\"placeholder\": \"P\", \"symbol\": "
             "\"ForestFire\"}]}.";
    case Stage::Event:
      return "Event substitution (θ2): replace each sentence-level placeholder with a formula over event predicates "
             "and fresh event variables e1, e2, ..., e.g. {\"stage\": \"event\", \"bindings\": [{\"placeholder\": "
             "\"S\", \"formula\": \"Die(e1) | Leave(e2)\"}]}.";
    case Stage::Role:
      return "Role substitution (θ3): rewrite each event atom into a conjunction that adds semantic roles over its "
             "event variable, e.g. {\"stage\": \"role\", \"bindings\": [{\"pattern\": \"Die(e1)\", \"formula\": "
             "\"Die(e1) & Agent(e1, y)\"}]}.";
  }
  return "";
}

Formula parse_fragment(Stage stage, const std::string& text, const Formula& context) {
  logic::ParseOptions po;
  po.scope = logic::bound_variables(context);
  for (auto& v : logic::free_variables(context)) po.scope.push_back(v);
  try {
    return logic::parse_formula(text, logic::ParseMode::Template, po);
  } catch (const Error& e) {
    throw StageViolation(name_of(stage), "binding formula \"" + text + "\": " + e.what());
  }
}

}  // namespace

std::string_view to_string(Stage s) noexcept {
  switch (s) {
    case Stage::Entity: return "entity";
    case Stage::Event: return "event";
    case Stage::Role: return "role";
  }
  return "?";
}

std::optional<Stage> stage_from_string(std::string_view s) noexcept {
  if (s == "entity") return Stage::Entity;
  if (s == "event") return Stage::Event;
  if (s == "role") return Stage::Role;
  return std::nullopt;
}

std::optional<EventQuantifier> event_quantifier_from_string(std::string_view s) noexcept {
  if (s == "paper") return EventQuantifier::Paper;
  if (s == "existential") return EventQuantifier::Existential;
  return std::nullopt;
}

const Formula& StageTrace::final_formula() const {
  return stages.empty() ? template_formula : stages.back().result;
}

bool StageTrace::complete() const {
  const Formula& f = final_formula();
  if (!f || logic::has_placeholders(f) || !logic::is_closed(f)) return false;
  for (const auto& s : stages)
    for (const auto& w : s.warnings)
      if (s.stage == Stage::Role && w.rfind("event atom", 0) == 0) return false;
  return true;
}

bool operator==(const StageRecord& a, const StageRecord& b) {
  return a.stage == b.stage && a.theta == b.theta && a.result == b.result && a.warnings == b.warnings;
}

bool operator==(const StageTrace& a, const StageTrace& b) {
  return a.sentence == b.sentence && a.template_formula == b.template_formula && a.stages == b.stages;
}

nlohmann::json bindings_to_json(Stage stage, const Substitution& theta) {
  nlohmann::json j{{"version", kSchemaVersion}, {"stage", name_of(stage)}, {"bindings", nlohmann::json::array()}};
  for (const auto& layer : theta.layers())
    for (const auto& b : layer) {
      nlohmann::json e;
      if (const auto* name = std::get_if<std::string>(&b.key)) {
        e["placeholder"] = *name;
        if (const auto* sym = std::get_if<logic::PredicateSymbol>(&b.replacement))
          e["symbol"] = sym->name;
        else if (const auto* f = std::get_if<Formula>(&b.replacement))
          e["formula"] = logic::render_formula(*f);
        else
          throw IllFormedReplacement("term bindings have no stage-binding form");
      } else {
        e["pattern"] = logic::render_formula(std::get<Formula>(b.key));
        e["formula"] = logic::render_formula(std::get<Formula>(b.replacement));
      }
      j["bindings"].push_back(std::move(e));
    }
  return j;
}

Substitution bindings_from_json(const nlohmann::json& j, Stage expected, const Formula& context) {
  const std::string stage = j.at("stage").get<std::string>();
  if (j.contains("version") && j["version"] != kSchemaVersion)
    throw StageViolation(name_of(expected), "unsupported binding schema version " + j["version"].dump());
  if (stage != name_of(expected))
    throw StageViolation(name_of(expected), "received bindings for stage \"" + stage + "\"");
  Substitution theta;
  try {
    for (const auto& b : j.at("bindings")) {
      if (b.contains("pattern")) {
        theta.bind_rewrite(parse_fragment(expected, b["pattern"], context), parse_fragment(expected, b["formula"], context));
      } else if (b.contains("symbol")) {
        theta.bind_symbol(b["placeholder"], b["symbol"]);
      } else {
        theta.bind_formula(b["placeholder"], parse_fragment(expected, b["formula"], context));
      }
    }
  } catch (const IllFormedReplacement& e) {
    throw StageViolation(name_of(expected), e.what());
  }
  return theta;
}

Formula generate_template(const std::string& sentence, llm::LlmClient& llm) {
  if (sentence.empty()) throw Error("cannot formalise an empty sentence");
  auto answer = llm.complete(llm::render(llm::TemplateId::Template, {{"sentence", sentence}}));
  std::string text;
  try {
    text = llm::parse_template_response(answer);
  } catch (const UnparseableResponse& e) {
    throw TemplateParseError(e.what());
  }
  try {
    return logic::parse_formula(text, logic::ParseMode::Template);
  } catch (const Error& e) {
    throw TemplateParseError("template \"" + text + "\": " + e.what());
  }
}

Formula stage_entity(const Formula& phi0, const Substitution& theta1, const FormaliserOptions& o,
                     std::vector<std::string>* warnings) {
  const auto arity = placeholder_arity(phi0);
  for (const auto& layer : theta1.layers())
    for (const auto& b : layer) {
      const auto* name = std::get_if<std::string>(&b.key);
      const auto* sym = std::get_if<logic::PredicateSymbol>(&b.replacement);
      if (!name || !sym) throw StageViolation("entity", "θ1 binds only predicate placeholders to predicate symbols, got " + logic::describe(b.key));
      if (auto it = arity.find(*name); it != arity.end() && it->second == 0)
        throw StageViolation("entity", "sentence-level placeholder " + *name + " belongs to the event stage");
      if (contains(o.roles, sym->name)) throw StageViolation("entity", "θ1 cannot introduce role predicate " + sym->name);
      if (logic::is_placeholder_name(sym->name))
        throw StageViolation("entity", "symbol " + sym->name + " has the shape of a placeholder");
    }
  auto report = logic::apply_with_report(phi0, theta1);
  add(warnings, report_unused(report));
  // Symbol diff: everything new must be an entity predicate.
  auto before = logic::predicate_symbols(phi0);
  for (const auto& a : logic::atoms(report.result)) {
    if (contains(before, a.symbol())) continue;
    if (has_event_arg(a)) throw StageViolation("entity", "θ1 introduced event predicate " + a.symbol());
  }
  check_sorted(Stage::Entity, report.result, o);
  return report.result;
}

Formula stage_event(const Formula& phi1, const Substitution& theta2, const FormaliserOptions& o,
                    std::vector<std::string>* warnings) {
  const auto arity = placeholder_arity(phi1);
  std::set<std::string> taken;
  for (const auto& v : logic::bound_variables(phi1)) taken.insert(v.name);
  for (const auto& v : logic::free_variables(phi1)) taken.insert(v.name);
  for (const auto& layer : theta2.layers())
    for (const auto& b : layer) {
      const auto* name = std::get_if<std::string>(&b.key);
      const auto* frag = std::get_if<Formula>(&b.replacement);
      if (!name || !frag) throw StageViolation("event", "θ2 binds sentence-level placeholders to formulas, got " + logic::describe(b.key));
      if (auto it = arity.find(*name); it != arity.end() && it->second != 0)
        throw StageViolation("event", "placeholder " + *name + " takes arguments and belongs to the entity stage");
      if (logic::has_placeholders(*frag)) throw StageViolation("event", "fragment for " + *name + " contains placeholders");
      for (const auto& a : logic::atoms(*frag)) {
        if (contains(o.roles, a.symbol())) throw StageViolation("event", "θ2 cannot introduce role predicate " + a.symbol());
        if (a.args().empty() || !std::all_of(a.args().begin(), a.args().end(), [](const Term& t) { return t.sort == Sort::Event; }))
          throw StageViolation("event", "atom " + logic::render_formula(a) + " is not an event predicate over event variables");
      }
      for (const auto& v : logic::free_variables(*frag)) {
        if (v.sort != Sort::Event) throw StageViolation("event", "fragment for " + *name + " mentions entity variable " + v.name);
        if (taken.count(v.name)) throw StageViolation("event", "event variable " + v.name + " is not fresh");
      }
    }
  auto report = logic::apply_with_report(phi1, theta2);
  add(warnings, report_unused(report));
  check_sorted(Stage::Event, report.result, o);
  return report.result;
}

Formula stage_role(const Formula& phi2, const Substitution& theta3, const FormaliserOptions& o,
                   std::vector<std::string>* warnings) {
  for (const auto& layer : theta3.layers())
    for (const auto& b : layer) {
      const auto* pattern = std::get_if<Formula>(&b.key);
      const auto* repl = std::get_if<Formula>(&b.replacement);
      if (!pattern || !repl) throw StageViolation("role", "θ3 rewrites event atoms, got " + logic::describe(b.key));
      if (!pattern->is_atom() || pattern->args().empty() || pattern->args()[0].sort != Sort::Event || !pattern->args()[0].is_variable())
        throw StageViolation("role", logic::render_formula(*pattern) + " is not an event atom");
      if (contains(o.roles, pattern->symbol())) throw StageViolation("role", "cannot rewrite role atom " + pattern->symbol());
      const Term ev = pattern->args()[0];
      // The replacement is a conjunction: the pattern itself plus role atoms over its event.
      std::vector<Formula> parts;
      std::vector<const Formula*> stack{repl};
      while (!stack.empty()) {
        const Formula* f = stack.back();
        stack.pop_back();
        if (f->kind() == Formula::Kind::And) {
          stack.push_back(&f->rhs());
          stack.push_back(&f->lhs());
        } else {
          parts.push_back(*f);
        }
      }
      int self = 0;
      for (const auto& p : parts) {
        if (p == *pattern) {
          ++self;
          continue;
        }
        if (!p.is_atom() || !contains(o.roles, p.symbol()))
          throw StageViolation("role", "θ3 may add only role predicates, found " + logic::render_formula(p));
        if (p.args().size() != 2 || p.args()[0] != ev)
          throw StageViolation("role", "role atom " + logic::render_formula(p) + " must take " + ev.name + " first");
      }
      if (self != 1) throw StageViolation("role", "rewrite of " + logic::render_formula(*pattern) + " must keep the event atom exactly once");
    }
  auto report = logic::apply_with_report(phi2, theta3);
  add(warnings, report_unused(report));
  Formula out = close_events(report.result, o.event_quantifier);
  if (logic::has_placeholders(out)) throw StageViolation("role", "result still contains placeholders: " + logic::render_formula(out));
  if (auto fv = logic::free_variables(out); !fv.empty())
    throw StageViolation("role", "result has free variable " + fv.front().name + ": " + logic::render_formula(out));
  check_sorted(Stage::Role, out, o);
  // Event atoms that received no role.
  std::set<std::string> with_role;
  for (const auto& a : logic::atoms(out))
    if (contains(o.roles, a.symbol()) && !a.args().empty()) with_role.insert(a.args()[0].name);
  for (const auto& a : logic::atoms(out))
    if (!contains(o.roles, a.symbol()) && !a.args().empty() && a.args()[0].sort == Sort::Event &&
        !with_role.count(a.args()[0].name))
      add(warnings, {"event atom " + logic::render_formula(a) + " has no role"});
  return out;
}

Formula close_events(const Formula& f, EventQuantifier q) {
  auto fresh = free_events(f);
  if (fresh.empty()) return f;
  if (q == EventQuantifier::Paper) return append_universals(f, fresh);
  Formula out = f;
  for (const auto& v : fresh) out = bind_tight(out, v);
  return out;
}

bool composition_agrees(const StageTrace& t, const FormaliserOptions& o) {
  if (t.stages.size() != 3) return false;
  Substitution all = logic::compose(logic::compose(t.stages[0].theta, t.stages[1].theta), t.stages[2].theta);
  return close_events(logic::apply_substitution(t.template_formula, all), o.event_quantifier) == t.final_formula();
}

llm::Slots theta_prompt_slots(const std::string& sentence, Stage stage, const Formula& current,
                              const FormaliserOptions& o) {
  std::string roles;
  for (const auto& r : o.roles) roles += (roles.empty() ? "" : ", ") + r;
  return {{"sentence", sentence},
          {"formula", logic::render_formula(current)},
          {"stage", name_of(stage)},
          {"stage_instructions", stage_instructions(stage)},
          {"roles", roles}};
}

StageTrace formalise(const std::string& sentence, llm::LlmClient& llm, const FormaliserOptions& o) {
  StageTrace trace{sentence, generate_template(sentence, llm), {}};
  Formula current = trace.template_formula;
  for (Stage stage : {Stage::Entity, Stage::Event, Stage::Role}) {
    auto answer = llm.complete(llm::render(llm::TemplateId::ThetaStage, theta_prompt_slots(sentence, stage, current, o)));
    nlohmann::json doc;
    try {
      doc = llm::parse_bindings(answer);
    } catch (const UnparseableResponse& e) {
      throw StageViolation(name_of(stage), e.what());
    }
    Substitution theta = bindings_from_json(doc, stage, current);
    StageRecord rec{stage, theta, {}, {}};
    switch (stage) {
      case Stage::Entity: rec.result = stage_entity(current, theta, o, &rec.warnings); break;
      case Stage::Event: rec.result = stage_event(current, theta, o, &rec.warnings); break;
      case Stage::Role: rec.result = stage_role(current, theta, o, &rec.warnings); break;
    }
    current = rec.result;
    trace.stages.push_back(std::move(rec));
  }
  if (!composition_agrees(trace, o))
    throw Error("internal: staged result disagrees with the composed substitution for \"" + sentence + "\"");
  return trace;
}

nlohmann::json to_json(const StageTrace& t) {
  nlohmann::json j{{"version", kSchemaVersion}, {"sentence", t.sentence}, {"template", logic::render_formula(t.template_formula)}, {"stages", nlohmann::json::array()}};
  for (const auto& s : t.stages) {
    auto theta = bindings_to_json(s.stage, s.theta);
    j["stages"].push_back({{"stage", name_of(s.stage)},
                           {"theta", theta["bindings"]},
                           {"result", logic::render_formula(s.result)},
                           {"warnings", s.warnings}});
  }
  return j;
}

StageTrace trace_from_json(const nlohmann::json& j) {
  if (j.contains("version") && j["version"] != kSchemaVersion)
    throw FormatError(0, "unsupported trace schema version " + j["version"].dump());
  StageTrace t;
  t.sentence = j.at("sentence").get<std::string>();
  t.template_formula = logic::parse_formula(j.at("template").get<std::string>(), logic::ParseMode::Template);
  Formula current = t.template_formula;
  for (const auto& s : j.at("stages")) {
    auto stage = stage_from_string(s.at("stage").get<std::string>());
    if (!stage) throw FormatError(0, "unknown stage in trace");
    nlohmann::json doc{{"stage", s["stage"]}, {"bindings", s.at("theta")}};
    StageRecord rec{*stage, bindings_from_json(doc, *stage, current), {}, {}};
    logic::ParseOptions po;
    po.scope = logic::bound_variables(current);
    rec.result = logic::parse_formula(s.at("result").get<std::string>(), logic::ParseMode::Template, po);
    rec.warnings = s.value("warnings", std::vector<std::string>{});
    current = rec.result;
    t.stages.push_back(std::move(rec));
  }
  return t;
}

}  // namespace rvnli::formaliser
