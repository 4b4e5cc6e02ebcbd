#include "rvnli/prover/export.hpp"

#include <cctype>
#include <functional>
#include <map>
#include <regex>
#include <set>
#include <sstream>

#include "rvnli/error.hpp"
#include "rvnli/logic/parser.hpp"
#include "rvnli/logic/render.hpp"

namespace rvnli::prover {

using logic::Formula;
using logic::Sort;
using logic::Term;
using K = Formula::Kind;

namespace {

std::vector<std::pair<std::string, Sort>> theory_constants(const Theory& t) {
  std::vector<std::pair<std::string, Sort>> out;
  std::set<std::string> seen;
  auto add = [&](const Formula& f) {
    for (const auto& c : logic::constants(f))
      if (seen.insert(c.name).second) out.emplace_back(c.name, c.sort);
  };
  for (const auto& a : t.axioms) add(a.formula);
  if (t.goal) add(t.goal);
  return out;
}

// Symbol table for emission: the declared signature first, then symbols only the formulas use.
logic::Signature full_signature(const Theory& t) {
  logic::Signature sig = t.signature;
  for (const auto& a : t.axioms) logic::check_sorts(a.formula, sig, true);
  if (t.goal) logic::check_sorts(t.goal, sig, true);
  return sig;
}

std::string isabelle_type(const std::vector<Sort>& args) {
  std::string s;
  for (auto a : args) s += std::string(logic::to_string(a)) + " ⇒ ";
  return s + "bool";
}

Formula map_terms(const Formula& f, const std::function<Term(const Term&)>& fn) {
  switch (f.kind()) {
    case K::Pred:
    case K::Placeholder: {
      std::vector<Term> args;
      for (const auto& a : f.args()) args.push_back(fn(a));
      return f.kind() == K::Pred ? Formula::pred(f.symbol(), std::move(args))
                                 : Formula::placeholder(f.symbol(), std::move(args));
    }
    case K::Not:
      return Formula::negation(map_terms(f.operand(), fn));
    case K::Forall:
    case K::Exists:
      return Formula::quantifier(f.kind(), f.bound(), map_terms(f.body(), fn));
    default:
      return Formula::binary(f.kind(), map_terms(f.lhs(), fn), map_terms(f.rhs(), fn));
  }
}

Formula close_with(K kind, const Formula& f) {
  auto fv = logic::free_variables(f);
  Formula out = f;
  for (auto it = fv.rbegin(); it != fv.rend(); ++it) out = Formula::quantifier(kind, *it, out);
  return out;
}

}  // namespace

std::string export_isabelle(const Theory& theory, const IsabelleOptions& options) {
  validate(theory);
  const logic::Signature sig = full_signature(theory);
  std::set<std::string> names;
  for (const auto& s : sig.symbols()) names.insert(s);
  if (options.declare_constants)
    for (const auto& [c, sort] : theory_constants(theory))
      if (!names.insert(c).second) throw NameCollision("constant " + c + " clashes with a predicate of the same name");
  std::set<std::string> axiom_names;
  for (const auto& a : theory.axioms)
    if (a.name == "hypothesis" || a.name == "asm" || !axiom_names.insert(a.name).second)
      throw NameCollision("axiom name " + a.name + " is reserved or repeated");

  std::ostringstream os;
  os << "theory " << theory.name << "\nimports Main\n\nbegin\n\ntypedecl entity\ntypedecl event\n\n";
  if (!sig.empty() || (options.declare_constants && !theory_constants(theory).empty())) {
    os << "consts\n";
    for (const auto& s : sig.symbols()) os << "  " << s << " :: \"" << isabelle_type(*sig.find(s)) << "\"\n";
    if (options.declare_constants)
      for (const auto& [c, sort] : theory_constants(theory)) os << "  " << c << " :: \"" << logic::to_string(sort) << "\"\n";
    os << "\n";
  }
  for (std::size_t i = 0; i < theory.axioms.size(); ++i) {
    const auto& a = theory.axioms[i];
    if (!a.comment.empty()) os << "(* Explanation " << i + 1 << ": " << a.comment << " *)\n";
    os << "axiomatization where\n  " << a.name << ": \""
       << logic::render_formula(a.formula, logic::Dialect::IsabelleInner) << "\"\n\n";
  }
  os << "theorem hypothesis:\n";
  std::string comment = theory.goal_comment.empty() ? "" : "  (* Hypothesis: " + theory.goal_comment + " *)\n";
  const Formula& g = theory.goal;
  if (options.goal_form == GoalForm::Contradiction) {
    const Formula* m = &g;
    while (m->kind() == K::Exists) m = &m->body();
    os << "  assumes asm: \"" << logic::render_formula(*m, logic::Dialect::IsabelleInner) << "\"\n"
       << comment << "  shows False\n";
  } else {
    const Formula* m = &g;
    while (m->kind() == K::Forall) m = &m->body();
    if (m != &g && m->kind() == K::Implies) {
      os << "  assumes asm: \"" << logic::render_formula(m->lhs(), logic::Dialect::IsabelleInner) << "\"\n"
         << comment << "  shows \"" << logic::render_formula(m->rhs(), logic::Dialect::IsabelleInner) << "\"\n";
    } else {
      os << comment << "  shows \"" << logic::render_formula(g, logic::Dialect::IsabelleInner) << "\"\n";
    }
  }
  os << "  sledgehammer\n  oops\n\nend\n";
  return os.str();
}

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<Sort> parse_isabelle_type(const std::string& type, std::size_t pos) {
  std::vector<std::string> parts;
  std::string t = type;
  for (const std::string arrow : {"⇒", "=>"})
    for (auto p = t.find(arrow); p != std::string::npos; p = t.find(arrow)) t.replace(p, arrow.size(), "\x01");
  std::stringstream ss(t);
  std::string item;
  while (std::getline(ss, item, '\x01')) parts.push_back(trim(item));
  std::vector<Sort> sorts;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i + 1 == parts.size() && parts[i] == "bool") break;
    if (parts[i] == "entity") sorts.push_back(Sort::Entity);
    else if (parts[i] == "event") sorts.push_back(Sort::Event);
    else throw SyntaxError(pos, "unsupported type '" + parts[i] + "'");
  }
  return sorts;
}

}  // namespace

Theory parse_isabelle(std::string_view text) {
  Theory t;
  t.name.clear();
  std::map<std::string, Sort> consts;
  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t offset = 0;
  enum class Section { Header, Consts, Axiom, Theorem } section = Section::Header;
  std::string pending_comment;
  Formula asm_formula, shows_formula;
  bool shows_false = false, ended = false;
  std::vector<std::pair<std::string, std::pair<std::string, std::size_t>>> axiom_texts;
  std::vector<std::string> axiom_comments;
  std::string asm_text, shows_text;
  std::size_t asm_pos = 0, shows_pos = 0;

  static const std::regex const_re(R"re(^(\S+)\s*::\s*"(.*)"$)re");
  static const std::regex fact_re(R"re(^(\w+):\s*"(.*)"$)re");
  static const std::regex comment_re(R"re(^\(\*\s*(Explanation\s+\d+|Hypothesis):\s*(.*?)\s*\*\)$)re");

  while (std::getline(in, raw)) {
    const std::size_t pos = offset;
    offset += raw.size() + 1;
    std::string line = trim(raw);
    std::smatch m;
    if (line.empty()) {
      if (section == Section::Consts) section = Section::Header;
      continue;
    }
    if (ended) throw SyntaxError(pos, "text after end");
    if (std::regex_match(line, m, comment_re)) {
      if (m[1] == "Hypothesis") t.goal_comment = m[2];
      else pending_comment = m[2];
      continue;
    }
    if (section == Section::Consts) {
      if (!std::regex_match(line, m, const_re)) throw SyntaxError(pos, "malformed consts entry");
      auto sorts = parse_isabelle_type(m[2], pos);
      std::string type = m[2];
      if (type.find("bool") == std::string::npos) {
        if (sorts.size() != 1) throw SyntaxError(pos, "constant type must be a single sort");
        consts[m[1]] = sorts[0];
      } else {
        t.signature.declare(m[1], sorts);
      }
      continue;
    }
    if (section == Section::Axiom) {
      if (!std::regex_match(line, m, fact_re)) throw SyntaxError(pos, "malformed axiom");
      axiom_texts.push_back({m[1], {m[2], pos}});
      axiom_comments.push_back(pending_comment);
      pending_comment.clear();
      section = Section::Header;
      continue;
    }
    if (section == Section::Theorem) {
      if (line.rfind("assumes asm:", 0) == 0) {
        static const std::regex re(R"re(^assumes asm:\s*"(.*)"$)re");
        if (!std::regex_match(line, m, re)) throw SyntaxError(pos, "malformed assumption");
        asm_text = m[1];
        asm_pos = pos;
      } else if (line == "shows False") {
        shows_false = true;
      } else if (line.rfind("shows", 0) == 0) {
        static const std::regex re(R"re(^shows\s*"(.*)"$)re");
        if (!std::regex_match(line, m, re)) throw SyntaxError(pos, "malformed conclusion");
        shows_text = m[1];
        shows_pos = pos;
      } else if (line == "sledgehammer" || line == "oops") {
      } else if (line == "end") {
        ended = true;
      } else {
        throw SyntaxError(pos, "unexpected line in theorem: " + line);
      }
      continue;
    }
    if (line.rfind("theory ", 0) == 0) t.name = trim(line.substr(7));
    else if (line.rfind("imports", 0) == 0 || line == "begin" || line.rfind("typedecl", 0) == 0) {
    } else if (line == "consts") section = Section::Consts;
    else if (line == "axiomatization where") section = Section::Axiom;
    else if (line == "theorem hypothesis:") section = Section::Theorem;
    else if (line == "end") ended = true;
    else throw SyntaxError(pos, "unexpected line: " + line);
  }
  if (t.name.empty()) throw SyntaxError(0, "missing theory header");
  if (!ended) throw SyntaxError(offset, "missing end");

  // Isabelle reading: declared 0-ary constants are constants, anything else unbound is a free
  // variable; a declared predicate in term position is a type error.
  logic::ParseOptions opts;
  opts.signature = &t.signature;
  opts.dialect = logic::SyntaxDialect::Isabelle;
  auto read = [&](const std::string& s, std::size_t pos) {
    Formula f;
    try {
      f = logic::parse_formula(s, logic::ParseMode::Closed, opts);
    } catch (const SyntaxError& e) {
      throw SyntaxError(pos + e.position(), e.what());
    }
    f = map_terms(f, [&](const Term& term) {
      if (!term.is_constant()) return term;
      if (t.signature.contains(term.name))
        throw SortError(term.name, std::string(logic::to_string(term.sort)),
                        isabelle_type(*t.signature.find(term.name)));
      if (auto it = consts.find(term.name); it != consts.end()) {
        if (it->second != term.sort)
          throw SortError(term.name, std::string(logic::to_string(it->second)), std::string(logic::to_string(term.sort)));
        return term;
      }
      return Term::variable(term.name, term.sort);
    });
    logic::Signature copy = t.signature;
    logic::check_sorts(f, copy, false);
    return f;
  };
  for (std::size_t i = 0; i < axiom_texts.size(); ++i) {
    const auto& [name, body] = axiom_texts[i];
    t.axioms.push_back({name, close_with(K::Forall, read(body.first, body.second)), axiom_comments[i]});
  }
  if (shows_false) {
    if (asm_text.empty()) throw SyntaxError(offset, "contradiction form without assumption");
    t.goal = close_with(K::Exists, read(asm_text, asm_pos));
  } else if (!shows_text.empty()) {
    Formula concl = read(shows_text, shows_pos);
    t.goal = asm_text.empty() ? close_with(K::Forall, concl)
                              : close_with(K::Forall, Formula::implies(read(asm_text, asm_pos), concl));
  } else {
    throw SyntaxError(offset, "theorem without conclusion");
  }
  return t;
}

namespace {

bool lower_word(const std::string& s) {
  if (s.empty() || !std::islower(static_cast<unsigned char>(s[0]))) return false;
  for (char c : s)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
  return true;
}

const std::set<std::string>& reserved_names() {
  static const std::set<std::string> names{"entity_nonempty", "event_nonempty", "hypothesis"};
  return names;
}

void check_mangling(const Theory& theory, const logic::Signature& sig) {
  std::map<std::string, std::string> functors{{"entity", "(sort guard)"}, {"event", "(sort guard)"}};
  auto claim = [&](const std::string& name, const std::string& kind) {
    std::string mangled = logic::tptp_functor(name);
    if (logic::untptp_functor(mangled) != name || !lower_word(mangled))
      throw NameCollision(kind + " " + name + " has no invertible TPTP name");
    auto [it, inserted] = functors.emplace(mangled, name);
    if (!inserted) throw NameCollision(kind + " " + name + " collides with " + it->second + " as " + mangled);
  };
  for (const auto& s : sig.symbols()) claim(s, "predicate");
  for (const auto& [c, sort] : theory_constants(theory)) claim(c, "constant");

  std::function<void(const Formula&)> vars = [&](const Formula& f) {
    logic::visit(f, [&](const Formula& g) {
      if (!g.is_quantifier()) return;
      const auto& v = g.bound().name;
      if (logic::untptp_variable(logic::tptp_variable(v)) != v)
        throw NameCollision("variable " + v + " has no invertible TPTP name");
    });
  };
  std::set<std::string> names;
  for (const auto& a : theory.axioms) {
    if (!lower_word(a.name) || reserved_names().count(a.name) || a.name.rfind("sort_", 0) == 0)
      throw NameCollision("axiom name " + a.name + " is not usable in TPTP");
    if (!names.insert(a.name).second) throw NameCollision("duplicate axiom name " + a.name);
    vars(a.formula);
  }
  vars(theory.goal);
}

std::string one_line(const std::string& s) {
  std::string out = s;
  for (auto& c : out)
    if (c == '\n' || c == '\r') c = ' ';
  return out;
}

}  // namespace

std::string export_tptp(const Theory& theory) {
  validate(theory);
  const logic::Signature sig = full_signature(theory);
  check_mangling(theory, sig);
  std::ostringstream os;
  os << "% theory: " << one_line(theory.name) << "\n";
  for (const auto& s : sig.symbols()) {
    os << "% signature: " << s << "(";
    const auto& sorts = *sig.find(s);
    for (std::size_t i = 0; i < sorts.size(); ++i) os << (i ? ", " : "") << logic::to_string(sorts[i]);
    os << ")\n";
  }
  os << "fof(entity_nonempty, axiom, ?[X]: entity(X)).\n";
  os << "fof(event_nonempty, axiom, ?[X]: event(X)).\n";
  for (const auto& [c, sort] : theory_constants(theory)) {
    const std::string f = logic::tptp_functor(c);
    os << "fof(sort_" << f << ", axiom, " << logic::tptp_sort_guard(sort) << "(" << f << ")).\n";
  }
  for (const auto& a : theory.axioms) {
    if (!a.comment.empty()) os << "% " << a.name << ": " << one_line(a.comment) << "\n";
    os << "fof(" << a.name << ", axiom, " << logic::render_formula(a.formula, logic::Dialect::TptpFof) << ").\n";
  }
  if (!theory.goal_comment.empty()) os << "% hypothesis: " << one_line(theory.goal_comment) << "\n";
  os << "fof(hypothesis, conjecture, " << logic::render_formula(theory.goal, logic::Dialect::TptpFof) << ").\n";
  return os.str();
}

namespace {

// Recursive-descent reader for the FOF fragment produced by export_tptp.
class TptpReader {
 public:
  TptpReader(std::string_view text, std::size_t base, const std::map<std::string, Sort>& constant_sorts)
      : s_(text), base_(base), constants_(constant_sorts) {}

  Formula formula() {
    Formula f = binary();
    skip();
    if (i_ != s_.size()) fail("trailing input");
    return f;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw SyntaxError(base_ + i_, msg); }

  void skip() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
  }

  bool eat(std::string_view tok) {
    skip();
    if (s_.substr(i_, tok.size()) == tok) {
      i_ += tok.size();
      return true;
    }
    return false;
  }

  void expect(std::string_view tok) {
    if (!eat(tok)) fail("expected '" + std::string(tok) + "'");
  }

  std::string word() {
    skip();
    std::size_t b = i_;
    while (i_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[i_])) || s_[i_] == '_')) ++i_;
    if (b == i_) fail("expected a name");
    return std::string(s_.substr(b, i_ - b));
  }

  Formula binary() {
    Formula l = unitary();
    static const std::vector<std::pair<std::string_view, K>> ops{
        {"<=>", K::Iff}, {"=>", K::Implies}, {"&", K::And}, {"|", K::Or}};
    for (const auto& [tok, kind] : ops) {
      if (eat(tok)) {
        Formula r = (kind == K::And || kind == K::Or) ? binary() : unitary();
        return Formula::binary(kind, l, r);
      }
    }
    return l;
  }

  Formula unitary() {
    skip();
    if (eat("(")) {
      Formula f = binary();
      expect(")");
      return f;
    }
    if (eat("~")) return Formula::negation(unitary());
    if (eat("!")) return quantified(true);
    if (eat("?")) return quantified(false);
    return atom();
  }

  Formula quantified(bool universal) {
    expect("[");
    std::string var = word();
    if (eat(",")) fail("multi-variable quantifiers are not produced by the exporter");
    expect("]");
    expect(":");
    expect("(");
    std::string guard = word();
    Sort sort;
    if (guard == "entity") sort = Sort::Entity;
    else if (guard == "event") sort = Sort::Event;
    else fail("expected a sort guard");
    expect("(");
    if (word() != var) fail("guard does not mention the bound variable");
    expect(")");
    expect(universal ? "=>" : "&");
    Term v = Term::variable(logic::untptp_variable(var), sort);
    scope_.push_back(v);
    Formula body = binary();
    scope_.pop_back();
    expect(")");
    return Formula::quantifier(universal ? K::Forall : K::Exists, v, body);
  }

  Term term() {
    std::string w = word();
    if (std::isupper(static_cast<unsigned char>(w[0]))) {
      std::string name = logic::untptp_variable(w);
      for (auto it = scope_.rbegin(); it != scope_.rend(); ++it)
        if (it->name == name) return *it;
      fail("unbound variable " + w);
    }
    skip();
    if (i_ < s_.size() && s_[i_] == '(') fail("function terms are not supported");
    auto it = constants_.find(w);
    if (it == constants_.end()) fail("constant " + w + " has no sort declaration");
    return Term::constant(logic::untptp_functor(w), it->second);
  }

  Formula atom() {
    std::string w = word();
    if (!lower_word(w)) fail("expected a predicate");
    std::vector<Term> args;
    if (eat("(")) {
      do args.push_back(term());
      while (eat(","));
      expect(")");
    }
    return Formula::pred(logic::untptp_functor(w), std::move(args));
  }

  std::string_view s_;
  std::size_t i_ = 0;
  std::size_t base_;
  const std::map<std::string, Sort>& constants_;
  std::vector<Term> scope_;
};

}  // namespace

Theory parse_tptp(std::string_view text) {
  Theory t;
  t.name.clear();
  std::map<std::string, Sort> constant_sorts;
  std::map<std::string, std::string> comments;
  struct Statement {
    std::string name, role, body;
    std::size_t pos;
  };
  std::vector<Statement> statements;

  std::size_t i = 0;
  while (i < text.size()) {
    if (std::isspace(static_cast<unsigned char>(text[i]))) {
      ++i;
      continue;
    }
    if (text[i] == '%') {
      std::size_t e = text.find('\n', i);
      std::string line(text.substr(i + 1, e == std::string_view::npos ? std::string_view::npos : e - i - 1));
      line = trim(line);
      if (line.rfind("theory:", 0) == 0) {
        t.name = trim(line.substr(7));
      } else if (line.rfind("signature:", 0) == 0) {
        static const std::regex re(R"(^signature:\s*(\w+)\((.*)\)$)");
        std::smatch m;
        if (!std::regex_match(line, m, re)) throw SyntaxError(i, "malformed signature comment");
        std::vector<Sort> sorts;
        std::stringstream ss(m[2].str());
        std::string item;
        while (std::getline(ss, item, ','))
          if (!trim(item).empty()) {
            auto sort = logic::sort_from_string(trim(item));
            if (!sort) throw SyntaxError(i, "unknown sort " + item);
            sorts.push_back(*sort);
          }
        t.signature.declare(m[1], sorts);
      } else if (auto colon = line.find(':'); colon != std::string::npos && lower_word(line.substr(0, colon))) {
        comments[line.substr(0, colon)] = trim(line.substr(colon + 1));
      }
      i = e == std::string_view::npos ? text.size() : e + 1;
      continue;
    }
    if (text.substr(i, 4) != "fof(") throw SyntaxError(i, "expected fof(");
    std::size_t start = i;
    int depth = 0;
    std::size_t j = i + 3;
    for (; j < text.size(); ++j) {
      if (text[j] == '(') ++depth;
      else if (text[j] == ')' && --depth == 0) break;
    }
    if (j >= text.size() || j + 1 >= text.size() || text[j + 1] != '.') throw SyntaxError(start, "unterminated fof");
    std::string_view inner = text.substr(start + 4, j - start - 4);
    auto c1 = inner.find(',');
    auto c2 = c1 == std::string_view::npos ? c1 : inner.find(',', c1 + 1);
    if (c2 == std::string_view::npos) throw SyntaxError(start, "fof needs name, role and formula");
    statements.push_back({trim(std::string(inner.substr(0, c1))), trim(std::string(inner.substr(c1 + 1, c2 - c1 - 1))),
                          std::string(inner.substr(c2 + 1)), start + 4 + c2 + 1});
    i = j + 2;
  }

  static const std::regex sort_re(R"(^\s*(entity|event)\((\w+)\)\s*$)");
  for (const auto& st : statements) {
    std::smatch m;
    if (st.name.rfind("sort_", 0) == 0 && std::regex_match(st.body, m, sort_re))
      constant_sorts[m[2]] = *logic::sort_from_string(m[1].str());
  }
  bool have_goal = false;
  for (const auto& st : statements) {
    if (st.name == "entity_nonempty" || st.name == "event_nonempty" || st.name.rfind("sort_", 0) == 0) continue;
    Formula f = TptpReader(st.body, st.pos, constant_sorts).formula();
    if (st.role == "conjecture") {
      if (have_goal) throw SyntaxError(st.pos, "more than one conjecture");
      have_goal = true;
      t.goal = f;
      t.goal_comment = comments.count(st.name) ? comments[st.name] : "";
    } else if (st.role == "axiom" || st.role == "hypothesis") {
      t.axioms.push_back({st.name, f, comments.count(st.name) ? comments[st.name] : ""});
    } else {
      throw SyntaxError(st.pos, "unsupported role " + st.role);
    }
  }
  if (!have_goal) throw SyntaxError(text.size(), "no conjecture");
  if (t.name.empty()) t.name = "problem";
  std::vector<Formula> fs;
  for (const auto& a : t.axioms) fs.push_back(a.formula);
  fs.push_back(t.goal);
  logic::Signature inferred = logic::infer_signature(fs);
  t.signature.merge(inferred);
  return t;
}

}  // namespace rvnli::prover
