#include "rvnli/logic/parser.hpp"

#include <cctype>
#include <map>
#include <memory>
#include <optional>
#include <string>

#include "rvnli/error.hpp"

namespace rvnli::logic {

bool is_placeholder_name(std::string_view name) noexcept {
  if (name.empty() || name[0] < 'A' || name[0] > 'Z') return false;
  for (std::size_t i = 1; i < name.size(); ++i)
    if (name[i] < '0' || name[i] > '9') return false;
  return true;
}

bool is_variable_name(std::string_view name) noexcept {
  if (name.empty() || name[0] < 'a' || name[0] > 'z') return false;
  for (std::size_t i = 1; i < name.size(); ++i)
    if (name[i] < '0' || name[i] > '9') return false;
  return true;
}

namespace {

enum class Tok { Ident, Placeholder, LParen, RParen, Comma, Dot, Colon, Not, And, Or, Implies, Iff, Forall, Exists, End };

struct Token {
  Tok kind;
  std::string text;
  std::size_t pos;
};

class Lexer {
 public:
  explicit Lexer(std::string_view s) : s_(s) {}

  Token next() {
    skip_space();
    std::size_t start = i_;
    if (i_ >= s_.size()) return {Tok::End, "", start};
    static const std::pair<std::string_view, Tok> symbols[] = {
        {"<-->", Tok::Iff}, {"<->", Tok::Iff}, {"<=>", Tok::Iff}, {"-->", Tok::Implies}, {"->", Tok::Implies},
        {"=>", Tok::Implies}, {"↔", Tok::Iff}, {"⟷", Tok::Iff}, {"→", Tok::Implies},
        {"⟶", Tok::Implies}, {"∧", Tok::And}, {"∨", Tok::Or}, {"¬", Tok::Not},
        {"∀", Tok::Forall}, {"∃", Tok::Exists}, {"::", Tok::Colon}, {"&", Tok::And}, {"|", Tok::Or},
        {"~", Tok::Not}, {"(", Tok::LParen}, {")", Tok::RParen}, {",", Tok::Comma}, {".", Tok::Dot},
        {":", Tok::Colon}};
    for (const auto& [text, kind] : symbols) {
      if (s_.substr(i_, text.size()) == text) {
        i_ += text.size();
        return {kind, std::string(text), start};
      }
    }
    bool explicit_placeholder = false;
    if (s_[i_] == '?') {
      explicit_placeholder = true;
      ++i_;
    }
    if (i_ < s_.size() && (std::isalpha(static_cast<unsigned char>(s_[i_])) || s_[i_] == '_')) {
      std::size_t b = i_;
      while (i_ < s_.size() &&
             (std::isalnum(static_cast<unsigned char>(s_[i_])) || s_[i_] == '_' || s_[i_] == '\''))
        ++i_;
      std::string word(s_.substr(b, i_ - b));
      if (!explicit_placeholder) {
        if (word == "forall") return {Tok::Forall, word, start};
        if (word == "exists") return {Tok::Exists, word, start};
      }
      return {explicit_placeholder ? Tok::Placeholder : Tok::Ident, word, start};
    }
    throw SyntaxError(start, "unexpected character '" + std::string(1, s_[start]) + "'");
  }

 private:
  void skip_space() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
  }
  std::string_view s_;
  std::size_t i_ = 0;
};

// Symbol-table entry for every distinct variable binding, free variable, or constant name.
struct Slot {
  enum class Kind { Bound, Free, Constant } kind;
  std::string name;
  std::optional<Sort> sort;
};

struct RawTerm {
  int slot;
  std::size_t pos;
};

struct Raw {
  Formula::Kind kind;
  std::string symbol;
  std::vector<RawTerm> args;
  std::unique_ptr<Raw> l, r;
  int var_slot = -1;
  std::size_t pos = 0;
};

class Parser {
 public:
  Parser(std::string_view text, ParseMode mode, const ParseOptions& opts) : lex_(text), mode_(mode), opts_(opts) {
    advance();
  }

  Formula parse() {
    auto raw = parse_iff();
    if (cur_.kind != Tok::End) throw SyntaxError(cur_.pos, "unexpected '" + cur_.text + "'");
    resolve_sorts(*raw);
    Formula f = build(*raw);
    Signature sig = opts_.signature ? *opts_.signature : Signature{};
    check_sorts(f, sig, true);
    return f;
  }

  Term parse_single_term() {
    auto t = parse_term();
    if (cur_.kind != Tok::End) throw SyntaxError(cur_.pos, "unexpected '" + cur_.text + "'");
    auto& s = slots_[t.slot];
    if (!s.sort) s.sort = default_sort_for_name(s.name);
    return make_term(t);
  }

 private:
  void advance() { cur_ = lex_.next(); }

  void expect(Tok k, const char* what) {
    if (cur_.kind != k) throw SyntaxError(cur_.pos, std::string("expected ") + what);
    advance();
  }

  std::unique_ptr<Raw> make(Formula::Kind k, std::size_t pos) {
    auto r = std::make_unique<Raw>();
    r->kind = k;
    r->pos = pos;
    return r;
  }

  std::unique_ptr<Raw> binary(Formula::Kind k, std::unique_ptr<Raw> l, std::unique_ptr<Raw> r, std::size_t pos) {
    auto n = make(k, pos);
    n->l = std::move(l);
    n->r = std::move(r);
    return n;
  }

  std::unique_ptr<Raw> parse_iff() {
    auto l = parse_imp();
    if (cur_.kind == Tok::Iff) {
      auto pos = cur_.pos;
      advance();
      return binary(Formula::Kind::Iff, std::move(l), parse_iff(), pos);
    }
    return l;
  }

  std::unique_ptr<Raw> parse_imp() {
    auto l = parse_or();
    if (cur_.kind == Tok::Implies) {
      auto pos = cur_.pos;
      advance();
      return binary(Formula::Kind::Implies, std::move(l), parse_imp(), pos);
    }
    return l;
  }

  std::unique_ptr<Raw> parse_or() {
    auto l = parse_and();
    if (cur_.kind == Tok::Or) {
      auto pos = cur_.pos;
      advance();
      return binary(Formula::Kind::Or, std::move(l), parse_or(), pos);
    }
    return l;
  }

  std::unique_ptr<Raw> parse_and() {
    auto l = parse_unary();
    if (cur_.kind == Tok::And) {
      auto pos = cur_.pos;
      advance();
      return binary(Formula::Kind::And, std::move(l), parse_and(), pos);
    }
    return l;
  }

  std::optional<Sort> parse_annotation() {
    if (cur_.kind != Tok::Colon) return std::nullopt;
    advance();
    if (cur_.kind != Tok::Ident) throw SyntaxError(cur_.pos, "expected a sort name");
    auto s = sort_from_string(cur_.text);
    if (!s) throw SyntaxError(cur_.pos, "unknown sort '" + cur_.text + "'");
    advance();
    return s;
  }

  std::unique_ptr<Raw> parse_unary() {
    auto pos = cur_.pos;
    switch (cur_.kind) {
      case Tok::Not: {
        advance();
        auto n = make(Formula::Kind::Not, pos);
        n->l = parse_unary();
        return n;
      }
      case Tok::Forall:
      case Tok::Exists: {
        auto kind = cur_.kind == Tok::Forall ? Formula::Kind::Forall : Formula::Kind::Exists;
        advance();
        std::vector<int> vars;
        while (cur_.kind == Tok::Ident) {
          Slot s{Slot::Kind::Bound, cur_.text, std::nullopt};
          advance();
          s.sort = parse_annotation();
          slots_.push_back(std::move(s));
          vars.push_back(static_cast<int>(slots_.size()) - 1);
        }
        if (vars.empty()) throw SyntaxError(cur_.pos, "quantifier without variables");
        expect(Tok::Dot, "'.' after quantified variables");
        for (int v : vars) scope_.push_back(v);
        auto body = parse_iff();
        scope_.resize(scope_.size() - vars.size());
        for (auto it = vars.rbegin(); it != vars.rend(); ++it) {
          auto q = make(kind, pos);
          q->var_slot = *it;
          q->l = std::move(body);
          body = std::move(q);
        }
        return body;
      }
      case Tok::LParen: {
        advance();
        auto inner = parse_iff();
        expect(Tok::RParen, "')'");
        return inner;
      }
      case Tok::Ident:
      case Tok::Placeholder:
        return parse_atom();
      default:
        throw SyntaxError(pos, cur_.kind == Tok::End ? "unexpected end of input" : "unexpected '" + cur_.text + "'");
    }
  }

  std::unique_ptr<Raw> parse_atom() {
    auto pos = cur_.pos;
    bool explicit_placeholder = cur_.kind == Tok::Placeholder;
    std::string name = cur_.text;
    advance();
    bool placeholder = explicit_placeholder || (mode_ == ParseMode::Template && is_placeholder_name(name));
    if (explicit_placeholder && mode_ == ParseMode::Closed)
      throw PlaceholderInClosedFormula("placeholder ?" + name + " in a closed formula");
    auto n = make(placeholder ? Formula::Kind::Placeholder : Formula::Kind::Pred, pos);
    n->symbol = name;
    if (opts_.dialect == SyntaxDialect::Canonical) {
      if (cur_.kind == Tok::LParen) {
        advance();
        n->args.push_back(parse_term());
        while (cur_.kind == Tok::Comma) {
          advance();
          n->args.push_back(parse_term());
        }
        expect(Tok::RParen, "')' after arguments");
      }
    } else {
      while (cur_.kind == Tok::Ident) n->args.push_back(parse_term());
    }
    return n;
  }

  RawTerm parse_term() {
    if (cur_.kind != Tok::Ident) throw SyntaxError(cur_.pos, "expected a term");
    auto pos = cur_.pos;
    std::string name = cur_.text;
    advance();
    auto annot = parse_annotation();
    int slot = lookup(name);
    auto& s = slots_[slot];
    if (annot) {
      if (s.sort && *s.sort != *annot)
        throw SortError(name, std::string(to_string(*s.sort)), std::string(to_string(*annot)));
      s.sort = annot;
    }
    return {slot, pos};
  }

  int lookup(const std::string& name) {
    for (auto it = scope_.rbegin(); it != scope_.rend(); ++it)
      if (slots_[*it].name == name) return *it;
    if (auto it = named_.find(name); it != named_.end()) return it->second;
    Slot s{Slot::Kind::Constant, name, std::nullopt};
    for (const auto& v : opts_.scope) {
      if (v.name == name) {
        s.kind = Slot::Kind::Free;
        s.sort = v.sort;
      }
    }
    if (s.kind == Slot::Kind::Constant && mode_ == ParseMode::Template && is_variable_name(name))
      s.kind = Slot::Kind::Free;
    slots_.push_back(std::move(s));
    int idx = static_cast<int>(slots_.size()) - 1;
    named_.emplace(name, idx);
    return idx;
  }

  void resolve_sorts(const Raw& r) {
    constrain(r);
    for (auto& s : slots_)
      if (!s.sort) s.sort = default_sort_for_name(s.name);
  }

  void constrain(const Raw& r) {
    if (r.kind == Formula::Kind::Pred && opts_.signature) {
      if (const auto* decl = opts_.signature->find(r.symbol)) {
        if (decl->size() != r.args.size())
          throw SortError(r.symbol, std::to_string(decl->size()) + " arguments", std::to_string(r.args.size()));
        for (std::size_t i = 0; i < decl->size(); ++i) {
          auto& s = slots_[r.args[i].slot];
          if (s.sort && *s.sort != (*decl)[i])
            throw SortError(r.symbol, std::string(to_string((*decl)[i])), std::string(to_string(*s.sort)));
          s.sort = (*decl)[i];
        }
      }
    }
    if (r.l) constrain(*r.l);
    if (r.r) constrain(*r.r);
  }

  Term make_term(const RawTerm& t) const {
    const auto& s = slots_[t.slot];
    return s.kind == Slot::Kind::Constant ? Term::constant(s.name, *s.sort) : Term::variable(s.name, *s.sort);
  }

  Formula build(const Raw& r) const {
    switch (r.kind) {
      case Formula::Kind::Pred:
      case Formula::Kind::Placeholder: {
        std::vector<Term> args;
        for (const auto& a : r.args) args.push_back(make_term(a));
        return r.kind == Formula::Kind::Pred ? Formula::pred(r.symbol, std::move(args))
                                             : Formula::placeholder(r.symbol, std::move(args));
      }
      case Formula::Kind::Not:
        return Formula::negation(build(*r.l));
      case Formula::Kind::Forall:
      case Formula::Kind::Exists: {
        const auto& s = slots_[r.var_slot];
        return Formula::quantifier(r.kind, Term::variable(s.name, *s.sort), build(*r.l));
      }
      default:
        return Formula::binary(r.kind, build(*r.l), build(*r.r));
    }
  }

  Lexer lex_;
  ParseMode mode_;
  const ParseOptions& opts_;
  Token cur_{Tok::End, "", 0};
  std::vector<Slot> slots_;
  std::vector<int> scope_;
  std::map<std::string, int> named_;
};

}  // namespace

Formula parse_formula(std::string_view text, ParseMode mode, const ParseOptions& options) {
  return Parser(text, mode, options).parse();
}

Term parse_term(std::string_view text, const ParseOptions& options) {
  return Parser(text, ParseMode::Closed, options).parse_single_term();
}

}  // namespace rvnli::logic
