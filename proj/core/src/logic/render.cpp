#include "rvnli/logic/render.hpp"

#include <cctype>
#include <ostream>
#include <sstream>
#include <vector>

#include "rvnli/error.hpp"
#include "rvnli/logic/parser.hpp"

namespace rvnli::logic {

std::string tptp_functor(const std::string& name) {
  if (name.empty()) return name;
  if (std::isupper(static_cast<unsigned char>(name[0]))) {
    std::string out = name;
    out[0] = static_cast<char>(std::tolower(static_cast<unsigned char>(out[0])));
    return out;
  }
  return "q_" + name;
}

std::string untptp_functor(const std::string& name) {
  if (name.rfind("q_", 0) == 0) return name.substr(2);
  std::string out = name;
  if (!out.empty()) out[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(out[0])));
  return out;
}

std::string tptp_variable(const std::string& name) {
  if (!name.empty() && std::islower(static_cast<unsigned char>(name[0]))) {
    std::string out = name;
    out[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(out[0])));
    return out;
  }
  return "V" + name;
}

std::string untptp_variable(const std::string& name) {
  if (name.size() > 1 && name[0] == 'V' && (std::isupper(static_cast<unsigned char>(name[1])) || name[1] == '_'))
    return name.substr(1);
  std::string out = name;
  if (!out.empty()) out[0] = static_cast<char>(std::tolower(static_cast<unsigned char>(out[0])));
  return out;
}

std::string tptp_sort_guard(Sort s) { return std::string(to_string(s)); }

namespace {

int precedence(Formula::Kind k) {
  switch (k) {
    case Formula::Kind::Iff:
      return 1;
    case Formula::Kind::Implies:
      return 2;
    case Formula::Kind::Or:
      return 3;
    case Formula::Kind::And:
      return 4;
    default:
      return 5;
  }
}

class Renderer {
 public:
  explicit Renderer(Dialect d) : d_(d) {}

  std::string run(const Formula& f) {
    emit(f, true);
    return out_.str();
  }

  std::string term(const Term& t) {
    emit_term(t);
    return out_.str();
  }

 private:
  const char* op(Formula::Kind k) const {
    switch (d_) {
      case Dialect::Canonical:
        switch (k) {
          case Formula::Kind::And: return " & ";
          case Formula::Kind::Or: return " | ";
          case Formula::Kind::Implies: return " -> ";
          default: return " <-> ";
        }
      case Dialect::IsabelleInner:
        switch (k) {
          case Formula::Kind::And: return " ∧ ";
          case Formula::Kind::Or: return " ∨ ";
          case Formula::Kind::Implies: return " ⟶ ";
          default: return " ⟷ ";
        }
      default:
        switch (k) {
          case Formula::Kind::And: return " & ";
          case Formula::Kind::Or: return " | ";
          case Formula::Kind::Implies: return " => ";
          default: return " <=> ";
        }
    }
  }

  bool bound(const std::string& name) const {
    for (const auto& b : bound_)
      if (b == name) return true;
    return false;
  }

  void emit_term(const Term& t) {
    switch (t.kind) {
      case Term::Kind::Variable:
        if (d_ == Dialect::TptpFof) {
          out_ << tptp_variable(t.name);
        } else {
          out_ << t.name;
          if (d_ == Dialect::Canonical && !bound(t.name) && t.sort != default_sort_for_name(t.name))
            out_ << ':' << to_string(t.sort);
        }
        return;
      case Term::Kind::Constant:
        if (d_ == Dialect::TptpFof) {
          out_ << tptp_functor(t.name);
        } else {
          out_ << t.name;
          if (d_ == Dialect::Canonical && t.sort != default_sort_for_name(t.name)) out_ << ':' << to_string(t.sort);
        }
        return;
      case Term::Kind::Skolem:
        if (d_ == Dialect::IsabelleInner) throw DialectUnsupportedConstruct("Skolem term in isabelle-inner output");
        out_ << (d_ == Dialect::TptpFof ? "sk_" + t.name.substr(kSkolemPrefix.size()) : t.name);
        if (!t.args.empty()) {
          out_ << '(';
          for (std::size_t i = 0; i < t.args.size(); ++i) {
            if (i) out_ << ',';
            emit_term(t.args[i]);
          }
          out_ << ')';
        }
        return;
    }
  }

  void emit_atom(const Formula& f) {
    if (f.is_placeholder()) {
      if (d_ != Dialect::Canonical)
        throw DialectUnsupportedConstruct("placeholder " + f.symbol() + " cannot be rendered in this dialect");
      if (!is_placeholder_name(f.symbol())) out_ << '?';
      out_ << f.symbol();
    } else {
      out_ << (d_ == Dialect::TptpFof ? tptp_functor(f.symbol()) : f.symbol());
    }
    if (f.args().empty()) return;
    if (d_ == Dialect::IsabelleInner) {
      for (const auto& a : f.args()) {
        out_ << ' ';
        emit_term(a);
      }
      return;
    }
    out_ << '(';
    for (std::size_t i = 0; i < f.args().size(); ++i) {
      if (i) out_ << (d_ == Dialect::TptpFof ? "," : ", ");
      emit_term(f.args()[i]);
    }
    out_ << ')';
  }

  bool needs_parens(const Formula& parent, const Formula& child, bool left) const {
    if (!child.is_binary()) return false;
    if (d_ == Dialect::TptpFof) return false;  // binaries carry their own parentheses
    auto pk = parent.kind();
    auto ck = child.kind();
    if (d_ == Dialect::IsabelleInner) return ck != pk || left;
    if (pk == Formula::Kind::Or && ck == Formula::Kind::And) return true;
    int pp = precedence(pk), cp = precedence(ck);
    return left ? cp <= pp : cp < pp;
  }

  void emit_child(const Formula& parent, const Formula& child, bool left, bool tail) {
    if (needs_parens(parent, child, left)) {
      out_ << '(';
      emit(child, true);
      out_ << ')';
    } else {
      emit(child, tail);
    }
  }

  void emit(const Formula& f, bool tail) {
    switch (f.kind()) {
      case Formula::Kind::Pred:
      case Formula::Kind::Placeholder:
        emit_atom(f);
        return;
      case Formula::Kind::Not:
        if (d_ == Dialect::Canonical)
          out_ << '~';
        else if (d_ == Dialect::IsabelleInner)
          out_ << "¬";
        else
          out_ << "~ ";
        if (f.operand().is_binary() && d_ != Dialect::TptpFof) {
          out_ << '(';
          emit(f.operand(), true);
          out_ << ')';
        } else if (d_ == Dialect::TptpFof && !f.operand().is_atom()) {
          out_ << '(';
          emit(f.operand(), true);
          out_ << ')';
        } else {
          emit(f.operand(), tail);
        }
        return;
      case Formula::Kind::Forall:
      case Formula::Kind::Exists:
        if (d_ == Dialect::TptpFof)
          emit_tptp_quantifier(f);
        else
          emit_quantifier(f, tail);
        return;
      default:
        if (d_ == Dialect::TptpFof) {
          out_ << '(';
          emit(f.lhs(), true);
          out_ << op(f.kind());
          emit(f.rhs(), true);
          out_ << ')';
          return;
        }
        emit_child(f, f.lhs(), true, false);
        out_ << op(f.kind());
        emit_child(f, f.rhs(), false, tail);
    }
  }

  void emit_quantifier(const Formula& f, bool tail) {
    if (!tail) out_ << '(';
    auto kind = f.kind();
    if (d_ == Dialect::Canonical)
      out_ << (kind == Formula::Kind::Forall ? "forall" : "exists");
    else
      out_ << (kind == Formula::Kind::Forall ? "∀" : "∃");
    const Formula* cur = &f;
    std::size_t pushed = 0;
    while (cur->kind() == kind) {
      const auto& v = cur->bound();
      out_ << ' ' << v.name;
      if (d_ == Dialect::Canonical && v.sort != default_sort_for_name(v.name)) out_ << ':' << to_string(v.sort);
      bound_.push_back(v.name);
      ++pushed;
      cur = &cur->body();
    }
    out_ << ". ";
    emit(*cur, true);
    bound_.resize(bound_.size() - pushed);
    if (!tail) out_ << ')';
  }

  void emit_tptp_quantifier(const Formula& f) {
    const auto& v = f.bound();
    bool all = f.kind() == Formula::Kind::Forall;
    out_ << (all ? "![" : "?[") << tptp_variable(v.name) << "]: (" << tptp_sort_guard(v.sort) << '('
         << tptp_variable(v.name) << ')' << (all ? " => " : " & ");
    bound_.push_back(v.name);
    emit(f.body(), true);
    bound_.pop_back();
    out_ << ')';
  }

  Dialect d_;
  std::ostringstream out_;
  std::vector<std::string> bound_;
};

}  // namespace

std::string render_formula(const Formula& f, Dialect dialect) { return Renderer(dialect).run(f); }
std::string render_term(const Term& t, Dialect dialect) { return Renderer(dialect).term(t); }

std::ostream& operator<<(std::ostream& os, const Formula& f) {
  return os << (f.valid() ? render_formula(f) : std::string("<empty>"));
}
std::ostream& operator<<(std::ostream& os, const Term& t) { return os << render_term(t); }

}  // namespace rvnli::logic
