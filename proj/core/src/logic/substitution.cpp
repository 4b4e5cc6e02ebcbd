#include "rvnli/logic/substitution.hpp"

#include <algorithm>

#include "rvnli/error.hpp"
#include "rvnli/logic/render.hpp"

namespace rvnli::logic {

namespace {

bool same_key(const BindingKey& a, const BindingKey& b) {
  if (a.index() != b.index()) return false;
  if (const auto* s = std::get_if<std::string>(&a)) return *s == std::get<std::string>(b);
  return std::get<Formula>(a) == std::get<Formula>(b);
}

class LayerApplier {
 public:
  explicit LayerApplier(const std::vector<Binding>& layer) : layer_(layer), used_(layer.size(), false) {}

  Formula run(const Formula& f) { return apply(f); }

  Term apply_term(const Term& t) {
    if (t.is_variable()) {
      if (std::find(bound_.begin(), bound_.end(), t.name) != bound_.end()) return t;
      for (std::size_t i = 0; i < layer_.size(); ++i) {
        const auto* name = std::get_if<std::string>(&layer_[i].key);
        const auto* repl = std::get_if<Term>(&layer_[i].replacement);
        if (name && repl && *name == t.name) {
          if (repl->sort != t.sort)
            throw SortError(t.name, std::string(to_string(t.sort)), std::string(to_string(repl->sort)));
          used_[i] = true;
          return *repl;
        }
      }
      return t;
    }
    if (t.args.empty()) return t;
    Term out = t;
    for (auto& a : out.args) a = apply_term(a);
    return out;
  }

  std::vector<std::string> unused() const {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < layer_.size(); ++i)
      if (!used_[i]) out.push_back(describe(layer_[i].key));
    return out;
  }

 private:
  std::vector<Term> apply_args(const std::vector<Term>& args) {
    std::vector<Term> out;
    out.reserve(args.size());
    for (const auto& a : args) out.push_back(apply_term(a));
    return out;
  }

  Formula apply(const Formula& f) {
    switch (f.kind()) {
      case Formula::Kind::Pred: {
        for (std::size_t i = 0; i < layer_.size(); ++i) {
          const auto* pattern = std::get_if<Formula>(&layer_[i].key);
          if (pattern && *pattern == f) {
            const auto* repl = std::get_if<Formula>(&layer_[i].replacement);
            if (!repl) throw IllFormedReplacement("rewrite rule for " + describe(layer_[i].key) + " needs a formula");
            used_[i] = true;
            return *repl;
          }
        }
        return Formula::pred(f.symbol(), apply_args(f.args()));
      }
      case Formula::Kind::Placeholder: {
        for (std::size_t i = 0; i < layer_.size(); ++i) {
          const auto* name = std::get_if<std::string>(&layer_[i].key);
          if (!name || *name != f.symbol()) continue;
          const auto& r = layer_[i].replacement;
          if (const auto* sym = std::get_if<PredicateSymbol>(&r)) {
            used_[i] = true;
            return Formula::pred(sym->name, apply_args(f.args()));
          }
          if (const auto* fr = std::get_if<Formula>(&r)) {
            if (!f.args().empty())
              throw IllFormedReplacement("placeholder " + f.symbol() + " is applied to arguments; bind a symbol");
            used_[i] = true;
            return *fr;
          }
          throw IllFormedReplacement("term bound to " + f.symbol() + " where a predicate position is required");
        }
        return Formula::placeholder(f.symbol(), apply_args(f.args()));
      }
      case Formula::Kind::Not:
        return Formula::negation(apply(f.operand()));
      case Formula::Kind::Forall:
      case Formula::Kind::Exists: {
        bound_.push_back(f.bound().name);
        Formula body = apply(f.body());
        bound_.pop_back();
        return Formula::quantifier(f.kind(), f.bound(), std::move(body));
      }
      default:
        return Formula::binary(f.kind(), apply(f.lhs()), apply(f.rhs()));
    }
  }

  const std::vector<Binding>& layer_;
  std::vector<bool> used_;
  std::vector<std::string> bound_;
};

void validate_binding(const Binding& b) {
  if (const auto* pattern = std::get_if<Formula>(&b.key)) {
    if (!pattern->valid() || !pattern->is_atom()) throw IllFormedReplacement("rewrite pattern must be an atom");
    if (!std::holds_alternative<Formula>(b.replacement))
      throw IllFormedReplacement("rewrite rule for " + describe(b.key) + " needs a formula replacement");
  }
  if (const auto* f = std::get_if<Formula>(&b.replacement))
    if (!f->valid()) throw IllFormedReplacement("empty formula bound to " + describe(b.key));
}

// Variables occurring in a term.
void term_variables(const Term& t, std::vector<std::string>& out) {
  if (t.is_variable()) out.push_back(t.name);
  for (const auto& a : t.args) term_variables(a, out);
}

// True when applying `first` then `second` can be expressed as one simultaneous layer.
bool mergeable(const std::vector<Binding>& first, const std::vector<Binding>& second) {
  bool second_has_rules = false;
  std::vector<std::string> second_term_keys;
  for (const auto& b : second) {
    if (b.is_rewrite()) second_has_rules = true;
    if (std::holds_alternative<Term>(b.replacement)) second_term_keys.push_back(std::get<std::string>(b.key));
  }
  for (const auto& a : first) {
    for (const auto& b : second) {
      if (same_key(a.key, b.key) && a.replacement.index() != b.replacement.index()) return false;
    }
    if (const auto* sym = std::get_if<PredicateSymbol>(&a.replacement)) {
      for (const auto& b : second)
        if (const auto* p = std::get_if<Formula>(&b.key); p && p->symbol() == sym->name) return false;
    }
    if (const auto* t = std::get_if<Term>(&a.replacement)) {
      if (second_has_rules) return false;
      std::vector<std::string> vars;
      term_variables(*t, vars);
      for (const auto& v : vars)
        if (std::find(second_term_keys.begin(), second_term_keys.end(), v) != second_term_keys.end()) return false;
    }
    if (const auto* f = std::get_if<Formula>(&a.replacement)) {
      if (!second_term_keys.empty()) {
        for (const auto& v : free_variables(*f))
          if (std::find(second_term_keys.begin(), second_term_keys.end(), v.name) != second_term_keys.end())
            return false;
      }
    }
  }
  return true;
}

std::vector<Binding> merge(const std::vector<Binding>& first, const std::vector<Binding>& second) {
  std::vector<Binding> out;
  for (const auto& a : first) {
    Binding m = a;
    if (const auto* f = std::get_if<Formula>(&a.replacement)) {
      m.replacement = LayerApplier(second).run(*f);
    } else if (const auto* t = std::get_if<Term>(&a.replacement)) {
      m.replacement = LayerApplier(second).apply_term(*t);
    }
    out.push_back(std::move(m));
  }
  for (const auto& b : second) {
    bool shadowed = std::any_of(first.begin(), first.end(), [&](const Binding& a) { return same_key(a.key, b.key); });
    if (!shadowed) out.push_back(b);
  }
  return out;
}

}  // namespace

Substitution::Substitution(std::vector<Binding> bindings) {
  for (auto& b : bindings) bind(std::move(b.key), std::move(b.replacement));
}

void Substitution::bind(BindingKey key, Replacement replacement) {
  Binding b{std::move(key), std::move(replacement)};
  validate_binding(b);
  if (layers_.size() > 1) throw IllFormedReplacement("cannot extend a layered substitution");
  if (layers_.empty()) layers_.emplace_back();
  for (const auto& existing : layers_[0])
    if (same_key(existing.key, b.key)) throw IllFormedReplacement("duplicate binding for " + describe(b.key));
  layers_[0].push_back(std::move(b));
}

void Substitution::bind_symbol(const std::string& placeholder, const std::string& symbol) {
  bind(placeholder, PredicateSymbol{symbol});
}
void Substitution::bind_formula(const std::string& placeholder, Formula f) { bind(placeholder, std::move(f)); }
void Substitution::bind_term(const std::string& variable, Term t) { bind(variable, std::move(t)); }
void Substitution::bind_rewrite(Formula pattern, Formula replacement) { bind(std::move(pattern), std::move(replacement)); }

bool Substitution::empty() const noexcept { return size() == 0; }

const std::vector<Binding>& Substitution::bindings() const {
  static const std::vector<Binding> none;
  return layers_.empty() ? none : layers_.front();
}

std::size_t Substitution::size() const noexcept {
  std::size_t n = 0;
  for (const auto& l : layers_) n += l.size();
  return n;
}

ApplyReport apply_with_report(const Formula& f, const Substitution& theta, const Signature* signature) {
  ApplyReport report{f, {}};
  for (const auto& layer : theta.layers()) {
    LayerApplier applier(layer);
    report.result = applier.run(report.result);
    for (auto& u : applier.unused()) report.unused.push_back(std::move(u));
  }
  Signature sig = signature ? *signature : Signature{};
  check_sorts(report.result, sig, true);
  return report;
}

Formula apply_substitution(const Formula& f, const Substitution& theta, const Signature* signature) {
  return apply_with_report(f, theta, signature).result;
}

Substitution compose(const Substitution& a, const Substitution& b) {
  if (a.empty()) return b;
  if (b.empty()) return a;
  Substitution out;
  out.layers_ = a.layers_;
  auto next = b.layers_.begin();
  if (mergeable(out.layers_.back(), *next)) {
    out.layers_.back() = merge(out.layers_.back(), *next);
    ++next;
  }
  for (; next != b.layers_.end(); ++next) {
    if (mergeable(out.layers_.back(), *next))
      out.layers_.back() = merge(out.layers_.back(), *next);
    else
      out.layers_.push_back(*next);
  }
  return out;
}

std::string describe(const BindingKey& key) {
  if (const auto* s = std::get_if<std::string>(&key)) return *s;
  return render_formula(std::get<Formula>(key));
}

std::string describe(const Replacement& r) {
  if (const auto* t = std::get_if<Term>(&r)) return render_term(*t);
  if (const auto* s = std::get_if<PredicateSymbol>(&r)) return s->name;
  return render_formula(std::get<Formula>(r));
}

}  // namespace rvnli::logic
