#include "rvnli/metrics/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>

#include "rvnli/error.hpp"
#include "rvnli/logic/parser.hpp"
#include "rvnli/logic/signature.hpp"
#include "rvnli/text/tokenize.hpp"

namespace rvnli::metrics {

using logic::Formula;
using logic::Term;
using Kind = Formula::Kind;

std::string_view to_string(ErrorType e) noexcept {
  switch (e) {
    case ErrorType::None: return "none";
    case ErrorType::Syntax: return "syntax";
    case ErrorType::Implication: return "implication";
    case ErrorType::Quantifier: return "quantifier";
    case ErrorType::Variable: return "variable";
  }
  return "?";
}

namespace {

Formula strip_quantifiers(const Formula& f) {
  switch (f.kind()) {
    case Kind::Forall:
    case Kind::Exists: return strip_quantifiers(f.body());
    case Kind::Not: return Formula::negation(strip_quantifiers(f.operand()));
    case Kind::And:
    case Kind::Or:
    case Kind::Implies:
    case Kind::Iff: return Formula::binary(f.kind(), strip_quantifiers(f.lhs()), strip_quantifiers(f.rhs()));
    default: return f;
  }
}

const char* op_text(Kind k) {
  switch (k) {
    case Kind::And: return " & ";
    case Kind::Or: return " | ";
    case Kind::Implies: return " -> ";
    default: return " <-> ";
  }
}

std::set<std::string> symbol_set(const Formula& f) {
  auto v = logic::predicate_symbols(f);
  return {v.begin(), v.end()};
}

// Both shapes are equal; looks for a conditional whose sides are exchanged.
bool direction_flipped(const Formula& a, const Formula& b) {
  switch (a.kind()) {
    case Kind::Not: return direction_flipped(a.operand(), b.operand());
    case Kind::Implies: {
      auto al = symbol_set(a.lhs()), ar = symbol_set(a.rhs());
      auto bl = symbol_set(b.lhs()), br = symbol_set(b.rhs());
      if (al != ar && al == br && ar == bl) return true;
      [[fallthrough]];
    }
    case Kind::And:
    case Kind::Or:
    case Kind::Iff: return direction_flipped(a.lhs(), b.lhs()) || direction_flipped(a.rhs(), b.rhs());
    default: return false;
  }
}

}  // namespace

std::string connective_skeleton(const Formula& f) {
  switch (f.kind()) {
    case Kind::Forall:
    case Kind::Exists: return connective_skeleton(f.body());
    case Kind::Not: return "~" + connective_skeleton(f.operand());
    case Kind::And:
    case Kind::Or:
    case Kind::Implies:
    case Kind::Iff:
      return "(" + connective_skeleton(f.lhs()) + op_text(f.kind()) + connective_skeleton(f.rhs()) + ")";
    default: return "_";
  }
}

std::string quantifier_profile(const Formula& f) {
  std::string out;
  logic::visit(f, [&](const Formula& g) {
    if (g.kind() == Kind::Forall) out += "A";
    if (g.kind() == Kind::Exists) out += "E";
    if (g.is_quantifier()) out += g.bound().sort == logic::Sort::Event ? "e" : "x";
  });
  return out;
}

Formula alpha_normalise(const Formula& f) {
  int counter = 0;
  using Renaming = std::map<std::string, Term>;
  std::function<Formula(const Formula&, const Renaming&)> go = [&](const Formula& g, const Renaming& ren) {
    switch (g.kind()) {
      case Kind::Forall:
      case Kind::Exists: {
        Term v = Term::variable("v" + std::to_string(++counter), g.bound().sort);
        Renaming inner = ren;
        inner.insert_or_assign(g.bound().name, v);
        return Formula::quantifier(g.kind(), v, go(g.body(), inner));
      }
      case Kind::Not: return Formula::negation(go(g.operand(), ren));
      case Kind::And:
      case Kind::Or:
      case Kind::Implies:
      case Kind::Iff: return Formula::binary(g.kind(), go(g.lhs(), ren), go(g.rhs(), ren));
      default: {
        std::vector<Term> args;
        for (const auto& a : g.args()) {
          auto it = a.is_variable() ? ren.find(a.name) : ren.end();
          args.push_back(it == ren.end() ? a : it->second);
        }
        return g.is_placeholder() ? Formula::placeholder(g.symbol(), args) : Formula::pred(g.symbol(), args);
      }
    }
  };
  return go(f, Renaming{});
}

ErrorType classify_error(const Formula& produced, const Formula& reference) {
  Formula p = strip_quantifiers(produced), r = strip_quantifiers(reference);
  if (connective_skeleton(p) != connective_skeleton(r) || direction_flipped(p, r)) return ErrorType::Implication;
  if (quantifier_profile(produced) != quantifier_profile(reference)) return ErrorType::Quantifier;
  auto pa = logic::atoms(strip_quantifiers(alpha_normalise(produced)));
  auto ra = logic::atoms(strip_quantifiers(alpha_normalise(reference)));
  for (std::size_t i = 0; i < std::min(pa.size(), ra.size()); ++i)
    if (pa[i].args() != ra[i].args()) return ErrorType::Variable;
  return ErrorType::None;
}

ErrorType classify_error(const std::string& produced, const std::optional<std::string>& reference) {
  Formula p;
  try {
    p = logic::parse_formula(produced);
    logic::Signature sig = logic::role_signature();
    logic::check_sorts(p, sig, true);
  } catch (const Error&) {
    return ErrorType::Syntax;
  }
  if (!reference) return ErrorType::None;
  return classify_error(p, logic::parse_formula(*reference));
}

namespace {

class Informaliser {
 public:
  explicit Informaliser(const Formula& f) {
    const auto& roles = logic::default_role_vocabulary();
    for (const auto& a : logic::atoms(f)) {
      bool role = std::find(roles.begin(), roles.end(), a.symbol()) != roles.end();
      if (role && a.args().size() == 2 && a.args()[0].sort == logic::Sort::Event) {
        role_of_[a.args()[0].name].emplace_back(a.symbol(), a.args()[1]);
        continue;
      }
      if (a.args().size() != 1) continue;
      const Term& t = a.args()[0];
      if (t.sort == logic::Sort::Event)
        events_.insert(t.name);
      else if (t.is_variable() && !noun_.count(t.name))
        noun_[t.name] = a.symbol();
    }
  }

  std::string run(const Formula& f) { return text::normalize_space(go(f)); }

 private:
  static std::string words(const std::string& symbol) { return text::lower(text::split_camel(symbol)); }

  std::string np(const Term& t) const {
    if (!t.is_variable()) return words(t.name);
    auto it = noun_.find(t.name);
    return it == noun_.end() ? "something" : "the " + words(it->second);
  }

  std::string atom(const Formula& a) const {
    const auto& args = a.args();
    if (args.empty()) return words(a.symbol());
    if (args.size() == 2 && args[0].sort == logic::Sort::Event) {
      const auto& roles = logic::default_role_vocabulary();
      if (std::find(roles.begin(), roles.end(), a.symbol()) != roles.end()) {
        if (events_.count(args[0].name)) return "";
        return words(a.symbol()) + " of an event is " + np(args[1]);
      }
    }
    if (args.size() == 1 && args[0].sort == logic::Sort::Event) {
      std::string subject, object, extras;
      auto it = role_of_.find(args[0].name);
      if (it != role_of_.end())
        for (const auto& [role, t] : it->second) {
          if (role == "Agent" && subject.empty())
            subject = np(t);
          else if (role == "Patient" && object.empty())
            object = np(t);
          else
            extras += " " + words(role) + " " + np(t);
        }
      return subject + " " + words(a.symbol()) + " " + object + extras;
    }
    if (args.size() == 1) {
      const Term& t = args[0];
      auto it = noun_.find(t.name);
      if (t.is_variable() && it != noun_.end() && it->second == a.symbol()) return "a " + words(a.symbol());
      return np(t) + " is " + words(a.symbol());
    }
    std::string out = np(args[0]) + " " + words(a.symbol());
    for (std::size_t i = 1; i < args.size(); ++i) out += " " + np(args[i]);
    return out;
  }

  static std::string join(const std::string& a, const char* sep, const std::string& b) {
    if (text::trim(a).empty()) return b;
    if (text::trim(b).empty()) return a;
    return a + sep + b;
  }

  std::string go(const Formula& f) const {
    switch (f.kind()) {
      case Kind::Pred:
      case Kind::Placeholder: return atom(f);
      case Kind::Not: return "it is not the case that " + go(f.operand());
      case Kind::And: return join(go(f.lhs()), " and ", go(f.rhs()));
      case Kind::Or: return join(go(f.lhs()), " or ", go(f.rhs()));
      case Kind::Implies: return "if " + go(f.lhs()) + " then " + go(f.rhs());
      case Kind::Iff: return go(f.lhs()) + " if and only if " + go(f.rhs());
      case Kind::Forall:
      case Kind::Exists: {
        // Events stay implicit in the clause that describes them.
        if (f.bound().sort == logic::Sort::Event) return go(f.body());
        auto it = noun_.find(f.bound().name);
        std::string n = it == noun_.end() ? "thing" : words(it->second);
        if (f.kind() == Kind::Forall) return "for every " + n + ", " + go(f.body());
        return "there is some " + n + " such that " + go(f.body());
      }
    }
    return "";
  }

  std::map<std::string, std::string> noun_;
  std::map<std::string, std::vector<std::pair<std::string, Term>>> role_of_;
  std::set<std::string> events_;
};

}  // namespace

std::string informalise(const Formula& f) { return Informaliser(f).run(f); }

double faithfulness(const std::string& original, const Formula& phi, const text::Embedder* embedder) {
  static const text::HashedBagOfWords fallback;
  const text::Embedder& e = embedder ? *embedder : fallback;
  return text::cosine(e.embed(original), e.embed(informalise(phi)));
}

std::string_view to_string(DepthView v) noexcept {
  switch (v) {
    case DepthView::All: return "all";
    case DepthView::Refined: return "refined";
    case DepthView::Unrefined: return "unrefined";
  }
  return "?";
}

std::vector<DepthBucket> depth_alignment(const std::vector<DepthRecord>& records, DepthView view) {
  std::map<int, std::pair<std::size_t, double>> acc;
  for (const auto& r : records) {
    if (r.gold_depth < 1 || r.gold_depth > 5) continue;
    if (view == DepthView::Refined && !r.refined) continue;
    if (view == DepthView::Unrefined && r.refined) continue;
    auto& [n, sum] = acc[r.gold_depth];
    ++n;
    sum += r.used_depth;
  }
  std::vector<DepthBucket> out;
  for (const auto& [d, v] : acc)
    out.push_back({d, v.first, std::round(v.second / static_cast<double>(v.first) * 100.0) / 100.0});
  return out;
}

namespace {

struct Link {
  std::size_t position;
  Term var;
  std::string from, to;
};

std::optional<Link> as_link(const Formula& f, std::size_t pos) {
  if (f.kind() != Kind::Forall) return std::nullopt;
  const Formula& b = f.body();
  if (b.kind() != Kind::Implies || !b.lhs().is_atom() || !b.rhs().is_atom()) return std::nullopt;
  const Term& v = f.bound();
  std::vector<Term> arg{v};
  if (b.lhs().args() != arg || b.rhs().args() != arg) return std::nullopt;
  return Link{pos, v, b.lhs().symbol(), b.rhs().symbol()};
}

}  // namespace

std::vector<Formula> compress_chain(const std::vector<Formula>& premises, int max_links) {
  if (max_links < 1) throw ConfigError("compress_chain: max_links must be positive");
  std::vector<std::optional<Formula>> slots(premises.begin(), premises.end());
  std::vector<Link> links;
  for (std::size_t i = 0; i < premises.size(); ++i)
    if (auto l = as_link(premises[i], i)) links.push_back(*l);

  // Order the links along the chain starting from the one no other link feeds.
  std::vector<Link> chain;
  for (const auto& l : links) {
    bool fed = std::any_of(links.begin(), links.end(), [&](const Link& o) { return o.to == l.from; });
    if (!fed) {
      chain.push_back(l);
      break;
    }
  }
  while (!chain.empty()) {
    auto next = std::find_if(links.begin(), links.end(), [&](const Link& o) { return o.from == chain.back().to; });
    if (next == links.end() || chain.size() > links.size()) break;
    chain.push_back(*next);
  }
  while (static_cast<int>(chain.size()) > max_links) {
    // Fuse the first two links; the fused rule takes the first one's position.
    Link fused{chain[0].position, chain[0].var, chain[0].from, chain[1].to};
    slots[chain[1].position].reset();
    slots[fused.position] =
        Formula::forall(fused.var, Formula::implies(Formula::pred(fused.from, {fused.var}), Formula::pred(fused.to, {fused.var})));
    chain.erase(chain.begin());
    chain[0] = fused;
  }
  std::vector<Formula> out;
  for (auto& s : slots)
    if (s) out.push_back(*s);
  return out;
}

}  // namespace rvnli::metrics
