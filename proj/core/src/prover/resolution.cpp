#include "resolution.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <queue>
#include <unordered_map>
#include <unordered_set>

namespace rvnli::prover::detail {

using logic::Sort;
using logic::Term;

namespace {

struct VecHash {
  std::size_t operator()(const std::vector<int>& v) const {
    std::size_t h = 1469598103934665603ull;
    for (int x : v) h = (h ^ static_cast<std::size_t>(x)) * 1099511628211ull;
    return h;
  }
};

// Hash-consed terms. Variables are nodes with sym == -1.
class TermBank {
 public:
  struct Node {
    int sym;
    int var;
    std::vector<int> args;
  };

  int var(int v) {
    while (static_cast<int>(vars_.size()) <= v) {
      vars_.push_back(static_cast<int>(nodes_.size()));
      nodes_.push_back({-1, static_cast<int>(vars_.size()) - 1, {}});
    }
    return vars_[v];
  }

  int app(int sym, std::vector<int> args) {
    std::vector<int> key;
    key.reserve(args.size() + 1);
    key.push_back(sym);
    key.insert(key.end(), args.begin(), args.end());
    auto it = index_.find(key);
    if (it != index_.end()) return it->second;
    int id = static_cast<int>(nodes_.size());
    nodes_.push_back({sym, -1, std::move(args)});
    index_.emplace(std::move(key), id);
    return id;
  }

  const Node& at(int t) const { return nodes_[t]; }
  bool is_var(int t) const { return nodes_[t].sym < 0; }

 private:
  std::vector<Node> nodes_;
  std::vector<int> vars_;
  std::unordered_map<std::vector<int>, int, VecHash> index_;
};

struct Lit {
  bool pos;
  int pred;
  std::vector<int> args;
  friend bool operator==(const Lit&, const Lit&) = default;
};

struct EClause {
  std::vector<Lit> lits;
  int nvars = 0;
  int weight = 0;
  int sel = -1;
  int p1 = -1, p2 = -1;
  const char* rule = "axiom";
  int origin = -2;
  int level = 0;
};

class Engine {
 public:
  Engine(std::size_t max_clauses, std::chrono::steady_clock::time_point deadline)
      : max_clauses_(max_clauses), deadline_(deadline) {}

  SaturationResult run(const std::vector<InputClause>& input) {
    SaturationResult res;
    for (const auto& ic : input) {
      EClause c = convert(ic.clause);
      c.origin = ic.origin;
      c.rule = ic.origin >= 0 ? "axiom" : "negated_goal";
      if (int id = admit(std::move(c)); id >= 0 && clauses_[id].lits.empty()) return finish(res, id);
    }
    std::size_t picks = 0;
    while (true) {
      if (std::chrono::steady_clock::now() > deadline_) {
        res.kind = SaturationResult::Kind::Timeout;
        break;
      }
      if (clauses_.size() >= max_clauses_) {
        res.kind = SaturationResult::Kind::ClauseLimit;
        break;
      }
      int given = pick(++picks % 5 == 0);
      if (given < 0) {
        res.kind = SaturationResult::Kind::Saturated;
        break;
      }
      if (int empty = activate(given); empty >= 0) return finish(res, empty);
    }
    res.generated = clauses_.size();
    return res;
  }

 private:
  // --- conversion -----------------------------------------------------------
  int fun_symbol(const Term& t) {
    std::string key = std::string(t.is_skolem() ? "s:" : "c:") + t.name;
    auto [it, inserted] = fun_ids_.emplace(key, static_cast<int>(fun_names_.size()));
    if (inserted) fun_names_.push_back(t.is_skolem() ? "sk" + t.name.substr(logic::kSkolemPrefix.size()) : t.name);
    return it->second;
  }

  int pred_symbol(const std::string& name) {
    auto [it, inserted] = pred_ids_.emplace(name, static_cast<int>(pred_names_.size()));
    if (inserted) {
      pred_names_.push_back(name);
      pos_index_.emplace_back();
      sel_index_.emplace_back();
    }
    return it->second;
  }

  int convert_term(const Term& t, std::map<std::pair<std::string, Sort>, int>& vars) {
    if (t.is_variable()) {
      auto [it, inserted] = vars.emplace(std::make_pair(t.name, t.sort), static_cast<int>(vars.size()));
      return bank_.var(it->second);
    }
    std::vector<int> args;
    for (const auto& a : t.args) args.push_back(convert_term(a, vars));
    return bank_.app(fun_symbol(t), std::move(args));
  }

  EClause convert(const Clause& c) {
    EClause out;
    std::map<std::pair<std::string, Sort>, int> vars;
    for (const auto& l : c.literals) {
      Lit lit{l.positive, pred_symbol(l.predicate), {}};
      for (const auto& a : l.args) lit.args.push_back(convert_term(a, vars));
      out.lits.push_back(std::move(lit));
    }
    return out;
  }

  // --- term utilities -------------------------------------------------------
  int shift(int t, int off) {
    const auto& n = bank_.at(t);
    if (n.sym < 0) return bank_.var(n.var + off);
    if (n.args.empty()) return t;
    std::vector<int> args;
    for (int a : bank_.at(t).args) args.push_back(shift(a, off));
    return bank_.app(bank_.at(t).sym, std::move(args));
  }

  int deref(int t, const std::vector<int>& bind) const {
    while (bank_.is_var(t) && bind[bank_.at(t).var] >= 0) t = bind[bank_.at(t).var];
    return t;
  }

  bool occurs(int v, int t, const std::vector<int>& bind) const {
    t = deref(t, bind);
    if (bank_.is_var(t)) return bank_.at(t).var == v;
    for (int a : bank_.at(t).args)
      if (occurs(v, a, bind)) return true;
    return false;
  }

  bool unify(int a, int b, std::vector<int>& bind) const {
    a = deref(a, bind);
    b = deref(b, bind);
    if (a == b) return true;
    if (bank_.is_var(a)) {
      if (occurs(bank_.at(a).var, b, bind)) return false;
      bind[bank_.at(a).var] = b;
      return true;
    }
    if (bank_.is_var(b)) return unify(b, a, bind);
    const auto& na = bank_.at(a);
    const auto& nb = bank_.at(b);
    if (na.sym != nb.sym || na.args.size() != nb.args.size()) return false;
    for (std::size_t i = 0; i < na.args.size(); ++i)
      if (!unify(bank_.at(a).args[i], bank_.at(b).args[i], bind)) return false;
    return true;
  }

  int apply(int t, const std::vector<int>& bind) {
    t = deref(t, bind);
    if (bank_.is_var(t) || bank_.at(t).args.empty()) return t;
    std::vector<int> args;
    for (int a : bank_.at(t).args) args.push_back(apply(a, bind));
    return bank_.app(bank_.at(t).sym, std::move(args));
  }

  int rename(int t, std::vector<int>& map, int& next) {
    if (bank_.is_var(t)) {
      int v = bank_.at(t).var;
      if (v >= static_cast<int>(map.size())) map.resize(v + 1, -1);
      if (map[v] < 0) map[v] = next++;
      return bank_.var(map[v]);
    }
    if (bank_.at(t).args.empty()) return t;
    std::vector<int> args;
    for (int a : bank_.at(t).args) args.push_back(rename(a, map, next));
    return bank_.app(bank_.at(t).sym, std::move(args));
  }

  int size(int t) const {
    int s = 1;
    for (int a : bank_.at(t).args) s += size(a);
    return s;
  }

  // One-way matching: variables of the pattern bind, target terms are rigid.
  bool match(int p, int t, std::vector<int>& bind) const {
    if (bank_.is_var(p)) {
      int& b = bind[bank_.at(p).var];
      if (b < 0) {
        b = t;
        return true;
      }
      return b == t;
    }
    if (bank_.is_var(t)) return false;
    const auto& np = bank_.at(p);
    const auto& nt = bank_.at(t);
    if (np.sym != nt.sym) return false;
    for (std::size_t i = 0; i < np.args.size(); ++i)
      if (!match(np.args[i], nt.args[i], bind)) return false;
    return true;
  }

  bool subsumes_from(const EClause& c, std::size_t i, const EClause& d, std::vector<int>& bind) const {
    if (i == c.lits.size()) return true;
    const Lit& l = c.lits[i];
    for (const Lit& m : d.lits) {
      if (m.pos != l.pos || m.pred != l.pred) continue;
      std::vector<int> saved = bind;
      bool ok = true;
      for (std::size_t k = 0; k < l.args.size() && ok; ++k) ok = match(l.args[k], m.args[k], bind);
      if (ok && subsumes_from(c, i + 1, d, bind)) return true;
      bind = std::move(saved);
    }
    return false;
  }

  bool subsumes(const EClause& c, const EClause& d) const {
    if (c.lits.size() > d.lits.size()) return false;
    std::vector<int> bind(c.nvars, -1);
    return subsumes_from(c, 0, d, bind);
  }

  // --- clause admission -----------------------------------------------------
  // Normalises, rejects tautologies, duplicates and subsumed clauses. Returns the new id or -1.
  int admit(EClause c) {
    std::vector<Lit> lits;
    for (auto& l : c.lits)
      if (std::find(lits.begin(), lits.end(), l) == lits.end()) lits.push_back(std::move(l));
    for (std::size_t i = 0; i < lits.size(); ++i)
      for (std::size_t j = i + 1; j < lits.size(); ++j)
        if (lits[i].pred == lits[j].pred && lits[i].pos != lits[j].pos && lits[i].args == lits[j].args) return -1;
    std::vector<int> map;
    int next = 0;
    c.weight = 0;
    for (auto& l : lits) {
      for (auto& a : l.args) {
        a = rename(a, map, next);
        c.weight += size(a);
      }
      c.weight += 1;
    }
    c.nvars = next;
    c.lits = std::move(lits);

    std::vector<int> key;
    for (const auto& l : c.lits) {
      key.push_back(l.pos ? l.pred * 2 : l.pred * 2 + 1);
      key.insert(key.end(), l.args.begin(), l.args.end());
      key.push_back(-1);
    }
    if (!seen_.insert(key).second) return -1;
    for (std::size_t i = 0; i < c.lits.size(); ++i) {
      int lk = c.lits[i].pos ? c.lits[i].pred * 2 : c.lits[i].pred * 2 + 1;
      bool repeat = false;
      for (std::size_t j = 0; j < i; ++j) repeat |= c.lits[j].pos == c.lits[i].pos && c.lits[j].pred == c.lits[i].pred;
      if (repeat) continue;
      if (auto it = by_first_.find(lk); it != by_first_.end())
        for (int k : it->second)
          if (subsumes(clauses_[k], c)) return -1;
    }

    c.sel = -1;
    int best = -1;
    for (std::size_t i = 0; i < c.lits.size(); ++i) {
      if (c.lits[i].pos) continue;
      int w = 0;
      for (int a : c.lits[i].args) w += size(a);
      if (w > best) {
        best = w;
        c.sel = static_cast<int>(i);
      }
    }
    int id = static_cast<int>(clauses_.size());
    clauses_.push_back(std::move(c));
    if (!clauses_[id].lits.empty()) {
      const Lit& f = clauses_[id].lits.front();
      by_first_[f.pos ? f.pred * 2 : f.pred * 2 + 1].push_back(id);
    }
    by_weight_.emplace(clauses_[id].weight, id);
    by_age_.push_back(id);
    return id;
  }

  int pick(bool oldest) {
    auto& done = activated_;
    done.resize(clauses_.size(), 0);
    if (oldest) {
      while (!by_age_.empty() && done[by_age_.front()]) by_age_.pop_front();
      if (!by_age_.empty()) {
        int id = by_age_.front();
        by_age_.pop_front();
        done[id] = 1;
        return id;
      }
    }
    while (!by_weight_.empty()) {
      int id = by_weight_.top().second;
      by_weight_.pop();
      if (!done[id]) {
        done[id] = 1;
        return id;
      }
    }
    return -1;
  }

  int make_resolvent(int ni, int si, int ei, std::size_t lj) {
    // ni: clause with selected negative literal si; ei: positive clause resolved on literal lj.
    const EClause& n = clauses_[ni];
    const EClause& e = clauses_[ei];
    const int off = n.nvars;
    std::vector<int> bind(n.nvars + e.nvars, -1);
    const Lit& neg = n.lits[si];
    const Lit& pos = e.lits[lj];
    std::vector<int> shifted;
    for (int a : pos.args) shifted.push_back(shift(a, off));
    for (std::size_t k = 0; k < neg.args.size(); ++k)
      if (!unify(neg.args[k], shifted[k], bind)) return -1;
    EClause r;
    for (std::size_t k = 0; k < n.lits.size(); ++k) {
      if (static_cast<int>(k) == si) continue;
      Lit l = clauses_[ni].lits[k];
      for (auto& a : l.args) a = apply(a, bind);
      r.lits.push_back(std::move(l));
    }
    for (std::size_t k = 0; k < clauses_[ei].lits.size(); ++k) {
      if (k == lj) continue;
      Lit l = clauses_[ei].lits[k];
      for (auto& a : l.args) a = apply(shift(a, off), bind);
      r.lits.push_back(std::move(l));
    }
    r.p1 = ni;
    r.p2 = ei;
    r.rule = "resolution";
    bool complete = std::none_of(r.lits.begin(), r.lits.end(), [](const Lit& l) { return !l.pos; });
    r.level = std::max(clauses_[ni].level, clauses_[ei].level) + (complete ? 1 : 0);
    return admit(std::move(r));
  }

  int factor(int ci, std::size_t a, std::size_t b) {
    const EClause& c = clauses_[ci];
    std::vector<int> bind(c.nvars, -1);
    for (std::size_t k = 0; k < c.lits[a].args.size(); ++k)
      if (!unify(c.lits[a].args[k], c.lits[b].args[k], bind)) return -1;
    EClause r;
    for (std::size_t k = 0; k < clauses_[ci].lits.size(); ++k) {
      if (k == b) continue;
      Lit l = clauses_[ci].lits[k];
      for (auto& t : l.args) t = apply(t, bind);
      r.lits.push_back(std::move(l));
    }
    r.p1 = ci;
    r.rule = "factoring";
    r.level = clauses_[ci].level;
    return admit(std::move(r));
  }

  // Adds `g` to the active set and performs all inferences with it. Returns an empty clause id.
  int activate(int g) {
    std::vector<int> fresh;
    auto note = [&](int id) {
      if (id >= 0) fresh.push_back(id);
      return id >= 0 && clauses_[id].lits.empty();
    };
    if (clauses_[g].sel >= 0) {
      int pred = clauses_[g].lits[clauses_[g].sel].pred;
      sel_index_[pred].push_back(g);
      auto partners = pos_index_[pred];
      for (auto [e, j] : partners)
        if (note(make_resolvent(g, clauses_[g].sel, e, j))) return fresh.back();
    } else {
      for (std::size_t i = 0; i < clauses_[g].lits.size(); ++i) pos_index_[clauses_[g].lits[i].pred].emplace_back(g, i);
      for (std::size_t i = 0; i < clauses_[g].lits.size(); ++i) {
        auto partners = sel_index_[clauses_[g].lits[i].pred];
        for (int n : partners)
          if (note(make_resolvent(n, clauses_[n].sel, g, i))) return fresh.back();
      }
      for (std::size_t a = 0; a < clauses_[g].lits.size(); ++a)
        for (std::size_t b = a + 1; b < clauses_[g].lits.size(); ++b)
          if (clauses_[g].lits[a].pred == clauses_[g].lits[b].pred && note(factor(g, a, b))) return fresh.back();
    }
    return -1;
  }

  // --- results --------------------------------------------------------------
  std::string render_term(int t) const {
    const auto& n = bank_.at(t);
    if (n.sym < 0) return "X" + std::to_string(n.var);
    std::string s = fun_names_[n.sym];
    if (!n.args.empty()) {
      s += "(";
      for (std::size_t i = 0; i < n.args.size(); ++i) s += (i ? ", " : "") + render_term(n.args[i]);
      s += ")";
    }
    return s;
  }

  std::string render(const EClause& c) const {
    if (c.lits.empty()) return "$false";
    std::string s;
    for (std::size_t i = 0; i < c.lits.size(); ++i) {
      const auto& l = c.lits[i];
      s += (i ? " | " : "") + std::string(l.pos ? "" : "~") + pred_names_[l.pred];
      if (!l.args.empty()) {
        s += "(";
        for (std::size_t k = 0; k < l.args.size(); ++k) s += (k ? ", " : "") + render_term(l.args[k]);
        s += ")";
      }
    }
    return s;
  }

  SaturationResult& finish(SaturationResult& res, int empty) {
    res.kind = SaturationResult::Kind::Refutation;
    res.level = clauses_[empty].level;
    std::set<int> ancestry;
    std::vector<int> stack{empty};
    while (!stack.empty()) {
      int c = stack.back();
      stack.pop_back();
      if (!ancestry.insert(c).second) continue;
      if (clauses_[c].p1 >= 0) stack.push_back(clauses_[c].p1);
      if (clauses_[c].p2 >= 0) stack.push_back(clauses_[c].p2);
    }
    for (int c : ancestry) {
      const auto& cl = clauses_[c];
      DerivationStep step;
      step.id = c;
      step.clause = render(cl);
      if (cl.p1 >= 0) step.premises.push_back(cl.p1);
      if (cl.p2 >= 0) step.premises.push_back(cl.p2);
      step.rule = cl.rule;
      step.level = cl.level;
      if (cl.origin >= 0) res.used_origins.insert(cl.origin);
      if (cl.origin >= 0) step.axiom = std::to_string(cl.origin);
      res.derivation.push_back(std::move(step));
    }
    res.generated = clauses_.size();
    return res;
  }

  std::size_t max_clauses_;
  std::chrono::steady_clock::time_point deadline_;
  TermBank bank_;
  std::unordered_map<std::string, int> fun_ids_, pred_ids_;
  std::vector<std::string> fun_names_, pred_names_;
  std::vector<EClause> clauses_;
  // Kept clauses keyed by the sign and predicate of their first literal (subsumption candidates).
  std::unordered_map<int, std::vector<int>> by_first_;
  std::unordered_set<std::vector<int>, VecHash> seen_;
  std::priority_queue<std::pair<int, int>, std::vector<std::pair<int, int>>, std::greater<>> by_weight_;
  std::deque<int> by_age_;
  std::vector<char> activated_;
  std::vector<std::vector<std::pair<int, std::size_t>>> pos_index_;
  std::vector<std::vector<int>> sel_index_;
};

}  // namespace

SaturationResult saturate(const std::vector<InputClause>& input, std::size_t max_clauses,
                          std::chrono::steady_clock::time_point deadline) {
  return Engine(max_clauses, deadline).run(input);
}

}  // namespace rvnli::prover::detail
