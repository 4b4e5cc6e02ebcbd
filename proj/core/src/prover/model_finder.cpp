#include "model_finder.hpp"

#include <map>

#include "sat.hpp"

namespace rvnli::prover::detail {

using logic::Sort;
using logic::Term;

namespace {

struct Relation {
  std::string name;
  int arity = 0;
  int base = 0;
  bool graph = false;  // graph of a function symbol: last position is the result
  Term::Kind kind = Term::Kind::Constant;
};

struct FlatLit {
  bool pos;
  int rel;
  std::vector<int> slots;
};

struct FlatClause {
  std::vector<FlatLit> lits;
  int nslots = 0;
};

class Grounder {
 public:
  explicit Grounder(int n) : n_(n) {}

  int relation(const std::string& name, int arity, bool graph, Term::Kind kind) {
    std::string key = (graph ? "f:" : "p:") + name;
    auto [it, inserted] = ids_.emplace(key, static_cast<int>(rels_.size()));
    if (inserted) rels_.push_back({name, arity, 0, graph, kind});
    return it->second;
  }

  FlatClause flatten(const Clause& c) {
    FlatClause out;
    std::map<std::pair<std::string, Sort>, int> vars;
    std::map<Term, int> subterms;
    for (const auto& l : c.literals) {
      FlatLit fl{l.positive, relation(l.predicate, static_cast<int>(l.args.size()), false, Term::Kind::Constant), {}};
      for (const auto& a : l.args) fl.slots.push_back(slot_of(a, out, vars, subterms));
      out.lits.push_back(std::move(fl));
    }
    return out;
  }

  int slot_of(const Term& t, FlatClause& fc, std::map<std::pair<std::string, Sort>, int>& vars,
              std::map<Term, int>& subterms) {
    if (t.is_variable()) {
      auto [it, inserted] = vars.emplace(std::make_pair(t.name, t.sort), fc.nslots);
      if (inserted) ++fc.nslots;
      return it->second;
    }
    if (auto it = subterms.find(t); it != subterms.end()) return it->second;
    FlatLit graph{false, relation(t.name, static_cast<int>(t.args.size()) + 1, true, t.kind), {}};
    for (const auto& a : t.args) graph.slots.push_back(slot_of(a, fc, vars, subterms));
    int result = fc.nslots++;
    graph.slots.push_back(result);
    subterms.emplace(t, result);
    fc.lits.push_back(std::move(graph));
    return result;
  }

  std::size_t layout() {
    std::size_t total = 0;
    for (auto& r : rels_) {
      r.base = static_cast<int>(total);
      total += power(r.arity);
    }
    return total;
  }

  std::size_t power(int k) const {
    std::size_t p = 1;
    for (int i = 0; i < k; ++i) p *= static_cast<std::size_t>(n_);
    return p;
  }

  int atom(int rel, const int* values, const std::vector<int>& slots) const {
    std::size_t idx = 0;
    for (auto it = slots.rbegin(); it != slots.rend(); ++it) idx = idx * n_ + values[*it];
    return rels_[rel].base + static_cast<int>(idx);
  }

  int atom_tuple(int rel, const std::vector<int>& tuple) const {
    std::size_t idx = 0;
    for (auto it = tuple.rbegin(); it != tuple.rend(); ++it) idx = idx * n_ + *it;
    return rels_[rel].base + static_cast<int>(idx);
  }

  const std::vector<Relation>& relations() const { return rels_; }
  int n() const { return n_; }

 private:
  int n_;
  std::map<std::string, int> ids_;
  std::vector<Relation> rels_;
};

std::vector<int> tuple_of(std::size_t idx, int arity, int n) {
  std::vector<int> t(arity);
  for (int i = 0; i < arity; ++i) {
    t[i] = static_cast<int>(idx % n);
    idx /= n;
  }
  return t;
}

}  // namespace

ModelSearch search_model(const std::vector<Clause>& clauses, int n, std::chrono::steady_clock::time_point deadline,
                         std::size_t max_ground_literals) {
  ModelSearch out;
  Grounder g(n);
  std::vector<FlatClause> flat;
  for (const auto& c : clauses) flat.push_back(g.flatten(c));
  const std::size_t atoms = g.layout();

  std::size_t estimate = 0;
  for (const auto& fc : flat) estimate += g.power(fc.nslots) * fc.lits.size();
  for (const auto& r : g.relations())
    if (r.graph) estimate += g.power(r.arity - 1) * (n + static_cast<std::size_t>(n) * n);
  if (estimate > max_ground_literals) {
    out.note = "domain size " + std::to_string(n) + " skipped: grounding too large";
    return out;
  }

  SatSolver sat;
  for (std::size_t i = 0; i < atoms; ++i) sat.new_var();
  std::vector<int> lits;
  for (const auto& fc : flat) {
    std::vector<int> values(fc.nslots, 0);
    const std::size_t count = g.power(fc.nslots);
    for (std::size_t k = 0; k < count; ++k) {
      lits.clear();
      for (const auto& l : fc.lits) lits.push_back(SatSolver::lit(g.atom(l.rel, values.data(), l.slots), l.pos));
      if (!sat.add_clause(lits)) return out;
      for (int s = 0; s < fc.nslots; ++s) {
        if (++values[s] < n) break;
        values[s] = 0;
      }
    }
  }
  for (std::size_t ri = 0; ri < g.relations().size(); ++ri) {
    const auto& r = g.relations()[ri];
    if (!r.graph) continue;
    const std::size_t inputs = g.power(r.arity - 1);
    for (std::size_t k = 0; k < inputs; ++k) {
      std::vector<int> tuple = tuple_of(k, r.arity - 1, n);
      tuple.push_back(0);
      lits.clear();
      std::vector<int> vars;
      for (int v = 0; v < n; ++v) {
        tuple.back() = v;
        vars.push_back(g.atom_tuple(static_cast<int>(ri), tuple));
      }
      for (int v : vars) lits.push_back(SatSolver::lit(v, true));
      if (!sat.add_clause(lits)) return out;
      for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b)
          if (!sat.add_clause({SatSolver::lit(vars[a], false), SatSolver::lit(vars[b], false)})) return out;
    }
  }

  auto result = sat.solve(deadline);
  if (result == SatSolver::Result::Unknown) {
    out.note = "domain size " + std::to_string(n) + ": time limit reached";
    return out;
  }
  if (result == SatSolver::Result::Unsat) return out;

  Model m;
  m.entity_size = m.event_size = n;
  for (std::size_t ri = 0; ri < g.relations().size(); ++ri) {
    const auto& r = g.relations()[ri];
    const std::size_t count = g.power(r.arity);
    for (std::size_t k = 0; k < count; ++k) {
      if (!sat.value(r.base + static_cast<int>(k))) continue;
      std::vector<int> tuple = tuple_of(k, r.arity, n);
      if (!r.graph) m.relations[r.name].insert(tuple);
      else if (r.kind == Term::Kind::Constant) m.constants[r.name] = tuple.back();
    }
    if (!r.graph) m.relations[r.name];
  }
  out.model = std::move(m);
  return out;
}

}  // namespace rvnli::prover::detail
