#include "rvnli/prover/prover.hpp"

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <regex>
#include <sstream>
#include <unistd.h>

#include "model_finder.hpp"
#include "resolution.hpp"
#include "rvnli/error.hpp"
#include "rvnli/logic/render.hpp"
#include "rvnli/prover/clause.hpp"
#include "rvnli/prover/export.hpp"

namespace rvnli::prover {

using Clock = std::chrono::steady_clock;

void ProverBudget::validate() const {
  if (max_clauses == 0) throw BudgetInvalid("max_clauses must be positive");
  if (!(max_seconds > 0)) throw BudgetInvalid("max_seconds must be positive");
  if (max_model_domain <= 0) throw BudgetInvalid("max_model_domain must be positive");
}

ProverBudget ProverBudget::parse(const std::string& spec) {
  ProverBudget b;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    auto eq = item.find('=');
    if (eq == std::string::npos) throw BudgetInvalid("expected key=value in budget spec: " + item);
    std::string key = item.substr(0, eq), value = item.substr(eq + 1);
    try {
      if (key == "clauses") b.max_clauses = std::stoul(value);
      else if (key == "seconds") b.max_seconds = std::stod(value);
      else if (key == "domain") b.max_model_domain = std::stoi(value);
      else throw BudgetInvalid("unknown budget key " + key);
    } catch (const std::logic_error&) {
      throw BudgetInvalid("bad budget value " + item);
    }
  }
  b.validate();
  return b;
}

std::string ProverBudget::to_string() const {
  std::ostringstream os;
  os << "clauses=" << max_clauses << ",seconds=" << max_seconds << ",domain=" << max_model_domain;
  return os.str();
}

std::string_view to_string(ProofStatus s) {
  switch (s) {
    case ProofStatus::Proved: return "proved";
    case ProofStatus::Refuted: return "refuted";
    case ProofStatus::Unknown: return "unknown";
  }
  return "unknown";
}

namespace {

std::vector<detail::InputClause> clause_set(const Theory& theory) {
  std::vector<detail::InputClause> input;
  int counter = 0;
  ClausifyOptions opts;
  opts.skolem_counter = &counter;
  for (std::size_t i = 0; i < theory.axioms.size(); ++i)
    for (auto& c : clausify(theory.axioms[i].formula, opts)) input.push_back({std::move(c), static_cast<int>(i)});
  for (auto& c : clausify(logic::Formula::negation(theory.goal), opts)) input.push_back({std::move(c), -1});
  return input;
}

std::vector<Clause> plain(const std::vector<detail::InputClause>& input) {
  std::vector<Clause> out;
  for (const auto& ic : input) out.push_back(ic.clause);
  return out;
}

bool check_countermodel(const Theory& theory, const Model& m) {
  for (const auto& a : theory.axioms)
    if (!m.holds(a.formula)) return false;
  return !m.holds(theory.goal);
}

void fill_proof(ProofOutcome& out, const Theory& theory, detail::SaturationResult&& r) {
  out.status = ProofStatus::Proved;
  for (int o : r.used_origins) out.used_axioms.insert(theory.axioms[o].name);
  out.derivation = std::move(r.derivation);
  for (auto& step : out.derivation)
    if (!step.axiom.empty()) step.axiom = theory.axioms[std::stoi(step.axiom)].name;
  // The final step against the negated goal is not an inference of the explanation.
  out.depth = std::max(1, r.level - 1);
}

}  // namespace

ProofOutcome BuiltinProver::prove(const Theory& theory, const ProverBudget& budget) const {
  budget.validate();
  validate(theory);
  const auto start = Clock::now();
  const auto deadline = start + std::chrono::duration_cast<Clock::duration>(std::chrono::duration<double>(budget.max_seconds));
  ProofOutcome out;
  out.diagnostics.failed_goal = theory.goal;
  auto done = [&]() -> ProofOutcome& {
    out.seconds = std::chrono::duration<double>(Clock::now() - start).count();
    if (out.proved()) out.diagnostics.failed_goal = {};
    return out;
  };

  for (const auto& a : theory.axioms) {
    if (a.formula == theory.goal) {
      out.status = ProofStatus::Proved;
      out.used_axioms = {a.name};
      out.derivation.push_back({0, logic::render_formula(a.formula), {}, "member", a.name, 0});
      out.depth = 0;
      return done();
    }
  }

  std::vector<detail::InputClause> input;
  try {
    input = clause_set(theory);
  } catch (const Error& e) {
    out.diagnostics.resource_note = std::string("clausification failed: ") + e.what();
    return done();
  }

  // A short saturation run settles most obligations before any model search.
  const std::size_t quick_clauses = std::min<std::size_t>(budget.max_clauses, 2000);
  const auto quick_deadline = std::min(deadline, start + (deadline - start) / 4);
  auto quick = detail::saturate(input, quick_clauses, quick_deadline);
  out.clauses_generated = quick.generated;
  if (quick.kind == detail::SaturationResult::Kind::Refutation) {
    fill_proof(out, theory, std::move(quick));
    return done();
  }

  std::string model_notes;
  const auto clauses = plain(input);
  for (int n = 1; n <= budget.max_model_domain && Clock::now() < deadline; ++n) {
    auto found = detail::search_model(clauses, n, deadline);
    if (!found.note.empty()) model_notes += (model_notes.empty() ? "" : "; ") + found.note;
    if (found.model && check_countermodel(theory, *found.model)) {
      out.status = ProofStatus::Refuted;
      out.diagnostics.countermodel = std::move(found.model);
      return done();
    }
  }

  detail::SaturationResult full = std::move(quick);
  if (full.kind != detail::SaturationResult::Kind::Saturated && budget.max_clauses > quick_clauses) {
    full = detail::saturate(input, budget.max_clauses, deadline);
    out.clauses_generated = full.generated;
    if (full.kind == detail::SaturationResult::Kind::Refutation) {
      fill_proof(out, theory, std::move(full));
      return done();
    }
  }

  std::string note;
  switch (full.kind) {
    case detail::SaturationResult::Kind::Saturated:
      note = "clause set saturated without refutation";
      break;
    case detail::SaturationResult::Kind::ClauseLimit:
      note = "clause limit " + std::to_string(budget.max_clauses) + " reached";
      break;
    default:
      note = "time limit " + std::to_string(budget.max_seconds) + "s reached";
      break;
  }
  note += "; no countermodel with up to " + std::to_string(budget.max_model_domain) + " elements per sort";
  if (!model_notes.empty()) note += " (" + model_notes + ")";
  out.diagnostics.resource_note = note;
  return done();
}

ProofOutcome prove(const Theory& theory, const ProverBudget& budget) { return BuiltinProver{}.prove(theory, budget); }

std::optional<Model> find_countermodel(const Theory& theory, int domain_size) {
  validate(theory);
  if (domain_size <= 0) return std::nullopt;
  auto found = detail::search_model(plain(clause_set(theory)), domain_size, Clock::time_point::max());
  if (found.model && check_countermodel(theory, *found.model)) return found.model;
  return std::nullopt;
}

int proof_depth(const ProofOutcome& outcome) {
  if (!outcome.proved()) throw NotProved("proof depth requested for a " + std::string(to_string(outcome.status)) + " outcome");
  return outcome.depth;
}

std::string szs_status(const std::string& output) {
  static const std::regex re(R"(SZS status\s+([A-Za-z]+))");
  std::smatch m;
  if (std::regex_search(output, m, re)) return m[1];
  return {};
}

ProofOutcome ExternalProver::prove(const Theory& theory, const ProverBudget& budget) const {
  budget.validate();
  validate(theory);
  const auto start = Clock::now();
  ProofOutcome out;
  out.diagnostics.failed_goal = theory.goal;

  char path[] = "/tmp/rvnli-XXXXXX.p";
  int fd = mkstemps(path, 2);
  if (fd < 0) throw Error("cannot create temporary TPTP file");
  {
    std::string text = export_tptp(theory);
    if (write(fd, text.data(), text.size()) != static_cast<ssize_t>(text.size())) {
      close(fd);
      unlink(path);
      throw Error("cannot write temporary TPTP file");
    }
    close(fd);
  }
  std::string cmd = command_;
  auto replace = [&](const std::string& key, const std::string& value) {
    for (auto pos = cmd.find(key); pos != std::string::npos; pos = cmd.find(key, pos + value.size()))
      cmd.replace(pos, key.size(), value);
  };
  replace("{file}", path);
  replace("{seconds}", std::to_string(static_cast<int>(std::max(1.0, budget.max_seconds))));

  std::string output;
  if (FILE* pipe = popen((cmd + " 2>&1").c_str(), "r")) {
    std::array<char, 4096> buf;
    while (std::size_t n = fread(buf.data(), 1, buf.size(), pipe)) output.append(buf.data(), n);
    pclose(pipe);
  }
  unlink(path);

  const std::string status = szs_status(output);
  if (status == "Theorem" || status == "Unsatisfiable" || status == "ContradictoryAxioms") {
    out.status = ProofStatus::Proved;
    for (const auto& a : theory.axioms) out.used_axioms.insert(a.name);
    out.derivation.push_back({0, "$false", {}, "external", "", 1});
    out.depth = 1;
    out.diagnostics.failed_goal = {};
  } else {
    out.diagnostics.resource_note =
        status.empty() ? "external prover produced no SZS status" : "external prover status " + status;
  }
  out.seconds = std::chrono::duration<double>(Clock::now() - start).count();
  return out;
}

}  // namespace rvnli::prover
