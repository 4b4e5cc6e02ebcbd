#include "sat.hpp"

#include <algorithm>

namespace rvnli::prover::detail {

int SatSolver::new_var() {
  int v = num_vars();
  assign_.push_back(kUndef);
  phase_.push_back(kFalse);
  level_.push_back(0);
  reason_.push_back(-1);
  activity_.push_back(0.0);
  seen_.push_back(0);
  watches_.emplace_back();
  watches_.emplace_back();
  heap_pos_.push_back(-1);
  heap_insert(v);
  return v;
}

bool SatSolver::add_clause(std::vector<int> lits) {
  if (unsat_) return false;
  std::sort(lits.begin(), lits.end());
  lits.erase(std::unique(lits.begin(), lits.end()), lits.end());
  std::vector<int> kept;
  for (std::size_t i = 0; i < lits.size(); ++i) {
    if (i + 1 < lits.size() && (lits[i] ^ 1) == lits[i + 1]) return true;  // tautology
    auto v = lit_value(lits[i]);
    if (v == kTrue) return true;
    if (v == kUndef) kept.push_back(lits[i]);
  }
  if (kept.empty()) return !(unsat_ = true);
  if (kept.size() == 1) {
    enqueue(kept[0], -1);
    if (propagate() >= 0) unsat_ = true;
    return !unsat_;
  }
  int ci = static_cast<int>(clauses_.size());
  watches_[kept[0]].push_back(ci);
  watches_[kept[1]].push_back(ci);
  clauses_.push_back(std::move(kept));
  return true;
}

void SatSolver::enqueue(int l, int reason) {
  int v = l >> 1;
  assign_[v] = static_cast<std::int8_t>((l & 1) ? kFalse : kTrue);
  level_[v] = decision_level();
  reason_[v] = reason;
  trail_.push_back(l);
}

int SatSolver::propagate() {
  while (qhead_ < trail_.size()) {
    int p = trail_[qhead_++];
    int false_lit = p ^ 1;
    auto& ws = watches_[false_lit];
    std::size_t i = 0, j = 0;
    while (i < ws.size()) {
      int ci = ws[i++];
      auto& c = clauses_[ci];
      if (c[0] == false_lit) std::swap(c[0], c[1]);
      if (lit_value(c[0]) == kTrue) {
        ws[j++] = ci;
        continue;
      }
      bool moved = false;
      for (std::size_t k = 2; k < c.size(); ++k) {
        if (lit_value(c[k]) != kFalse) {
          std::swap(c[1], c[k]);
          watches_[c[1]].push_back(ci);
          moved = true;
          break;
        }
      }
      if (moved) continue;
      ws[j++] = ci;
      if (lit_value(c[0]) == kFalse) {
        while (i < ws.size()) ws[j++] = ws[i++];
        ws.resize(j);
        qhead_ = trail_.size();
        return ci;
      }
      enqueue(c[0], ci);
    }
    ws.resize(j);
  }
  return -1;
}

void SatSolver::bump(int v) {
  if ((activity_[v] += var_inc_) > 1e100) {
    for (auto& a : activity_) a *= 1e-100;
    var_inc_ *= 1e-100;
  }
  if (heap_pos_[v] >= 0) heap_up(heap_pos_[v]);
}

void SatSolver::analyze(int confl, std::vector<int>& learnt, int& bt_level) {
  learnt.assign(1, -1);
  int path = 0, p = -1;
  int idx = static_cast<int>(trail_.size()) - 1;
  do {
    const auto& c = clauses_[confl];
    for (std::size_t k = (p == -1 ? 0 : 1); k < c.size(); ++k) {
      int q = c[k], v = q >> 1;
      if (seen_[v] || level_[v] == 0) continue;
      seen_[v] = 1;
      bump(v);
      if (level_[v] >= decision_level()) ++path;
      else learnt.push_back(q);
    }
    while (!seen_[trail_[idx] >> 1]) --idx;
    p = trail_[idx--];
    confl = reason_[p >> 1];
    seen_[p >> 1] = 0;
    --path;
  } while (path > 0);
  learnt[0] = p ^ 1;

  bt_level = 0;
  std::size_t max_i = 1;
  for (std::size_t k = 1; k < learnt.size(); ++k) {
    if (level_[learnt[k] >> 1] > bt_level) {
      bt_level = level_[learnt[k] >> 1];
      max_i = k;
    }
  }
  if (learnt.size() > 1) std::swap(learnt[1], learnt[max_i]);
  for (int l : learnt) seen_[l >> 1] = 0;
  var_inc_ *= 1.0 / 0.95;
}

void SatSolver::cancel_until(int level) {
  if (decision_level() <= level) return;
  for (int k = static_cast<int>(trail_.size()) - 1; k >= trail_lim_[level]; --k) {
    int v = trail_[k] >> 1;
    phase_[v] = assign_[v];
    assign_[v] = kUndef;
    reason_[v] = -1;
    if (heap_pos_[v] < 0) heap_insert(v);
  }
  trail_.resize(trail_lim_[level]);
  trail_lim_.resize(level);
  qhead_ = trail_.size();
}

int SatSolver::pick_branch() {
  while (!heap_.empty()) {
    int v = heap_pop();
    if (assign_[v] == kUndef) return v;
  }
  return -1;
}

SatSolver::Result SatSolver::solve(std::chrono::steady_clock::time_point deadline) {
  if (unsat_) return Result::Unsat;
  if (propagate() >= 0) return Result::Unsat;
  long conflicts = 0;
  double restart_limit = 100;
  long since_restart = 0;
  std::vector<int> learnt;
  for (;;) {
    int confl = propagate();
    if (confl >= 0) {
      ++conflicts;
      ++since_restart;
      if (decision_level() == 0) {
        unsat_ = true;
        return Result::Unsat;
      }
      int bt = 0;
      analyze(confl, learnt, bt);
      cancel_until(bt);
      if (learnt.size() == 1) {
        enqueue(learnt[0], -1);
      } else {
        int ci = static_cast<int>(clauses_.size());
        watches_[learnt[0]].push_back(ci);
        watches_[learnt[1]].push_back(ci);
        clauses_.push_back(learnt);
        enqueue(learnt[0], ci);
      }
      if ((conflicts & 255) == 0 && std::chrono::steady_clock::now() > deadline) return Result::Unknown;
      continue;
    }
    if (since_restart > restart_limit) {
      since_restart = 0;
      restart_limit *= 1.5;
      cancel_until(0);
    }
    int v = pick_branch();
    if (v < 0) return Result::Sat;
    trail_lim_.push_back(static_cast<int>(trail_.size()));
    enqueue(lit(v, phase_[v] == kTrue), -1);
  }
}

void SatSolver::heap_insert(int v) {
  heap_pos_[v] = static_cast<int>(heap_.size());
  heap_.push_back(v);
  heap_up(heap_pos_[v]);
}

int SatSolver::heap_pop() {
  int top = heap_[0];
  heap_pos_[top] = -1;
  int last = heap_.back();
  heap_.pop_back();
  if (!heap_.empty()) {
    heap_[0] = last;
    heap_pos_[last] = 0;
    heap_down(0);
  }
  return top;
}

void SatSolver::heap_up(int i) {
  int v = heap_[i];
  while (i > 0) {
    int parent = (i - 1) / 2;
    if (!heap_less(v, heap_[parent])) break;
    heap_[i] = heap_[parent];
    heap_pos_[heap_[i]] = i;
    i = parent;
  }
  heap_[i] = v;
  heap_pos_[v] = i;
}

void SatSolver::heap_down(int i) {
  int v = heap_[i];
  int n = static_cast<int>(heap_.size());
  for (;;) {
    int child = 2 * i + 1;
    if (child >= n) break;
    if (child + 1 < n && heap_less(heap_[child + 1], heap_[child])) ++child;
    if (!heap_less(heap_[child], v)) break;
    heap_[i] = heap_[child];
    heap_pos_[heap_[i]] = i;
    i = child;
  }
  heap_[i] = v;
  heap_pos_[v] = i;
}

}  // namespace rvnli::prover::detail
