#pragma once

#include <chrono>
#include <cstdint>
#include <vector>

namespace rvnli::prover::detail {

// Compact CDCL solver: two watched literals, first-UIP learning, VSIDS, geometric restarts.
// Literals are 2*var for the positive and 2*var+1 for the negative phase.
class SatSolver {
 public:
  enum class Result { Sat, Unsat, Unknown };

  static int lit(int var, bool positive) { return 2 * var + (positive ? 0 : 1); }

  int new_var();
  int num_vars() const { return static_cast<int>(assign_.size()); }
  // Returns false once the clause set is known to be unsatisfiable.
  bool add_clause(std::vector<int> lits);
  Result solve(std::chrono::steady_clock::time_point deadline);
  bool value(int var) const { return assign_[var] == 1; }

 private:
  enum : std::int8_t { kFalse = 0, kTrue = 1, kUndef = -1 };

  std::int8_t lit_value(int l) const {
    std::int8_t a = assign_[l >> 1];
    return a == kUndef ? a : static_cast<std::int8_t>(a ^ (l & 1));
  }
  int decision_level() const { return static_cast<int>(trail_lim_.size()); }
  void enqueue(int l, int reason);
  int propagate();
  void analyze(int confl, std::vector<int>& learnt, int& bt_level);
  void cancel_until(int level);
  int pick_branch();
  void bump(int var);

  // Max-heap on activity.
  void heap_insert(int v);
  int heap_pop();
  void heap_up(int i);
  void heap_down(int i);
  bool heap_less(int a, int b) const { return activity_[a] > activity_[b]; }

  std::vector<std::vector<int>> clauses_;
  std::vector<std::vector<int>> watches_;
  std::vector<std::int8_t> assign_;
  std::vector<std::int8_t> phase_;
  std::vector<int> level_, reason_;
  std::vector<int> trail_, trail_lim_;
  std::size_t qhead_ = 0;
  std::vector<double> activity_;
  double var_inc_ = 1.0;
  std::vector<int> heap_, heap_pos_;
  std::vector<char> seen_;
  bool unsat_ = false;
};

}  // namespace rvnli::prover::detail
