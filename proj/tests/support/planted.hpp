#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rvnli/tree/tree.hpp"
#include "rvnli/verify/verify.hpp"
#include "scripted.hpp"

namespace rvnli::testkit {

// One subtree "<A> is <q>." over an event fact, a rule and distractors, with the Agent/Patient
// roles of either the fact or the rule exchanged.
struct PlantedCase {
  std::string id;
  tree::EntailmentTree tree;
  std::string faulty_node;
  std::string faulty_statement;
  std::string correct_statement;
};

std::vector<PlantedCase> planted_cases(std::uint64_t seed, int count);

// Three levels: i1 "Alice is happy." <- i2 "Alice is kind." <- h "Alice is great.", with the
// swap under i2.
PlantedCase planted_deep_case();

// Repairing script: the faulty statement is rewritten to the correct one on request.
Script repair_script(const PlantedCase& c);

struct PlantedRun {
  verify::TreeVerification result;
  bool localised = false;  // faulty node in the first event's Ê
};

// Runs verify_tree with the scripted pipeline (existential events, lexical scorer).
PlantedRun run_planted(const PlantedCase& c, bool repairing, const verify::Caps& caps = {});

struct PlantedReport {
  int cases = 0;
  int converged = 0;
  int localised = 0;
  double mean_iterations = 0;
  // Non-repairing runs that stopped at the cap with one event per iteration.
  int capped_complete = 0;
  double seconds = 0;
  std::vector<std::string> misses;
};

PlantedReport planted_suite(std::uint64_t seed, int count, bool repairing, const verify::Caps& caps = {});

}  // namespace rvnli::testkit
