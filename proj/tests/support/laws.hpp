#pragma once

#include <cstdint>
#include <string>

namespace rvnli::testkit {

struct LawReport {
  int cases = 0;
  int failures = 0;
  // Composition only: how many composed substitutions stayed a single simultaneous layer.
  int merged = 0;
  std::string first_failure;

  bool ok() const { return cases > 0 && failures == 0; }
};

// apply(t, compose(a, b)) == apply(apply(t, a), b) over random templates and substitutions.
LawReport composition_law(std::uint64_t seed, int cases);
// compose(compose(a, b), c) and compose(a, compose(b, c)) apply identically.
LawReport composition_associativity(std::uint64_t seed, int cases);
// compose(θ, ∅) and compose(∅, θ) behave as θ; apply(φ, ∅) == φ.
LawReport identity_laws(std::uint64_t seed, int cases);
// Well-sorted templates stay well-sorted under signature-checked substitutions.
LawReport sort_preservation(std::uint64_t seed, int cases);
// Bindings whose names do not occur leave the formula unchanged.
LawReport disjoint_idempotence(std::uint64_t seed, int cases);
// parse(render(φ)) == φ for random closed (and template) formulas.
LawReport canonical_round_trip(std::uint64_t seed, int cases);

}  // namespace rvnli::testkit
