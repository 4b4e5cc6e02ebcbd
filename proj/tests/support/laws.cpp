#include "laws.hpp"

#include <random>

#include "generators.hpp"
#include "rvnli/error.hpp"
#include "rvnli/logic/parser.hpp"
#include "rvnli/logic/render.hpp"
#include "rvnli/logic/substitution.hpp"

namespace rvnli::testkit {

using namespace logic;

namespace {

void fail(LawReport& r, const std::string& what) {
  if (r.failures++ == 0) r.first_failure = what;
}

}  // namespace

LawReport composition_law(std::uint64_t seed, int cases) {
  std::mt19937_64 rng(seed);
  LawReport r;
  for (int i = 0; i < cases; ++i) {
    Formula t = random_template(rng);
    Substitution a = random_substitution(rng), b = random_substitution(rng);
    ++r.cases;
    try {
      Substitution ab = compose(a, b);
      if (ab.single_layer()) ++r.merged;
      Formula seq = apply_substitution(apply_substitution(t, a), b);
      Formula comp = apply_substitution(t, ab);
      if (seq != comp) fail(r, render_formula(t) + " | seq " + render_formula(seq) + " | comp " + render_formula(comp));
    } catch (const Error& e) {
      fail(r, std::string("exception: ") + e.what());
    }
  }
  return r;
}

LawReport composition_associativity(std::uint64_t seed, int cases) {
  std::mt19937_64 rng(seed);
  LawReport r;
  for (int i = 0; i < cases; ++i) {
    Formula t = random_template(rng);
    Substitution a = random_substitution(rng), b = random_substitution(rng), c = random_substitution(rng);
    ++r.cases;
    try {
      Formula left = apply_substitution(t, compose(compose(a, b), c));
      Formula right = apply_substitution(t, compose(a, compose(b, c)));
      Formula seq = apply_substitution(apply_substitution(apply_substitution(t, a), b), c);
      if (left != right || left != seq) fail(r, render_formula(t));
    } catch (const Error& e) {
      fail(r, std::string("exception: ") + e.what());
    }
  }
  return r;
}

LawReport identity_laws(std::uint64_t seed, int cases) {
  std::mt19937_64 rng(seed);
  LawReport r;
  const Substitution empty;
  for (int i = 0; i < cases; ++i) {
    Formula t = random_template(rng);
    Substitution th = random_substitution(rng);
    ++r.cases;
    Formula expect = apply_substitution(t, th);
    if (apply_substitution(t, compose(th, empty)) != expect) fail(r, "right identity: " + render_formula(t));
    else if (apply_substitution(t, compose(empty, th)) != expect) fail(r, "left identity: " + render_formula(t));
    else if (apply_substitution(t, empty) != t) fail(r, "empty: " + render_formula(t));
  }
  return r;
}

LawReport sort_preservation(std::uint64_t seed, int cases) {
  std::mt19937_64 rng(seed);
  LawReport r;
  for (int i = 0; i < cases; ++i) {
    Formula t = random_template(rng);
    Substitution th = random_substitution(rng);
    ++r.cases;
    Signature sig = generator_signature();
    if (!well_sorted(t, sig)) {
      fail(r, "generator produced ill-sorted template " + render_formula(t));
      continue;
    }
    try {
      Formula out = apply_substitution(t, th, &sig);
      if (!well_sorted(out, sig)) fail(r, render_formula(out));
    } catch (const Error& e) {
      fail(r, std::string("exception: ") + e.what());
    }
  }
  return r;
}

LawReport disjoint_idempotence(std::uint64_t seed, int cases) {
  std::mt19937_64 rng(seed);
  LawReport r;
  for (int i = 0; i < cases; ++i) {
    Formula t = random_closed_formula(rng);
    Substitution th = random_substitution(rng);
    // Keep only bindings whose key cannot occur in a closed generator formula.
    Substitution disjoint;
    for (const auto& b : th.bindings())
      if (!b.is_rewrite()) disjoint.bind(b.key, b.replacement);
    disjoint.bind_symbol("Z", "Red");
    ++r.cases;
    if (apply_substitution(t, disjoint) != t) fail(r, render_formula(t));
  }
  return r;
}

LawReport canonical_round_trip(std::uint64_t seed, int cases) {
  std::mt19937_64 rng(seed);
  LawReport r;
  const Signature& sig = generator_signature();
  ParseOptions opts;
  opts.signature = &sig;
  for (int i = 0; i < cases; ++i) {
    bool templ = i % 4 == 3;
    Formula f = templ ? random_template(rng) : random_closed_formula(rng);
    std::string text = render_formula(f);
    ++r.cases;
    try {
      Formula back = parse_formula(text, templ ? ParseMode::Template : ParseMode::Closed, opts);
      if (back != f) fail(r, text + " re-parsed as " + render_formula(back));
      std::string uni = render_formula(back);
      if (uni != text) fail(r, "unstable render: " + text + " vs " + uni);
    } catch (const Error& e) {
      fail(r, text + ": " + e.what());
    }
  }
  return r;
}

}  // namespace rvnli::testkit
