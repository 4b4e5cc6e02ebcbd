#include <doctest.h>

#include "files.hpp"
#include "worked_examples.hpp"
#include "rvnli/atomizer/atomizer.hpp"
#include "rvnli/error.hpp"
#include "scripted.hpp"

using namespace rvnli;
using namespace rvnli::atomizer;

namespace {

class Fixed final : public EntailmentScorer {
 public:
  explicit Fixed(double s) : s_(s) {}
  std::string name() const override { return "fixed"; }
  double score(const std::string&, const std::string&) const override { return s_; }

 private:
  double s_;
};

nlohmann::json corpus() {
  return nlohmann::json::parse(testkit::read_file(testkit::source_path("fixtures/atoms/corpus.json")));
}

}  // namespace

TEST_CASE("decompose: worked example and already atomic input") {
  testkit::Script s;
  s.atoms["Professional actors are in a summer performance."] = {
      "The people are professional.", "The people are actors.", "The performance is during summer."};
  testkit::ScriptedClient llm(s);
  CHECK(decompose("Professional actors are in a summer performance.", llm) == s.atoms.begin()->second);
  CHECK(decompose("Humans are mammals.", llm) == std::vector<std::string>{"Humans are mammals."});
}

TEST_CASE("threshold rule") {
  auto d = filter_entailed("s", {"a"}, Fixed(0.95), 0.9);
  CHECK(d.atoms[0].kept);
  CHECK_FALSE(filter_entailed("s", {"a"}, Fixed(0.85), 0.9).atoms[0].kept);
  CHECK(filter_entailed("s", {"a"}, Fixed(0.9), 0.9).atoms[0].kept);
  CHECK(filter_entailed("s", {"a", "b"}, Fixed(0.0), 0.0).kept_count() == 2);
  CHECK_THROWS(filter_entailed("s", {"a"}, Fixed(1), 1.5));
  CHECK_THROWS(filter_entailed("  ", {"a"}, Fixed(1), 0.5));
  // Repeated candidates collapse to one atom.
  CHECK(filter_entailed("s", {"a", "a"}, Fixed(1), 0.5).atoms.size() == 1);
}

TEST_CASE("lexical scorer: hand-computed containment ratios") {
  LexicalScorer lex;
  struct Pair {
    const char* premise;
    const char* hypothesis;
    double expected;
  };
  const Pair pairs[] = {
      {"Alex is big and red.", "Alex is big.", 1.0},
      {"Alex is big.", "Alex is red.", 0.5},
      {"Plants need sunlight and water to grow.", "Plants need soil.", 2.0 / 3},
      {"The sun is a star that gives off light and heat.", "The sun orbits the earth.", 1.0 / 3},
      {"Monkeypox is an infectious disease caused by the monkeypox virus.", "Monkeypox is a bacterial disease.", 2.0 / 3},
      {"Humans are mammals.", "Humans are mammals.", 1.0},
      {"A magnet attracts iron but not copper.", "A magnet does not attract copper.", 1.0},
      {"Dave meets Erin, who is tall.", "Dave is tall.", 1.0},
      {"Steel is a metal and metals conduct electricity.", "Steel conducts electricity.", 1.0},
      {"Water freezes at zero degrees Celsius.", "Ice melts.", 0.0},
  };
  for (const auto& p : pairs) {
    CAPTURE(p.hypothesis);
    CHECK(lex.score(p.premise, p.hypothesis) == doctest::Approx(p.expected));
  }
  CHECK(lex.score("anything", "The.") == 1.0);
  auto d = filter_entailed("A and B", {"A"}, lex, 0.9);
  CHECK(d.atoms[0].score >= 0.9);
  CHECK(d.atoms[0].kept);
}

TEST_CASE("kept set is monotone in the threshold over the fixture corpus") {
  llm::FixtureClient fixtures(testkit::source_path("fixtures/llm/atoms"));
  LexicalScorer lex;
  for (const auto& e : corpus()) {
    std::string s = e["sentence"];
    CAPTURE(s);
    std::vector<std::string> previous;
    bool first = true;
    for (double t : {0.0, 0.5, 0.9, 1.0}) {
      auto kept = atomize(s, fixtures, lex, t).kept_atoms();
      if (t == 0.0) CHECK(kept.size() == e["candidates"].size());
      if (!first)
        for (const auto& a : kept) CHECK(std::find(previous.begin(), previous.end(), a) != previous.end());
      previous = kept;
      first = false;
    }
  }
}

TEST_CASE("global atom set") {
  AtomicDecomposition a{"x", {{"Humans are animals.", 1, true}, {"Humans are mammals.", 1, true}}, 0.9};
  AtomicDecomposition b{"y", {{"Humans are animals.", 1, true}, {"Mammals fly.", 0.2, false}}, 0.9};
  auto set = global_atom_set({a, b});
  CHECK(set == std::set<std::string>{"Humans are animals.", "Humans are mammals."});
  CHECK(global_atom_set({}).empty());
}

TEST_CASE("global atom set over the monkeypox premises") {
  llm::FixtureClient fixtures(testkit::source_path("fixtures/llm/atoms"));
  LexicalScorer lex;
  std::vector<AtomicDecomposition> ds;
  for (const auto& p : testkit::monkeypox_premises()) ds.push_back(atomize(p, fixtures, lex, 0.9));
  auto set = global_atom_set(ds);
  CHECK(set.size() >= 6);
  CHECK(set.count("Humans are mammals."));
  CHECK(set.count("Mammals are animals."));
  CHECK(set.count("Symptoms of monkeypox include feeling tired."));
  // The hallucinated "Monkeypox is deadly." shares no content word but the subject.
  CHECK_FALSE(set.count("Monkeypox is deadly."));
}

TEST_CASE("decomposition JSON round trip") {
  AtomicDecomposition a{"x", {{"p", 0.5, false}, {"q", 1, true}}, 0.9};
  nlohmann::json j = a;
  auto b = j.get<AtomicDecomposition>();
  CHECK(b.source == "x");
  CHECK(b.kept_atoms() == std::vector<std::string>{"q"});
  CHECK(conjunction_of(b) == b.kept_atoms());
  CHECK_THROWS_AS(make_scorer("magic"), ConfigError);
  CHECK(make_scorer("lexical")->name() == "lexical");
}
