#include "rvnli/atomizer/atomizer.hpp"

#include <httplib.h>

#include <regex>

#include "rvnli/error.hpp"
#include "rvnli/llm/parsers.hpp"
#include "rvnli/text/tokenize.hpp"

namespace rvnli::atomizer {

std::vector<std::string> AtomicDecomposition::kept_atoms() const {
  std::vector<std::string> out;
  for (const auto& a : atoms)
    if (a.kept) out.push_back(a.text);
  return out;
}

std::size_t AtomicDecomposition::kept_count() const {
  std::size_t n = 0;
  for (const auto& a : atoms) n += a.kept;
  return n;
}

void to_json(nlohmann::json& j, const AtomicDecomposition& d) {
  j = {{"source", d.source}, {"threshold", d.threshold}, {"atoms", nlohmann::json::array()}};
  for (const auto& a : d.atoms) j["atoms"].push_back({{"text", a.text}, {"score", a.score}, {"kept", a.kept}});
}

void from_json(const nlohmann::json& j, AtomicDecomposition& d) {
  d.source = j.at("source").get<std::string>();
  d.threshold = j.value("threshold", 0.9);
  d.atoms.clear();
  for (const auto& a : j.at("atoms")) {
    double score = a.value("score", 1.0);
    d.atoms.push_back({a.at("text").get<std::string>(), score, a.value("kept", score >= d.threshold)});
  }
}

double LexicalScorer::score(const std::string& premise, const std::string& hypothesis) const {
  auto hyp = text::content_tokens(hypothesis);
  if (hyp.empty()) return 1.0;
  auto prem = text::content_tokens(premise);
  std::set<std::string> have(prem.begin(), prem.end());
  std::set<std::string> need(hyp.begin(), hyp.end());
  std::size_t hit = 0;
  for (const auto& t : need) hit += have.count(t);
  return static_cast<double>(hit) / static_cast<double>(need.size());
}

double HttpScorer::score(const std::string& premise, const std::string& hypothesis) const {
  static const std::regex url_re(R"(^(https?://[^/]+)(/.*)?$)");
  std::smatch m;
  if (!std::regex_match(endpoint_, m, url_re)) throw ConfigError("bad scorer endpoint: " + endpoint_);
  httplib::Client cli(m[1].str());
  cli.set_read_timeout(timeout_);
  cli.set_connection_timeout(timeout_);
  nlohmann::json body{{"premise", premise}, {"hypothesis", hypothesis}};
  auto res = cli.Post(m[2].matched ? m[2].str() : "/", body.dump(), "application/json");
  if (!res || res->status != 200) throw ScorerUnavailable("scorer endpoint failed: " + endpoint_);
  try {
    double s = nlohmann::json::parse(res->body).at("score").get<double>();
    return s < 0 ? 0 : (s > 1 ? 1 : s);
  } catch (const nlohmann::json::exception& e) {
    throw ScorerUnavailable(std::string("malformed scorer response: ") + e.what());
  }
}

std::unique_ptr<EntailmentScorer> make_scorer(const std::string& kind, const std::string& endpoint) {
  if (kind == "lexical") return std::make_unique<LexicalScorer>();
  if (kind == "http") {
    if (endpoint.empty()) throw ConfigError("scorer = http needs scorer_endpoint");
    return std::make_unique<HttpScorer>(endpoint);
  }
  throw ConfigError("unknown scorer '" + kind + "'");
}

std::vector<std::string> decompose(const std::string& sentence, llm::LlmClient& llm) {
  if (text::trim(sentence).empty()) throw Error("cannot decompose an empty sentence");
  auto prompt = llm::render(llm::TemplateId::Atoms, {{"sentence", sentence}});
  return llm::parse_atoms_response(llm.complete(prompt));
}

AtomicDecomposition filter_entailed(const std::string& source, const std::vector<std::string>& candidates,
                                    const EntailmentScorer& scorer, double threshold) {
  if (!(threshold >= 0.0 && threshold <= 1.0)) throw Error("threshold must lie in [0, 1]");
  if (text::trim(source).empty()) throw Error("decomposition source is empty");
  AtomicDecomposition d{source, {}, threshold};
  for (const auto& c : candidates) {
    double s = scorer.score(source, c);
    auto it = std::find_if(d.atoms.begin(), d.atoms.end(), [&](const Atom& a) { return a.text == c; });
    if (it != d.atoms.end()) {
      it->score = std::max(it->score, s);
      it->kept = it->score >= threshold;
    } else {
      d.atoms.push_back({c, s, s >= threshold});
    }
  }
  return d;
}

AtomicDecomposition atomize(const std::string& sentence, llm::LlmClient& llm, const EntailmentScorer& scorer,
                            double threshold) {
  return filter_entailed(sentence, decompose(sentence, llm), scorer, threshold);
}

std::vector<std::string> conjunction_of(const AtomicDecomposition& d) { return d.kept_atoms(); }

std::set<std::string> global_atom_set(const std::vector<AtomicDecomposition>& premises) {
  std::set<std::string> out;
  for (const auto& d : premises)
    for (auto& a : d.kept_atoms()) out.insert(std::move(a));
  return out;
}

}  // namespace rvnli::atomizer
