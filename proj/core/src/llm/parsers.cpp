#include "rvnli/llm/parsers.hpp"

#include <regex>
#include <sstream>

#include "rvnli/error.hpp"
#include "rvnli/text/tokenize.hpp"

namespace rvnli::llm {

namespace {

std::string excerpt(std::string_view text) {
  std::string t = text::normalize_space(text);
  return t.size() > 80 ? t.substr(0, 77) + "..." : t;
}

std::vector<std::string> lines_of(std::string_view text) {
  std::vector<std::string> out;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    out.push_back(line);
  }
  return out;
}

}  // namespace

std::vector<std::string> parse_atoms_response(std::string_view text) {
  static const std::regex re(R"(^\s*\**\s*atom\s*(\d+)\s*\**\s*[:.)]\s*(.*\S)\s*$)", std::regex::icase);
  std::map<long, std::string> by_index;
  for (const auto& line : lines_of(text)) {
    std::smatch m;
    if (std::regex_match(line, m, re)) by_index.emplace(std::stol(m[1]), text::trim(std::string(m[2])));
  }
  if (by_index.empty()) throw UnparseableResponse("response has no \"Atom k:\" lines", excerpt(text));
  std::vector<std::string> out;
  for (auto& kv : by_index) out.push_back(std::move(kv.second));
  return out;
}

TreeResponse parse_tree_response(std::string_view text) {
  static const std::regex conclusion_re(R"(^\s*conclusion\s*:\s*(.*?)\s*$)", std::regex::icase);
  static const std::regex answer_re(R"(^\s*answer\s*:\s*$)", std::regex::icase);
  static const std::regex numbered_re(R"(^\s*\d+[.)]\s+(.*)$)");
  auto lines = lines_of(text);
  std::size_t start = 0;
  for (std::size_t i = 0; i < lines.size(); ++i)
    if (std::regex_match(lines[i], answer_re)) start = i + 1;

  TreeResponse out;
  std::vector<std::string> pending;
  for (std::size_t i = start; i < lines.size(); ++i) {
    std::string line = text::trim(lines[i]);
    std::smatch m;
    if (line.empty() || line == "..." || line == "…") {
      // A block only closes at its Conclusion line; blank lines inside a block are tolerated.
      continue;
    }
    if (std::regex_match(line, m, conclusion_re)) {
      std::string c = m[1];
      if (c.empty()) throw UnparseableResponse("empty conclusion", excerpt(lines[i]));
      out.steps.push_back({std::move(pending), std::move(c)});
      pending.clear();
      continue;
    }
    if (std::regex_match(line, m, numbered_re)) line = m[1];
    pending.push_back(line);
  }
  if (out.steps.empty()) {
    std::string low = text::lower(text);
    if (low.find("empty") != std::string::npos) {
      out.direct = true;
      return out;
    }
    throw UnparseableResponse("response has no \"Conclusion:\" lines", excerpt(text));
  }
  // Lines after the last conclusion are trailing prose.
  out.direct = out.steps.size() == 1;
  return out;
}

std::string parse_template_response(std::string_view text) {
  static const std::regex re(R"(logical\s+template\s*:\s*(.*\S))", std::regex::icase);
  for (const auto& line : lines_of(text)) {
    std::smatch m;
    if (std::regex_search(line, m, re)) return text::trim(std::string(m[1]));
  }
  throw UnparseableResponse("response has no \"Logical Template:\" line", excerpt(text));
}

nlohmann::json parse_bindings(std::string_view text) {
  auto open = text.find('{');
  auto close = text.rfind('}');
  if (open == std::string_view::npos || close == std::string_view::npos || close < open)
    throw UnparseableResponse("no JSON object in stage-binding response", excerpt(text));
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text.substr(open, close - open + 1));
  } catch (const nlohmann::json::parse_error&) {
    throw UnparseableResponse("stage-binding JSON does not parse", excerpt(text.substr(open)));
  }
  auto bad = [&](const std::string& why) { return UnparseableResponse("stage-binding JSON " + why, excerpt(j.dump())); };
  if (!j.is_object() || !j.contains("stage") || !j["stage"].is_string()) throw bad("lacks a string \"stage\"");
  const std::string stage = j["stage"];
  if (stage != "entity" && stage != "event" && stage != "role") throw bad("has unknown stage \"" + stage + "\"");
  if (!j.contains("bindings") || !j["bindings"].is_array()) throw bad("lacks a \"bindings\" array");
  for (const auto& b : j["bindings"]) {
    if (!b.is_object()) throw bad("has a non-object binding");
    auto str = [&](const char* k) { return b.contains(k) && b[k].is_string(); };
    bool ok = (str("placeholder") && (str("symbol") != str("formula"))) || (str("pattern") && str("formula") && !str("placeholder"));
    if (!ok) throw bad("has a binding that is not {placeholder,symbol}, {placeholder,formula} or {pattern,formula}");
  }
  return j;
}

std::map<std::string, std::string> parse_refine_response(std::string_view text) {
  static const std::regex re(R"(^\s*node\s+([A-Za-z0-9_\-]+)\s*:\s*(.*\S)\s*$)", std::regex::icase);
  std::map<std::string, std::string> out;
  for (const auto& line : lines_of(text)) {
    std::smatch m;
    if (std::regex_match(line, m, re)) out.emplace(m[1], text::trim(std::string(m[2])));
  }
  if (out.empty()) throw UnparseableResponse("response has no \"Node <id>:\" lines", excerpt(text));
  return out;
}

}  // namespace rvnli::llm
