#pragma once

#include <json.hpp>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace rvnli::llm {

// "Atom k: text" lines, ordered by k (first occurrence wins on repeated k). Surrounding prose is ignored.
std::vector<std::string> parse_atoms_response(std::string_view text);

struct TreeStep {
  // Lines written above the conclusion, verbatim.
  std::vector<std::string> supports;
  std::string conclusion;
};

struct TreeResponse {
  std::vector<TreeStep> steps;
  // The answer stated that no intermediate conclusions are needed.
  bool direct = false;
};

// Blocks of support lines closed by "Conclusion: ..." (the space after the colon is optional).
// Blank lines and "..." separate blocks; a leading "Answer:" line and anything before it are skipped.
TreeResponse parse_tree_response(std::string_view text);

// The text after "Logical Template:".
std::string parse_template_response(std::string_view text);

// First JSON object in the text, checked against the stage-binding schema:
//   {"stage": "entity"|"event"|"role", "bindings": [ ... ]}
// with each binding one of {placeholder, symbol}, {placeholder, formula} or {pattern, formula}.
nlohmann::json parse_bindings(std::string_view text);

// "Node <id>: <sentence>" lines.
std::map<std::string, std::string> parse_refine_response(std::string_view text);

}  // namespace rvnli::llm
