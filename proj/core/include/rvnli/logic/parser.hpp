#pragma once

#include <string_view>
#include <vector>

#include "rvnli/logic/formula.hpp"
#include "rvnli/logic/signature.hpp"

namespace rvnli::logic {

// closed: unbound identifiers in term position are constants and `?P` placeholders are rejected.
// template: `P`, `Q1`, ... (one capital letter plus digits) are placeholders and unbound
//           `x`, `e1`, ... (one lowercase letter plus digits) are free variables.
enum class ParseMode { Closed, Template };

// canonical: `P(x, y)` application, ASCII or Unicode connectives.
// isabelle: `P x y` application by juxtaposition, as in emitted theory files.
enum class SyntaxDialect { Canonical, Isabelle };

struct ParseOptions {
  const Signature* signature = nullptr;
  SyntaxDialect dialect = SyntaxDialect::Canonical;
  // Extra free variables visible to the parsed text (used for formula fragments).
  std::vector<Term> scope;
};

Formula parse_formula(std::string_view text, ParseMode mode = ParseMode::Closed, const ParseOptions& options = {});

// Convenience for terms such as `c` or `c:event`.
Term parse_term(std::string_view text, const ParseOptions& options = {});

// True when `name` has the shape of a generic placeholder letter.
bool is_placeholder_name(std::string_view name) noexcept;
// True when `name` has the shape of a template variable letter.
bool is_variable_name(std::string_view name) noexcept;

}  // namespace rvnli::logic
