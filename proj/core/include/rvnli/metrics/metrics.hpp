#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rvnli/logic/formula.hpp"
#include "rvnli/text/embedding.hpp"

namespace rvnli::metrics {

enum class ErrorType { None, Syntax, Implication, Quantifier, Variable };
std::string_view to_string(ErrorType e) noexcept;

// Syntax when the text does not parse or sort-check; otherwise, against a reference formalisation,
// implication > quantifier > variable, first difference wins. Without a reference only syntax/none.
ErrorType classify_error(const std::string& produced, const std::optional<std::string>& reference = std::nullopt);
ErrorType classify_error(const logic::Formula& produced, const logic::Formula& reference);

// Connective shape with quantifiers dropped and atoms as "_", e.g. "(_ -> (_ | _))".
std::string connective_skeleton(const logic::Formula& f);
// Quantifier kinds and variable sorts in binding order, e.g. "AeEx".
std::string quantifier_profile(const logic::Formula& f);
// Bound variables renamed v1, v2, ... in binding order.
logic::Formula alpha_normalise(const logic::Formula& f);

// Rule-based English rendering of a closed formula.
std::string informalise(const logic::Formula& f);
// Cosine of the embeddings of `original` and informalise(φ); hashed bag-of-words by default.
double faithfulness(const std::string& original, const logic::Formula& phi, const text::Embedder* embedder = nullptr);

struct DepthRecord {
  std::string id;
  int gold_depth = 0;
  int used_depth = 0;
  // Needed at least one refinement event.
  bool refined = false;
};

enum class DepthView { All, Refined, Unrefined };
std::string_view to_string(DepthView v) noexcept;

struct DepthBucket {
  int gold_depth = 0;
  std::size_t count = 0;
  // Rounded to two decimals.
  double mean_used = 0.0;
};

// Buckets 1..5 in order; empty buckets are absent.
std::vector<DepthBucket> depth_alignment(const std::vector<DepthRecord>& records, DepthView view = DepthView::All);

// A stand-in for holistic refiners: consecutive ∀x. A(x) → B(x) links of a rule chain are fused until
// at most `max_links` remain, so a proof over the result is never deeper than `max_links`.
std::vector<logic::Formula> compress_chain(const std::vector<logic::Formula>& premises, int max_links);

}  // namespace rvnli::metrics
