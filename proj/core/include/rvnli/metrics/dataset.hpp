#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace rvnli::metrics {

enum class Label { Entailment, Contradiction, Unknown };
std::string_view to_string(Label l) noexcept;
// entailment/true/proved, contradiction/false/disproved, unknown/uncertain (any case).
std::optional<Label> label_from_string(std::string_view s) noexcept;

struct DatasetInstance {
  std::string id;
  std::vector<std::string> premises;
  std::string hypothesis;
  Label label = Label::Entailment;
  std::optional<int> gold_depth;
  // Reference formalisations keyed by statement text, for the error taxonomy.
  std::map<std::string, std::string> references;

  friend bool operator==(const DatasetInstance&, const DatasetInstance&) = default;
};

enum class Format { GenericJsonl, ProofWriter, ProntoQA, Folio, EntailmentBank };
std::string_view to_string(Format f) noexcept;
// Throws UnknownFormat.
Format format_from_string(std::string_view s);

struct IngestOptions {
  // Refinement runs keep boolean labels only.
  bool refinement_mode = true;
};

struct IngestStats {
  std::size_t rows = 0;
  std::size_t dropped_unknown = 0;
};

// Instances sorted by id (natural order). Throws FormatError with the 1-based line number.
std::vector<DatasetInstance> ingest(const std::string& path, Format format, const IngestOptions& options = {},
                                    IngestStats* stats = nullptr);
std::vector<DatasetInstance> ingest_text(const std::string& text, Format format, const IngestOptions& options = {},
                                         IngestStats* stats = nullptr);

// Sentences of a paragraph, split after '.', '!' or '?'.
std::vector<std::string> split_sentences(const std::string& text);

}  // namespace rvnli::metrics
