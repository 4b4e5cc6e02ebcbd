#include "rvnli/metrics/dataset.hpp"

#include <algorithm>
#include <fstream>
#include <json.hpp>
#include <regex>
#include <sstream>

#include "rvnli/error.hpp"
#include "rvnli/text/tokenize.hpp"
#include "rvnli/tree/tree.hpp"

namespace rvnli::metrics {

using nlohmann::json;

std::string_view to_string(Label l) noexcept {
  switch (l) {
    case Label::Entailment: return "entailment";
    case Label::Contradiction: return "contradiction";
    case Label::Unknown: return "unknown";
  }
  return "?";
}

std::optional<Label> label_from_string(std::string_view s) noexcept {
  std::string v = text::lower(text::trim(s));
  if (v == "entailment" || v == "true" || v == "proved") return Label::Entailment;
  if (v == "contradiction" || v == "false" || v == "disproved") return Label::Contradiction;
  if (v == "unknown" || v == "uncertain" || v == "neutral") return Label::Unknown;
  return std::nullopt;
}

std::string_view to_string(Format f) noexcept {
  switch (f) {
    case Format::GenericJsonl: return "generic-jsonl";
    case Format::ProofWriter: return "proofwriter";
    case Format::ProntoQA: return "prontoqa";
    case Format::Folio: return "folio";
    case Format::EntailmentBank: return "entailmentbank";
  }
  return "?";
}

Format format_from_string(std::string_view s) {
  for (auto f : {Format::GenericJsonl, Format::ProofWriter, Format::ProntoQA, Format::Folio, Format::EntailmentBank})
    if (to_string(f) == s) return f;
  throw UnknownFormat("unknown dataset format '" + std::string(s) + "'");
}

std::vector<std::string> split_sentences(const std::string& text) {
  std::vector<std::string> out;
  std::string cur;
  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (c == '\n') c = ' ';
    cur += c;
    bool end = (c == '.' || c == '!' || c == '?') && (i + 1 == text.size() || std::isspace(static_cast<unsigned char>(text[i + 1])));
    if (end) {
      auto s = text::normalize_space(cur);
      if (!s.empty()) out.push_back(s);
      cur.clear();
    }
  }
  auto s = text::normalize_space(cur);
  if (!s.empty()) out.push_back(s);
  return out;
}

namespace {

struct Row {
  std::size_t line;
  json value;
};

std::vector<Row> jsonl_rows(const std::string& text) {
  std::vector<Row> rows;
  std::istringstream in(text);
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (text::trim(line).empty()) continue;
    try {
      rows.push_back({n, json::parse(line)});
    } catch (const json::parse_error& e) {
      throw FormatError(n, std::string("invalid JSON: ") + e.what());
    }
    if (!rows.back().value.is_object()) throw FormatError(n, "expected a JSON object");
  }
  return rows;
}

std::string str(const json& j, const char* key, std::size_t line) {
  auto it = j.find(key);
  if (it == j.end() || !it->is_string()) throw FormatError(line, std::string("missing string field '") + key + "'");
  return it->get<std::string>();
}

Label label_of(const json& v, std::size_t line) {
  if (v.is_boolean()) return v.get<bool>() ? Label::Entailment : Label::Contradiction;
  if (v.is_string())
    if (auto l = label_from_string(v.get<std::string>())) return *l;
  throw FormatError(line, "unrecognised label " + v.dump());
}

std::optional<int> depth_of(const json& j, std::initializer_list<const char*> keys, std::size_t line) {
  for (const char* k : keys) {
    auto it = j.find(k);
    if (it == j.end() || it->is_null()) continue;
    if (!it->is_number_integer()) throw FormatError(line, std::string("field '") + k + "' must be an integer");
    int d = it->get<int>();
    if (d >= 1 && d <= 5) return d;
    return std::nullopt;
  }
  return std::nullopt;
}

std::vector<std::string> string_list(const json& v, std::size_t line, const char* what) {
  std::vector<std::string> out;
  if (v.is_string()) {
    std::istringstream in(v.get<std::string>());
    std::string s;
    while (std::getline(in, s))
      if (!text::trim(s).empty()) out.push_back(text::trim(s));
    return out;
  }
  if (!v.is_array()) throw FormatError(line, std::string("'") + what + "' must be a list of strings");
  for (const auto& e : v) {
    if (!e.is_string()) throw FormatError(line, std::string("'") + what + "' must be a list of strings");
    out.push_back(e.get<std::string>());
  }
  return out;
}

std::string row_id(const json& j, std::initializer_list<const char*> keys, std::size_t line) {
  for (const char* k : keys) {
    auto it = j.find(k);
    if (it == j.end()) continue;
    if (it->is_string()) return it->get<std::string>();
    if (it->is_number_integer()) return std::to_string(it->get<long long>());
  }
  return "row" + std::to_string(line);
}

void generic(const Row& r, std::vector<DatasetInstance>& out) {
  DatasetInstance d;
  d.id = row_id(r.value, {"id"}, r.line);
  if (!r.value.contains("premises")) throw FormatError(r.line, "missing field 'premises'");
  d.premises = string_list(r.value["premises"], r.line, "premises");
  d.hypothesis = str(r.value, "hypothesis", r.line);
  if (!r.value.contains("label")) throw FormatError(r.line, "missing field 'label'");
  d.label = label_of(r.value["label"], r.line);
  d.gold_depth = depth_of(r.value, {"gold_depth", "depth"}, r.line);
  if (auto it = r.value.find("references"); it != r.value.end()) {
    if (!it->is_object()) throw FormatError(r.line, "'references' must be an object");
    for (const auto& [k, v] : it->items()) {
      if (!v.is_string()) throw FormatError(r.line, "reference formalisations must be strings");
      d.references[k] = v.get<std::string>();
    }
  }
  out.push_back(std::move(d));
}

void proofwriter(const Row& r, std::vector<DatasetInstance>& out) {
  std::string id = row_id(r.value, {"id"}, r.line);
  auto premises = split_sentences(str(r.value, "theory", r.line));
  auto qs = r.value.find("questions");
  if (qs == r.value.end() || !(qs->is_object() || qs->is_array())) throw FormatError(r.line, "missing 'questions'");
  std::size_t k = 0;
  for (const auto& item : qs->items()) {
    ++k;
    const json& q = item.value();
    if (!q.is_object()) throw FormatError(r.line, "question entries must be objects");
    DatasetInstance d;
    std::string qid = qs->is_object() ? item.key() : row_id(q, {"id"}, k);
    d.id = id + "-" + qid;
    d.premises = premises;
    d.hypothesis = q.contains("question") ? str(q, "question", r.line) : str(q, "text", r.line);
    const json* label = q.contains("answer") ? &q["answer"] : q.contains("label") ? &q["label"] : nullptr;
    if (!label) throw FormatError(r.line, "question " + qid + " has no answer");
    d.label = label_of(*label, r.line);
    d.gold_depth = depth_of(q, {"QDep", "depth"}, r.line);
    out.push_back(std::move(d));
  }
}

DatasetInstance prontoqa_example(const json& ex, const std::string& id, std::size_t line) {
  DatasetInstance d;
  d.id = id;
  d.premises = split_sentences(str(ex, "question", line));
  static const std::regex prefix(R"(^\s*(true or false|prove)\s*:\s*)", std::regex::icase);
  d.hypothesis = text::trim(std::regex_replace(str(ex, "query", line), prefix, ""));
  if (!ex.contains("answer")) throw FormatError(line, "missing field 'answer'");
  d.label = label_of(ex["answer"], line);
  d.gold_depth = depth_of(ex, {"depth", "hops"}, line);
  return d;
}

void prontoqa(const std::string& text, std::vector<DatasetInstance>& out) {
  // Either the released object keyed by example name, or one test example per line.
  json whole;
  bool single = false;
  try {
    whole = json::parse(text);
    single = whole.is_object() && !whole.contains("question");
  } catch (const json::parse_error&) {
  }
  if (single) {
    for (const auto& [key, v] : whole.items()) {
      const json& ex = v.contains("test_example") ? v["test_example"] : v;
      if (!ex.is_object()) throw FormatError(1, "example " + key + " is not an object");
      out.push_back(prontoqa_example(ex, key, 1));
    }
    return;
  }
  for (const auto& r : jsonl_rows(text)) {
    const json& ex = r.value.contains("test_example") ? r.value["test_example"] : r.value;
    out.push_back(prontoqa_example(ex, row_id(r.value, {"id"}, r.line), r.line));
  }
}

void folio(const Row& r, std::vector<DatasetInstance>& out) {
  DatasetInstance d;
  d.id = row_id(r.value, {"example_id", "id"}, r.line);
  if (!r.value.contains("premises")) throw FormatError(r.line, "missing field 'premises'");
  d.premises = string_list(r.value["premises"], r.line, "premises");
  d.hypothesis = str(r.value, "conclusion", r.line);
  if (!r.value.contains("label")) throw FormatError(r.line, "missing field 'label'");
  d.label = label_of(r.value["label"], r.line);
  out.push_back(std::move(d));
}

void entailmentbank(const Row& r, std::vector<DatasetInstance>& out) {
  DatasetInstance d;
  d.id = row_id(r.value, {"id"}, r.line);
  d.hypothesis = str(r.value, "hypothesis", r.line);
  std::map<int, std::string> sents;
  static const std::regex sent_key(R"(sent(\d+))");
  if (auto m = r.value.find("meta"); m != r.value.end() && m->contains("triples")) {
    for (const auto& [k, v] : (*m)["triples"].items()) {
      std::smatch sm;
      if (!std::regex_match(k, sm, sent_key) || !v.is_string()) throw FormatError(r.line, "bad triple key " + k);
      sents[std::stoi(sm[1])] = v.get<std::string>();
    }
  } else if (r.value.contains("context")) {
    static const std::regex part(R"(sent(\d+)\s*:\s*(.*?)(?=\s*sent\d+\s*:|$))");
    std::string ctx = str(r.value, "context", r.line);
    for (auto it = std::sregex_iterator(ctx.begin(), ctx.end(), part); it != std::sregex_iterator(); ++it)
      sents[std::stoi((*it)[1])] = text::trim((*it)[2].str());
  } else {
    throw FormatError(r.line, "missing 'meta.triples' or 'context'");
  }
  for (const auto& [k, s] : sents) d.premises.push_back(s);
  d.label = Label::Entailment;
  d.gold_depth = depth_of(r.value, {"depth_of_proof", "depth"}, r.line);
  out.push_back(std::move(d));
}

}  // namespace

std::vector<DatasetInstance> ingest_text(const std::string& text, Format format, const IngestOptions& options,
                                         IngestStats* stats) {
  std::vector<DatasetInstance> all;
  if (format == Format::ProntoQA) {
    prontoqa(text, all);
  } else {
    for (const auto& r : jsonl_rows(text)) {
      switch (format) {
        case Format::GenericJsonl: generic(r, all); break;
        case Format::ProofWriter: proofwriter(r, all); break;
        case Format::Folio: folio(r, all); break;
        case Format::EntailmentBank: entailmentbank(r, all); break;
        case Format::ProntoQA: break;
      }
    }
  }
  IngestStats st;
  st.rows = all.size();
  std::vector<DatasetInstance> out;
  for (auto& d : all) {
    if (options.refinement_mode && d.label == Label::Unknown) {
      ++st.dropped_unknown;
      continue;
    }
    out.push_back(std::move(d));
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const DatasetInstance& a, const DatasetInstance& b) { return tree::natural_less(a.id, b.id); });
  if (stats) *stats = st;
  return out;
}

std::vector<DatasetInstance> ingest(const std::string& path, Format format, const IngestOptions& options,
                                    IngestStats* stats) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open dataset " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ingest_text(ss.str(), format, options, stats);
}

}  // namespace rvnli::metrics
