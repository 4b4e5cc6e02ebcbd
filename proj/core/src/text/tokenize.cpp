#include "rvnli/text/tokenize.hpp"

#include <algorithm>
#include <iterator>
#include <cctype>
#include <cstdio>

namespace rvnli::text {

namespace {

constexpr std::string_view kStopwords[] = {
    "a",     "an",    "the",   "and",   "or",    "but",   "if",     "then",  "is",    "are",   "was",   "were",
    "be",    "been",  "being", "am",    "to",    "of",    "in",     "on",    "at",    "by",    "for",   "with",
    "from",  "into",  "as",    "that",  "this",  "these", "those",  "it",    "its",   "they",  "them",  "their",
    "there", "some",  "every", "all",   "each",  "any",   "no",     "not",   "does",  "do",    "did",   "can",
    "could", "will",  "would", "should", "may",  "might", "must",   "has",   "have",  "had",   "so",    "such",
    "which", "who",   "whom",  "what",  "when",  "where", "therefore", "thing", "things", "something", "someone", "also"};

bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

}  // namespace

std::vector<std::string> tokenize(std::string_view s) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : s) {
    auto c = static_cast<unsigned char>(ch);
    if (std::isalnum(c)) {
      cur.push_back(static_cast<char>(std::tolower(c)));
    } else if (!cur.empty()) {
      out.push_back(std::move(cur));
      cur.clear();
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

bool is_stopword(std::string_view token) {
  return std::find(std::begin(kStopwords), std::end(kStopwords), token) != std::end(kStopwords);
}

std::string stem(std::string_view t) {
  std::string s(t);
  if (s.size() <= 3) return s;
  if (ends_with(s, "ies") && s.size() > 4) return s.substr(0, s.size() - 3) + "y";
  if (ends_with(s, "sses")) return s.substr(0, s.size() - 2);
  if (ends_with(s, "ss") || ends_with(s, "us") || ends_with(s, "is")) return s;
  if (ends_with(s, "es") && (ends_with(s, "ches") || ends_with(s, "shes") || ends_with(s, "xes")))
    return s.substr(0, s.size() - 2);
  if (ends_with(s, "s")) return s.substr(0, s.size() - 1);
  return s;
}

std::vector<std::string> content_tokens(std::string_view s) {
  std::vector<std::string> out;
  for (auto& t : tokenize(s)) {
    if (t.size() < 2 || is_stopword(t)) continue;
    // Variable-like names: e1, x2.
    if (t.size() <= 3 && std::isalpha(static_cast<unsigned char>(t[0])) &&
        std::all_of(t.begin() + 1, t.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
      continue;
    out.push_back(stem(t));
  }
  return out;
}

std::string split_camel(std::string_view id) {
  std::string out;
  for (std::size_t i = 0; i < id.size(); ++i) {
    auto c = static_cast<unsigned char>(id[i]);
    if (c == '_') {
      if (!out.empty() && out.back() != ' ') out.push_back(' ');
      continue;
    }
    bool boundary = std::isupper(c) && i > 0 &&
                    (std::islower(static_cast<unsigned char>(id[i - 1])) ||
                     (i + 1 < id.size() && std::islower(static_cast<unsigned char>(id[i + 1])) &&
                      std::isupper(static_cast<unsigned char>(id[i - 1]))));
    if (boundary && !out.empty() && out.back() != ' ') out.push_back(' ');
    out.push_back(static_cast<char>(std::tolower(c)));
  }
  return out;
}

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::string normalize_space(std::string_view s) {
  std::string out;
  bool space = false;
  for (char c : s) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      space = !out.empty();
    } else {
      if (space) out.push_back(' ');
      space = false;
      out.push_back(c);
    }
  }
  return out;
}

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

}  // namespace rvnli::text
