#include "rvnli/text/embedding.hpp"

#include <cmath>
#include <set>

#include "rvnli/text/tokenize.hpp"

namespace rvnli::text {

double cosine(const SparseVector& a, const SparseVector& b) {
  double dot = 0, na = 0, nb = 0;
  for (const auto& [k, v] : a) {
    na += v * v;
    if (auto it = b.find(k); it != b.end()) dot += v * it->second;
  }
  for (const auto& [k, v] : b) nb += v * v;
  if (na == 0 || nb == 0) return 0.0;
  double c = dot / std::sqrt(na * nb);
  return c > 1.0 ? 1.0 : (c < 0.0 ? 0.0 : c);
}

SparseVector HashedBagOfWords::embed(std::string_view s) const {
  std::set<std::string> tokens;
  for (auto& t : content_tokens(s)) tokens.insert(t);
  SparseVector v;
  for (const auto& t : tokens) v[static_cast<std::uint32_t>(fnv1a(t) % dimension_)] += 1.0;
  double n = 0;
  for (const auto& kv : v) n += kv.second * kv.second;
  n = std::sqrt(n);
  for (auto& kv : v) kv.second /= n;
  return v;
}

}  // namespace rvnli::text
