#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>

namespace rvnli::text {

// Sparse, L2-normalised vector.
using SparseVector = std::map<std::uint32_t, double>;

double cosine(const SparseVector& a, const SparseVector& b);

class Embedder {
 public:
  virtual ~Embedder() = default;
  virtual std::string name() const = 0;
  virtual SparseVector embed(std::string_view text) const = 0;
};

// Binary presence of content tokens hashed into `dimension` buckets, L2-normalised.
class HashedBagOfWords final : public Embedder {
 public:
  explicit HashedBagOfWords(std::uint32_t dimension = 1u << 20) : dimension_(dimension) {}
  std::string name() const override { return "hashed-bow"; }
  SparseVector embed(std::string_view text) const override;

 private:
  std::uint32_t dimension_;
};

}  // namespace rvnli::text
