#ifndef SLANGVAR_EMBEDDING_HPP
#define SLANGVAR_EMBEDDING_HPP

#include <cstddef>
#include <iosfwd>
#include <string>
#include <unordered_map>
#include <vector>

namespace slangvar {

using EmbeddingVector = std::vector<double>;

// Sum of squared componentwise differences. Throws on dimension mismatch.
double squared_distance(const EmbeddingVector& a, const EmbeddingVector& b);

// Precomputed definition-sentence embeddings keyed by sense id.
class EmbeddingStore {
 public:
  // TSV rows `id<TAB>v1 v2 ... vD`. Every vector must be finite and share one
  // dimension; violations are fatal and name the offending id.
  static EmbeddingStore load(std::istream& stream, bool l2_normalize = false);

  // Throws config_error when the id is absent: experiments must never
  // silently skip a sense.
  const EmbeddingVector& require(const std::string& id) const;

  const EmbeddingVector* find(const std::string& id) const;
  void insert(const std::string& id, EmbeddingVector vec);

  std::size_t size() const { return vectors_.size(); }
  std::size_t dim() const { return dim_; }
  bool empty() const { return vectors_.empty(); }

  void serialize(std::ostream& out) const;

 private:
  std::unordered_map<std::string, EmbeddingVector> vectors_;
  std::vector<std::string> order_;  // insertion order, for stable serialization
  std::size_t dim_ = 0;
};

}  // namespace slangvar

#endif
