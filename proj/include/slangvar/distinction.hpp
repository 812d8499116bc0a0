#ifndef SLANGVAR_DISTINCTION_HPP
#define SLANGVAR_DISTINCTION_HPP

#include <optional>
#include <string>
#include <vector>

#include "slangvar/embedding.hpp"
#include "slangvar/inventory.hpp"
#include "slangvar/need_models.hpp"
#include "slangvar/region.hpp"

namespace slangvar {

// Kernel width of the negative-exponentiated-distance similarity.
struct KernelParams {
  static constexpr double kLowerBound = 0.01;
  static constexpr double kUpperBound = 100.0;
  static constexpr double kDefault = 1.0;

  double h = kDefault;
};

enum class ChainingVariant { onenn, exemplar, prototype };

// exp(-||a - b||^2 / h), in (0, 1].
double kernel_sim(const EmbeddingVector& a, const EmbeddingVector& b, const KernelParams& params);

// onenn: best similarity to any history member. exemplar: mean similarity.
// prototype: similarity to the componentwise mean of the history.
// The history must be nonempty.
double chaining_score(ChainingVariant variant, const EmbeddingVector& query,
                      const std::vector<EmbeddingVector>& history, const KernelParams& params);

struct HistoryMember {
  std::string id;
  int emergence_year = 0;
  EmbeddingVector embedding;
};

// The regional sense history a classifier sees when predicting at
// cutoff_year. Regional identity is resolved from references strictly before
// the cutoff; senses whose identity spans several regions appear under each
// of them when include_shared is set and are omitted otherwise.
struct HistoricalSenseSet {
  std::string word;
  int cutoff_year = 0;
  bool include_shared = false;
  std::optional<int> memory_years;
  std::vector<std::pair<Region, std::vector<HistoryMember>>> per_region;  // universe order

  const std::vector<HistoryMember>& members(const Region& r) const;
  std::size_t nonempty_regions() const;
  std::size_t total_members() const;
};

HistoricalSenseSet build_history(const WordEntry& word, int cutoff_year,
                                 const RegionList& universe, bool include_shared,
                                 std::optional<int> memory_years,
                                 const EmbeddingStore& embeddings);

// Fits the kernel width on the history treated as a time series: walking the
// members in emergence order, every member preceded by at least one member of
// each region contributes the negative log of its own region's normalized
// chaining score. Memory restriction applies to those inner histories as
// well. Minimization is a deterministic bounded scan-and-refine over
// [0.01, 100]; degenerate inputs return the default width 1.
KernelParams train_kernel_width(const HistoricalSenseSet& hist, ChainingVariant variant,
                                const RegionList& universe);

// Chaining scores per region; regions with empty history score 0.
RegionScores distinction_scores(ChainingVariant variant, const EmbeddingVector& query,
                                const HistoricalSenseSet& hist, const KernelParams& params);

// Single-region histories short-circuit to their label; otherwise argmax of
// the chaining scores with the US tie rule. Throws when every region is empty.
Region predict_distinction(ChainingVariant variant, const EmbeddingVector& query,
                           const HistoricalSenseSet& hist, const KernelParams& params);

enum class BaselineKind { sense_frequency, lda, logistic_regression };

// sense_frequency predicts the region with the most historical senses.
// The discriminative baselines train on the history embeddings at call time
// and fall back to sense_frequency when some region has no examples.
Region baseline_predict(BaselineKind kind, const EmbeddingVector& query,
                        const HistoricalSenseSet& hist, const RegionList& universe);

// Normalizes both score maps to sum 1 and returns the argmax of their
// product (US tie rule). Throws data_error on a zero-sum map.
Region hybrid_predict(const RegionScores& need, const RegionScores& distinction);
RegionScores normalize_scores(const RegionScores& scores);

}  // namespace slangvar

#endif
