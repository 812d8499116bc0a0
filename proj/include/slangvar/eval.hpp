#ifndef SLANGVAR_EVAL_HPP
#define SLANGVAR_EVAL_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "slangvar/distinction.hpp"
#include "slangvar/embedding.hpp"
#include "slangvar/frequency.hpp"
#include "slangvar/inventory.hpp"
#include "slangvar/need_models.hpp"
#include "slangvar/region.hpp"
#include "slangvar/rng.hpp"

namespace slangvar {

struct EvalConfig {
  int k = 3;  // minimum exclusively-regional senses per region, >= 3
  RegionList universe{Region("US"), Region("UK")};
  int history_start = 1800;
  int test_start = 1900;
  int repeats = 20;
  std::uint64_t rng_seed = 1;
  bool include_shared = false;
  std::optional<int> memory_years;

  void validate() const;
};

// Everything an experiment reads. Immutable once loaded; safe to share
// across worker threads.
struct Resources {
  Inventory inventory;
  EmbeddingStore embeddings;
  FrequencyTablesByRegion tables;
  StopwordSet stopwords;
  NeedConfig need_cfg;
};

// A word's post-test_start senses that carry a single-region label, ordered
// by (emergence_year, id). Senses stay in the word for history purposes
// whether or not they are ever sampled for prediction.
struct TestSense {
  std::size_t sense_idx = 0;  // into word.senses
  Region label;
};

struct TestSeries {
  WordEntry word;
  std::vector<TestSense> test_senses;

  const SenseEntry& sense_at(std::size_t i) const { return word.senses[test_senses[i].sense_idx]; }
};

// Words with at least cfg.k senses per universe region whose final identity
// is exactly that region and whose emergence year is after history_start.
// Throws data_error naming k when nothing qualifies.
std::vector<WordEntry> select_words(const Inventory& inv, const EvalConfig& cfg);

std::vector<TestSeries> build_test_series(const std::vector<WordEntry>& words,
                                          const EvalConfig& cfg);

// What a run evaluates: a need model, a chaining classifier, a baseline, or
// a need x chaining hybrid.
struct ModelSpec {
  enum class Family { need, chaining, baseline, hybrid };

  Family family = Family::chaining;
  NeedVariant need;
  ChainingVariant chain = ChainingVariant::exemplar;
  BaselineKind baseline = BaselineKind::sense_frequency;

  // Canonical names: form_need, semantic_need, context_need, sense_freq,
  // lda, logreg, onenn, exemplar, prototype, hybrid:<need>:<chain>.
  // '-' is accepted for '_'. Aggregation applies to semantic/context need.
  static ModelSpec parse(const std::string& token, NeedAggregation agg);
  std::string name() const;

  bool uses_need() const { return family == Family::need || family == Family::hybrid; }
  bool uses_history() const { return family != Family::need; }
};

struct AccuracyReport {
  std::string model;
  std::string slice_type = "all";  // all | decade | memory
  std::string slice = "-";
  int repeats = 0;             // repeats that produced at least one prediction
  std::size_t sample_size = 0; // balanced test examples per repeat
  std::vector<std::pair<Region, double>> per_region_mean;  // percent, NaN when unseen
  double overall_mean = 0.0;   // percent
  double overall_std = 0.0;    // across repeats
  std::size_t excluded_no_context = 0;   // totals across repeats
  std::size_t fallback_predictions = 0;  // predictions made with empty history
};

// Per-word balanced subsample: each region's eligible test senses are cut
// down to the smallest per-region count, without replacement. Returns
// selected indices into series.test_senses, ascending.
std::vector<std::size_t> balanced_subsample_word(const TestSeries& series,
                                                 const RegionList& universe, SplitMix64& rng);

// One repeat's sample across all series; streams are split per (repeat,
// word) so results do not depend on evaluation order.
std::vector<std::vector<std::size_t>> balanced_subsample(const std::vector<TestSeries>& series_set,
                                                         const EvalConfig& cfg, int repeat);

// Runs every model on identical balanced samples for cfg.repeats repeats and
// aggregates mean/std accuracies. Validates resources up front.
std::vector<AccuracyReport> run_experiment(const std::vector<ModelSpec>& models,
                                           const std::vector<TestSeries>& series_set,
                                           const EvalConfig& cfg, const Resources& res,
                                           int jobs = 1);

// run_experiment once per memory threshold; rows carry slice_type "memory".
std::vector<AccuracyReport> memory_sweep(const std::vector<int>& thresholds,
                                         const std::vector<ModelSpec>& models,
                                         const std::vector<TestSeries>& series_set,
                                         const EvalConfig& cfg, const Resources& res,
                                         int jobs = 1);

// Groups test senses by decade of emergence and balances within each decade
// by subsampling the more frequent region; rows carry slice_type "decade".
// Decades missing a region entirely are emitted with size 0 and no accuracy.
std::vector<AccuracyReport> decade_analysis(const std::vector<ModelSpec>& models,
                                            const std::vector<TestSeries>& series_set,
                                            const EvalConfig& cfg, const Resources& res,
                                            int jobs = 1);

}  // namespace slangvar

#endif
