#ifndef SLANGVAR_NEED_MODELS_HPP
#define SLANGVAR_NEED_MODELS_HPP

#include <map>
#include <string>
#include <vector>

#include "slangvar/frequency.hpp"
#include "slangvar/inventory.hpp"
#include "slangvar/region.hpp"

namespace slangvar {

enum class NeedKind { form, semantic, context };
enum class NeedAggregation { sum, majority_vote };

struct NeedVariant {
  NeedKind kind = NeedKind::form;
  NeedAggregation aggregation = NeedAggregation::majority_vote;  // ignored for form
};

// One finite nonnegative score per region of the universe, kept in universe
// order so every consumer iterates deterministically.
struct RegionScores {
  std::vector<std::pair<Region, double>> scores;

  double at(const Region& r) const;
  void set(const Region& r, double v);
  static RegionScores zeros(const RegionList& universe);
};

// Argmax with the deterministic tie rule: a tie at the maximum resolves to US
// when US is among the tied regions, otherwise to the lexicographically
// smallest tied code.
Region argmax_region(const RegionScores& scores);

using FrequencyTablesByRegion = std::map<Region, FrequencyTable>;

// Scores every region of the universe for the sense at its emergence year.
// form: windowed frequency of the word itself. semantic: content words of the
// definition. context: content words of the usage sentence with the headword
// removed (throws inapplicable_error when the sense has no context).
// Sum aggregation adds windowed frequencies; majority vote counts, per
// region, the content words whose frequency is strictly maximal there.
RegionScores need_score(const NeedVariant& variant, const SenseEntry& sense,
                        const FrequencyTablesByRegion& tables, const NeedConfig& cfg,
                        const RegionList& universe, const StopwordSet& stopwords);

Region predict_need(const RegionScores& scores);

}  // namespace slangvar

#endif
