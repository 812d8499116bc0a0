#include "slangvar/need_models.hpp"

#include <algorithm>

#include "slangvar/error.hpp"
#include "slangvar/text.hpp"

namespace slangvar {

double RegionScores::at(const Region& r) const {
  for (const auto& [region, value] : scores) {
    if (region == r) return value;
  }
  throw config_error("RegionScores: unknown region '" + r.code + "'");
}

void RegionScores::set(const Region& r, double v) {
  for (auto& [region, value] : scores) {
    if (region == r) {
      value = v;
      return;
    }
  }
  scores.emplace_back(r, v);
}

RegionScores RegionScores::zeros(const RegionList& universe) {
  RegionScores out;
  out.scores.reserve(universe.size());
  for (const auto& r : universe) out.scores.emplace_back(r, 0.0);
  return out;
}

Region argmax_region(const RegionScores& scores) {
  if (scores.scores.empty()) throw config_error("argmax_region: empty score map");
  double best = scores.scores.front().second;
  for (const auto& [region, value] : scores.scores) {
    if (value > best) best = value;
  }
  const Region us("US");
  const Region* winner = nullptr;
  for (const auto& [region, value] : scores.scores) {
    if (value != best) continue;
    if (region == us) return region;
    if (winner == nullptr || region < *winner) winner = &region;
  }
  return *winner;
}

namespace {

const FrequencyTable& table_for(const FrequencyTablesByRegion& tables, const Region& r) {
  const auto it = tables.find(r);
  if (it == tables.end()) {
    throw config_error("no frequency table loaded for region '" + r.code + "'");
  }
  return it->second;
}

std::vector<std::string> score_tokens(const NeedVariant& variant, const SenseEntry& sense,
                                      const StopwordSet& stopwords) {
  switch (variant.kind) {
    case NeedKind::form:
      return {sense.word};
    case NeedKind::semantic:
      return content_words(sense.definition, stopwords);
    case NeedKind::context: {
      if (!sense.context) {
        throw inapplicable_error("sense '" + sense.id + "' has no usage context");
      }
      std::vector<std::string> tokens = content_words(*sense.context, stopwords);
      const std::string headword = lowercase(sense.word);
      std::erase(tokens, headword);
      return tokens;
    }
  }
  throw config_error("need_score: bad variant");
}

}  // namespace

RegionScores need_score(const NeedVariant& variant, const SenseEntry& sense,
                        const FrequencyTablesByRegion& tables, const NeedConfig& cfg,
                        const RegionList& universe, const StopwordSet& stopwords) {
  if (universe.empty()) throw config_error("need_score: empty universe");
  const std::vector<std::string> tokens = score_tokens(variant, sense, stopwords);
  const int t = sense.emergence_year;

  RegionScores out = RegionScores::zeros(universe);
  const bool vote = variant.kind != NeedKind::form &&
                    variant.aggregation == NeedAggregation::majority_vote;

  if (!vote) {
    for (std::size_t i = 0; i < universe.size(); ++i) {
      double total = 0.0;
      const FrequencyTable& table = table_for(tables, universe[i]);
      for (const auto& token : tokens) {
        total += windowed_frequency(table, token, t, cfg);
      }
      out.scores[i].second = total;
    }
    return out;
  }

  for (auto& [region, value] : out.scores) value = cfg.vote_smoothing;
  std::vector<double> freqs(universe.size());
  for (const auto& token : tokens) {
    for (std::size_t i = 0; i < universe.size(); ++i) {
      freqs[i] = windowed_frequency(table_for(tables, universe[i]), token, t, cfg);
    }
    const double top = *std::max_element(freqs.begin(), freqs.end());
    std::size_t winners = 0;
    std::size_t winner_idx = 0;
    for (std::size_t i = 0; i < freqs.size(); ++i) {
      if (freqs[i] == top) {
        ++winners;
        winner_idx = i;
      }
    }
    // A word tied across regions casts no vote.
    if (winners == 1) {
      out.scores[winner_idx].second += cfg.weighted_vote ? top : 1.0;
    }
  }
  return out;
}

Region predict_need(const RegionScores& scores) { return argmax_region(scores); }

}  // namespace slangvar
