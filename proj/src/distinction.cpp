#include "slangvar/distinction.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "slangvar/error.hpp"
#include "slangvar/optimize.hpp"

namespace slangvar {

double kernel_sim(const EmbeddingVector& a, const EmbeddingVector& b, const KernelParams& params) {
  return std::exp(-squared_distance(a, b) / params.h);
}

double chaining_score(ChainingVariant variant, const EmbeddingVector& query,
                      const std::vector<EmbeddingVector>& history, const KernelParams& params) {
  if (history.empty()) throw data_error("chaining_score: empty history");
  switch (variant) {
    case ChainingVariant::onenn: {
      double best = 0.0;
      for (const auto& member : history) {
        best = std::max(best, kernel_sim(query, member, params));
      }
      return best;
    }
    case ChainingVariant::exemplar: {
      double total = 0.0;
      for (const auto& member : history) {
        total += kernel_sim(query, member, params);
      }
      return total / static_cast<double>(history.size());
    }
    case ChainingVariant::prototype: {
      EmbeddingVector mean(query.size(), 0.0);
      for (const auto& member : history) {
        if (member.size() != mean.size()) {
          throw data_error("chaining_score: dimension mismatch in history");
        }
        for (std::size_t i = 0; i < mean.size(); ++i) mean[i] += member[i];
      }
      for (double& v : mean) v /= static_cast<double>(history.size());
      return kernel_sim(query, mean, params);
    }
  }
  throw config_error("chaining_score: bad variant");
}

const std::vector<HistoryMember>& HistoricalSenseSet::members(const Region& r) const {
  for (const auto& [region, list] : per_region) {
    if (region == r) return list;
  }
  throw config_error("HistoricalSenseSet: region '" + r.code + "' not tracked");
}

std::size_t HistoricalSenseSet::nonempty_regions() const {
  std::size_t n = 0;
  for (const auto& [region, list] : per_region) {
    if (!list.empty()) ++n;
  }
  return n;
}

std::size_t HistoricalSenseSet::total_members() const {
  std::size_t n = 0;
  for (const auto& [region, list] : per_region) n += list.size();
  return n;
}

HistoricalSenseSet build_history(const WordEntry& word, int cutoff_year,
                                 const RegionList& universe, bool include_shared,
                                 std::optional<int> memory_years,
                                 const EmbeddingStore& embeddings) {
  HistoricalSenseSet hist;
  hist.word = word.form;
  hist.cutoff_year = cutoff_year;
  hist.include_shared = include_shared;
  hist.memory_years = memory_years;
  hist.per_region.reserve(universe.size());
  for (const auto& r : universe) hist.per_region.emplace_back(r, std::vector<HistoryMember>{});

  for (const auto& sense : word.senses) {
    if (sense.emergence_year >= cutoff_year) continue;
    if (memory_years && cutoff_year - sense.emergence_year > *memory_years) continue;
    // Identity from references strictly before the cutoff.
    const RegionList identity = regional_identity_at(sense, cutoff_year - 1, universe);
    if (identity.empty()) continue;
    if (identity.size() > 1 && !include_shared) continue;

    HistoryMember member{sense.id, sense.emergence_year, embeddings.require(sense.id)};
    for (auto& [region, list] : hist.per_region) {
      if (contains(identity, region)) list.push_back(member);
    }
  }
  return hist;
}

namespace {

struct TrainPoint {
  const HistoryMember* member;
  std::size_t region_idx;  // index into hist.per_region
};

// Precomputed squared distances from one training point to the members of
// each region's restricted inner history.
struct PointDistances {
  std::size_t label_idx;
  std::vector<std::vector<double>> sq_dists;   // per region
  std::vector<std::vector<double>> proto_sq;   // per region, singleton: d^2 to mean
};

double loss_at(const std::vector<PointDistances>& points, ChainingVariant variant, double h) {
  double loss = 0.0;
  for (const auto& point : points) {
    double total = 0.0;
    double label_score = 0.0;
    for (std::size_t r = 0; r < point.sq_dists.size(); ++r) {
      double score = 0.0;
      switch (variant) {
        case ChainingVariant::onenn: {
          double best = 0.0;
          for (const double d2 : point.sq_dists[r]) best = std::max(best, std::exp(-d2 / h));
          score = best;
          break;
        }
        case ChainingVariant::exemplar: {
          double sum = 0.0;
          for (const double d2 : point.sq_dists[r]) sum += std::exp(-d2 / h);
          score = sum / static_cast<double>(point.sq_dists[r].size());
          break;
        }
        case ChainingVariant::prototype:
          score = std::exp(-point.proto_sq[r][0] / h);
          break;
      }
      total += score;
      if (r == point.label_idx) label_score = score;
    }
    // Extreme widths can underflow every similarity to zero; such h are
    // unusable and read as infinite loss.
    if (!(label_score > 0.0) || !(total > 0.0)) {
      return std::numeric_limits<double>::infinity();
    }
    loss += -std::log(label_score / total);
  }
  return loss;
}

}  // namespace

KernelParams train_kernel_width(const HistoricalSenseSet& hist, ChainingVariant variant,
                                const RegionList& universe) {
  if (hist.per_region.size() != universe.size()) {
    throw config_error("train_kernel_width: history does not cover the universe");
  }
  // Flatten to (member, label) points ordered by (emergence_year, id); copies
  // of a shared sense keep universe order on ties.
  std::vector<TrainPoint> points;
  for (std::size_t r = 0; r < hist.per_region.size(); ++r) {
    for (const auto& member : hist.per_region[r].second) {
      points.push_back(TrainPoint{&member, r});
    }
  }
  std::stable_sort(points.begin(), points.end(), [](const TrainPoint& a, const TrainPoint& b) {
    if (a.member->emergence_year != b.member->emergence_year) {
      return a.member->emergence_year < b.member->emergence_year;
    }
    return a.member->id < b.member->id;
  });

  const std::size_t n_regions = hist.per_region.size();
  std::vector<PointDistances> trainable;
  for (const auto& point : points) {
    const int t = point.member->emergence_year;
    std::vector<std::vector<const EmbeddingVector*>> inner(n_regions);
    for (const auto& other : points) {
      if (other.member->emergence_year >= t) continue;
      if (hist.memory_years && t - other.member->emergence_year > *hist.memory_years) continue;
      inner[other.region_idx].push_back(&other.member->embedding);
    }
    const bool all_present = std::all_of(inner.begin(), inner.end(),
                                         [](const auto& v) { return !v.empty(); });
    if (!all_present) continue;

    PointDistances pd;
    pd.label_idx = point.region_idx;
    pd.sq_dists.resize(n_regions);
    pd.proto_sq.resize(n_regions);
    for (std::size_t r = 0; r < n_regions; ++r) {
      EmbeddingVector mean(point.member->embedding.size(), 0.0);
      for (const EmbeddingVector* emb : inner[r]) {
        pd.sq_dists[r].push_back(squared_distance(point.member->embedding, *emb));
        for (std::size_t i = 0; i < mean.size(); ++i) mean[i] += (*emb)[i];
      }
      for (double& v : mean) v /= static_cast<double>(inner[r].size());
      pd.proto_sq[r].push_back(squared_distance(point.member->embedding, mean));
    }
    trainable.push_back(std::move(pd));
  }

  if (trainable.empty()) return KernelParams{};

  ScalarMinimizeOptions options;
  options.extra_candidates = {KernelParams::kDefault};
  options.tolerance = 1e-5;
  const auto result = minimize_scalar_bounded(
      [&](double h) { return loss_at(trainable, variant, h); }, KernelParams::kLowerBound,
      KernelParams::kUpperBound, options);
  return KernelParams{result.x};
}

RegionScores distinction_scores(ChainingVariant variant, const EmbeddingVector& query,
                                const HistoricalSenseSet& hist, const KernelParams& params) {
  // Work with log scores and shift by their maximum before exponentiating:
  // small kernel widths would otherwise underflow every region to zero.
  // The shift is a common factor, so argmax and normalized ratios are those
  // of the raw chaining scores.
  constexpr double kEmpty = -std::numeric_limits<double>::infinity();
  std::vector<double> log_scores;
  log_scores.reserve(hist.per_region.size());
  for (const auto& [region, list] : hist.per_region) {
    if (list.empty()) {
      log_scores.push_back(kEmpty);
      continue;
    }
    switch (variant) {
      case ChainingVariant::onenn: {
        double min_sq = std::numeric_limits<double>::infinity();
        for (const auto& member : list) {
          min_sq = std::min(min_sq, squared_distance(query, member.embedding));
        }
        log_scores.push_back(-min_sq / params.h);
        break;
      }
      case ChainingVariant::exemplar: {
        std::vector<double> exponents;
        exponents.reserve(list.size());
        double top = kEmpty;
        for (const auto& member : list) {
          exponents.push_back(-squared_distance(query, member.embedding) / params.h);
          top = std::max(top, exponents.back());
        }
        double total = 0.0;
        for (const double e : exponents) total += std::exp(e - top);
        log_scores.push_back(top + std::log(total) - std::log(static_cast<double>(list.size())));
        break;
      }
      case ChainingVariant::prototype: {
        EmbeddingVector mean(query.size(), 0.0);
        for (const auto& member : list) {
          if (member.embedding.size() != mean.size()) {
            throw data_error("distinction_scores: dimension mismatch in history");
          }
          for (std::size_t i = 0; i < mean.size(); ++i) mean[i] += member.embedding[i];
        }
        for (double& v : mean) v /= static_cast<double>(list.size());
        log_scores.push_back(-squared_distance(query, mean) / params.h);
        break;
      }
    }
  }

  double top = kEmpty;
  for (const double s : log_scores) top = std::max(top, s);

  RegionScores out;
  for (std::size_t r = 0; r < hist.per_region.size(); ++r) {
    const double score = log_scores[r] == kEmpty ? 0.0 : std::exp(log_scores[r] - top);
    out.scores.emplace_back(hist.per_region[r].first, score);
  }
  return out;
}

Region predict_distinction(ChainingVariant variant, const EmbeddingVector& query,
                           const HistoricalSenseSet& hist, const KernelParams& params) {
  const std::size_t nonempty = hist.nonempty_regions();
  if (nonempty == 0) throw data_error("predict_distinction: no historical senses");
  if (nonempty == 1) {
    for (const auto& [region, list] : hist.per_region) {
      if (!list.empty()) return region;
    }
  }
  return argmax_region(distinction_scores(variant, query, hist, params));
}

RegionScores normalize_scores(const RegionScores& scores) {
  double total = 0.0;
  for (const auto& [region, value] : scores.scores) {
    if (!(value >= 0.0) || !std::isfinite(value)) {
      throw data_error("normalize_scores: scores must be finite and nonnegative");
    }
    total += value;
  }
  if (total <= 0.0) throw data_error("normalize_scores: zero-sum score map");
  RegionScores out = scores;
  for (auto& [region, value] : out.scores) value /= total;
  return out;
}

Region hybrid_predict(const RegionScores& need, const RegionScores& distinction) {
  if (need.scores.size() != distinction.scores.size()) {
    throw config_error("hybrid_predict: score maps cover different universes");
  }
  const RegionScores n = normalize_scores(need);
  const RegionScores d = normalize_scores(distinction);
  RegionScores product;
  for (std::size_t i = 0; i < n.scores.size(); ++i) {
    if (n.scores[i].first != d.scores[i].first) {
      throw config_error("hybrid_predict: score maps cover different universes");
    }
    product.scores.emplace_back(n.scores[i].first, n.scores[i].second * d.scores[i].second);
  }
  return argmax_region(product);
}

}  // namespace slangvar
