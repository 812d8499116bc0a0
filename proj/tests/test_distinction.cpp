#include <doctest.h>

#include <cmath>

#include "slangvar/distinction.hpp"
#include "slangvar/error.hpp"
#include "slangvar/optimize.hpp"
#include "slangvar/rng.hpp"

#include "oracles.hpp"

using namespace slangvar;

namespace {

const Region kUS{"US"};
const Region kUK{"UK"};
const RegionList kUniverse{kUS, kUK};

EmbeddingVector random_vec(SplitMix64& rng, std::size_t dim, double scale = 1.0) {
  EmbeddingVector v(dim);
  for (double& x : v) x = scale * rng.next_normal();
  return v;
}

SenseEntry region_sense(const std::string& id, const Region& r, int year) {
  SenseEntry sense;
  sense.id = id;
  sense.emergence_year = year;
  sense.references = {Reference{r, year, "", std::nullopt}};
  return sense;
}

// A word with one US@1930 + UK@1940 shared sense, plus anchors so histories
// are never empty.
WordEntry shared_example_word(EmbeddingStore& store) {
  WordEntry word;
  word.form = "beast";
  SenseEntry shared;
  shared.id = "beast#0";
  shared.word = "beast";
  shared.emergence_year = 1930;
  shared.references = {Reference{kUS, 1930, "", std::nullopt},
                       Reference{kUK, 1940, "", std::nullopt}};
  word.senses.push_back(shared);
  word.senses.push_back(region_sense("beast#1", kUS, 1910));
  word.senses.push_back(region_sense("beast#2", kUK, 1912));
  store.insert("beast#0", {1.0, 0.0});
  store.insert("beast#1", {0.0, 1.0});
  store.insert("beast#2", {0.0, -1.0});
  return word;
}

HistoricalSenseSet manual_history(const std::vector<EmbeddingVector>& us,
                                  const std::vector<EmbeddingVector>& uk) {
  HistoricalSenseSet hist;
  hist.word = "w";
  hist.cutoff_year = 2000;
  hist.per_region.resize(2);
  hist.per_region[0].first = kUS;
  hist.per_region[1].first = kUK;
  int year = 1900;
  int id = 0;
  for (const auto& e : us) {
    hist.per_region[0].second.push_back(HistoryMember{"us#" + std::to_string(id++), year++, e});
  }
  for (const auto& e : uk) {
    hist.per_region[1].second.push_back(HistoryMember{"uk#" + std::to_string(id++), year++, e});
  }
  return hist;
}

}  // namespace

TEST_CASE("kernel similarity closed forms") {
  const KernelParams h1{1.0};
  CHECK(kernel_sim({1.0, 2.0}, {1.0, 2.0}, h1) == 1.0);
  CHECK(kernel_sim({0.0}, {1.0}, h1) == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
  const KernelParams h4{4.0};
  CHECK(kernel_sim({0.0}, {2.0}, h4) == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
}

TEST_CASE("kernel matches direct formula evaluation on random pairs") {
  SplitMix64 rng(61);
  const KernelParams params{2.5};
  for (int trial = 0; trial < 50; ++trial) {
    const EmbeddingVector a = random_vec(rng, 8);
    const EmbeddingVector b = random_vec(rng, 8);
    const double expected = oracle::kernel(a, b, 2.5);
    CHECK(kernel_sim(a, b, params) == doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("property: kernel decreases in distance, increases in width") {
  const KernelParams h1{1.0}, h2{2.0};
  const EmbeddingVector origin{0.0, 0.0};
  double previous = 1.1;
  for (double d = 0.5; d < 5.0; d += 0.5) {
    const EmbeddingVector point{d, 0.0};
    const double sim = kernel_sim(origin, point, h1);
    CHECK(sim < previous);
    CHECK(kernel_sim(origin, point, h2) > sim);
    previous = sim;
  }
}

TEST_CASE("singleton history: all three variants coincide") {
  SplitMix64 rng(67);
  const KernelParams params{1.7};
  for (int trial = 0; trial < 20; ++trial) {
    const EmbeddingVector q = random_vec(rng, 6);
    const std::vector<EmbeddingVector> history{random_vec(rng, 6)};
    const double a = chaining_score(ChainingVariant::onenn, q, history, params);
    const double b = chaining_score(ChainingVariant::exemplar, q, history, params);
    const double c = chaining_score(ChainingVariant::prototype, q, history, params);
    CHECK(a == b);
    CHECK(b == c);
  }
}

TEST_CASE("equidistant pair: onenn = exemplar = e^-1, prototype uses the midpoint") {
  const EmbeddingVector query{0.0, 0.0};
  const std::vector<EmbeddingVector> history{{1.0, 1.0}, {1.0, -1.0}};  // both at d^2 = 2
  const KernelParams params{2.0};
  const double expected = std::exp(-1.0);
  CHECK(chaining_score(ChainingVariant::onenn, query, history, params) ==
        doctest::Approx(expected).epsilon(1e-12));
  CHECK(chaining_score(ChainingVariant::exemplar, query, history, params) ==
        doctest::Approx(expected).epsilon(1e-12));
  // midpoint is (1, 0): d^2 = 1
  CHECK(chaining_score(ChainingVariant::prototype, query, history, params) ==
        doctest::Approx(std::exp(-0.5)).epsilon(1e-12));
}

TEST_CASE("chaining scores match the brute-force oracle on random instances") {
  SplitMix64 rng(71);
  const KernelParams params{0.8};
  for (int trial = 0; trial < 30; ++trial) {
    const EmbeddingVector q = random_vec(rng, 8);
    std::vector<EmbeddingVector> history;
    const int n = 1 + static_cast<int>(rng.next_below(6));
    for (int i = 0; i < n; ++i) history.push_back(random_vec(rng, 8));

    CHECK(chaining_score(ChainingVariant::onenn, q, history, params) ==
          doctest::Approx(oracle::onenn_score(q, history, 0.8)).epsilon(1e-9));
    CHECK(chaining_score(ChainingVariant::exemplar, q, history, params) ==
          doctest::Approx(oracle::exemplar_score(q, history, 0.8)).epsilon(1e-9));
    CHECK(chaining_score(ChainingVariant::prototype, q, history, params) ==
          doctest::Approx(oracle::prototype_score(q, history, 0.8)).epsilon(1e-9));
  }
}

TEST_CASE("property: permutation invariance and exemplar/onenn bounds") {
  SplitMix64 rng(73);
  const KernelParams params{1.0};
  for (int trial = 0; trial < 40; ++trial) {
    const EmbeddingVector q = random_vec(rng, 5);
    std::vector<EmbeddingVector> history;
    const int n = 2 + static_cast<int>(rng.next_below(5));
    for (int i = 0; i < n; ++i) history.push_back(random_vec(rng, 5));

    std::vector<EmbeddingVector> shuffled = history;
    const auto order = sample_without_replacement(rng, shuffled.size(), shuffled.size());
    for (std::size_t i = 0; i < order.size(); ++i) shuffled[i] = history[order[i]];

    for (const auto variant :
         {ChainingVariant::onenn, ChainingVariant::exemplar, ChainingVariant::prototype}) {
      CHECK(chaining_score(variant, q, history, params) ==
            doctest::Approx(chaining_score(variant, q, shuffled, params)).epsilon(1e-12));
    }

    // exemplar is a mean of similarities; onenn is their max
    double min_sim = 2.0, max_sim = -1.0;
    for (const auto& member : history) {
      const double s = kernel_sim(q, member, params);
      min_sim = std::min(min_sim, s);
      max_sim = std::max(max_sim, s);
    }
    const double exemplar = chaining_score(ChainingVariant::exemplar, q, history, params);
    const double onenn = chaining_score(ChainingVariant::onenn, q, history, params);
    CHECK(exemplar >= min_sim - 1e-12);
    CHECK(exemplar <= max_sim + 1e-12);
    CHECK(onenn >= exemplar - 1e-12);

    // duplicating the nearest member never changes onenn, never lowers exemplar
    std::size_t nearest = 0;
    double best = -1.0;
    for (std::size_t i = 0; i < history.size(); ++i) {
      const double s = kernel_sim(q, history[i], params);
      if (s > best) {
        best = s;
        nearest = i;
      }
    }
    std::vector<EmbeddingVector> duplicated = history;
    duplicated.push_back(history[nearest]);
    CHECK(chaining_score(ChainingVariant::onenn, q, duplicated, params) ==
          doctest::Approx(onenn).epsilon(1e-12));
    CHECK(chaining_score(ChainingVariant::exemplar, q, duplicated, params) >= exemplar - 1e-12);
  }
}

TEST_CASE("empty history is an error") {
  CHECK_THROWS_AS(chaining_score(ChainingVariant::onenn, {1.0}, {}, KernelParams{}), data_error);
}

TEST_CASE("build_history resolves time-dependent shared identity") {
  EmbeddingStore store;
  const WordEntry word = shared_example_word(store);

  SUBCASE("between the two references the sense is US-exclusive") {
    const auto hist = build_history(word, 1935, kUniverse, false, std::nullopt, store);
    REQUIRE(hist.per_region[0].first == kUS);
    CHECK(hist.members(kUS).size() == 2);  // anchor + shared-as-US
    CHECK(hist.members(kUK).size() == 1);  // anchor only
    bool found = false;
    for (const auto& m : hist.members(kUS)) found = found || m.id == "beast#0";
    CHECK(found);
  }
  SUBCASE("after both references, exclusion mode omits it") {
    const auto hist = build_history(word, 1945, kUniverse, false, std::nullopt, store);
    for (const auto& m : hist.members(kUS)) CHECK(m.id != "beast#0");
    for (const auto& m : hist.members(kUK)) CHECK(m.id != "beast#0");
  }
  SUBCASE("after both references, shared mode admits it to both regions") {
    const auto hist = build_history(word, 1945, kUniverse, true, std::nullopt, store);
    bool in_us = false, in_uk = false;
    for (const auto& m : hist.members(kUS)) in_us = in_us || m.id == "beast#0";
    for (const auto& m : hist.members(kUK)) in_uk = in_uk || m.id == "beast#0";
    CHECK(in_us);
    CHECK(in_uk);
  }
  SUBCASE("cutoff year itself is excluded from history") {
    const auto hist = build_history(word, 1930, kUniverse, true, std::nullopt, store);
    for (const auto& m : hist.members(kUS)) CHECK(m.id != "beast#0");
  }
  SUBCASE("memory limit prunes old senses") {
    // age 15 shared sense survives a 15-year memory; the 1910/1912 anchors do not
    const auto hist = build_history(word, 1945, kUniverse, true, 15, store);
    REQUIRE(hist.members(kUS).size() == 1);
    REQUIRE(hist.members(kUK).size() == 1);
    CHECK(hist.members(kUS)[0].id == "beast#0");
    CHECK(hist.members(kUK)[0].id == "beast#0");

    // a tighter memory empties the history entirely
    const auto empty = build_history(word, 1945, kUniverse, true, 10, store);
    CHECK(empty.nonempty_regions() == 0);
  }
}

TEST_CASE("missing embeddings surface as configuration errors") {
  EmbeddingStore store;  // empty on purpose
  WordEntry word;
  word.form = "w";
  word.senses.push_back(region_sense("w#0", kUS, 1920));
  CHECK_THROWS_AS(build_history(word, 1950, kUniverse, false, std::nullopt, store), config_error);
}

TEST_CASE("kernel training returns the default width without trainable points") {
  // Only one region has history: no point is preceded by both classes.
  const auto hist = manual_history({{0.0, 0.0}, {1.0, 0.0}}, {});
  const KernelParams params = train_kernel_width(hist, ChainingVariant::exemplar, kUniverse);
  CHECK(params.h == 1.0);
}

TEST_CASE("trained width beats both the default and a 20-point grid scan") {
  SplitMix64 rng(79);
  for (int trial = 0; trial < 10; ++trial) {
    // Two synthetic clusters with a known within-cluster scale.
    const double spread = 0.3 + 0.2 * static_cast<double>(trial);
    std::vector<EmbeddingVector> us, uk;
    for (int i = 0; i < 5; ++i) {
      EmbeddingVector a = random_vec(rng, 4, spread);
      a[0] += 2.0;
      us.push_back(a);
      uk.push_back(random_vec(rng, 4, spread));
    }
    const auto hist = manual_history(us, uk);

    for (const auto variant : {ChainingVariant::onenn, ChainingVariant::exemplar,
                               ChainingVariant::prototype}) {
      const KernelParams trained = train_kernel_width(hist, variant, kUniverse);
      CHECK(trained.h >= KernelParams::kLowerBound);
      CHECK(trained.h <= KernelParams::kUpperBound);

      // Oracle NLL over the same labeled time series.
      std::vector<oracle::NllPoint> points;
      for (const auto& [region, list] : hist.per_region) {
        for (const auto& member : list) {
          points.push_back(oracle::NllPoint{
              member.emergence_year, region == kUK ? std::size_t{1} : std::size_t{0},
              member.embedding});
        }
      }
      const char* names[] = {"onenn", "exemplar", "prototype"};
      const std::string name = names[static_cast<int>(variant)];
      const double trained_nll = oracle::nll(points, 2, name, trained.h);
      CHECK(trained_nll <= oracle::nll(points, 2, name, 1.0) + 1e-9);
      for (const double g : log_spaced_grid(0.01, 100.0, 20)) {
        CHECK(trained_nll <= oracle::nll(points, 2, name, g) + 1e-6);
      }
    }
  }
}

TEST_CASE("prediction: single-region shortcut and clear-cut argmax") {
  const auto only_us = manual_history({{0.0, 0.0}, {5.0, 5.0}, {9.0, 9.0}}, {});
  const KernelParams params{1.0};
  // Far query, but US is the only label present.
  CHECK(predict_distinction(ChainingVariant::onenn, {100.0, 100.0}, only_us, params) == kUS);

  const auto both = manual_history({{20.0, 0.0}, {20.0, 1.0}, {21.0, 0.0}}, {{0.0, 0.0}});
  for (const auto variant :
       {ChainingVariant::onenn, ChainingVariant::exemplar, ChainingVariant::prototype}) {
    CHECK(predict_distinction(variant, {0.0, 0.0}, both, params) == kUK);
  }
}

TEST_CASE("prediction matches the brute-force argmax oracle on 50 instances") {
  SplitMix64 rng(83);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<EmbeddingVector> us, uk;
    const int n_us = 1 + static_cast<int>(rng.next_below(6));
    const int n_uk = 1 + static_cast<int>(rng.next_below(6));
    for (int i = 0; i < n_us; ++i) us.push_back(random_vec(rng, 8));
    for (int i = 0; i < n_uk; ++i) uk.push_back(random_vec(rng, 8));
    const auto hist = manual_history(us, uk);
    const EmbeddingVector q = random_vec(rng, 8);
    const KernelParams params{0.5 + rng.next_unit() * 3.0};

    const auto oracle_predict = [&](const char* variant) {
      double us_score = 0.0, uk_score = 0.0;
      if (std::string(variant) == "onenn") {
        us_score = oracle::onenn_score(q, us, params.h);
        uk_score = oracle::onenn_score(q, uk, params.h);
      } else if (std::string(variant) == "exemplar") {
        us_score = oracle::exemplar_score(q, us, params.h);
        uk_score = oracle::exemplar_score(q, uk, params.h);
      } else {
        us_score = oracle::prototype_score(q, us, params.h);
        uk_score = oracle::prototype_score(q, uk, params.h);
      }
      return oracle::argmax_us({{"US", us_score}, {"UK", uk_score}});
    };

    CHECK(predict_distinction(ChainingVariant::onenn, q, hist, params).code ==
          oracle_predict("onenn"));
    CHECK(predict_distinction(ChainingVariant::exemplar, q, hist, params).code ==
          oracle_predict("exemplar"));
    CHECK(predict_distinction(ChainingVariant::prototype, q, hist, params).code ==
          oracle_predict("prototype"));
  }
}

TEST_CASE("sense frequency baseline counts histories with the US tie rule") {
  std::vector<EmbeddingVector> us2{{0.0}, {1.0}};
  std::vector<EmbeddingVector> uk5{{0.0}, {1.0}, {2.0}, {3.0}, {4.0}};
  CHECK(baseline_predict(BaselineKind::sense_frequency, {0.0}, manual_history(us2, uk5),
                         kUniverse) == kUK);
  CHECK(baseline_predict(BaselineKind::sense_frequency, {0.0},
                         manual_history({{0.0}}, {{1.0}}), kUniverse) == kUS);
}

TEST_CASE("discriminative baselines fall back when a region has no examples") {
  const auto hist = manual_history({{0.0}, {1.0}, {2.0}}, {});
  CHECK(baseline_predict(BaselineKind::lda, {9.0}, hist, kUniverse) == kUS);
  CHECK(baseline_predict(BaselineKind::logistic_regression, {9.0}, hist, kUniverse) == kUS);
}

TEST_CASE("logistic regression separates linearly separable clusters perfectly") {
  SplitMix64 rng(89);
  std::vector<EmbeddingVector> us, uk;
  for (int i = 0; i < 10; ++i) {
    EmbeddingVector a = random_vec(rng, 4, 0.3);
    a[0] += 4.0;
    us.push_back(a);
    EmbeddingVector b = random_vec(rng, 4, 0.3);
    b[0] -= 4.0;
    uk.push_back(b);
  }
  const auto hist = manual_history(us, uk);
  int correct = 0;
  for (int i = 0; i < 20; ++i) {
    EmbeddingVector q = random_vec(rng, 4, 0.3);
    const bool is_us = i % 2 == 0;
    q[0] += is_us ? 4.0 : -4.0;
    const Region predicted =
        baseline_predict(BaselineKind::logistic_regression, q, hist, kUniverse);
    if (predicted == (is_us ? kUS : kUK)) ++correct;
  }
  CHECK(correct == 20);
}

TEST_CASE("lda separates offset gaussian clusters") {
  SplitMix64 rng(97);
  std::vector<EmbeddingVector> us, uk;
  for (int i = 0; i < 12; ++i) {
    EmbeddingVector a = random_vec(rng, 3, 0.5);
    a[1] += 3.0;
    us.push_back(a);
    uk.push_back(random_vec(rng, 3, 0.5));
  }
  const auto hist = manual_history(us, uk);
  int correct = 0;
  for (int i = 0; i < 20; ++i) {
    EmbeddingVector q = random_vec(rng, 3, 0.5);
    const bool is_us = i % 2 == 0;
    if (is_us) q[1] += 3.0;
    if (baseline_predict(BaselineKind::lda, q, hist, kUniverse) == (is_us ? kUS : kUK)) ++correct;
  }
  CHECK(correct >= 19);
}

TEST_CASE("hybrid combination follows the product rule") {
  RegionScores need, dist;
  need.scores = {{kUS, 0.8}, {kUK, 0.2}};
  dist.scores = {{kUS, 0.3}, {kUK, 0.7}};
  CHECK(hybrid_predict(need, dist) == kUS);  // 0.24 vs 0.14

  RegionScores uniform;
  uniform.scores = {{kUS, 0.5}, {kUK, 0.5}};
  RegionScores need_uk;
  need_uk.scores = {{kUS, 0.1}, {kUK, 0.9}};
  CHECK(hybrid_predict(need_uk, uniform) == kUK);   // uniform distinction: need decides
  CHECK(hybrid_predict(uniform, need_uk) == kUK);   // and vice versa

  RegionScores zero;
  zero.scores = {{kUS, 0.0}, {kUK, 0.0}};
  CHECK_THROWS_AS(hybrid_predict(zero, dist), data_error);
}

TEST_CASE("hybrid matches a direct product-argmax oracle on random score pairs") {
  SplitMix64 rng(101);
  for (int trial = 0; trial < 100; ++trial) {
    RegionScores need, dist;
    double n_us = rng.next_unit() + 1e-6, n_uk = rng.next_unit() + 1e-6;
    double d_us = rng.next_unit() + 1e-6, d_uk = rng.next_unit() + 1e-6;
    need.scores = {{kUS, n_us}, {kUK, n_uk}};
    dist.scores = {{kUS, d_us}, {kUK, d_uk}};
    const double p_us = (n_us / (n_us + n_uk)) * (d_us / (d_us + d_uk));
    const double p_uk = (n_uk / (n_us + n_uk)) * (d_uk / (d_us + d_uk));
    const std::string expected = oracle::argmax_us({{"US", p_us}, {"UK", p_uk}});
    CHECK(hybrid_predict(need, dist).code == expected);
  }
}
