#include "slangvar/eval.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <mutex>
#include <thread>

#include "slangvar/error.hpp"

namespace slangvar {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

Region default_tie_region(const RegionList& universe) {
  return argmax_region(RegionScores::zeros(universe));
}

void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& body) {
  if (jobs <= 0) jobs = static_cast<int>(std::thread::hardware_concurrency());
  if (jobs <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(jobs), n);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= n) return;
        try {
          body(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace

void EvalConfig::validate() const {
  if (k < 3) throw config_error("EvalConfig: k must be >= 3 (sparse words are excluded)");
  if (universe.size() < 2) throw config_error("EvalConfig: universe needs at least 2 regions");
  if (repeats < 1) throw config_error("EvalConfig: repeats must be >= 1");
  if (memory_years && *memory_years < 1) {
    throw config_error("EvalConfig: memory_years must be positive");
  }
  for (const auto& r : universe) {
    if (r.empty()) throw config_error("EvalConfig: empty region code in universe");
  }
}

std::vector<WordEntry> select_words(const Inventory& inv, const EvalConfig& cfg) {
  cfg.validate();
  std::vector<WordEntry> out;
  for (const auto& word : inv.words) {
    bool eligible = true;
    for (const auto& region : cfg.universe) {
      int exclusive = 0;
      for (const auto& sense : word.senses) {
        if (sense.emergence_year <= cfg.history_start) continue;
        const RegionList identity = regional_identity_final(sense, cfg.universe);
        if (identity.size() == 1 && identity.front() == region) ++exclusive;
      }
      if (exclusive < cfg.k) {
        eligible = false;
        break;
      }
    }
    if (eligible) out.push_back(word);
  }
  if (out.empty()) {
    throw data_error("select_words: no word has " + std::to_string(cfg.k) +
                     " exclusive senses per region after " + std::to_string(cfg.history_start));
  }
  return out;
}

std::vector<TestSeries> build_test_series(const std::vector<WordEntry>& words,
                                          const EvalConfig& cfg) {
  std::vector<TestSeries> out;
  for (const auto& word : words) {
    TestSeries series;
    series.word = word;

    // Order senses by (emergence_year, id) once; eligibility needs to know
    // whether anything at all precedes a sense in time.
    int earliest = std::numeric_limits<int>::max();
    for (const auto& sense : word.senses) earliest = std::min(earliest, sense.emergence_year);

    std::vector<std::size_t> order(word.senses.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      const auto& sa = word.senses[a];
      const auto& sb = word.senses[b];
      if (sa.emergence_year != sb.emergence_year) return sa.emergence_year < sb.emergence_year;
      return sa.id < sb.id;
    });

    for (const std::size_t idx : order) {
      const SenseEntry& sense = word.senses[idx];
      if (sense.emergence_year <= cfg.test_start) continue;
      if (sense.emergence_year == earliest) continue;  // nothing precedes it
      const RegionList identity = regional_identity_at(sense, sense.emergence_year, cfg.universe);
      if (identity.size() != 1) continue;
      series.test_senses.push_back(TestSense{idx, identity.front()});
    }
    if (!series.test_senses.empty()) out.push_back(std::move(series));
  }
  return out;
}

ModelSpec ModelSpec::parse(const std::string& token, NeedAggregation agg) {
  std::string t = token;
  for (char& c : t) {
    if (c == '-') c = '_';
  }
  ModelSpec spec;
  const auto need_kind = [](const std::string& s) -> std::optional<NeedKind> {
    if (s == "form" || s == "form_need") return NeedKind::form;
    if (s == "semantic" || s == "semantic_need") return NeedKind::semantic;
    if (s == "context" || s == "context_need") return NeedKind::context;
    return std::nullopt;
  };
  const auto chain_kind = [](const std::string& s) -> std::optional<ChainingVariant> {
    if (s == "onenn") return ChainingVariant::onenn;
    if (s == "exemplar") return ChainingVariant::exemplar;
    if (s == "prototype") return ChainingVariant::prototype;
    return std::nullopt;
  };

  if (t.rfind("hybrid:", 0) == 0) {
    const std::string rest = t.substr(7);
    const std::size_t colon = rest.find(':');
    if (colon == std::string::npos) {
      throw config_error("model '" + token + "': expected hybrid:<need>:<chain>");
    }
    const auto nk = need_kind(rest.substr(0, colon));
    const auto ck = chain_kind(rest.substr(colon + 1));
    if (!nk || !ck) throw config_error("model '" + token + "': unknown hybrid parts");
    spec.family = Family::hybrid;
    spec.need = NeedVariant{*nk, agg};
    spec.chain = *ck;
    return spec;
  }
  if (const auto nk = need_kind(t); nk && t.size() > 7) {  // *_need spellings only
    spec.family = Family::need;
    spec.need = NeedVariant{*nk, agg};
    return spec;
  }
  if (const auto ck = chain_kind(t)) {
    spec.family = Family::chaining;
    spec.chain = *ck;
    return spec;
  }
  if (t == "sense_freq") {
    spec.family = Family::baseline;
    spec.baseline = BaselineKind::sense_frequency;
    return spec;
  }
  if (t == "lda") {
    spec.family = Family::baseline;
    spec.baseline = BaselineKind::lda;
    return spec;
  }
  if (t == "logreg") {
    spec.family = Family::baseline;
    spec.baseline = BaselineKind::logistic_regression;
    return spec;
  }
  throw config_error("unknown model '" + token + "'");
}

std::string ModelSpec::name() const {
  const auto need_name = [](NeedKind k) {
    switch (k) {
      case NeedKind::form: return "form";
      case NeedKind::semantic: return "semantic";
      case NeedKind::context: return "context";
    }
    return "?";
  };
  const auto chain_name = [](ChainingVariant v) {
    switch (v) {
      case ChainingVariant::onenn: return "onenn";
      case ChainingVariant::exemplar: return "exemplar";
      case ChainingVariant::prototype: return "prototype";
    }
    return "?";
  };
  const auto agg_suffix = [&](const NeedVariant& v) -> std::string {
    if (v.kind == NeedKind::form) return "";
    return v.aggregation == NeedAggregation::majority_vote ? ":vote" : ":sum";
  };
  switch (family) {
    case Family::need:
      return std::string(need_name(need.kind)) + "_need" + agg_suffix(need);
    case Family::chaining:
      return chain_name(chain);
    case Family::baseline:
      switch (baseline) {
        case BaselineKind::sense_frequency: return "sense_freq";
        case BaselineKind::lda: return "lda";
        case BaselineKind::logistic_regression: return "logreg";
      }
      return "?";
    case Family::hybrid:
      return "hybrid:" + std::string(need_name(need.kind)) + ":" + chain_name(chain) +
             agg_suffix(need);
  }
  return "?";
}

std::vector<std::size_t> balanced_subsample_word(const TestSeries& series,
                                                 const RegionList& universe, SplitMix64& rng) {
  std::vector<std::vector<std::size_t>> by_region(universe.size());
  for (std::size_t i = 0; i < series.test_senses.size(); ++i) {
    for (std::size_t r = 0; r < universe.size(); ++r) {
      if (series.test_senses[i].label == universe[r]) {
        by_region[r].push_back(i);
        break;
      }
    }
  }
  std::size_t m = std::numeric_limits<std::size_t>::max();
  for (const auto& list : by_region) m = std::min(m, list.size());
  if (m == 0) return {};

  std::vector<std::size_t> selected;
  for (const auto& list : by_region) {
    if (list.size() == m) {
      selected.insert(selected.end(), list.begin(), list.end());
    } else {
      for (const std::size_t pick : sample_without_replacement(rng, list.size(), m)) {
        selected.push_back(list[pick]);
      }
    }
  }
  std::sort(selected.begin(), selected.end());
  return selected;
}

std::vector<std::vector<std::size_t>> balanced_subsample(const std::vector<TestSeries>& series_set,
                                                         const EvalConfig& cfg, int repeat) {
  std::vector<std::vector<std::size_t>> out(series_set.size());
  for (std::size_t w = 0; w < series_set.size(); ++w) {
    SplitMix64 rng = derive_stream(cfg.rng_seed, static_cast<std::uint64_t>(repeat),
                                   static_cast<std::uint64_t>(w));
    out[w] = balanced_subsample_word(series_set[w], cfg.universe, rng);
  }
  return out;
}

namespace {

// Per-sense outcome of one model on one series. Predictions are independent
// of sampling (history always contains every earlier sense), so they are
// computed once and reused across repeats.
struct SeriesPredictions {
  std::vector<Region> predicted;
  std::vector<bool> applicable;
  std::vector<bool> fallback;
};

struct PredictionTable {
  // [model][word] -> per-test-sense outcomes
  std::vector<std::vector<SeriesPredictions>> data;
};

void validate_resources(const std::vector<ModelSpec>& models,
                        const std::vector<TestSeries>& series_set, const EvalConfig& cfg,
                        const Resources& res) {
  const bool any_need = std::any_of(models.begin(), models.end(),
                                    [](const ModelSpec& m) { return m.uses_need(); });
  const bool any_hist = std::any_of(models.begin(), models.end(),
                                    [](const ModelSpec& m) { return m.uses_history(); });
  if (any_need) {
    for (const auto& region : cfg.universe) {
      if (res.tables.find(region) == res.tables.end()) {
        throw config_error("need models require a frequency table for region '" + region.code +
                           "'");
      }
    }
  }
  if (any_hist) {
    for (const auto& series : series_set) {
      for (const auto& sense : series.word.senses) {
        res.embeddings.require(sense.id);
      }
    }
  }
}

PredictionTable precompute_predictions(const std::vector<ModelSpec>& models,
                                       const std::vector<TestSeries>& series_set,
                                       const EvalConfig& cfg, const Resources& res, int jobs) {
  PredictionTable table;
  table.data.assign(models.size(), std::vector<SeriesPredictions>(series_set.size()));
  for (std::size_t m = 0; m < models.size(); ++m) {
    for (std::size_t w = 0; w < series_set.size(); ++w) {
      const std::size_t n = series_set[w].test_senses.size();
      table.data[m][w].predicted.resize(n);
      table.data[m][w].applicable.assign(n, true);
      table.data[m][w].fallback.assign(n, false);
    }
  }
  const Region fallback_region = default_tie_region(cfg.universe);

  parallel_for(series_set.size(), jobs, [&](std::size_t w) {
    const TestSeries& series = series_set[w];
    // Kernel widths are refit per (word, prediction time, variant); cache
    // across models that share a variant at the same cutoff.
    for (std::size_t i = 0; i < series.test_senses.size(); ++i) {
      const SenseEntry& sense = series.sense_at(i);
      const int cutoff = sense.emergence_year;

      const bool any_hist = std::any_of(models.begin(), models.end(),
                                        [](const ModelSpec& m) { return m.uses_history(); });
      std::optional<HistoricalSenseSet> hist;
      bool hist_empty = true;
      const EmbeddingVector* query = nullptr;
      if (any_hist) {
        hist = build_history(series.word, cutoff, cfg.universe, cfg.include_shared,
                             cfg.memory_years, res.embeddings);
        hist_empty = hist->nonempty_regions() == 0;
        query = &res.embeddings.require(sense.id);
      }

      std::map<int, KernelParams> kernel_cache;  // by variant
      const auto kernel_for = [&](ChainingVariant v) {
        const int key = static_cast<int>(v);
        const auto it = kernel_cache.find(key);
        if (it != kernel_cache.end()) return it->second;
        const KernelParams params = train_kernel_width(*hist, v, cfg.universe);
        kernel_cache.emplace(key, params);
        return params;
      };

      std::map<int, RegionScores> need_cache;  // by need kind; absent = inapplicable
      const auto need_for = [&](const NeedVariant& v) -> const RegionScores* {
        const int key = static_cast<int>(v.kind);
        const auto it = need_cache.find(key);
        if (it != need_cache.end()) return &it->second;
        const RegionScores scores =
            need_score(v, sense, res.tables, res.need_cfg, cfg.universe, res.stopwords);
        return &need_cache.emplace(key, scores).first->second;
      };

      for (std::size_t m = 0; m < models.size(); ++m) {
        const ModelSpec& model = models[m];
        SeriesPredictions& out = table.data[m][w];
        switch (model.family) {
          case ModelSpec::Family::need: {
            try {
              out.predicted[i] = predict_need(*need_for(model.need));
            } catch (const inapplicable_error&) {
              out.applicable[i] = false;
            }
            break;
          }
          case ModelSpec::Family::chaining: {
            if (hist_empty) {
              out.predicted[i] = fallback_region;
              out.fallback[i] = true;
            } else {
              out.predicted[i] =
                  predict_distinction(model.chain, *query, *hist, kernel_for(model.chain));
            }
            break;
          }
          case ModelSpec::Family::baseline: {
            if (hist_empty) {
              out.predicted[i] = fallback_region;
              out.fallback[i] = true;
            } else {
              out.predicted[i] = baseline_predict(model.baseline, *query, *hist, cfg.universe);
            }
            break;
          }
          case ModelSpec::Family::hybrid: {
            try {
              const RegionScores* need_scores = need_for(model.need);
              if (hist_empty) {
                // No distinction evidence: the need factor decides alone.
                out.predicted[i] = predict_need(*need_scores);
                out.fallback[i] = true;
              } else {
                const RegionScores dist =
                    distinction_scores(model.chain, *query, *hist, kernel_for(model.chain));
                out.predicted[i] = hybrid_predict(*need_scores, dist);
              }
            } catch (const inapplicable_error&) {
              out.applicable[i] = false;
            }
            break;
          }
        }
      }
    }
  });
  return table;
}

struct Tally {
  std::vector<double> per_repeat_acc;                  // percent, valid repeats only
  std::vector<std::vector<double>> per_region_accs;    // [region] -> per-repeat
  std::size_t sample_size = 0;
  std::size_t excluded = 0;
  std::size_t fallbacks = 0;
};

double mean_of(const std::vector<double>& xs) {
  if (xs.empty()) return kNaN;
  double total = 0.0;
  for (const double x : xs) total += x;
  return total / static_cast<double>(xs.size());
}

double std_of(const std::vector<double>& xs) {
  if (xs.empty()) return kNaN;
  const double mu = mean_of(xs);
  double total = 0.0;
  for (const double x : xs) total += (x - mu) * (x - mu);
  return std::sqrt(total / static_cast<double>(xs.size()));
}

AccuracyReport finalize_report(const ModelSpec& model, const RegionList& universe, const Tally& tally,
                          std::size_t sample_size) {
  AccuracyReport report;
  report.model = model.name();
  report.repeats = static_cast<int>(tally.per_repeat_acc.size());
  report.sample_size = sample_size;
  report.overall_mean = mean_of(tally.per_repeat_acc);
  report.overall_std = std_of(tally.per_repeat_acc);
  for (std::size_t r = 0; r < universe.size(); ++r) {
    report.per_region_mean.emplace_back(universe[r], mean_of(tally.per_region_accs[r]));
  }
  report.excluded_no_context = tally.excluded;
  report.fallback_predictions = tally.fallbacks;
  return report;
}

}  // namespace

std::vector<AccuracyReport> run_experiment(const std::vector<ModelSpec>& models,
                                           const std::vector<TestSeries>& series_set,
                                           const EvalConfig& cfg, const Resources& res,
                                           int jobs) {
  cfg.validate();
  if (models.empty()) throw config_error("run_experiment: no models requested");
  if (series_set.empty()) throw data_error("run_experiment: no test series");
  validate_resources(models, series_set, cfg, res);

  const PredictionTable table = precompute_predictions(models, series_set, cfg, res, jobs);

  std::vector<Tally> tallies(models.size());
  for (auto& tally : tallies) tally.per_region_accs.resize(cfg.universe.size());

  std::size_t sample_size = 0;
  for (int repeat = 0; repeat < cfg.repeats; ++repeat) {
    const auto sample = balanced_subsample(series_set, cfg, repeat);
    if (repeat == 0) {
      for (const auto& sel : sample) sample_size += sel.size();
    }
    for (std::size_t m = 0; m < models.size(); ++m) {
      std::size_t correct = 0, total = 0;
      std::vector<std::size_t> region_correct(cfg.universe.size(), 0);
      std::vector<std::size_t> region_total(cfg.universe.size(), 0);
      for (std::size_t w = 0; w < series_set.size(); ++w) {
        const SeriesPredictions& preds = table.data[m][w];
        for (const std::size_t idx : sample[w]) {
          if (!preds.applicable[idx]) {
            ++tallies[m].excluded;
            continue;
          }
          if (preds.fallback[idx]) ++tallies[m].fallbacks;
          const Region& label = series_set[w].test_senses[idx].label;
          ++total;
          const bool ok = preds.predicted[idx] == label;
          if (ok) ++correct;
          for (std::size_t r = 0; r < cfg.universe.size(); ++r) {
            if (cfg.universe[r] == label) {
              ++region_total[r];
              if (ok) ++region_correct[r];
              break;
            }
          }
        }
      }
      if (total == 0) continue;  // nothing applicable this repeat
      tallies[m].per_repeat_acc.push_back(100.0 * static_cast<double>(correct) /
                                          static_cast<double>(total));
      for (std::size_t r = 0; r < cfg.universe.size(); ++r) {
        if (region_total[r] > 0) {
          tallies[m].per_region_accs[r].push_back(100.0 * static_cast<double>(region_correct[r]) /
                                                  static_cast<double>(region_total[r]));
        }
      }
    }
  }

  std::vector<AccuracyReport> reports;
  reports.reserve(models.size());
  for (std::size_t m = 0; m < models.size(); ++m) {
    reports.push_back(finalize_report(models[m], cfg.universe, tallies[m], sample_size));
  }
  return reports;
}

std::vector<AccuracyReport> memory_sweep(const std::vector<int>& thresholds,
                                         const std::vector<ModelSpec>& models,
                                         const std::vector<TestSeries>& series_set,
                                         const EvalConfig& cfg, const Resources& res, int jobs) {
  if (thresholds.empty()) throw config_error("memory_sweep: no thresholds");
  std::vector<AccuracyReport> out;
  for (const int threshold : thresholds) {
    if (threshold < 1) throw config_error("memory_sweep: thresholds must be positive");
    EvalConfig sub = cfg;
    sub.memory_years = threshold;
    for (AccuracyReport report : run_experiment(models, series_set, sub, res, jobs)) {
      report.slice_type = "memory";
      report.slice = std::to_string(threshold);
      out.push_back(std::move(report));
    }
  }
  return out;
}

std::vector<AccuracyReport> decade_analysis(const std::vector<ModelSpec>& models,
                                            const std::vector<TestSeries>& series_set,
                                            const EvalConfig& cfg, const Resources& res,
                                            int jobs) {
  cfg.validate();
  if (models.empty()) throw config_error("decade_analysis: no models requested");
  if (series_set.empty()) throw data_error("decade_analysis: no test series");
  validate_resources(models, series_set, cfg, res);

  const PredictionTable table = precompute_predictions(models, series_set, cfg, res, jobs);

  // (word, test-sense index) positions per decade per region.
  std::map<int, std::vector<std::vector<std::pair<std::size_t, std::size_t>>>> decades;
  for (std::size_t w = 0; w < series_set.size(); ++w) {
    const TestSeries& series = series_set[w];
    for (std::size_t i = 0; i < series.test_senses.size(); ++i) {
      const int decade = (series.sense_at(i).emergence_year / 10) * 10;
      auto [it, inserted] = decades.try_emplace(decade);
      if (inserted) it->second.resize(cfg.universe.size());
      for (std::size_t r = 0; r < cfg.universe.size(); ++r) {
        if (series.test_senses[i].label == cfg.universe[r]) {
          it->second[r].emplace_back(w, i);
          break;
        }
      }
    }
  }

  std::vector<AccuracyReport> out;
  for (const auto& [decade, by_region] : decades) {
    std::size_t m_count = std::numeric_limits<std::size_t>::max();
    for (const auto& list : by_region) m_count = std::min(m_count, list.size());

    if (m_count == 0) {
      for (const auto& model : models) {
        AccuracyReport report;
        report.model = model.name();
        report.slice_type = "decade";
        report.slice = std::to_string(decade);
        report.sample_size = 0;
        report.overall_mean = kNaN;
        report.overall_std = kNaN;
        for (const auto& region : cfg.universe) report.per_region_mean.emplace_back(region, kNaN);
        out.push_back(std::move(report));
      }
      continue;
    }

    std::vector<Tally> tallies(models.size());
    for (auto& tally : tallies) tally.per_region_accs.resize(cfg.universe.size());

    for (int repeat = 0; repeat < cfg.repeats; ++repeat) {
      SplitMix64 rng = derive_stream(cfg.rng_seed, static_cast<std::uint64_t>(repeat),
                                     static_cast<std::uint64_t>(decade));
      std::vector<std::pair<std::size_t, std::size_t>> chosen;
      for (const auto& list : by_region) {
        if (list.size() == m_count) {
          chosen.insert(chosen.end(), list.begin(), list.end());
        } else {
          for (const std::size_t pick : sample_without_replacement(rng, list.size(), m_count)) {
            chosen.push_back(list[pick]);
          }
        }
      }
      for (std::size_t m = 0; m < models.size(); ++m) {
        std::size_t correct = 0, total = 0;
        std::vector<std::size_t> region_correct(cfg.universe.size(), 0);
        std::vector<std::size_t> region_total(cfg.universe.size(), 0);
        for (const auto& [w, idx] : chosen) {
          const SeriesPredictions& preds = table.data[m][w];
          if (!preds.applicable[idx]) {
            ++tallies[m].excluded;
            continue;
          }
          if (preds.fallback[idx]) ++tallies[m].fallbacks;
          const Region& label = series_set[w].test_senses[idx].label;
          ++total;
          const bool ok = preds.predicted[idx] == label;
          if (ok) ++correct;
          for (std::size_t r = 0; r < cfg.universe.size(); ++r) {
            if (cfg.universe[r] == label) {
              ++region_total[r];
              if (ok) ++region_correct[r];
              break;
            }
          }
        }
        if (total == 0) continue;
        tallies[m].per_repeat_acc.push_back(100.0 * static_cast<double>(correct) /
                                            static_cast<double>(total));
        for (std::size_t r = 0; r < cfg.universe.size(); ++r) {
          if (region_total[r] > 0) {
            tallies[m].per_region_accs[r].push_back(
                100.0 * static_cast<double>(region_correct[r]) /
                static_cast<double>(region_total[r]));
          }
        }
      }
    }

    for (std::size_t m = 0; m < models.size(); ++m) {
      AccuracyReport report =
          finalize_report(models[m], cfg.universe, tallies[m], m_count * cfg.universe.size());
      report.slice_type = "decade";
      report.slice = std::to_string(decade);
      out.push_back(std::move(report));
    }
  }
  return out;
}

}  // namespace slangvar
