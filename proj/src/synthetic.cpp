#include "slangvar/synthetic.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "slangvar/error.hpp"
#include "slangvar/rng.hpp"
#include "slangvar/text.hpp"

namespace slangvar {

using nlohmann::json;

namespace {

const char* kStopwords =
    "the\na\nan\nof\nto\nand\nin\nis\nit\nthat\nfor\non\nas\nwith\nby\nat\nor\nbe\n";

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

std::string zero_pad(int value, int width) {
  std::string s = std::to_string(value);
  while (static_cast<int>(s.size()) < width) s.insert(s.begin(), '0');
  return s;
}

std::string word_name(int i) { return "word" + zero_pad(i, 3); }

std::string vocab_token(const Region& region, int j) {
  return lowercase(region.code) + "tok" + zero_pad(j, 2);
}

// Draws the region a sentence token comes from: the sense's own region with
// probability 1/R + skew * (1 - 1/R), otherwise uniformly among the rest.
std::size_t draw_token_region(SplitMix64& rng, std::size_t own, std::size_t n_regions,
                              double skew) {
  const double p_own =
      1.0 / static_cast<double>(n_regions) + skew * (1.0 - 1.0 / static_cast<double>(n_regions));
  if (rng.next_unit() < p_own || n_regions == 1) return own;
  std::size_t pick = static_cast<std::size_t>(rng.next_below(n_regions - 1));
  if (pick >= own) ++pick;
  return pick;
}

std::string draw_sentence(SplitMix64& rng, const SynthSpec& spec, std::size_t own_region,
                          const std::string& prefix) {
  std::string out = prefix;
  for (int t = 0; t < spec.tokens_per_sentence; ++t) {
    const std::size_t src = draw_token_region(rng, own_region, spec.regions.size(),
                                              spec.vocab_skew);
    const int j = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(spec.vocab_per_region)));
    out += ' ';
    out += vocab_token(spec.regions[src], j);
  }
  return out;
}

int draw_year(SplitMix64& rng, int lo, int hi) {
  return lo + static_cast<int>(rng.next_below(static_cast<std::uint64_t>(hi - lo + 1)));
}

}  // namespace

void SynthSpec::validate() const {
  if (regions.size() < 2) throw config_error("synth: need at least 2 regions");
  if (words < 1) throw config_error("synth: words must be positive");
  if (senses_pre_per_region < 1) throw config_error("synth: senses_pre_per_region must be >= 1");
  if (senses_post_per_region < 0) throw config_error("synth: senses_post_per_region must be >= 0");
  if (shared_per_word < 0) throw config_error("synth: shared_per_word must be >= 0");
  if (dim < static_cast<int>(regions.size())) {
    throw config_error("synth: dim must be >= number of regions");
  }
  if (cluster_separation < 0.0 || within_std <= 0.0) {
    throw config_error("synth: cluster_separation must be >= 0 and within_std > 0");
  }
  if (vocab_skew < 0.0 || vocab_skew > 1.0) throw config_error("synth: vocab_skew must be in [0,1]");
  if (vocab_per_region < 1 || tokens_per_sentence < 1) {
    throw config_error("synth: vocabulary and sentence sizes must be positive");
  }
  if (!(pre_year_lo <= pre_year_hi && pre_year_hi < post_year_lo && post_year_lo <= post_year_hi)) {
    throw config_error("synth: year ranges must satisfy pre_lo <= pre_hi < post_lo <= post_hi");
  }
  if (pre_year_lo < 1000 || post_year_hi > 2100) {
    throw config_error("synth: years must stay within [1000, 2100]");
  }
  if (base_freq <= 0.0) throw config_error("synth: base_freq must be positive");
}

SynthSpec SynthSpec::from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw config_error(std::string("synth spec: ") + e.what());
  }
  SynthSpec spec;
  if (j.contains("regions")) {
    spec.regions.clear();
    for (const auto& r : j.at("regions")) spec.regions.emplace_back(r.get<std::string>());
  }
  spec.words = j.value("words", spec.words);
  spec.senses_pre_per_region = j.value("senses_pre_per_region", spec.senses_pre_per_region);
  spec.senses_post_per_region = j.value("senses_post_per_region", spec.senses_post_per_region);
  spec.shared_per_word = j.value("shared_per_word", spec.shared_per_word);
  spec.dim = j.value("dim", spec.dim);
  spec.cluster_separation = j.value("cluster_separation", spec.cluster_separation);
  spec.within_std = j.value("within_std", spec.within_std);
  spec.vocab_skew = j.value("vocab_skew", spec.vocab_skew);
  spec.vocab_per_region = j.value("vocab_per_region", spec.vocab_per_region);
  spec.tokens_per_sentence = j.value("tokens_per_sentence", spec.tokens_per_sentence);
  spec.pre_year_lo = j.value("pre_year_lo", spec.pre_year_lo);
  spec.pre_year_hi = j.value("pre_year_hi", spec.pre_year_hi);
  spec.post_year_lo = j.value("post_year_lo", spec.post_year_lo);
  spec.post_year_hi = j.value("post_year_hi", spec.post_year_hi);
  spec.base_freq = j.value("base_freq", spec.base_freq);
  spec.seed = j.value("seed", spec.seed);
  spec.random_labels = j.value("random_labels", spec.random_labels);
  spec.validate();
  return spec;
}

std::string SynthSpec::to_json() const {
  json j;
  json regions_json = json::array();
  for (const auto& r : regions) regions_json.push_back(r.code);
  j["regions"] = regions_json;
  j["words"] = words;
  j["senses_pre_per_region"] = senses_pre_per_region;
  j["senses_post_per_region"] = senses_post_per_region;
  j["shared_per_word"] = shared_per_word;
  j["dim"] = dim;
  j["cluster_separation"] = cluster_separation;
  j["within_std"] = within_std;
  j["vocab_skew"] = vocab_skew;
  j["vocab_per_region"] = vocab_per_region;
  j["tokens_per_sentence"] = tokens_per_sentence;
  j["pre_year_lo"] = pre_year_lo;
  j["pre_year_hi"] = pre_year_hi;
  j["post_year_lo"] = post_year_lo;
  j["post_year_hi"] = post_year_hi;
  j["base_freq"] = base_freq;
  j["seed"] = seed;
  j["random_labels"] = random_labels;
  return j.dump(2);
}

SynthOutput generate_synthetic(const SynthSpec& spec) {
  spec.validate();
  SynthOutput out;
  out.stopwords_txt = kStopwords;

  const std::size_t n_regions = spec.regions.size();
  const double mean_scale = spec.cluster_separation / std::sqrt(2.0);

  std::ostringstream inventory;
  std::ostringstream embeddings;
  json labels = json::object();

  for (int w = 0; w < spec.words; ++w) {
    const std::string word = word_name(w);
    SplitMix64 rng = derive_stream(spec.seed, static_cast<std::uint64_t>(w));

    struct PlannedSense {
      json record;
      std::size_t cluster;
      Region label;
    };
    std::vector<PlannedSense> senses;

    const auto plan_sense = [&](std::size_t r, bool pre) {
      const int year = pre ? draw_year(rng, spec.pre_year_lo, spec.pre_year_hi)
                           : draw_year(rng, spec.post_year_lo, spec.post_year_hi);
      const std::string definition = draw_sentence(rng, spec, r, "the");
      const std::string context = draw_sentence(rng, spec, r, word + " of");
      json sense;
      sense["definition"] = definition;
      sense["references"] = json::array({json{{"region", spec.regions[r].code},
                                              {"year", year},
                                              {"origin", "synthetic"},
                                              {"context", context}}});
      senses.push_back(PlannedSense{std::move(sense), r, spec.regions[r]});
    };

    if (spec.random_labels) {
      // Chance-level construction. Evaluated labels are iid; histories get a
      // randomly chosen dominant region whose margin no post-period sense
      // can overturn. Count-sensitive predictors then always pick that
      // dominant region, which carries no information about the test
      // labels, and word selection never conditions the draw.
      const std::size_t dominant = rng.next_below(n_regions);
      const int post_total = static_cast<int>(n_regions) * spec.senses_post_per_region;
      for (std::size_t r = 0; r < n_regions; ++r) {
        for (int s = 0; s < spec.senses_pre_per_region; ++s) plan_sense(r, true);
      }
      for (int s = 0; s < post_total + 1; ++s) plan_sense(dominant, true);
      for (int s = 0; s < post_total; ++s) plan_sense(rng.next_below(n_regions), false);
    } else {
      for (std::size_t r = 0; r < n_regions; ++r) {
        const int total = spec.senses_pre_per_region + spec.senses_post_per_region;
        for (int s = 0; s < total; ++s) plan_sense(r, s < spec.senses_pre_per_region);
      }
    }
    for (int s = 0; s < spec.shared_per_word; ++s) {
      const int year = draw_year(rng, spec.pre_year_lo, std::max(spec.pre_year_lo,
                                                                 spec.pre_year_hi - 5));
      const std::string definition = draw_sentence(rng, spec, 0, "the");
      json sense;
      sense["definition"] = definition;
      sense["references"] = json::array(
          {json{{"region", spec.regions[0].code}, {"year", year}, {"origin", "synthetic"},
                {"context", nullptr}},
           json{{"region", spec.regions[1].code}, {"year", year + 5}, {"origin", "synthetic"},
                {"context", nullptr}}});
      senses.push_back(PlannedSense{std::move(sense), 0, spec.regions[0]});
    }

    json record;
    record["word"] = word;
    record["pos"] = "n";
    record["is_abbreviation"] = false;
    json sense_array = json::array();
    for (std::size_t i = 0; i < senses.size(); ++i) {
      sense_array.push_back(senses[i].record);
      const std::string id = word + "#" + std::to_string(i);
      labels[id] = senses[i].label.code;

      embeddings << id << '\t';
      for (int d = 0; d < spec.dim; ++d) {
        const double mu = (static_cast<std::size_t>(d) == senses[i].cluster) ? mean_scale : 0.0;
        const double v = mu + spec.within_std * rng.next_normal();
        if (d != 0) embeddings << ' ';
        embeddings << format_double(v);
      }
      embeddings << '\n';
      out.labels.emplace(id, senses[i].label);
    }
    record["senses"] = sense_array;
    inventory << record.dump() << '\n';
  }

  out.inventory_jsonl = inventory.str();
  out.embeddings_tsv = embeddings.str();

  // Frequency tables: vocabulary tokens favor their own region's table by
  // (1 + skew) vs (1 - skew); headwords are neutral everywhere.
  const int year_lo = spec.pre_year_lo - 15;
  const int year_hi = spec.post_year_hi;
  for (std::size_t q = 0; q < n_regions; ++q) {
    std::ostringstream tsv;
    for (std::size_t p = 0; p < n_regions; ++p) {
      const double freq = spec.base_freq * (p == q ? 1.0 + spec.vocab_skew : 1.0 - spec.vocab_skew);
      const std::string freq_str = format_double(freq);
      for (int j = 0; j < spec.vocab_per_region; ++j) {
        const std::string token = vocab_token(spec.regions[p], j);
        for (int year = year_lo; year <= year_hi; ++year) {
          tsv << token << '\t' << year << '\t' << freq_str << '\n';
        }
      }
    }
    const std::string base_str = format_double(spec.base_freq);
    for (int w = 0; w < spec.words; ++w) {
      const std::string word = word_name(w);
      for (int year = year_lo; year <= year_hi; ++year) {
        tsv << word << '\t' << year << '\t' << base_str << '\n';
      }
    }
    out.frequency_tsv[spec.regions[q]] = tsv.str();
  }

  json truth;
  truth["labels"] = labels;
  truth["spec"] = json::parse(spec.to_json());
  out.truth_json = truth.dump(2) + "\n";
  return out;
}

void write_synthetic(const SynthSpec& spec, const std::string& dir) {
  namespace fs = std::filesystem;
  const SynthOutput out = generate_synthetic(spec);

  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw data_error("synth: cannot create directory '" + dir + "': " + ec.message());

  const auto write_file = [&](const std::string& name, const std::string& bytes) {
    const fs::path path = fs::path(dir) / name;
    std::ofstream file(path, std::ios::binary);
    if (!file) throw data_error("synth: cannot write '" + path.string() + "'");
    file << bytes;
  };

  write_file("inventory.jsonl", out.inventory_jsonl);
  write_file("embeddings.tsv", out.embeddings_tsv);
  write_file("stopwords.txt", out.stopwords_txt);
  write_file("truth.json", out.truth_json);

  json freqs = json::object();
  for (const auto& [region, bytes] : out.frequency_tsv) {
    const std::string name = "freq_" + region.code + ".tsv";
    write_file(name, bytes);
    freqs[region.code] = name;
  }

  json cfg;
  cfg["inventory"] = "inventory.jsonl";
  cfg["embeddings"] = "embeddings.tsv";
  cfg["stopwords"] = "stopwords.txt";
  cfg["frequencies"] = freqs;
  json universe = json::array();
  for (const auto& r : spec.regions) universe.push_back(r.code);
  cfg["universe"] = universe;
  cfg["k"] = 3;
  cfg["history_start"] = 1800;
  cfg["test_start"] = 1900;
  cfg["repeats"] = 20;
  cfg["rng_seed"] = spec.seed;
  cfg["include_shared"] = spec.shared_per_word > 0;
  cfg["memory_years"] = nullptr;
  json models = json::array();
  if (spec.regions.size() == 2) {
    for (const char* name : {"form_need", "semantic_need", "context_need", "sense_freq", "lda",
                             "logreg", "onenn", "exemplar", "prototype"}) {
      models.push_back(name);
    }
  } else {
    for (const char* name : {"sense_freq", "lda", "logreg", "onenn", "exemplar", "prototype"}) {
      models.push_back(name);
    }
  }
  cfg["models"] = models;
  cfg["need_agg"] = "vote";
  write_file("eval_config.json", cfg.dump(2) + "\n");
}

}  // namespace slangvar
