#ifndef SLANGVAR_SYNTHETIC_HPP
#define SLANGVAR_SYNTHETIC_HPP

#include <cstdint>
#include <map>
#include <string>

#include "slangvar/region.hpp"

namespace slangvar {

// Parameters of the synthetic corpus generator. The embedding signal
// (cluster_separation) and the frequency signal (vocab_skew) are independent,
// so either family of models can be stress-tested in isolation. Zero on both
// leaves the region labels carrying no information at all.
struct SynthSpec {
  RegionList regions{Region("US"), Region("UK")};
  int words = 40;
  int senses_pre_per_region = 4;   // emergence in (pre_year_lo, pre_year_hi]
  int senses_post_per_region = 4;  // emergence in [post_year_lo, post_year_hi]
  int shared_per_word = 0;         // senses attested in two regions, pre period
  int dim = 8;
  double cluster_separation = 0.0;  // distance between region cluster means
  double within_std = 1.0;          // per-coordinate std inside a cluster
  double vocab_skew = 0.0;          // in [0,1]: 0 = no regional vocabulary signal
  int vocab_per_region = 25;
  int tokens_per_sentence = 7;
  int pre_year_lo = 1820;
  int pre_year_hi = 1900;
  int post_year_lo = 1901;
  int post_year_hi = 2000;
  double base_freq = 1e-5;
  std::uint64_t seed = 1;
  // Draw post-period sense regions iid (pre-period blocks stay fixed).
  // Fixed per-word counts make the majority-history baseline anti-correlate
  // with the label (an emerging sense depletes its own region's remaining
  // history), so chance-level controls need iid test labels.
  bool random_labels = false;

  void validate() const;
  static SynthSpec from_json(const std::string& text);
  std::string to_json() const;
};

// The generated corpus as exact file bytes in the ingestion formats, plus
// the generating region of every sense id.
struct SynthOutput {
  std::string inventory_jsonl;
  std::string embeddings_tsv;
  std::map<Region, std::string> frequency_tsv;
  std::string stopwords_txt;
  std::string truth_json;  // {"labels": {id: region}, "spec": {...}}
  std::map<std::string, Region> labels;
};

SynthOutput generate_synthetic(const SynthSpec& spec);

// generate_synthetic plus file emission: inventory.jsonl, embeddings.tsv,
// freq_<REGION>.tsv, stopwords.txt, truth.json and a ready-to-run
// eval_config.json pointing at them.
void write_synthetic(const SynthSpec& spec, const std::string& dir);

}  // namespace slangvar

#endif
