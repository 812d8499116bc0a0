#ifndef SLANGVAR_FREQUENCY_HPP
#define SLANGVAR_FREQUENCY_HPP

#include <iosfwd>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "slangvar/region.hpp"

namespace slangvar {

// Per-region normalized word frequencies keyed by (lowercased word, year).
struct FrequencyTable {
  Region region;
  std::map<std::pair<std::string, int>, double> entries;
};

struct FreqLoadReport {
  std::size_t rows_loaded = 0;
  std::vector<std::pair<std::size_t, std::string>> errors;  // (line number, message)
};

struct NeedConfig {
  int window_alpha = 10;          // years strictly preceding emergence
  double freq_smoothing = 1e-8;   // added to every windowed frequency
  double vote_smoothing = 1.0;    // added to every region's vote count
  bool weighted_vote = false;     // weigh each vote by the winning frequency
};

using StopwordSet = std::set<std::string>;

// TSV rows `word<TAB>year<TAB>normalized_frequency`. Words are lowercased and
// duplicate (word, year) rows are summed. Bad rows go to the report.
FrequencyTable load_frequency_table(std::istream& stream, const Region& region,
                                    FreqLoadReport& report);

// freq_smoothing + sum of the word's yearly frequencies over [t - alpha, t).
double windowed_frequency(const FrequencyTable& table, std::string_view word, int t,
                          const NeedConfig& cfg);

// Lowercased tokens of the sentence minus stopwords, order preserved,
// duplicates retained.
std::vector<std::string> content_words(std::string_view sentence, const StopwordSet& stopwords);

// One lowercase token per line; blank lines ignored.
StopwordSet load_stopwords(std::istream& stream);

}  // namespace slangvar

#endif
