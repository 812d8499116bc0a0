#include "slangvar/frequency.hpp"

#include <charconv>
#include <istream>

#include "slangvar/text.hpp"

namespace slangvar {

namespace {

bool parse_int(std::string_view s, int& out) {
  const char* first = s.data();
  const char* last = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last;
}

bool parse_double(std::string_view s, double& out) {
  const char* first = s.data();
  const char* last = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last;
}

std::string_view strip_cr(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  return line;
}

}  // namespace

FrequencyTable load_frequency_table(std::istream& stream, const Region& region,
                                    FreqLoadReport& report) {
  FrequencyTable table;
  table.region = region;

  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(stream, raw)) {
    ++line_no;
    const std::string_view line = strip_cr(raw);
    if (line.empty()) continue;

    const std::size_t tab1 = line.find('\t');
    const std::size_t tab2 = tab1 == std::string_view::npos
                                 ? std::string_view::npos
                                 : line.find('\t', tab1 + 1);
    if (tab2 == std::string_view::npos) {
      report.errors.emplace_back(line_no, "expected 3 tab-separated columns");
      continue;
    }
    const std::string_view word = line.substr(0, tab1);
    const std::string_view year_s = line.substr(tab1 + 1, tab2 - tab1 - 1);
    const std::string_view freq_s = line.substr(tab2 + 1);

    int year = 0;
    double freq = 0.0;
    if (word.empty() || !parse_int(year_s, year)) {
      report.errors.emplace_back(line_no, "bad word or year column");
      continue;
    }
    if (!parse_double(freq_s, freq) || freq < 0.0) {
      report.errors.emplace_back(line_no, "bad frequency column");
      continue;
    }
    table.entries[{lowercase(word), year}] += freq;
    ++report.rows_loaded;
  }
  return table;
}

double windowed_frequency(const FrequencyTable& table, std::string_view word, int t,
                          const NeedConfig& cfg) {
  double total = cfg.freq_smoothing;
  const std::string key = lowercase(word);
  const auto lo = table.entries.lower_bound({key, t - cfg.window_alpha});
  const auto hi = table.entries.lower_bound({key, t});  // year t itself excluded
  for (auto it = lo; it != hi; ++it) total += it->second;
  return total;
}

std::vector<std::string> content_words(std::string_view sentence, const StopwordSet& stopwords) {
  std::vector<std::string> out;
  for (const auto& token : tokenize(sentence)) {
    std::string lower = lowercase(token);
    if (stopwords.count(lower) == 0) out.push_back(std::move(lower));
  }
  return out;
}

StopwordSet load_stopwords(std::istream& stream) {
  StopwordSet set;
  std::string raw;
  while (std::getline(stream, raw)) {
    std::string_view line = strip_cr(raw);
    while (!line.empty() && (line.front() == ' ' || line.front() == '\t')) line.remove_prefix(1);
    while (!line.empty() && (line.back() == ' ' || line.back() == '\t')) line.remove_suffix(1);
    if (!line.empty()) set.insert(lowercase(line));
  }
  return set;
}

}  // namespace slangvar
