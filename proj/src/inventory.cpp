#include "slangvar/inventory.hpp"

#include <algorithm>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "slangvar/error.hpp"
#include "slangvar/text.hpp"

namespace slangvar {

using nlohmann::json;

std::string ParseReport::to_json() const {
  json j;
  j["dropped_references"] = dropped_references;
  j["dropped_senses"] = dropped_senses;
  j["dropped_words"] = dropped_words;
  json errs = json::array();
  for (const auto& [line, msg] : errors) {
    errs.push_back(json{{"line", line}, {"message", msg}});
  }
  j["errors"] = errs;
  return j.dump();
}

std::optional<std::string> extract_context(std::string_view sentence, std::string_view word) {
  const std::vector<std::string> sent_tokens = tokenize(sentence);
  const std::vector<std::string> word_tokens = tokenize(word);
  if (word_tokens.empty() || sent_tokens.size() < word_tokens.size()) return std::nullopt;

  std::size_t occurrences = 0;
  for (std::size_t i = 0; i + word_tokens.size() <= sent_tokens.size(); ++i) {
    bool match = true;
    for (std::size_t j = 0; j < word_tokens.size(); ++j) {
      if (sent_tokens[i + j] != word_tokens[j]) {
        match = false;
        break;
      }
    }
    if (match) ++occurrences;
  }
  if (occurrences == 1) return std::string(sentence);
  return std::nullopt;
}

RegionList regional_identity_at(const SenseEntry& sense, int year, const RegionList& universe) {
  RegionList out;
  for (const auto& region : universe) {
    for (const auto& ref : sense.references) {
      if (ref.year <= year && ref.region == region) {
        out.push_back(region);
        break;
      }
    }
  }
  return out;
}

RegionList regional_identity_final(const SenseEntry& sense, const RegionList& universe) {
  return regional_identity_at(sense, kMaxValidYear, universe);
}

namespace {

std::string string_field(const json& obj, const char* key) {
  if (obj.is_object() && obj.contains(key) && obj.at(key).is_string()) {
    return obj.at(key).get<std::string>();
  }
  return {};
}

// Pulls the senses out of one raw record. Counts invalid references and
// senses; returns senses that keep at least one valid reference.
std::vector<SenseEntry> parse_senses(const json& record, const std::string& word,
                                     ParseReport& report) {
  std::vector<SenseEntry> out;
  for (const auto& raw_sense : record.at("senses")) {
    if (!raw_sense.is_object()) {
      ++report.dropped_senses;
      continue;
    }
    SenseEntry sense;
    sense.word = word;
    sense.definition = string_field(raw_sense, "definition");
    const json refs_json = (raw_sense.contains("references") &&
                            raw_sense.at("references").is_array())
                               ? raw_sense.at("references")
                               : json::array();
    for (const auto& raw_ref : refs_json) {
      if (!raw_ref.is_object()) {
        ++report.dropped_references;
        continue;
      }
      const json& region = raw_ref.contains("region") ? raw_ref.at("region") : json();
      const json& year = raw_ref.contains("year") ? raw_ref.at("year") : json();
      if (!region.is_string() || region.get<std::string>().empty() ||
          !year.is_number_integer()) {
        ++report.dropped_references;
        continue;
      }
      const int y = year.get<int>();
      if (y < kMinValidYear || y > kMaxValidYear) {
        ++report.dropped_references;
        continue;
      }
      Reference ref;
      ref.region = Region(region.get<std::string>());
      ref.year = y;
      ref.origin = string_field(raw_ref, "origin");
      if (raw_ref.contains("context") && raw_ref.at("context").is_string()) {
        ref.context = extract_context(raw_ref.at("context").get<std::string>(), word);
      }
      sense.references.push_back(std::move(ref));
    }
    if (sense.references.empty()) {
      ++report.dropped_senses;
      continue;
    }
    sense.emergence_year = sense.references.front().year;
    for (const auto& ref : sense.references) {
      sense.emergence_year = std::min(sense.emergence_year, ref.year);
    }
    // Sense context: earliest-year reference carrying one; first in file
    // order wins on ties.
    int best_year = kMaxValidYear + 1;
    for (const auto& ref : sense.references) {
      if (ref.context && ref.year < best_year) {
        best_year = ref.year;
        sense.context = ref.context;
      }
    }
    out.push_back(std::move(sense));
  }
  return out;
}

}  // namespace

Inventory parse_inventory(std::istream& stream, ParseReport& report) {
  Inventory inv;
  std::map<std::string, std::size_t> form_index;
  std::set<Region> regions_seen;

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(stream, line)) {
    ++line_no;
    if (line.empty() || line.find_first_not_of(" \t\r") == std::string::npos) continue;

    json record;
    try {
      record = json::parse(line);
    } catch (const json::exception& e) {
      report.errors.emplace_back(line_no, e.what());
      continue;
    }

    try {
      if (!record.is_object() || !record.contains("word") || !record.at("word").is_string() ||
          !record.contains("senses") || !record.at("senses").is_array()) {
        report.errors.emplace_back(line_no, "record is not a word object with senses");
        continue;
      }
      const std::string word = record.at("word").get<std::string>();
      const std::size_t raw_sense_count = record.at("senses").size();

      const bool is_abbrev = record.contains("is_abbreviation") &&
                             record.at("is_abbreviation").is_boolean() &&
                             record.at("is_abbreviation").get<bool>();
      if (is_abbrev) {
        ++report.dropped_words;
        report.dropped_senses += raw_sense_count;
        continue;
      }

      std::vector<SenseEntry> senses = parse_senses(record, word, report);
      if (senses.empty()) {
        ++report.dropped_words;
        continue;
      }

      auto [it, inserted] = form_index.try_emplace(word, inv.words.size());
      if (inserted) {
        WordEntry entry;
        entry.form = word;
        entry.pos = string_field(record, "pos");
        inv.words.push_back(std::move(entry));
      }
      WordEntry& entry = inv.words[it->second];
      for (auto& sense : senses) {
        for (const auto& ref : sense.references) regions_seen.insert(ref.region);
        entry.senses.push_back(std::move(sense));
      }
    } catch (const json::exception& e) {
      report.errors.emplace_back(line_no, e.what());
    }
  }

  for (auto& word : inv.words) {
    for (std::size_t i = 0; i < word.senses.size(); ++i) {
      word.senses[i].id = word.form + "#" + std::to_string(i);
    }
  }
  inv.region_universe.assign(regions_seen.begin(), regions_seen.end());

  if (inv.words.empty()) {
    throw data_error("parse_inventory: no valid sense entries in input");
  }
  return inv;
}

Inventory shared_word_filter(const Inventory& inv, const RegionList& universe) {
  if (universe.size() < 2) {
    throw config_error("shared_word_filter: universe needs at least 2 regions");
  }
  Inventory out;
  std::set<Region> regions_seen;
  for (const auto& word : inv.words) {
    std::set<Region> present;
    for (const auto& sense : word.senses) {
      for (const auto& ref : sense.references) {
        if (contains(universe, ref.region)) present.insert(ref.region);
      }
    }
    if (present.size() >= 2) {
      out.words.push_back(word);
      for (const auto& sense : word.senses) {
        for (const auto& ref : sense.references) regions_seen.insert(ref.region);
      }
    }
  }
  out.region_universe.assign(regions_seen.begin(), regions_seen.end());
  return out;
}

void serialize_inventory(const Inventory& inv, std::ostream& out) {
  for (const auto& word : inv.words) {
    json senses = json::array();
    for (const auto& sense : word.senses) {
      json refs = json::array();
      for (const auto& ref : sense.references) {
        refs.push_back(json{{"region", ref.region.code},
                            {"year", ref.year},
                            {"origin", ref.origin},
                            {"context", ref.context ? json(*ref.context) : json()}});
      }
      senses.push_back(json{{"id", sense.id},
                            {"definition", sense.definition},
                            {"references", refs},
                            {"emergence_year", sense.emergence_year},
                            {"context", sense.context ? json(*sense.context) : json()}});
    }
    const json record{{"word", word.form},
                      {"pos", word.pos},
                      {"is_abbreviation", false},
                      {"senses", senses}};
    out << record.dump() << "\n";
  }
}

}  // namespace slangvar
