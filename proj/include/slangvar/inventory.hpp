#ifndef SLANGVAR_INVENTORY_HPP
#define SLANGVAR_INVENTORY_HPP

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "slangvar/region.hpp"

namespace slangvar {

// One dated, region-tagged attestation of a sense. Records missing either
// the region or a plausible year are dropped at parse time.
struct Reference {
  Region region;
  int year = 0;
  std::string origin;
  std::optional<std::string> context;  // usage sentence containing the word exactly once
};

constexpr int kMinValidYear = 1000;
constexpr int kMaxValidYear = 2100;

struct SenseEntry {
  std::string id;          // "<word>#<ordinal>", unique within an inventory
  std::string word;
  std::string definition;
  std::vector<Reference> references;  // file order, all valid
  int emergence_year = 0;             // minimum year over references
  std::optional<std::string> context; // context of the earliest reference that has one
};

struct WordEntry {
  std::string form;
  std::string pos;
  std::vector<SenseEntry> senses;
};

struct Inventory {
  std::vector<WordEntry> words;   // first-appearance file order
  RegionList region_universe;     // every region observed, sorted

  std::size_t sense_count() const {
    std::size_t n = 0;
    for (const auto& w : words) n += w.senses.size();
    return n;
  }
};

struct ParseReport {
  std::size_t dropped_references = 0;
  std::size_t dropped_senses = 0;
  std::size_t dropped_words = 0;
  std::vector<std::pair<std::size_t, std::string>> errors;  // (line number, message)

  std::string to_json() const;
};

// Reads JSON-lines word records, applying the validity rules: references
// without region or in-range year are dropped, senses left with no valid
// reference are dropped, abbreviation-flagged records are dropped whole,
// and records sharing a word form are collapsed into one entry.
// Malformed lines are collected in the report and parsing continues.
// Throws data_error when nothing survives.
Inventory parse_inventory(std::istream& stream, ParseReport& report);

// Returns the sentence iff `word` occurs in it exactly once as a whole-token,
// case-sensitive match (multi-token forms match as token subsequences).
std::optional<std::string> extract_context(std::string_view sentence, std::string_view word);

// Regions attested for the sense by the end of `year`, restricted to the
// universe and returned in universe order. Monotone nondecreasing in year.
RegionList regional_identity_at(const SenseEntry& sense, int year, const RegionList& universe);

// Identity over the full reference list (year unbounded).
RegionList regional_identity_final(const SenseEntry& sense, const RegionList& universe);

// Keeps only words whose references collectively span at least two distinct
// regions of the universe. Retained senses are untouched.
Inventory shared_word_filter(const Inventory& inv, const RegionList& universe);

// Canonical JSON-lines form: the input schema plus computed fields
// (id, emergence_year, sense-level context). Reparsing the output
// reproduces the inventory exactly.
void serialize_inventory(const Inventory& inv, std::ostream& out);

}  // namespace slangvar

#endif
