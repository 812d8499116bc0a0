#ifndef SLANGVAR_REGION_HPP
#define SLANGVAR_REGION_HPP

#include <compare>
#include <string>
#include <string_view>
#include <vector>

namespace slangvar {

// A region code such as "US", "UK" or "AUS". Codes compare by exact string
// equality after uppercasing, so construction normalizes to uppercase.
struct Region {
  std::string code;

  Region() = default;
  explicit Region(std::string_view raw) : code(uppercase(raw)) {}

  static std::string uppercase(std::string_view raw) {
    std::string out(raw);
    for (char& c : out) {
      if (c >= 'a' && c <= 'z') c = static_cast<char>(c - 'a' + 'A');
    }
    return out;
  }

  bool empty() const { return code.empty(); }
  auto operator<=>(const Region&) const = default;
};

using RegionList = std::vector<Region>;

inline bool contains(const RegionList& list, const Region& r) {
  for (const auto& x : list) {
    if (x == r) return true;
  }
  return false;
}

}  // namespace slangvar

#endif
