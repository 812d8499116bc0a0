#include "slangvar/embedding.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>

#include "slangvar/error.hpp"

namespace slangvar {

double squared_distance(const EmbeddingVector& a, const EmbeddingVector& b) {
  if (a.size() != b.size()) {
    throw data_error("squared_distance: dimension mismatch (" + std::to_string(a.size()) +
                     " vs " + std::to_string(b.size()) + ")");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    total += d * d;
  }
  return total;
}

EmbeddingStore EmbeddingStore::load(std::istream& stream, bool l2_normalize) {
  EmbeddingStore store;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(stream, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;

    const std::size_t tab = line.find('\t');
    if (tab == std::string::npos || tab == 0) {
      throw data_error("embedding row " + std::to_string(line_no) + ": expected `id<TAB>values`");
    }
    const std::string id = line.substr(0, tab);

    EmbeddingVector vec;
    const char* ptr = line.data() + tab + 1;
    const char* end = line.data() + line.size();
    while (ptr != end) {
      while (ptr != end && (*ptr == ' ' || *ptr == '\t')) ++ptr;
      if (ptr == end) break;
      double value = 0.0;
      auto [next, ec] = std::from_chars(ptr, end, value);
      if (ec != std::errc()) {
        throw data_error("embedding '" + id + "' (row " + std::to_string(line_no) +
                         "): unparseable value");
      }
      if (!std::isfinite(value)) {
        throw data_error("embedding '" + id + "' (row " + std::to_string(line_no) +
                         "): non-finite value");
      }
      vec.push_back(value);
      ptr = next;
    }
    if (vec.empty()) {
      throw data_error("embedding '" + id + "' (row " + std::to_string(line_no) + "): no values");
    }
    if (store.dim_ == 0) {
      store.dim_ = vec.size();
    } else if (vec.size() != store.dim_) {
      throw data_error("embedding '" + id + "' (row " + std::to_string(line_no) +
                       "): dimension " + std::to_string(vec.size()) + " != " +
                       std::to_string(store.dim_));
    }
    if (l2_normalize) {
      double norm = 0.0;
      for (const double v : vec) norm += v * v;
      norm = std::sqrt(norm);
      if (norm > 0.0) {
        for (double& v : vec) v /= norm;
      }
    }
    if (store.vectors_.count(id) != 0) {
      throw data_error("embedding '" + id + "' (row " + std::to_string(line_no) +
                       "): duplicate id");
    }
    store.insert(id, std::move(vec));
  }
  return store;
}

const EmbeddingVector& EmbeddingStore::require(const std::string& id) const {
  const EmbeddingVector* vec = find(id);
  if (vec == nullptr) {
    throw config_error("no embedding for sense id '" + id + "'");
  }
  return *vec;
}

const EmbeddingVector* EmbeddingStore::find(const std::string& id) const {
  const auto it = vectors_.find(id);
  return it == vectors_.end() ? nullptr : &it->second;
}

void EmbeddingStore::insert(const std::string& id, EmbeddingVector vec) {
  if (dim_ == 0) dim_ = vec.size();
  if (vectors_.emplace(id, std::move(vec)).second) order_.push_back(id);
}

void EmbeddingStore::serialize(std::ostream& out) const {
  char buf[64];
  for (const auto& id : order_) {
    out << id << '\t';
    const EmbeddingVector& vec = vectors_.at(id);
    for (std::size_t i = 0; i < vec.size(); ++i) {
      auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), vec[i]);
      if (i != 0) out << ' ';
      out.write(buf, ptr - buf);
    }
    out << '\n';
  }
}

}  // namespace slangvar
