#include "slangvar/report.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

#include <json.hpp>

#include "slangvar/error.hpp"

namespace slangvar {

using nlohmann::json;

namespace {

std::string fixed(double v, int decimals) {
  if (std::isnan(v)) return "-";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
  return buf;
}

json number_or_null(double v) { return std::isnan(v) ? json() : json(v); }

double number_from(const json& j) {
  return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>();
}

}  // namespace

std::string reports_to_tsv(const std::vector<AccuracyReport>& reports,
                           const RegionList& universe) {
  std::string out = "model\tslice_type\tslice\tn\trepeats\toverall_acc\toverall_std";
  for (const auto& region : universe) out += "\tacc_" + region.code;
  out += "\texcluded_no_context\tfallback_predictions\n";

  for (const auto& report : reports) {
    out += report.model;
    out += '\t';
    out += report.slice_type;
    out += '\t';
    out += report.slice;
    out += '\t';
    out += std::to_string(report.sample_size);
    out += '\t';
    out += std::to_string(report.repeats);
    out += '\t';
    out += fixed(report.overall_mean, 1);
    out += '\t';
    out += fixed(report.overall_std, 2);
    for (const auto& region : universe) {
      double value = std::numeric_limits<double>::quiet_NaN();
      for (const auto& [r, v] : report.per_region_mean) {
        if (r == region) {
          value = v;
          break;
        }
      }
      out += '\t';
      out += fixed(value, 1);
    }
    out += '\t';
    out += std::to_string(report.excluded_no_context);
    out += '\t';
    out += std::to_string(report.fallback_predictions);
    out += '\n';
  }
  return out;
}

std::string reports_to_json(const std::vector<AccuracyReport>& reports,
                            const RegionList& universe, const std::string& config_json) {
  json doc;
  json universe_json = json::array();
  for (const auto& region : universe) universe_json.push_back(region.code);
  doc["universe"] = universe_json;
  try {
    doc["config"] = config_json.empty() ? json::object() : json::parse(config_json);
  } catch (const json::exception&) {
    doc["config"] = config_json;  // opaque echo
  }

  json rows = json::array();
  for (const auto& report : reports) {
    json row;
    row["model"] = report.model;
    row["slice_type"] = report.slice_type;
    row["slice"] = report.slice;
    row["sample_size"] = report.sample_size;
    row["repeats"] = report.repeats;
    row["overall_mean"] = number_or_null(report.overall_mean);
    row["overall_std"] = number_or_null(report.overall_std);
    json per_region = json::object();
    for (const auto& [region, value] : report.per_region_mean) {
      per_region[region.code] = number_or_null(value);
    }
    row["per_region_mean"] = per_region;
    row["excluded_no_context"] = report.excluded_no_context;
    row["fallback_predictions"] = report.fallback_predictions;
    rows.push_back(std::move(row));
  }
  doc["reports"] = rows;
  return doc.dump(2) + "\n";
}

std::vector<AccuracyReport> reports_from_json(const std::string& text, RegionList& universe,
                                              std::string& config_json) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw data_error(std::string("report JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("reports") || !doc.at("reports").is_array()) {
    throw data_error("report JSON: missing 'reports' array");
  }
  universe.clear();
  for (const auto& code : doc.value("universe", json::array())) {
    universe.emplace_back(code.get<std::string>());
  }
  config_json = doc.contains("config") ? doc.at("config").dump() : std::string();

  std::vector<AccuracyReport> reports;
  for (const auto& row : doc.at("reports")) {
    AccuracyReport report;
    report.model = row.value("model", std::string());
    report.slice_type = row.value("slice_type", std::string("all"));
    report.slice = row.value("slice", std::string("-"));
    report.sample_size = row.value("sample_size", std::size_t{0});
    report.repeats = row.value("repeats", 0);
    report.overall_mean = number_from(row.contains("overall_mean") ? row.at("overall_mean") : json());
    report.overall_std = number_from(row.contains("overall_std") ? row.at("overall_std") : json());
    if (row.contains("per_region_mean")) {
      // Universe order when known, otherwise the object's own (sorted) order.
      const json& per_region = row.at("per_region_mean");
      if (!universe.empty()) {
        for (const auto& region : universe) {
          if (per_region.contains(region.code)) {
            report.per_region_mean.emplace_back(region, number_from(per_region.at(region.code)));
          }
        }
      } else {
        for (const auto& [code, value] : per_region.items()) {
          report.per_region_mean.emplace_back(Region(code), number_from(value));
        }
      }
    }
    report.excluded_no_context = row.value("excluded_no_context", std::size_t{0});
    report.fallback_predictions = row.value("fallback_predictions", std::size_t{0});
    reports.push_back(std::move(report));
  }
  return reports;
}

}  // namespace slangvar
