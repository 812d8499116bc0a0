#include <doctest.h>

#include <cmath>
#include <limits>

#include "slangvar/error.hpp"
#include "slangvar/report.hpp"

using namespace slangvar;

namespace {

const RegionList kUniverse{Region("US"), Region("UK")};

AccuracyReport sample_report() {
  AccuracyReport report;
  report.model = "exemplar";
  report.repeats = 20;
  report.sample_size = 788;
  report.overall_mean = 59.3456789;
  report.overall_std = 0.84612;
  report.per_region_mean = {{Region("US"), 60.04}, {Region("UK"), 58.649}};
  report.excluded_no_context = 3;
  report.fallback_predictions = 1;
  return report;
}

}  // namespace

TEST_CASE("one report renders as a header plus one data row") {
  const std::string tsv = reports_to_tsv({sample_report()}, kUniverse);
  CHECK(tsv ==
        "model\tslice_type\tslice\tn\trepeats\toverall_acc\toverall_std\tacc_US\tacc_UK\t"
        "excluded_no_context\tfallback_predictions\n"
        "exemplar\tall\t-\t788\t20\t59.3\t0.85\t60.0\t58.6\t3\t1\n");
}

TEST_CASE("missing accuracies print as dashes") {
  AccuracyReport report = sample_report();
  report.sample_size = 0;
  report.overall_mean = std::numeric_limits<double>::quiet_NaN();
  report.overall_std = std::numeric_limits<double>::quiet_NaN();
  report.per_region_mean = {{Region("US"), std::numeric_limits<double>::quiet_NaN()},
                            {Region("UK"), std::numeric_limits<double>::quiet_NaN()}};
  const std::string tsv = reports_to_tsv({report}, kUniverse);
  CHECK(tsv.find("\t-\t-\t-\t-\t") != std::string::npos);
}

TEST_CASE("json round-trip is lossless and tsv conversion matches") {
  AccuracyReport second = sample_report();
  second.model = "context_need:vote";
  second.slice_type = "decade";
  second.slice = "1940";
  second.overall_mean = 47.0123456789012345;

  const std::vector<AccuracyReport> reports{sample_report(), second};
  const std::string config = R"({"rng_seed":7,"k":5})";
  const std::string json_text = reports_to_json(reports, kUniverse, config);

  RegionList universe;
  std::string config_echo;
  const auto parsed = reports_from_json(json_text, universe, config_echo);
  REQUIRE(parsed.size() == 2);
  CHECK(universe == kUniverse);

  for (std::size_t i = 0; i < reports.size(); ++i) {
    CHECK(parsed[i].model == reports[i].model);
    CHECK(parsed[i].slice_type == reports[i].slice_type);
    CHECK(parsed[i].slice == reports[i].slice);
    CHECK(parsed[i].sample_size == reports[i].sample_size);
    CHECK(parsed[i].repeats == reports[i].repeats);
    CHECK(parsed[i].overall_mean == reports[i].overall_mean);  // full precision
    CHECK(parsed[i].overall_std == reports[i].overall_std);
    REQUIRE(parsed[i].per_region_mean.size() == reports[i].per_region_mean.size());
    for (std::size_t r = 0; r < reports[i].per_region_mean.size(); ++r) {
      CHECK(parsed[i].per_region_mean[r].first == reports[i].per_region_mean[r].first);
      CHECK(parsed[i].per_region_mean[r].second == reports[i].per_region_mean[r].second);
    }
  }

  // Round-trip again: the serialized form is a fixed point.
  CHECK(reports_to_json(parsed, universe, config_echo) == json_text);

  // TSV printed from the parsed reports matches TSV printed directly.
  CHECK(reports_to_tsv(parsed, universe) == reports_to_tsv(reports, kUniverse));
}

TEST_CASE("size-zero rows with missing accuracies survive the json round-trip") {
  AccuracyReport report = sample_report();
  report.slice_type = "decade";
  report.slice = "1950";
  report.sample_size = 0;
  report.repeats = 0;
  report.overall_mean = std::numeric_limits<double>::quiet_NaN();
  report.overall_std = std::numeric_limits<double>::quiet_NaN();
  report.per_region_mean = {{Region("US"), std::numeric_limits<double>::quiet_NaN()},
                            {Region("UK"), std::numeric_limits<double>::quiet_NaN()}};

  const std::string json_text = reports_to_json({report}, kUniverse, "{}");
  RegionList universe;
  std::string config;
  const auto parsed = reports_from_json(json_text, universe, config);
  REQUIRE(parsed.size() == 1);
  CHECK(std::isnan(parsed[0].overall_mean));
  CHECK(std::isnan(parsed[0].per_region_mean[0].second));
  CHECK(reports_to_json(parsed, universe, config) == json_text);
  CHECK(reports_to_tsv(parsed, universe) == reports_to_tsv({report}, kUniverse));
}

TEST_CASE("malformed report json is a data error") {
  RegionList universe;
  std::string config;
  CHECK_THROWS_AS(reports_from_json("not json", universe, config), data_error);
  CHECK_THROWS_AS(reports_from_json("{}", universe, config), data_error);
}
