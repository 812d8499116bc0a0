#ifndef SLANGVAR_REPORT_HPP
#define SLANGVAR_REPORT_HPP

#include <string>
#include <vector>

#include "slangvar/eval.hpp"

namespace slangvar {

// TSV: one header plus one row per report. Accuracies are printed with one
// decimal and the across-sample std with two, mirroring the usual results
// tables; missing values print "-". Aggregation stays in full precision and
// rounding happens only here.
std::string reports_to_tsv(const std::vector<AccuracyReport>& reports,
                           const RegionList& universe);

// JSON mirror with full precision plus the resolved run config.
std::string reports_to_json(const std::vector<AccuracyReport>& reports,
                            const RegionList& universe, const std::string& config_json);

// Parses reports_to_json output; returns reports and fills universe and
// config_json. Round-trips losslessly.
std::vector<AccuracyReport> reports_from_json(const std::string& text, RegionList& universe,
                                              std::string& config_json);

}  // namespace slangvar

#endif
