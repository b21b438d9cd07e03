/* Copyright 2026 The rfglove Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#pragma once

// Cohort experiment reports and CSV statistics, as JSON documents.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "json.hpp"

#include "rfglove/device.hpp"
#include "rfglove/energy.hpp"

namespace rfglove {

struct ExperimentOptions {
    int test_id = 1;
    int participants = 17;
    std::uint64_t seed = 1;
    std::optional<double> p_error;  // overrides the per-test default
    DeviceConfig device;
    energy::EnergyProfile energy;
    double battery_mAh = 2000.0;
};

/// Runs the cohort and assembles the report: parameters, per-participant
/// summaries, scores and statistics for the test. A statistic that cannot
/// be computed on the cohort appears as {"error": "..."}. The document has
/// no timestamps, so a given option set always yields the same bytes.
/// Throws std::invalid_argument for a test id outside 1..4 or fewer than
/// two participants.
nlohmann::json experiment_report(const ExperimentOptions& opt);

/// Traces of every participant, one JSON line per trace entry tagged with
/// the participant id (and condition for test 3).
std::string experiment_traces(const ExperimentOptions& opt);

/// Analyses a CSV of numeric columns with a header row.
///   ttest  exactly 2 columns, paired
///   anova  >= 2 columns (conditions), rows are subjects, plus Bonferroni pairs
///   alpha  >= 2 columns (items)
///   cv     exactly 1 column
/// Throws ParseError (with line) for malformed CSV and StatsError for a
/// shape the analysis cannot take or degenerate data.
nlohmann::json stats_report(std::string_view csv_text, std::string_view analysis);

/// Energy model summary embedded in experiment reports.
nlohmann::json energy_summary(const energy::EnergyProfile& p, double battery_mAh);

}  // namespace rfglove
