/*
 * Copyright 2026 The tscore Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */


#ifndef TSCORE_REPORT_H_
#define TSCORE_REPORT_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "tscore/checkpoint_select.h"
#include "tscore/core_metrics.h"
#include "tscore/run.h"

namespace tscore::report {

struct ScoreOptions {
  std::optional<std::size_t> hopkins_m;  // default: HopkinsConfig::defaults_for
  std::size_t hopkins_repetitions = 5;
  std::uint64_t seed = 0;
  std::size_t jobs = 0;  // 0: hardware concurrency
};

HopkinsConfig hopkins_config_for(std::size_t num_samples,
                                 const ScoreOptions& options);

// Scores the given manifest positions, possibly concurrently. Results come
// back in the order of `positions`; if any epoch fails, the error of the
// earliest failing position is rethrown.
std::vector<MetricReport> score_positions(const Run& run,
                                          const std::vector<std::size_t>& positions,
                                          const ScoreOptions& options);

std::vector<MetricReport> score_all(const Run& run, const ScoreOptions& options);

nlohmann::json to_json(const MetricReport& report);

enum class RankEpoch { kLast, kSelected };

struct RankEntry {
  std::string run_id;
  std::string method;
  std::map<std::string, std::string> hyperparameters;
  MetricReport report;
};

// Sorted by transfer score descending, ties by run_id ascending. Requires at
// least two runs sharing the same class count.
std::vector<RankEntry> rank_runs(const std::vector<Run>& runs, RankEpoch mode,
                                 const ScoreOptions& options,
                                 const SelectionConfig& selection = {});
nlohmann::json rank_to_json(const std::vector<RankEntry>& entries,
                            RankEpoch mode);
std::string rank_to_csv(const std::vector<RankEntry>& entries);

struct EpochSelection {
  std::string run_id;
  SelectionConfig config;
  SelectionResult result;
  std::vector<MetricReport> reports;
};

EpochSelection select_epoch(const Run& run, const SelectionConfig& config,
                            const ScoreOptions& options);
nlohmann::json to_json(const EpochSelection& selection);

struct CorrelationReport {
  std::string run_id;
  std::vector<std::int64_t> epochs;
  std::vector<double> scores;
  std::vector<double> accuracies;
  double pearson_r = 0.0;
};

CorrelationReport correlate(const Run& run, const ScoreOptions& options);
nlohmann::json to_json(const CorrelationReport& report);
std::string correlation_to_csv(const CorrelationReport& report);

// Shortest round-trip decimal form of a double, as used in every report.
std::string format_number(double value);

}  // namespace tscore::report

#endif  // TSCORE_REPORT_H_
