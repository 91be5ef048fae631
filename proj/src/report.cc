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


#include "tscore/report.h"

#include <algorithm>
#include <atomic>
#include <exception>
#include <sstream>
#include <thread>

#include "tscore/baseline_metrics.h"
#include "tscore/errors.h"

namespace tscore::report {

using nlohmann::json;

namespace {

json optional_number(const std::optional<double>& value) {
  return value ? json(*value) : json();
}

std::string csv_field(const std::string& text) {
  if (text.find_first_of(",\"\n") == std::string::npos) return text;
  std::string quoted = "\"";
  for (char c : text) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  return quoted + '"';
}

}  // namespace

std::string format_number(double value) { return json(value).dump(); }

HopkinsConfig hopkins_config_for(std::size_t num_samples,
                                 const ScoreOptions& options) {
  HopkinsConfig config = HopkinsConfig::defaults_for(num_samples, options.seed);
  if (options.hopkins_m) config.m = *options.hopkins_m;
  config.repetitions = options.hopkins_repetitions;
  return config;
}

std::vector<MetricReport> score_positions(const Run& run,
                                          const std::vector<std::size_t>& positions,
                                          const ScoreOptions& options) {
  std::vector<MetricReport> reports(positions.size());
  std::vector<std::exception_ptr> errors(positions.size());
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t i = next++; i < positions.size(); i = next++) {
      try {
        const EpochRecord record = run.load_epoch(positions[i]);
        reports[i] = transfer_score(
            record, hopkins_config_for(record.num_samples(), options));
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  std::size_t jobs = options.jobs ? options.jobs : std::thread::hardware_concurrency();
  jobs = std::clamp<std::size_t>(jobs, 1, std::max<std::size_t>(positions.size(), 1));
  {
    std::vector<std::jthread> pool;
    for (std::size_t t = 1; t < jobs; ++t) pool.emplace_back(worker);
    worker();
  }
  for (const auto& error : errors) {
    if (error) std::rethrow_exception(error);
  }
  return reports;
}

std::vector<MetricReport> score_all(const Run& run, const ScoreOptions& options) {
  std::vector<std::size_t> positions(run.size());
  for (std::size_t i = 0; i < positions.size(); ++i) positions[i] = i;
  return score_positions(run, positions, options);
}

json to_json(const MetricReport& report) {
  json out;
  out["epoch"] = report.epoch;
  out["k"] = report.num_classes;
  out["u"] = report.uniformity;
  out["h"] = report.hopkins;
  out["m"] = report.mutual_info;
  out["t"] = report.transfer_score;
  out["accuracy"] = optional_number(report.accuracy);
  if (report.simplex_bound_violated) out["simplex_bound_violated"] = true;
  return out;
}

std::vector<RankEntry> rank_runs(const std::vector<Run>& runs, RankEpoch mode,
                                 const ScoreOptions& options,
                                 const SelectionConfig& selection) {
  if (runs.size() < 2) {
    throw IngestError("need >= 2 runs to rank, got " + std::to_string(runs.size()));
  }
  std::vector<RankEntry> entries;
  for (const Run& run : runs) {
    RankEntry entry;
    entry.run_id = run.manifest().run_id;
    entry.method = run.manifest().method;
    entry.hyperparameters = run.manifest().hyperparameters;
    if (mode == RankEpoch::kLast) {
      entry.report = score_positions(run, {run.size() - 1}, options).front();
    } else {
      const EpochSelection chosen = select_epoch(run, selection, options);
      entry.report = chosen.reports[chosen.result.selected_position];
    }
    if (!entries.empty() &&
        entries.front().report.num_classes != entry.report.num_classes) {
      throw IngestError("inconsistent K across runs: " +
                        std::to_string(entries.front().report.num_classes) +
                        " vs " + std::to_string(entry.report.num_classes) +
                        " (run " + entry.run_id + ")");
    }
    entries.push_back(std::move(entry));
  }
  std::stable_sort(entries.begin(), entries.end(),
                   [](const RankEntry& a, const RankEntry& b) {
                     if (a.report.transfer_score != b.report.transfer_score) {
                       return a.report.transfer_score > b.report.transfer_score;
                     }
                     return a.run_id < b.run_id;
                   });
  return entries;
}

json rank_to_json(const std::vector<RankEntry>& entries, RankEpoch mode) {
  json out;
  out["epoch_mode"] = mode == RankEpoch::kLast ? "last" : "selected";
  out["entries"] = json::array();
  for (std::size_t i = 0; i < entries.size(); ++i) {
    json entry = to_json(entries[i].report);
    entry["rank"] = i + 1;
    entry["run_id"] = entries[i].run_id;
    entry["method"] = entries[i].method;
    entry["hyperparameters"] = entries[i].hyperparameters;
    out["entries"].push_back(std::move(entry));
  }
  return out;
}

std::string rank_to_csv(const std::vector<RankEntry>& entries) {
  std::ostringstream out;
  out << "rank,run_id,method,hyperparameters,epoch,u,h,m,t,accuracy\n";
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const auto& e = entries[i];
    std::string hyper;
    for (const auto& [key, value] : e.hyperparameters) {
      if (!hyper.empty()) hyper += ';';
      hyper += key + '=' + value;
    }
    out << i + 1 << ',' << csv_field(e.run_id) << ',' << csv_field(e.method) << ','
        << csv_field(hyper) << ','
        << e.report.epoch << ',' << format_number(e.report.uniformity) << ','
        << format_number(e.report.hopkins) << ','
        << format_number(e.report.mutual_info) << ','
        << format_number(e.report.transfer_score) << ','
        << (e.report.accuracy ? format_number(*e.report.accuracy) : "") << '\n';
  }
  return out.str();
}

EpochSelection select_epoch(const Run& run, const SelectionConfig& config,
                            const ScoreOptions& options) {
  if (run.size() < config.tau) {
    throw IngestError("run " + run.manifest().run_id + " has " +
                      std::to_string(run.size()) + " epochs, fewer than tau = " +
                      std::to_string(config.tau));
  }
  EpochSelection selection;
  selection.run_id = run.manifest().run_id;
  selection.config = config;
  selection.reports = score_all(run, options);
  ScoreSeries series;
  for (const auto& report : selection.reports) {
    series.epochs.push_back(report.epoch);
    series.scores.push_back(report.transfer_score);
  }
  selection.result = select_checkpoint(series, config);
  return selection;
}

json to_json(const EpochSelection& selection) {
  const auto& result = selection.result;
  json out;
  out["run_id"] = selection.run_id;
  out["tau"] = selection.config.tau;
  out["zeta"] = selection.config.zeta;
  out["selected_epoch"] = result.selected_epoch;
  out["selected_position"] = result.selected_position;
  out["saturated"] = result.saturated;
  out["window_start_epoch"] = selection.reports[result.window_start].epoch;
  out["window_end_epoch"] =
      selection.reports[result.window_start + selection.config.tau - 1].epoch;
  json epochs = json::array(), scores = json::array(), trace = json::array(),
       accuracy = json::array();
  for (std::size_t i = 0; i < selection.reports.size(); ++i) {
    const auto& report = selection.reports[i];
    epochs.push_back(report.epoch);
    scores.push_back(report.transfer_score);
    trace.push_back(optional_number(result.saturation_trace[i]));
    accuracy.push_back(optional_number(report.accuracy));
  }
  out["epochs"] = std::move(epochs);
  out["scores"] = std::move(scores);
  out["saturation_trace"] = std::move(trace);
  out["accuracy"] = std::move(accuracy);
  return out;
}

CorrelationReport correlate(const Run& run, const ScoreOptions& options) {
  if (!run.has_labels()) {
    throw IngestError("labels required for correlation (run " +
                      run.manifest().run_id + ")");
  }
  if (run.size() < 2) {
    throw IngestError("correlation needs >= 2 epochs, run " +
                      run.manifest().run_id + " has " + std::to_string(run.size()));
  }
  CorrelationReport report;
  report.run_id = run.manifest().run_id;
  for (const auto& metric : score_all(run, options)) {
    report.epochs.push_back(metric.epoch);
    report.scores.push_back(metric.transfer_score);
    report.accuracies.push_back(*metric.accuracy);
  }
  try {
    report.pearson_r = pearson(report.scores, report.accuracies);
  } catch (const std::invalid_argument& e) {
    throw ComputeError(std::string("correlation undefined: ") + e.what());
  }
  return report;
}

json to_json(const CorrelationReport& report) {
  json out;
  out["run_id"] = report.run_id;
  out["pairs"] = json::array();
  for (std::size_t i = 0; i < report.epochs.size(); ++i) {
    out["pairs"].push_back(
        {{"epoch", report.epochs[i]}, {"t", report.scores[i]}, {"accuracy", report.accuracies[i]}});
  }
  out["pearson_r"] = report.pearson_r;
  return out;
}

std::string correlation_to_csv(const CorrelationReport& report) {
  std::ostringstream out;
  out << "epoch,t,accuracy\n";
  for (std::size_t i = 0; i < report.epochs.size(); ++i) {
    out << report.epochs[i] << ',' << format_number(report.scores[i]) << ','
        << format_number(report.accuracies[i]) << '\n';
  }
  return out.str();
}

}  // namespace tscore::report
