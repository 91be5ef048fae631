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


#include "tscore/checkpoint_select.h"

#include <cmath>
#include <stdexcept>
#include <string>

#include "tscore/errors.h"

namespace tscore {

void ScoreSeries::validate() const {
  if (epochs.size() != scores.size()) {
    throw std::invalid_argument("score series: epochs and scores differ in length");
  }
  if (scores.empty()) throw std::invalid_argument("score series is empty");
  for (std::size_t i = 1; i < epochs.size(); ++i) {
    if (epochs[i] <= epochs[i - 1]) {
      throw std::invalid_argument("score series: epochs must strictly increase");
    }
  }
}

double saturation_level(std::span<const double> scores, std::size_t position,
                        std::size_t tau) {
  if (tau < 2) throw std::invalid_argument("window size tau must be >= 2");
  if (position >= scores.size() || position + 1 < tau) {
    throw std::out_of_range("window of " + std::to_string(tau) +
                            " scores ending at position " +
                            std::to_string(position) + " is out of range");
  }
  const auto window = scores.subspan(position + 1 - tau, tau);
  double mean = 0.0;
  for (double v : window) mean += v;
  mean /= static_cast<double>(tau);
  if (!(mean > 0.0)) {
    throw ComputeError("saturation level undefined: window ending at position " +
                       std::to_string(position) + " has mean " +
                       std::to_string(mean) + " (must be positive)");
  }
  double variance = 0.0;
  for (double v : window) variance += (v - mean) * (v - mean);
  variance /= static_cast<double>(tau);
  return std::sqrt(variance) / mean;
}

SelectionResult select_checkpoint(const ScoreSeries& series,
                                  const SelectionConfig& config) {
  series.validate();
  if (config.tau < 2) throw std::invalid_argument("window size tau must be >= 2");
  if (!(config.zeta > 0.0)) throw std::invalid_argument("zeta must be positive");
  const std::size_t n = series.scores.size();
  if (n < config.tau) {
    throw std::invalid_argument("series has " + std::to_string(n) +
                                " epochs, fewer than tau = " +
                                std::to_string(config.tau));
  }

  SelectionResult result;
  result.saturation_trace.resize(n);
  std::optional<std::size_t> trigger;
  for (std::size_t m = config.tau - 1; m < n; ++m) {
    const double s = saturation_level(series.scores, m, config.tau);
    result.saturation_trace[m] = s;
    if (!trigger && s < config.zeta) trigger = m;
  }
  result.saturated = trigger.has_value();
  const std::size_t window_end = trigger.value_or(n - 1);
  result.window_start = window_end + 1 - config.tau;

  std::size_t best = result.window_start;
  for (std::size_t i = result.window_start + 1; i <= window_end; ++i) {
    if (series.scores[i] > series.scores[best]) best = i;
  }
  result.selected_position = best;
  result.selected_epoch = series.epochs[best];
  return result;
}

}  // namespace tscore
