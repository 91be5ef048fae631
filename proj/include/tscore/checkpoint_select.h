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


#ifndef TSCORE_CHECKPOINT_SELECT_H_
#define TSCORE_CHECKPOINT_SELECT_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace tscore {

// Transfer Score per epoch, in training order.
struct ScoreSeries {
  std::vector<std::int64_t> epochs;
  std::vector<double> scores;

  // Throws std::invalid_argument unless the lengths are equal and non-zero
  // with strictly increasing epochs.
  void validate() const;
};

struct SelectionConfig {
  std::size_t tau = 3;
  double zeta = 0.01;
};

struct SelectionResult {
  std::int64_t selected_epoch = 0;
  std::size_t selected_position = 0;
  // S_m for every position; empty for the first tau - 1 positions.
  std::vector<std::optional<double>> saturation_trace;
  bool saturated = false;
  // First position of the window the selection was made in.
  std::size_t window_start = 0;
};

// Coefficient of variation (population standard deviation over mean) of the
// tau scores ending at `position`. Throws std::out_of_range if the window does
// not fit, ComputeError if the window mean is not positive.
double saturation_level(std::span<const double> scores, std::size_t position,
                        std::size_t tau);

// Picks the highest-scoring epoch (earliest on ties) inside the first trailing
// window whose saturation level is strictly below zeta. If no window
// saturates, picks inside the final window and reports saturated = false.
SelectionResult select_checkpoint(const ScoreSeries& series,
                                  const SelectionConfig& config = {});

}  // namespace tscore

#endif  // TSCORE_CHECKPOINT_SELECT_H_
