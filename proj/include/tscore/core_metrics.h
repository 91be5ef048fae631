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


#ifndef TSCORE_CORE_METRICS_H_
#define TSCORE_CORE_METRICS_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "tscore/dense_matrix.h"
#include "tscore/hopkins.h"
#include "tscore/run.h"

namespace tscore {

// Common pairwise angle of K unit vectors that partition space evenly:
// arccos(-1/(K-1)). Requires k >= 2.
double ideal_angle(std::size_t k);

// Pairwise angles between classifier columns. Symmetric, zero diagonal,
// entries in [0, pi].
struct AngleMatrix {
  std::size_t k = 0;
  DenseMatrix angles;
};

AngleMatrix angle_matrix(const DenseMatrix& weights);

struct UniformityResult {
  double value = 0.0;  // radians^2
  // K > d + 1: no K vectors in R^d can all meet at the ideal angle, so the
  // value is computed but cannot reach zero.
  bool simplex_bound_violated = false;
};

// Mean squared deviation of the off-diagonal classifier angles from
// ideal_angle(K), averaged over the K(K-1) ordered pairs.
UniformityResult uniformity(const DenseMatrix& weights);

// Shannon entropy in nats with 0 ln 0 = 0.
double entropy(std::span<const double> p);

// H(mean prediction) - mean H(prediction), clamped to [0, ln K].
double mutual_information(const DenseMatrix& probabilities);

// Fraction of rows whose argmax (lowest index on ties) equals the label.
double argmax_accuracy(const DenseMatrix& probabilities,
                       std::span<const int> labels);

struct MetricReport {
  std::int64_t epoch = 0;
  std::size_t num_classes = 0;
  double uniformity = 0.0;
  double hopkins = 0.0;
  double mutual_info = 0.0;
  double transfer_score = 0.0;
  std::optional<double> accuracy;
  bool simplex_bound_violated = false;
};

double compose_transfer_score(double uniformity, double hopkins,
                              double mutual_info, std::size_t num_classes);

MetricReport transfer_score(const EpochRecord& record,
                            const HopkinsConfig& hopkins_config);

}  // namespace tscore

#endif  // TSCORE_CORE_METRICS_H_
