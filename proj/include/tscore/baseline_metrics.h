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


#ifndef TSCORE_BASELINE_METRICS_H_
#define TSCORE_BASELINE_METRICS_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>

#include "tscore/dense_matrix.h"

namespace tscore {

enum class MmdEstimator { kBiased, kUnbiased };

struct MmdConfig {
  // Gaussian kernel width sigma in exp(-|x-y|^2 / (2 sigma^2)). Empty selects
  // the median pairwise distance of the pooled sample.
  std::optional<double> bandwidth;
  MmdEstimator estimator = MmdEstimator::kBiased;
};

// Median of pairwise Euclidean distances over source and target pooled. Pools
// larger than 2000 rows are strided down first. Falls back to 1.0 when the
// median is zero.
double median_heuristic_bandwidth(const DenseMatrix& source,
                                  const DenseMatrix& target);

// Squared MMD estimate with a Gaussian kernel.
double mmd(const DenseMatrix& source, const DenseMatrix& target,
           const MmdConfig& config = {});

struct ProbeConfig {
  double train_fraction = 0.8;
  double learning_rate = 0.1;
  std::size_t iterations = 500;
  std::uint64_t seed = 0;
};

struct PadResult {
  double distance = 0.0;    // d_A in [0, 2]
  double test_error = 0.0;  // before clamping
  std::size_t train_size = 0;
  std::size_t test_size = 0;
};

// 2 (1 - 2 eps) with eps clamped to [0, 0.5].
double proxy_a_distance_from_error(double test_error);

// Balances the domains by subsampling the larger one, splits train/test, fits
// a logistic domain classifier on standardized features by full-batch
// gradient descent and converts its test error.
PadResult proxy_a_distance(const DenseMatrix& source, const DenseMatrix& target,
                           const ProbeConfig& config = {});

// Mean prediction entropy in nats.
double c_entropy(const DenseMatrix& probabilities);

double pearson(std::span<const double> x, std::span<const double> y);

}  // namespace tscore

#endif  // TSCORE_BASELINE_METRICS_H_
