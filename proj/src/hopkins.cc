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


#include "tscore/hopkins.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace tscore {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double squared_distance(std::span<const double> a, std::span<const double> b) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double diff = a[i] - b[i];
    sum += diff * diff;
  }
  return sum;
}

double log_sum_exp(const std::vector<double>& terms) {
  double peak = kNegInf;
  for (double t : terms) peak = std::max(peak, t);
  if (peak == kNegInf) return kNegInf;
  double sum = 0.0;
  for (double t : terms) sum += std::exp(t - peak);
  return peak + std::log(sum);
}

// d * ln(sqrt(sq)); an exact zero distance maps to -inf, i.e. zero mass.
double log_power(double squared, double dim) {
  if (squared == 0.0) return kNegInf;
  return 0.5 * dim * std::log(squared);
}

void check_config(const DenseMatrix& features, std::size_t m,
                  std::size_t repetitions) {
  const std::size_t n = features.rows();
  if (n < 3) {
    throw std::invalid_argument("hopkins statistic needs N >= 3, got " +
                                std::to_string(n));
  }
  if (features.cols() == 0) {
    throw std::invalid_argument("hopkins statistic needs d >= 1");
  }
  if (m < 2 || m > n - 1) {
    throw std::invalid_argument("hopkins sample size m = " + std::to_string(m) +
                                " outside [2, " + std::to_string(n - 1) + "]");
  }
  if (repetitions < 1) {
    throw std::invalid_argument("hopkins repetitions must be >= 1");
  }
}

}  // namespace

HopkinsConfig HopkinsConfig::defaults_for(std::size_t num_samples,
                                          std::uint64_t seed) {
  HopkinsConfig config;
  const std::size_t tenth = (num_samples + 9) / 10;
  config.m = std::clamp<std::size_t>(tenth, 10, 500);
  if (num_samples >= 3) config.m = std::min(config.m, num_samples - 1);
  config.repetitions = 5;
  config.seed = seed;
  return config;
}

HopkinsSample draw_hopkins_sample(const DenseMatrix& features, std::size_t m,
                                  Rng& rng) {
  check_config(features, m, 1);
  const std::size_t n = features.rows();
  const std::size_t d = features.cols();

  std::vector<double> lo(features.row(0).begin(), features.row(0).end());
  std::vector<double> hi = lo;
  for (std::size_t i = 1; i < n; ++i) {
    const auto row = features.row(i);
    for (std::size_t j = 0; j < d; ++j) {
      lo[j] = std::min(lo[j], row[j]);
      hi[j] = std::max(hi[j], row[j]);
    }
  }

  HopkinsSample sample;
  sample.sample_rows = rng.sample_without_replacement(n, m);
  sample.uniform_points = DenseMatrix(m, d);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      sample.uniform_points(i, j) = lo[j] + (hi[j] - lo[j]) * rng.uniform();
    }
  }
  return sample;
}

double hopkins_from_sample(const DenseMatrix& features,
                           const HopkinsSample& sample) {
  const std::size_t m = sample.sample_rows.size();
  const double dim = static_cast<double>(features.cols());

  std::vector<double> log_u(m);
  std::vector<double> log_w(m);
  for (std::size_t i = 0; i < m; ++i) {
    const auto probe = sample.uniform_points.row(i);
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t r : sample.sample_rows) {
      best = std::min(best, squared_distance(probe, features.row(r)));
    }
    log_u[i] = log_power(best, dim);
  }
  for (std::size_t i = 0; i < m; ++i) {
    const auto self = features.row(sample.sample_rows[i]);
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < m; ++j) {
      if (j == i) continue;
      best = std::min(best, squared_distance(self, features.row(sample.sample_rows[j])));
    }
    log_w[i] = log_power(best, dim);
  }

  const double log_sum_u = log_sum_exp(log_u);
  const double log_sum_w = log_sum_exp(log_w);
  if (log_sum_u == kNegInf && log_sum_w == kNegInf) return 0.5;
  if (log_sum_u == kNegInf) return 0.0;
  if (log_sum_w == kNegInf) return 1.0;
  // u / (u + w) = 1 / (1 + exp(ln w - ln u))
  return 1.0 / (1.0 + std::exp(log_sum_w - log_sum_u));
}

double hopkins_statistic(const DenseMatrix& features,
                         const HopkinsConfig& config) {
  check_config(features, config.m, config.repetitions);
  Rng rng(config.seed);
  double total = 0.0;
  for (std::size_t rep = 0; rep < config.repetitions; ++rep) {
    const HopkinsSample sample = draw_hopkins_sample(features, config.m, rng);
    total += hopkins_from_sample(features, sample);
  }
  return total / static_cast<double>(config.repetitions);
}

}  // namespace tscore
