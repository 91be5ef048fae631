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


#include "tscore/baseline_metrics.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "tscore/core_metrics.h"
#include "tscore/random.h"

namespace tscore {

namespace {

constexpr std::size_t kMedianPoolLimit = 2000;

double squared_distance(std::span<const double> a, std::span<const double> b) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double diff = a[i] - b[i];
    sum += diff * diff;
  }
  return sum;
}

double kernel_sum(const DenseMatrix& a, const DenseMatrix& b, double gamma,
                  bool skip_diagonal) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < b.rows(); ++j) {
      if (skip_diagonal && i == j) continue;
      sum += std::exp(-gamma * squared_distance(a.row(i), b.row(j)));
    }
  }
  return sum;
}

void check_pair(const DenseMatrix& source, const DenseMatrix& target,
                std::size_t min_rows, const char* what) {
  if (source.cols() != target.cols()) {
    throw std::invalid_argument(std::string(what) + ": dimension mismatch " +
                                shape_string(source) + " vs " +
                                shape_string(target));
  }
  if (source.rows() < min_rows || target.rows() < min_rows) {
    throw std::invalid_argument(std::string(what) + " needs at least " +
                                std::to_string(min_rows) + " rows per domain");
  }
}

double sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

}  // namespace

double median_heuristic_bandwidth(const DenseMatrix& source,
                                  const DenseMatrix& target) {
  const std::size_t total = source.rows() + target.rows();
  const std::size_t stride = (total + kMedianPoolLimit - 1) / kMedianPoolLimit;
  std::vector<std::span<const double>> pool;
  for (std::size_t i = 0; i < total; i += stride) {
    pool.push_back(i < source.rows() ? source.row(i)
                                     : target.row(i - source.rows()));
  }
  std::vector<double> distances;
  distances.reserve(pool.size() * (pool.size() - 1) / 2);
  for (std::size_t i = 0; i < pool.size(); ++i) {
    for (std::size_t j = i + 1; j < pool.size(); ++j) {
      distances.push_back(std::sqrt(squared_distance(pool[i], pool[j])));
    }
  }
  if (distances.empty()) return 1.0;
  const std::size_t mid = distances.size() / 2;
  std::nth_element(distances.begin(), distances.begin() + mid, distances.end());
  double median = distances[mid];
  if (distances.size() % 2 == 0) {
    const double lower =
        *std::max_element(distances.begin(), distances.begin() + mid);
    median = 0.5 * (median + lower);
  }
  return median > 0.0 ? median : 1.0;
}

double mmd(const DenseMatrix& source, const DenseMatrix& target,
           const MmdConfig& config) {
  check_pair(source, target, 2, "mmd");
  const double sigma =
      config.bandwidth ? *config.bandwidth : median_heuristic_bandwidth(source, target);
  if (!(sigma > 0.0)) throw std::invalid_argument("mmd bandwidth must be positive");
  const double gamma = 1.0 / (2.0 * sigma * sigma);
  const auto ns = static_cast<double>(source.rows());
  const auto nt = static_cast<double>(target.rows());
  const double cross = kernel_sum(source, target, gamma, false) / (ns * nt);
  if (config.estimator == MmdEstimator::kBiased) {
    return kernel_sum(source, source, gamma, false) / (ns * ns) +
           kernel_sum(target, target, gamma, false) / (nt * nt) - 2.0 * cross;
  }
  return kernel_sum(source, source, gamma, true) / (ns * (ns - 1)) +
         kernel_sum(target, target, gamma, true) / (nt * (nt - 1)) - 2.0 * cross;
}

double proxy_a_distance_from_error(double test_error) {
  const double eps = std::clamp(test_error, 0.0, 0.5);
  return 2.0 * (1.0 - 2.0 * eps);
}

PadResult proxy_a_distance(const DenseMatrix& source, const DenseMatrix& target,
                           const ProbeConfig& config) {
  check_pair(source, target, 10, "proxy A-distance");
  if (!(config.train_fraction > 0.0 && config.train_fraction < 1.0)) {
    throw std::invalid_argument("train_fraction must lie in (0, 1)");
  }
  if (!(config.learning_rate > 0.0)) {
    throw std::invalid_argument("learning_rate must be positive");
  }
  Rng rng(config.seed);
  const std::size_t per_domain = std::min(source.rows(), target.rows());
  const auto src_rows = rng.sample_without_replacement(source.rows(), per_domain);
  const auto tgt_rows = rng.sample_without_replacement(target.rows(), per_domain);

  const std::size_t d = source.cols();
  const std::size_t total = 2 * per_domain;
  DenseMatrix x(total, d);
  std::vector<double> y(total);
  for (std::size_t i = 0; i < per_domain; ++i) {
    std::ranges::copy(source.row(src_rows[i]), x.row(i).begin());
    std::ranges::copy(target.row(tgt_rows[i]), x.row(per_domain + i).begin());
    y[per_domain + i] = 1.0;
  }
  std::vector<std::size_t> order(total);
  std::iota(order.begin(), order.end(), std::size_t{0});
  rng.shuffle(order);
  const auto train_size = std::clamp<std::size_t>(
      static_cast<std::size_t>(std::llround(config.train_fraction * total)), 1,
      total - 1);
  const std::span<const std::size_t> train(order.data(), train_size);
  const std::span<const std::size_t> test(order.data() + train_size,
                                          total - train_size);

  // Standardize with training statistics.
  std::vector<double> mean(d, 0.0), scale(d, 0.0);
  for (std::size_t i : train) {
    for (std::size_t j = 0; j < d; ++j) mean[j] += x(i, j);
  }
  for (double& v : mean) v /= static_cast<double>(train_size);
  for (std::size_t i : train) {
    for (std::size_t j = 0; j < d; ++j) scale[j] += (x(i, j) - mean[j]) * (x(i, j) - mean[j]);
  }
  for (double& v : scale) {
    v = std::sqrt(v / static_cast<double>(train_size));
    if (v == 0.0) v = 1.0;
  }
  for (std::size_t i = 0; i < total; ++i) {
    for (std::size_t j = 0; j < d; ++j) x(i, j) = (x(i, j) - mean[j]) / scale[j];
  }

  std::vector<double> w(d, 0.0), grad(d);
  double b = 0.0;
  for (std::size_t it = 0; it < config.iterations; ++it) {
    std::ranges::fill(grad, 0.0);
    double grad_b = 0.0;
    for (std::size_t i : train) {
      const auto row = x.row(i);
      const double z = std::inner_product(row.begin(), row.end(), w.begin(), b);
      const double residual = sigmoid(z) - y[i];
      for (std::size_t j = 0; j < d; ++j) grad[j] += residual * row[j];
      grad_b += residual;
    }
    const double step = config.learning_rate / static_cast<double>(train_size);
    for (std::size_t j = 0; j < d; ++j) w[j] -= step * grad[j];
    b -= step * grad_b;
  }

  std::size_t errors = 0;
  for (std::size_t i : test) {
    const auto row = x.row(i);
    const double z = std::inner_product(row.begin(), row.end(), w.begin(), b);
    const double predicted = z >= 0.0 ? 1.0 : 0.0;
    if (predicted != y[i]) ++errors;
  }
  PadResult result;
  result.train_size = train_size;
  result.test_size = test.size();
  result.test_error = static_cast<double>(errors) / static_cast<double>(test.size());
  result.distance = proxy_a_distance_from_error(result.test_error);
  return result;
}

double c_entropy(const DenseMatrix& probabilities) {
  if (probabilities.rows() == 0 || probabilities.cols() < 2) {
    throw std::invalid_argument("probabilities must be N x K with N >= 1, K >= 2");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < probabilities.rows(); ++i) {
    total += entropy(probabilities.row(i));
  }
  return total / static_cast<double>(probabilities.rows());
}

double pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("pearson: length mismatch");
  if (x.size() < 2) throw std::invalid_argument("pearson needs at least 2 pairs");
  const auto n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) {
    throw std::invalid_argument("pearson: constant input");
  }
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

}  // namespace tscore
