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


#include "tscore/core_metrics.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace tscore {

namespace {

constexpr double kEntropySumTolerance = 1e-9;

std::vector<double> column_norms(const DenseMatrix& weights) {
  std::vector<double> norms(weights.cols(), 0.0);
  for (std::size_t r = 0; r < weights.rows(); ++r) {
    const auto row = weights.row(r);
    for (std::size_t c = 0; c < weights.cols(); ++c) norms[c] += row[c] * row[c];
  }
  for (std::size_t c = 0; c < norms.size(); ++c) {
    norms[c] = std::sqrt(norms[c]);
    if (norms[c] < kMinWeightNorm) {
      throw std::invalid_argument("zero-norm weight column " + std::to_string(c));
    }
  }
  return norms;
}

void check_probability_rows(const DenseMatrix& probabilities) {
  if (probabilities.rows() == 0 || probabilities.cols() < 2) {
    throw std::invalid_argument("probabilities must be N x K with N >= 1, K >= 2");
  }
}

}  // namespace

double ideal_angle(std::size_t k) {
  if (k < 2) {
    throw std::invalid_argument("ideal angle needs k >= 2, got " +
                                std::to_string(k));
  }
  // Newton refinement in extended precision so the result is the double
  // nearest the true angle.
  const long double x = -1.0L / static_cast<long double>(k - 1);
  long double theta = std::acos(x);
  for (int i = 0; i < 2; ++i) theta += (std::cos(theta) - x) / std::sin(theta);
  return static_cast<double>(theta);
}

AngleMatrix angle_matrix(const DenseMatrix& weights) {
  const std::size_t k = weights.cols();
  const auto norms = column_norms(weights);
  AngleMatrix out{k, DenseMatrix(k, k)};
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) {
      double dot = 0.0;
      for (std::size_t r = 0; r < weights.rows(); ++r) {
        dot += weights(r, i) * weights(r, j);
      }
      const double cosine = std::clamp(dot / (norms[i] * norms[j]), -1.0, 1.0);
      const double angle = std::acos(cosine);
      out.angles(i, j) = angle;
      out.angles(j, i) = angle;
    }
  }
  return out;
}

UniformityResult uniformity(const DenseMatrix& weights) {
  const std::size_t k = weights.cols();
  const std::size_t d = weights.rows();
  if (k < 2 || d < 1) {
    throw std::invalid_argument("uniformity needs d x K weights with K >= 2, got " +
                                shape_string(weights));
  }
  const AngleMatrix angles = angle_matrix(weights);
  const double target = ideal_angle(k);
  double sum = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      if (i == j) continue;
      const double diff = angles.angles(i, j) - target;
      sum += diff * diff;
    }
  }
  UniformityResult result;
  result.value = sum / static_cast<double>(k * (k - 1));
  result.simplex_bound_violated = k > d + 1;
  return result;
}

double entropy(std::span<const double> p) {
  double sum = 0.0;
  double h = 0.0;
  for (double v : p) {
    if (!(v >= 0.0) || v > 1.0) {
      throw std::invalid_argument("probability entry " + std::to_string(v) +
                                  " outside [0, 1]");
    }
    sum += v;
    if (v > 0.0) h -= v * std::log(v);
  }
  if (p.empty() || std::abs(sum - 1.0) > kEntropySumTolerance) {
    throw std::invalid_argument("probability vector sums to " +
                                std::to_string(sum));
  }
  return std::max(h, 0.0);
}

double mutual_information(const DenseMatrix& probabilities) {
  check_probability_rows(probabilities);
  const std::size_t n = probabilities.rows();
  const std::size_t k = probabilities.cols();
  std::vector<double> column_sums(k, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = probabilities.row(i);
    for (std::size_t c = 0; c < k; ++c) column_sums[c] += row[c];
  }
  // Equivalent form: the mean over rows of KL(row || marginal). The ratio
  // p * N / s is exact for uniform and balanced one-hot rows, and the running
  // mean is exact when every row contributes the same value.
  const auto total = static_cast<double>(n);
  double value = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = probabilities.row(i);
    double divergence = 0.0;
    for (std::size_t c = 0; c < k; ++c) {
      if (row[c] > 0.0) divergence += row[c] * std::log(row[c] * total / column_sums[c]);
    }
    value += (divergence - value) / static_cast<double>(i + 1);
  }
  // Concavity makes the value non-negative; clamp rounding residue.
  return std::clamp(value, 0.0, std::log(static_cast<double>(k)));
}

double argmax_accuracy(const DenseMatrix& probabilities,
                       std::span<const int> labels) {
  if (labels.size() != probabilities.rows() || labels.empty()) {
    throw std::invalid_argument("label count does not match probability rows");
  }
  std::size_t correct = 0;
  for (std::size_t i = 0; i < probabilities.rows(); ++i) {
    const auto row = probabilities.row(i);
    const auto best = static_cast<int>(
        std::max_element(row.begin(), row.end()) - row.begin());
    if (best == labels[i]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(labels.size());
}

double compose_transfer_score(double uniformity, double hopkins,
                              double mutual_info, std::size_t num_classes) {
  if (num_classes < 2) {
    throw std::invalid_argument("transfer score needs K >= 2");
  }
  return -uniformity + hopkins +
         std::abs(mutual_info) / std::log(static_cast<double>(num_classes));
}

MetricReport transfer_score(const EpochRecord& record,
                            const HopkinsConfig& hopkins_config) {
  MetricReport report;
  report.epoch = record.epoch;
  report.num_classes = record.num_classes();
  const UniformityResult u = uniformity(record.weights);
  report.uniformity = u.value;
  report.simplex_bound_violated = u.simplex_bound_violated;
  report.hopkins = hopkins_statistic(record.features, hopkins_config);
  report.mutual_info = mutual_information(record.probabilities);
  report.transfer_score = compose_transfer_score(
      report.uniformity, report.hopkins, report.mutual_info, report.num_classes);
  if (record.labels) {
    report.accuracy = argmax_accuracy(record.probabilities, *record.labels);
  }
  return report;
}

}  // namespace tscore
