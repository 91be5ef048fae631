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


#include "tscore/synthetic_bench.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "tscore/errors.h"
#include "tscore/random.h"

namespace tscore {

namespace {

// Row-wise log-softmax of logits = features * classifier + bias.
DenseMatrix log_softmax_logits(const DenseMatrix& features, const ToyModel& model) {
  const std::size_t n = features.rows();
  const std::size_t k = model.classifier.cols();
  DenseMatrix out(n, k);
  for (std::size_t i = 0; i < n; ++i) {
    auto row = out.row(i);
    for (std::size_t c = 0; c < k; ++c) {
      double z = model.bias[c];
      for (std::size_t f = 0; f < features.cols(); ++f) {
        z += features(i, f) * model.classifier(f, c);
      }
      row[c] = z;
    }
    const double peak = *std::max_element(row.begin(), row.end());
    double sum = 0.0;
    for (double z : row) sum += std::exp(z - peak);
    const double log_norm = peak + std::log(sum);
    for (double& z : row) z -= log_norm;
  }
  return out;
}

DenseMatrix project(const DenseMatrix& x, const DenseMatrix& feature_map) {
  DenseMatrix out(x.rows(), feature_map.rows());
  for (std::size_t i = 0; i < x.rows(); ++i) {
    for (std::size_t f = 0; f < feature_map.rows(); ++f) {
      double v = 0.0;
      for (std::size_t j = 0; j < x.cols(); ++j) v += feature_map(f, j) * x(i, j);
      out(i, f) = v;
    }
  }
  return out;
}

// Accumulates the gradient contribution of logit gradients `g` (n x k) for
// inputs `x` with projected features `feats`.
void backprop(const DenseMatrix& x, const DenseMatrix& feats,
              const DenseMatrix& g, const ToyModel& model, ToyModel& grad) {
  const std::size_t d_feat = model.classifier.rows();
  const std::size_t k = model.classifier.cols();
  for (std::size_t i = 0; i < x.rows(); ++i) {
    for (std::size_t c = 0; c < k; ++c) {
      const double gic = g(i, c);
      if (gic == 0.0) continue;
      grad.bias[c] += gic;
      for (std::size_t f = 0; f < d_feat; ++f) {
        grad.classifier(f, c) += feats(i, f) * gic;
      }
    }
    for (std::size_t f = 0; f < d_feat; ++f) {
      double dfeat = 0.0;
      for (std::size_t c = 0; c < k; ++c) dfeat += g(i, c) * model.classifier(f, c);
      for (std::size_t j = 0; j < x.cols(); ++j) {
        grad.feature_map(f, j) += dfeat * x(i, j);
      }
    }
  }
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

}  // namespace

void DomainSpec::validate() const {
  if (k < 2) throw std::invalid_argument("domain spec: k must be >= 2");
  if (d_in < 1) throw std::invalid_argument("domain spec: d_in must be >= 1");
  if (n < k * 10) {
    throw std::invalid_argument("domain spec: n must be >= 10 k");
  }
  if (!(cluster_spread > 0.0)) {
    throw std::invalid_argument("domain spec: cluster_spread must be positive");
  }
  if (!shift.empty() && shift.size() != d_in) {
    throw std::invalid_argument("domain spec: shift must have length d_in");
  }
  if (rotation_angle != 0.0 && d_in < 2) {
    throw std::invalid_argument("domain spec: rotation needs d_in >= 2");
  }
}

DomainSpec default_domain_spec(std::uint64_t seed) {
  DomainSpec spec;
  spec.shift.assign(spec.d_in, 0.0);
  spec.shift[0] = 1.5;
  spec.shift[1] = -1.0;
  // Offset along an axis the class centers do not use: every target sample
  // shares it, so a strong entropy term can push all of them into one class.
  spec.shift[4] = 7.0;
  spec.rotation_angle = 0.6;
  spec.seed = seed;
  return spec;
}

DomainPair generate_domain_pair(const DomainSpec& spec) {
  spec.validate();
  Rng rng(spec.seed);

  DenseMatrix centers(spec.k, spec.d_in);
  if (spec.k <= spec.d_in) {
    // Centered basis vectors e_i - mean(e) form a regular simplex.
    const double kk = static_cast<double>(spec.k);
    const double radius = std::sqrt((kk - 1.0) / kk);
    for (std::size_t c = 0; c < spec.k; ++c) {
      for (std::size_t j = 0; j < spec.k; ++j) {
        centers(c, j) = ((c == j ? 1.0 : 0.0) - 1.0 / kk) / radius * spec.center_scale;
      }
    }
  } else {
    for (std::size_t c = 0; c < spec.k; ++c) {
      double norm = 0.0;
      for (std::size_t j = 0; j < spec.d_in; ++j) {
        centers(c, j) = rng.normal();
        norm += centers(c, j) * centers(c, j);
      }
      norm = std::sqrt(norm);
      for (std::size_t j = 0; j < spec.d_in; ++j) {
        centers(c, j) *= spec.center_scale / norm;
      }
    }
  }

  const auto draw = [&](LabeledData& out) {
    out.features = DenseMatrix(spec.n, spec.d_in);
    out.labels.resize(spec.n);
    for (std::size_t i = 0; i < spec.n; ++i) {
      const std::size_t c = i % spec.k;
      out.labels[i] = static_cast<int>(c);
      for (std::size_t j = 0; j < spec.d_in; ++j) {
        out.features(i, j) = centers(c, j) + spec.cluster_spread * rng.normal();
      }
    }
  };

  DomainPair pair;
  draw(pair.source);
  draw(pair.target);
  if (spec.rotation_angle != 0.0) {
    const double cs = std::cos(spec.rotation_angle);
    const double sn = std::sin(spec.rotation_angle);
    for (std::size_t i = 0; i < spec.n; ++i) {
      const double a = pair.target.features(i, 0);
      const double b = pair.target.features(i, 1);
      pair.target.features(i, 0) = cs * a - sn * b;
      pair.target.features(i, 1) = sn * a + cs * b;
    }
  }
  if (!spec.shift.empty()) {
    for (std::size_t i = 0; i < spec.n; ++i) {
      axpy(1.0, spec.shift, pair.target.features.row(i));
    }
  }
  return pair;
}

double ramped_adapt_weight(double adapt_weight, double progress) {
  return adapt_weight * (2.0 / (1.0 + std::exp(-10.0 * progress)) - 1.0);
}

ToyModel init_toy_model(std::size_t d_in, std::size_t d_feat, std::size_t k,
                        std::uint64_t seed) {
  Rng rng(seed);
  ToyModel model{DenseMatrix(d_feat, d_in), DenseMatrix(d_feat, k),
                 std::vector<double>(k, 0.0)};
  const double map_scale = 1.0 / std::sqrt(static_cast<double>(d_in));
  for (double& v : model.feature_map.data()) v = map_scale * rng.normal();
  const double head_scale = 0.1 / std::sqrt(static_cast<double>(d_feat));
  for (double& v : model.classifier.data()) v = head_scale * rng.normal();
  return model;
}

LossAndGradient toy_loss_and_gradient(const ToyModel& model,
                                      const LabeledData& source,
                                      const DenseMatrix& target_features,
                                      double adapt_weight) {
  const std::size_t k = model.classifier.cols();
  LossAndGradient out;
  out.gradient = ToyModel{DenseMatrix(model.feature_map.rows(), model.feature_map.cols()),
                          DenseMatrix(model.classifier.rows(), k),
                          std::vector<double>(k, 0.0)};

  const DenseMatrix feats_s = project(source.features, model.feature_map);
  const DenseMatrix logp_s = log_softmax_logits(feats_s, model);
  const auto ns = static_cast<double>(source.features.rows());
  DenseMatrix g_s(logp_s.rows(), k);
  for (std::size_t i = 0; i < logp_s.rows(); ++i) {
    const auto label = static_cast<std::size_t>(source.labels[i]);
    out.loss -= logp_s(i, label) / ns;
    for (std::size_t c = 0; c < k; ++c) {
      g_s(i, c) = (std::exp(logp_s(i, c)) - (c == label ? 1.0 : 0.0)) / ns;
    }
  }
  backprop(source.features, feats_s, g_s, model, out.gradient);

  if (adapt_weight > 0.0) {
    const DenseMatrix feats_t = project(target_features, model.feature_map);
    const DenseMatrix logp_t = log_softmax_logits(feats_t, model);
    const auto nt = static_cast<double>(target_features.rows());
    DenseMatrix g_t(logp_t.rows(), k);
    for (std::size_t i = 0; i < logp_t.rows(); ++i) {
      double h = 0.0;
      for (std::size_t c = 0; c < k; ++c) h -= std::exp(logp_t(i, c)) * logp_t(i, c);
      out.loss += adapt_weight * h / nt;
      // dH/dz_c = -p_c (ln p_c + H)
      for (std::size_t c = 0; c < k; ++c) {
        const double p = std::exp(logp_t(i, c));
        g_t(i, c) = -adapt_weight * p * (logp_t(i, c) + h) / nt;
      }
    }
    backprop(target_features, feats_t, g_t, model, out.gradient);
  }
  return out;
}

std::vector<EpochRecord> train_toy_model(const LabeledData& source,
                                         const LabeledData& target,
                                         const ToyTrainConfig& config) {
  const std::size_t d_in = source.features.cols();
  std::size_t k = 0;
  for (int label : source.labels) k = std::max(k, static_cast<std::size_t>(label) + 1);
  if (target.features.cols() != d_in) {
    throw std::invalid_argument("source and target input dimensions differ");
  }
  if (source.labels.size() != source.features.rows() ||
      target.labels.size() != target.features.rows()) {
    throw std::invalid_argument("label count does not match feature rows");
  }
  if (k < 2) throw std::invalid_argument("need at least two classes");
  if (config.d_feat + 1 < k) {
    throw std::invalid_argument("d_feat must be >= k - 1");
  }
  if (config.epochs < 1 || config.steps_per_epoch < 1) {
    throw std::invalid_argument("epochs and steps_per_epoch must be >= 1");
  }
  if (!(config.learning_rate > 0.0) || config.adapt_weight < 0.0) {
    throw std::invalid_argument("learning_rate must be positive, adapt_weight >= 0");
  }

  ToyModel model = init_toy_model(d_in, config.d_feat, k, config.seed);
  const std::size_t adapt_steps =
      config.epochs > config.warmup_epochs
          ? (config.epochs - config.warmup_epochs) * config.steps_per_epoch
          : 1;
  std::vector<EpochRecord> records;
  records.reserve(config.epochs);
  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    for (std::size_t step = 0; step < config.steps_per_epoch; ++step) {
      double weight = 0.0;
      if (epoch >= config.warmup_epochs) {
        const double progress =
            static_cast<double>((epoch - config.warmup_epochs) *
                                    config.steps_per_epoch + step) /
            static_cast<double>(adapt_steps);
        weight = config.ramp_adapt_weight
                     ? ramped_adapt_weight(config.adapt_weight, progress)
                     : config.adapt_weight;
      }
      const LossAndGradient lg =
          toy_loss_and_gradient(model, source, target.features, weight);
      if (!std::isfinite(lg.loss)) {
        throw ComputeError("epoch " + std::to_string(epoch) +
                           ": training diverged (non-finite loss)");
      }
      axpy(-config.learning_rate, lg.gradient.feature_map.data(),
           model.feature_map.data());
      axpy(-config.learning_rate, lg.gradient.classifier.data(),
           model.classifier.data());
      axpy(-config.learning_rate, lg.gradient.bias, model.bias);
    }

    EpochRecord record;
    record.epoch = static_cast<std::int64_t>(epoch);
    record.weights = model.classifier;
    record.features = project(target.features, model.feature_map);
    record.probabilities = log_softmax_logits(record.features, model);
    for (double& v : record.probabilities.data()) v = std::exp(v);
    for (std::size_t i = 0; i < record.probabilities.rows(); ++i) {
      auto row = record.probabilities.row(i);
      double sum = 0.0;
      for (double p : row) sum += p;
      for (double& p : row) p /= sum;
    }
    record.labels = target.labels;
    for (double v : record.weights.data()) {
      if (!std::isfinite(v)) {
        throw ComputeError("epoch " + std::to_string(epoch) +
                           ": training diverged (non-finite weights)");
      }
    }
    records.push_back(std::move(record));
  }
  return records;
}

}  // namespace tscore
