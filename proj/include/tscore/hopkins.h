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


#ifndef TSCORE_HOPKINS_H_
#define TSCORE_HOPKINS_H_

#include <cstddef>
#include <cstdint>
#include <vector>

#include "tscore/dense_matrix.h"
#include "tscore/random.h"

namespace tscore {

struct HopkinsConfig {
  std::size_t m = 10;
  std::size_t repetitions = 5;
  std::uint64_t seed = 0;

  // m = clamp(ceil(N / 10), 10, 500), further capped at N - 1.
  static HopkinsConfig defaults_for(std::size_t num_samples,
                                    std::uint64_t seed = 0);
};

// The random sets of one Hopkins repetition: m feature rows drawn without
// replacement, and m points uniform in the bounding box of all features.
struct HopkinsSample {
  std::vector<std::size_t> sample_rows;
  DenseMatrix uniform_points;  // m x d
};

// Draws the row sample first, then the uniform points row by row. Each
// uniform coordinate is lo + (hi - lo) * u for a unit uniform u.
HopkinsSample draw_hopkins_sample(const DenseMatrix& features, std::size_t m,
                                  Rng& rng);

// sum(u^d) / (sum(u^d) + sum(w^d)) where u is the distance from each uniform
// point to its nearest sampled row and w the distance from each sampled row
// to its nearest other sampled row. Both power sums are accumulated as
// log-sum-exp of d * ln(distance) so d in the hundreds does not overflow.
// Returns 0.5 when both sums are zero.
double hopkins_from_sample(const DenseMatrix& features,
                           const HopkinsSample& sample);

// Mean of hopkins_from_sample over config.repetitions draws from a single
// Rng seeded with config.seed.
double hopkins_statistic(const DenseMatrix& features,
                         const HopkinsConfig& config);

}  // namespace tscore

#endif  // TSCORE_HOPKINS_H_
