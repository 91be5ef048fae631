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


#ifndef TSCORE_TESTS_SUPPORT_ORACLES_H_
#define TSCORE_TESTS_SUPPORT_ORACLES_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "tscore/dense_matrix.h"
#include "tscore/hopkins.h"
#include "tscore/random.h"
#include "tscore/synthetic_bench.h"

// Independent reference implementations used as test oracles. They favor
// directness over speed and share no code with the library beyond the data
// containers.
namespace tscore::testing {

// arccos by Newton iteration on cos in long double.
long double precise_arccos(long double x);

double naive_entropy(const std::vector<double>& p);
double naive_mutual_information(const DenseMatrix& probabilities);

// Nested-loop Hopkins on a fixed sample with direct powers of the distances.
double brute_force_hopkins(const DenseMatrix& features,
                           const HopkinsSample& sample);

// Double-loop Gaussian-kernel MMD^2.
double naive_mmd(const DenseMatrix& source, const DenseMatrix& target,
                 double sigma, bool biased);

// Uniformly random d x d orthogonal matrix from Gram-Schmidt on a Gaussian
// draw.
DenseMatrix random_rotation(std::size_t d, Rng& rng);

DenseMatrix random_matrix(std::size_t rows, std::size_t cols, Rng& rng);
DenseMatrix random_probabilities(std::size_t rows, std::size_t cols, Rng& rng);

// Pairwise angles of k unit vectors in R^d found by maximizing the minimum
// pairwise angle over random restarts. Each restart runs projected gradient
// descent on sum_{i<j} exp(beta cos_ij) over the unit sphere.
std::vector<double> spread_unit_vector_angles(std::size_t k, std::size_t d,
                                              std::size_t restarts,
                                              std::uint64_t seed);

// Central finite-difference gradient of toy_loss_and_gradient's loss,
// flattened as feature_map, classifier, bias.
std::vector<double> finite_difference_gradient(const ToyModel& model,
                                               const LabeledData& source,
                                               const DenseMatrix& target,
                                               double adapt_weight, double step);
std::vector<double> flatten(const ToyModel& model);

// Fresh empty directory under the system temp directory.
std::filesystem::path scratch_dir(const std::string& name);

std::string read_file(const std::filesystem::path& path);

}  // namespace tscore::testing

#endif  // TSCORE_TESTS_SUPPORT_ORACLES_H_
