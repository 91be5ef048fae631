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


#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "tscore/baseline_metrics.h"
#include "tscore/checkpoint_select.h"
#include "tscore/core_metrics.h"
#include "tscore/errors.h"
#include "tscore/hopkins.h"
#include "tscore/report.h"
#include "tscore/run.h"
#include "tscore/tensor_io.h"

namespace py = pybind11;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

tscore::DenseMatrix to_matrix(const Array& array) {
  if (array.ndim() == 1) {
    const auto n = static_cast<std::size_t>(array.shape(0));
    return tscore::DenseMatrix(n, 1, std::vector<double>(array.data(), array.data() + n));
  }
  if (array.ndim() != 2) throw std::invalid_argument("expected a 1-D or 2-D array");
  const auto rows = static_cast<std::size_t>(array.shape(0));
  const auto cols = static_cast<std::size_t>(array.shape(1));
  return tscore::DenseMatrix(
      rows, cols, std::vector<double>(array.data(), array.data() + rows * cols));
}

Array to_array(const tscore::DenseMatrix& matrix) {
  Array out({matrix.rows(), matrix.cols()});
  std::copy(matrix.data().begin(), matrix.data().end(), out.mutable_data());
  return out;
}

std::vector<double> to_vector(const Array& array) {
  if (array.ndim() != 1) throw std::invalid_argument("expected a 1-D array");
  return std::vector<double>(array.data(), array.data() + array.shape(0));
}

tscore::report::ScoreOptions score_options(std::optional<std::size_t> m, std::size_t reps,
                                           std::uint64_t seed, std::size_t jobs) {
  tscore::report::ScoreOptions options;
  options.hopkins_m = m;
  options.hopkins_repetitions = reps;
  options.seed = seed;
  options.jobs = jobs;
  return options;
}

}  // namespace

PYBIND11_MODULE(_tscore, mod) {
  mod.doc() = "Transfer Score metrics for unsupervised domain adaptation";

  py::register_exception<tscore::IngestError>(mod, "IngestError", PyExc_ValueError);
  py::register_exception<tscore::ComputeError>(mod, "ComputeError", PyExc_ArithmeticError);

  mod.def("ideal_angle", &tscore::ideal_angle, py::arg("k"));
  mod.def(
      "uniformity",
      [](const Array& weights) {
        const auto result = tscore::uniformity(to_matrix(weights));
        return py::make_tuple(result.value, result.simplex_bound_violated);
      },
      py::arg("weights"),
      "Returns (value, simplex_bound_violated) for a d x K classifier matrix.");
  mod.def(
      "hopkins_statistic",
      [](const Array& features, std::optional<std::size_t> m, std::size_t repetitions,
         std::uint64_t seed) {
        const auto matrix = to_matrix(features);
        auto config = tscore::HopkinsConfig::defaults_for(matrix.rows(), seed);
        if (m) config.m = *m;
        config.repetitions = repetitions;
        return tscore::hopkins_statistic(matrix, config);
      },
      py::arg("features"), py::arg("m") = py::none(), py::arg("repetitions") = 5,
      py::arg("seed") = 0);
  mod.def(
      "entropy", [](const Array& p) { return tscore::entropy(to_vector(p)); }, py::arg("p"));
  mod.def(
      "mutual_information",
      [](const Array& probabilities) {
        return tscore::mutual_information(to_matrix(probabilities));
      },
      py::arg("probabilities"));
  mod.def("compose_transfer_score", &tscore::compose_transfer_score, py::arg("uniformity"),
          py::arg("hopkins"), py::arg("mutual_info"), py::arg("num_classes"));
  mod.def(
      "saturation_level",
      [](const Array& scores, std::size_t position, std::size_t tau) {
        return tscore::saturation_level(to_vector(scores), position, tau);
      },
      py::arg("scores"), py::arg("position"), py::arg("tau") = 3);
  mod.def(
      "select_checkpoint",
      [](std::vector<std::int64_t> epochs, std::vector<double> scores, std::size_t tau,
         double zeta) {
        tscore::ScoreSeries series{std::move(epochs), std::move(scores)};
        const auto result = tscore::select_checkpoint(series, {tau, zeta});
        return py::dict(py::arg("selected_epoch") = result.selected_epoch,
                        py::arg("selected_position") = result.selected_position,
                        py::arg("saturated") = result.saturated,
                        py::arg("window_start") = result.window_start,
                        py::arg("saturation_trace") = result.saturation_trace);
      },
      py::arg("epochs"), py::arg("scores"), py::arg("tau") = 3, py::arg("zeta") = 0.01);
  mod.def(
      "mmd",
      [](const Array& source, const Array& target, std::optional<double> bandwidth,
         bool unbiased) {
        tscore::MmdConfig config;
        config.bandwidth = bandwidth;
        config.estimator =
            unbiased ? tscore::MmdEstimator::kUnbiased : tscore::MmdEstimator::kBiased;
        return tscore::mmd(to_matrix(source), to_matrix(target), config);
      },
      py::arg("source"), py::arg("target"), py::arg("bandwidth") = py::none(),
      py::arg("unbiased") = false);
  mod.def(
      "proxy_a_distance",
      [](const Array& source, const Array& target, std::uint64_t seed) {
        tscore::ProbeConfig config;
        config.seed = seed;
        return tscore::proxy_a_distance(to_matrix(source), to_matrix(target), config).distance;
      },
      py::arg("source"), py::arg("target"), py::arg("seed") = 0);
  mod.def(
      "c_entropy",
      [](const Array& probabilities) { return tscore::c_entropy(to_matrix(probabilities)); },
      py::arg("probabilities"));
  mod.def(
      "pearson",
      [](const Array& x, const Array& y) {
        return tscore::pearson(to_vector(x), to_vector(y));
      },
      py::arg("x"), py::arg("y"));
  mod.def(
      "read_tensor", [](const std::filesystem::path& path) {
        return to_array(tscore::read_tensor(path));
      },
      py::arg("path"));
  mod.def(
      "write_tensor",
      [](const Array& array, const std::filesystem::path& path, bool float32) {
        tscore::write_tensor(to_matrix(array), path,
                             float32 ? tscore::DType::kFloat32 : tscore::DType::kFloat64);
      },
      py::arg("array"), py::arg("path"), py::arg("float32") = false);
  mod.def(
      "score_run_json",
      [](const std::filesystem::path& run, std::optional<std::size_t> m,
         std::size_t repetitions, std::uint64_t seed, std::size_t jobs) {
        const auto opened = tscore::Run::open(run);
        nlohmann::json out = nlohmann::json::array();
        for (const auto& r :
             tscore::report::score_all(opened, score_options(m, repetitions, seed, jobs))) {
          out.push_back(tscore::report::to_json(r));
        }
        return out.dump();
      },
      py::arg("run"), py::arg("m") = py::none(), py::arg("repetitions") = 5,
      py::arg("seed") = 0, py::arg("jobs") = 0);
  mod.def(
      "select_epoch_json",
      [](const std::filesystem::path& run, std::size_t tau, double zeta, std::uint64_t seed) {
        const auto opened = tscore::Run::open(run);
        return tscore::report::to_json(
                   tscore::report::select_epoch(opened, {tau, zeta},
                                                score_options(std::nullopt, 5, seed, 0)))
            .dump();
      },
      py::arg("run"), py::arg("tau") = 3, py::arg("zeta") = 0.01, py::arg("seed") = 0);
}
