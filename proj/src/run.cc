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


#include "tscore/run.h"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "tscore/errors.h"

namespace tscore {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string epoch_prefix(std::int64_t epoch) {
  return "epoch " + std::to_string(epoch) + ": ";
}

}  // namespace

std::vector<int> labels_from_tensor(const DenseMatrix& tensor,
                                    std::size_t num_classes) {
  if (tensor.cols() != 1) {
    throw IngestError("labels must have shape Nx1, got " + shape_string(tensor));
  }
  std::vector<int> labels(tensor.rows());
  for (std::size_t i = 0; i < tensor.rows(); ++i) {
    const double v = tensor(i, 0);
    if (v != std::floor(v) || v < 0 || v >= static_cast<double>(num_classes)) {
      throw IngestError("label " + std::to_string(i) + " = " +
                        std::to_string(v) + " is not a class index in [0, " +
                        std::to_string(num_classes) + ")");
    }
    labels[i] = static_cast<int>(v);
  }
  return labels;
}

DenseMatrix labels_to_tensor(const std::vector<int>& labels) {
  DenseMatrix out(labels.size(), 1);
  for (std::size_t i = 0; i < labels.size(); ++i) out(i, 0) = labels[i];
  return out;
}

void normalize_probability_rows(DenseMatrix& probabilities) {
  for (std::size_t i = 0; i < probabilities.rows(); ++i) {
    auto row = probabilities.row(i);
    double sum = 0.0;
    for (double p : row) {
      if (p < 0.0 || p > 1.0) {
        throw IngestError("probabilities out of [0,1] in row " + std::to_string(i));
      }
      sum += p;
    }
    if (std::abs(sum - 1.0) > kProbabilitySumTolerance) {
      throw IngestError("probabilities not normalized (row " + std::to_string(i) +
                        " sums to " + std::to_string(sum) + ")");
    }
    for (double& p : row) p /= sum;
  }
}

void validate_epoch_record(EpochRecord& record) {
  const auto fail = [&](const std::string& what) {
    throw IngestError(epoch_prefix(record.epoch) + what);
  };
  if (record.epoch < 0) fail("negative epoch index");

  const std::size_t d = record.weights.rows();
  const std::size_t k = record.weights.cols();
  if (k < 2 || d < 1) {
    fail("weights must be d x K with K >= 2 and d >= 1, got " +
         shape_string(record.weights));
  }
  for (std::size_t c = 0; c < k; ++c) {
    double sq = 0.0;
    for (std::size_t r = 0; r < d; ++r) sq += record.weights(r, c) * record.weights(r, c);
    if (std::sqrt(sq) < kMinWeightNorm) {
      fail("zero-norm weight column " + std::to_string(c));
    }
  }
  if (record.features.cols() != d) {
    fail("shape mismatch: features " + shape_string(record.features) +
         " but weights " + shape_string(record.weights));
  }
  const std::size_t n = record.features.rows();
  if (n == 0) fail("no feature rows");
  if (record.probabilities.rows() != n || record.probabilities.cols() != k) {
    fail("shape mismatch: probabilities " + shape_string(record.probabilities) +
         " but expected " + std::to_string(n) + "x" + std::to_string(k));
  }
  try {
    normalize_probability_rows(record.probabilities);
  } catch (const IngestError& e) {
    fail(e.what());
  }
  if (record.labels && record.labels->size() != n) {
    fail("shape mismatch: " + std::to_string(record.labels->size()) +
         " labels for " + std::to_string(n) + " samples");
  }
  if (record.labels) {
    for (int label : *record.labels) {
      if (label < 0 || static_cast<std::size_t>(label) >= k) {
        fail("label " + std::to_string(label) + " outside [0, K)");
      }
    }
  }
}

RunManifest parse_manifest(const std::string& json_text,
                           const fs::path& base_dir) {
  RunManifest manifest;
  manifest.base_dir = base_dir;
  try {
    const json doc = json::parse(json_text);
    manifest.run_id = doc.at("run_id").get<std::string>();
    manifest.method = doc.at("method").get<std::string>();
    if (doc.contains("hyperparameters")) {
      for (const auto& [key, value] : doc.at("hyperparameters").items()) {
        manifest.hyperparameters[key] = value.get<std::string>();
      }
    }
    for (const auto& entry : doc.at("epochs")) {
      EpochFiles files;
      files.epoch = entry.at("epoch").get<std::int64_t>();
      files.weights = entry.at("weights").get<std::string>();
      files.features = entry.at("features").get<std::string>();
      files.probabilities = entry.at("probabilities").get<std::string>();
      if (entry.contains("labels") && !entry.at("labels").is_null()) {
        files.labels = fs::path(entry.at("labels").get<std::string>());
      }
      manifest.epochs.push_back(std::move(files));
    }
  } catch (const json::exception& e) {
    throw IngestError(std::string("malformed manifest: ") + e.what());
  }
  if (manifest.epochs.empty()) throw IngestError("manifest lists no epochs");
  for (std::size_t i = 0; i < manifest.epochs.size(); ++i) {
    if (manifest.epochs[i].epoch < 0) {
      throw IngestError(epoch_prefix(manifest.epochs[i].epoch) +
                        "negative epoch index");
    }
    if (i > 0 && manifest.epochs[i].epoch <= manifest.epochs[i - 1].epoch) {
      throw IngestError(epoch_prefix(manifest.epochs[i].epoch) +
                        "epoch indices must be strictly increasing");
    }
  }
  return manifest;
}

std::string manifest_to_json(const RunManifest& manifest) {
  json doc;
  doc["run_id"] = manifest.run_id;
  doc["method"] = manifest.method;
  doc["hyperparameters"] = json::object();
  for (const auto& [key, value] : manifest.hyperparameters) {
    doc["hyperparameters"][key] = value;
  }
  doc["epochs"] = json::array();
  for (const auto& files : manifest.epochs) {
    json entry;
    entry["epoch"] = files.epoch;
    entry["weights"] = files.weights.generic_string();
    entry["features"] = files.features.generic_string();
    entry["probabilities"] = files.probabilities.generic_string();
    entry["labels"] = files.labels ? json(files.labels->generic_string()) : json();
    doc["epochs"].push_back(std::move(entry));
  }
  return doc.dump(2) + "\n";
}

Run Run::open(const fs::path& manifest_or_dir) {
  fs::path manifest_path = manifest_or_dir;
  if (fs::is_directory(manifest_path)) manifest_path /= kManifestFileName;
  std::ifstream in(manifest_path);
  if (!in) throw IngestError("cannot open manifest " + manifest_path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();

  RunManifest manifest =
      parse_manifest(buffer.str(), manifest_path.parent_path());
  for (const auto& files : manifest.epochs) {
    const auto require = [&](const fs::path& rel, const char* role) {
      if (!fs::is_regular_file(manifest.base_dir / rel)) {
        throw IngestError(epoch_prefix(files.epoch) + "missing " + role +
                          " file " + (manifest.base_dir / rel).string());
      }
    };
    require(files.weights, "weights");
    require(files.features, "features");
    require(files.probabilities, "probabilities");
    if (files.labels) require(*files.labels, "labels");
  }
  return Run(std::move(manifest));
}

bool Run::has_labels() const {
  for (const auto& files : manifest_.epochs) {
    if (!files.labels) return false;
  }
  return true;
}

std::optional<std::size_t> Run::position_of_epoch(std::int64_t epoch) const {
  for (std::size_t i = 0; i < manifest_.epochs.size(); ++i) {
    if (manifest_.epochs[i].epoch == epoch) return i;
  }
  return std::nullopt;
}

EpochRecord Run::load_epoch(std::size_t position) const {
  const EpochFiles& files = manifest_.epochs.at(position);
  const auto load = [&](const fs::path& rel) {
    try {
      return read_tensor(manifest_.base_dir / rel);
    } catch (const TensorFormatError& e) {
      throw TensorFormatError(e.kind(),
                              epoch_prefix(files.epoch) + e.what());
    }
  };
  EpochRecord record;
  record.epoch = files.epoch;
  record.weights = load(files.weights);
  record.features = load(files.features);
  record.probabilities = load(files.probabilities);
  if (files.labels) {
    const DenseMatrix labels = load(*files.labels);
    try {
      record.labels = labels_from_tensor(labels, record.weights.cols());
    } catch (const IngestError& e) {
      throw IngestError(epoch_prefix(files.epoch) + e.what());
    }
  }
  validate_epoch_record(record);
  return record;
}

std::vector<EpochRecord> Run::load_all() const {
  std::vector<EpochRecord> records;
  records.reserve(size());
  for (std::size_t i = 0; i < size(); ++i) records.push_back(load_epoch(i));
  return records;
}

fs::path write_run(const fs::path& out_dir, const std::string& run_id,
                   const std::string& method,
                   const std::map<std::string, std::string>& hyperparameters,
                   const std::vector<EpochRecord>& records, DType dtype) {
  fs::create_directories(out_dir);
  RunManifest manifest;
  manifest.run_id = run_id;
  manifest.method = method;
  manifest.hyperparameters = hyperparameters;
  manifest.base_dir = out_dir;
  for (const auto& record : records) {
    char stem[32];
    std::snprintf(stem, sizeof(stem), "epoch_%04lld",
                  static_cast<long long>(record.epoch));
    EpochFiles files;
    files.epoch = record.epoch;
    files.weights = std::string(stem) + "_weights.tsr";
    files.features = std::string(stem) + "_features.tsr";
    files.probabilities = std::string(stem) + "_probabilities.tsr";
    write_tensor(record.weights, out_dir / files.weights, dtype);
    write_tensor(record.features, out_dir / files.features, dtype);
    write_tensor(record.probabilities, out_dir / files.probabilities, dtype);
    if (record.labels) {
      files.labels = std::string(stem) + "_labels.tsr";
      write_tensor(labels_to_tensor(*record.labels), out_dir / *files.labels,
                   dtype);
    }
    manifest.epochs.push_back(std::move(files));
  }

  const fs::path manifest_path = out_dir / kManifestFileName;
  const fs::path tmp_path = out_dir / (std::string(kManifestFileName) + ".tmp");
  {
    std::ofstream out(tmp_path, std::ios::trunc);
    out << manifest_to_json(manifest);
    if (!out) throw IngestError("cannot write " + tmp_path.string());
  }
  fs::rename(tmp_path, manifest_path);
  return manifest_path;
}

}  // namespace tscore
