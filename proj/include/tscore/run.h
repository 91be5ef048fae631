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


#ifndef TSCORE_RUN_H_
#define TSCORE_RUN_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tscore/dense_matrix.h"
#include "tscore/tensor_io.h"

namespace tscore {

// Tolerance on |sum(row) - 1| for ingested probability rows. Rows passing the
// check are renormalized exactly.
inline constexpr double kProbabilitySumTolerance = 1e-4;
inline constexpr double kMinWeightNorm = 1e-12;

inline constexpr char kManifestFileName[] = "manifest.json";

// One checkpoint's exported tensors.
struct EpochRecord {
  std::int64_t epoch = 0;
  DenseMatrix weights;        // d x K
  DenseMatrix features;       // N x d
  DenseMatrix probabilities;  // N x K
  std::optional<std::vector<int>> labels;

  std::size_t num_classes() const { return weights.cols(); }
  std::size_t feature_dim() const { return weights.rows(); }
  std::size_t num_samples() const { return features.rows(); }
};

// Checks entries lie in [0, 1] and each row sums to 1 within
// kProbabilitySumTolerance, then renormalizes rows exactly. Throws
// IngestError naming the first offending row.
void normalize_probability_rows(DenseMatrix& probabilities);

// Checks every record invariant and renormalizes probability rows. Error
// messages are prefixed with "epoch <n>: ".
void validate_epoch_record(EpochRecord& record);

// Labels stored as an N x 1 tensor of exact integers in [0, num_classes).
std::vector<int> labels_from_tensor(const DenseMatrix& tensor,
                                    std::size_t num_classes);
DenseMatrix labels_to_tensor(const std::vector<int>& labels);

struct EpochFiles {
  std::int64_t epoch = 0;
  std::filesystem::path weights;
  std::filesystem::path features;
  std::filesystem::path probabilities;
  std::optional<std::filesystem::path> labels;
};

struct RunManifest {
  std::string run_id;
  std::string method;
  std::map<std::string, std::string> hyperparameters;
  // Paths are stored as written in the manifest, relative to base_dir.
  std::vector<EpochFiles> epochs;
  std::filesystem::path base_dir;
};

RunManifest parse_manifest(const std::string& json_text,
                           const std::filesystem::path& base_dir);
std::string manifest_to_json(const RunManifest& manifest);

// A validated manifest whose epoch tensors are loaded on demand. Loading one
// epoch never touches another epoch's files, so distinct epochs may be loaded
// from different threads.
class Run {
 public:
  // Accepts a manifest file or a directory containing manifest.json.
  static Run open(const std::filesystem::path& manifest_or_dir);

  const RunManifest& manifest() const { return manifest_; }
  std::size_t size() const { return manifest_.epochs.size(); }
  bool has_labels() const;

  // Position in the manifest's epoch list, not the epoch index.
  EpochRecord load_epoch(std::size_t position) const;
  std::optional<std::size_t> position_of_epoch(std::int64_t epoch) const;
  std::vector<EpochRecord> load_all() const;

 private:
  explicit Run(RunManifest manifest) : manifest_(std::move(manifest)) {}

  RunManifest manifest_;
};

// Writes one .tsr file per tensor and a manifest.json into out_dir, returning
// the manifest path. File names are derived from the epoch index.
std::filesystem::path write_run(const std::filesystem::path& out_dir,
                                const std::string& run_id,
                                const std::string& method,
                                const std::map<std::string, std::string>& hyperparameters,
                                const std::vector<EpochRecord>& records,
                                DType dtype = DType::kFloat32);

}  // namespace tscore

#endif  // TSCORE_RUN_H_
