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


#ifndef TSCORE_ERRORS_H_
#define TSCORE_ERRORS_H_

#include <stdexcept>
#include <string>

namespace tscore {

// Input files or manifests are malformed, missing, or violate a record
// invariant. The CLI maps this to exit code 2.
class IngestError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A computation cannot produce a defined value for valid inputs (zero-mean
// saturation window, diverged trainer). The CLI maps this to exit code 1.
class ComputeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class TensorErrorKind {
  kIo,
  kBadMagic,
  kUnsupportedVersion,
  kUnsupportedDtype,
  kUnsupportedRank,
  kTruncated,
  kTrailingBytes,
  kNonFinite,
};

const char* to_string(TensorErrorKind kind);

class TensorFormatError : public IngestError {
 public:
  TensorFormatError(TensorErrorKind kind, const std::string& detail)
      : IngestError(std::string(to_string(kind)) +
                    (detail.empty() ? "" : ": " + detail)),
        kind_(kind) {}

  TensorErrorKind kind() const { return kind_; }

 private:
  TensorErrorKind kind_;
};

}  // namespace tscore

#endif  // TSCORE_ERRORS_H_
