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


#ifndef TSCORE_TENSOR_IO_H_
#define TSCORE_TENSOR_IO_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "tscore/dense_matrix.h"
#include "tscore/errors.h"

namespace tscore {

// On-disk layout of a ".tsr" file, all integers little-endian:
//
//   "TSRD" | u32 version (=1) | u8 dtype | u8 ndim | ndim x u64 dims | payload
//
// dtype 0 is float32, 1 is float64. The payload is row-major. One-dimensional
// tensors load as a single column. float32 payloads are widened on load.
inline constexpr char kTensorMagic[4] = {'T', 'S', 'R', 'D'};
inline constexpr std::uint32_t kTensorVersion = 1;

enum class DType : std::uint8_t { kFloat32 = 0, kFloat64 = 1 };

std::vector<std::byte> encode_tensor(const DenseMatrix& matrix,
                                     DType dtype = DType::kFloat64);

// Throws TensorFormatError with a distinct kind per violation.
DenseMatrix decode_tensor(std::span<const std::byte> bytes);

DenseMatrix read_tensor(const std::filesystem::path& path);

// Writes are deterministic: equal matrices produce identical bytes.
void write_tensor(const DenseMatrix& matrix, const std::filesystem::path& path,
                  DType dtype = DType::kFloat64);

}  // namespace tscore

#endif  // TSCORE_TENSOR_IO_H_
