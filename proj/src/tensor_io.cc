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


#include "tscore/tensor_io.h"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <limits>
#include <string>

namespace tscore {

const char* to_string(TensorErrorKind kind) {
  switch (kind) {
    case TensorErrorKind::kIo:
      return "i/o error";
    case TensorErrorKind::kBadMagic:
      return "bad magic";
    case TensorErrorKind::kUnsupportedVersion:
      return "unsupported version";
    case TensorErrorKind::kUnsupportedDtype:
      return "unsupported dtype";
    case TensorErrorKind::kUnsupportedRank:
      return "unsupported rank";
    case TensorErrorKind::kTruncated:
      return "truncated payload";
    case TensorErrorKind::kTrailingBytes:
      return "trailing bytes";
    case TensorErrorKind::kNonFinite:
      return "non-finite value";
  }
  return "unknown tensor error";
}

namespace {

constexpr std::size_t kFixedHeaderSize = 4 + 4 + 1 + 1;

template <typename UInt>
void put_le(std::vector<std::byte>& out, UInt value) {
  for (std::size_t i = 0; i < sizeof(UInt); ++i) {
    out.push_back(static_cast<std::byte>((value >> (8 * i)) & 0xFF));
  }
}

template <typename UInt>
UInt get_le(std::span<const std::byte> bytes, std::size_t offset) {
  UInt value = 0;
  for (std::size_t i = 0; i < sizeof(UInt); ++i) {
    value |= static_cast<UInt>(std::to_integer<std::uint8_t>(bytes[offset + i]))
             << (8 * i);
  }
  return value;
}

void check_finite(const DenseMatrix& matrix) {
  const auto data = matrix.data();
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (!std::isfinite(data[i])) {
      throw TensorFormatError(TensorErrorKind::kNonFinite,
                              "element " + std::to_string(i));
    }
  }
}

}  // namespace

std::vector<std::byte> encode_tensor(const DenseMatrix& matrix, DType dtype) {
  for (double v : matrix.data()) {
    if (!std::isfinite(v)) throw std::invalid_argument("cannot encode non-finite value");
  }
  const std::size_t width = dtype == DType::kFloat32 ? 4 : 8;
  std::vector<std::byte> out;
  out.reserve(kFixedHeaderSize + 16 + matrix.size() * width);
  for (char c : kTensorMagic) out.push_back(static_cast<std::byte>(c));
  put_le<std::uint32_t>(out, kTensorVersion);
  out.push_back(static_cast<std::byte>(dtype));
  out.push_back(std::byte{2});
  put_le<std::uint64_t>(out, matrix.rows());
  put_le<std::uint64_t>(out, matrix.cols());
  for (double v : matrix.data()) {
    if (dtype == DType::kFloat32) {
      const auto narrowed = static_cast<float>(v);
      if (!std::isfinite(narrowed)) {
        throw std::invalid_argument("value " + std::to_string(v) +
                                    " is not representable as float32");
      }
      put_le<std::uint32_t>(out, std::bit_cast<std::uint32_t>(narrowed));
    } else {
      put_le<std::uint64_t>(out, std::bit_cast<std::uint64_t>(v));
    }
  }
  return out;
}

DenseMatrix decode_tensor(std::span<const std::byte> bytes) {
  if (bytes.size() >= 4 && std::memcmp(bytes.data(), kTensorMagic, 4) != 0) {
    throw TensorFormatError(TensorErrorKind::kBadMagic, "");
  }
  if (bytes.size() < kFixedHeaderSize) {
    throw TensorFormatError(TensorErrorKind::kTruncated, "header too short");
  }
  const auto version = get_le<std::uint32_t>(bytes, 4);
  if (version != kTensorVersion) {
    throw TensorFormatError(TensorErrorKind::kUnsupportedVersion,
                            "version " + std::to_string(version));
  }
  const auto dtype_code = std::to_integer<std::uint8_t>(bytes[8]);
  if (dtype_code > 1) {
    throw TensorFormatError(TensorErrorKind::kUnsupportedDtype,
                            "code " + std::to_string(dtype_code));
  }
  const auto dtype = static_cast<DType>(dtype_code);
  const auto ndim = std::to_integer<std::uint8_t>(bytes[9]);
  if (ndim < 1 || ndim > 2) {
    throw TensorFormatError(TensorErrorKind::kUnsupportedRank,
                            "ndim " + std::to_string(ndim));
  }
  const std::size_t dims_end = kFixedHeaderSize + 8 * std::size_t{ndim};
  if (bytes.size() < dims_end) {
    throw TensorFormatError(TensorErrorKind::kTruncated, "dimensions");
  }
  const auto rows = get_le<std::uint64_t>(bytes, kFixedHeaderSize);
  const std::uint64_t cols =
      ndim == 2 ? get_le<std::uint64_t>(bytes, kFixedHeaderSize + 8) : 1;

  const std::size_t width = dtype == DType::kFloat32 ? 4 : 8;
  constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
  if (cols != 0 && rows > kMax / cols) {
    throw TensorFormatError(TensorErrorKind::kTruncated, "dimensions overflow");
  }
  const std::uint64_t count = rows * cols;
  const std::size_t payload = bytes.size() - dims_end;
  if (count > payload / width) {
    throw TensorFormatError(
        TensorErrorKind::kTruncated,
        "expected " + std::to_string(count) + " elements, have " +
            std::to_string(payload) + " payload bytes");
  }
  if (payload != count * width) {
    throw TensorFormatError(TensorErrorKind::kTrailingBytes,
                            std::to_string(payload - count * width) + " bytes");
  }

  std::vector<double> data(count);
  std::size_t offset = dims_end;
  for (auto& v : data) {
    if (dtype == DType::kFloat32) {
      v = std::bit_cast<float>(get_le<std::uint32_t>(bytes, offset));
    } else {
      v = std::bit_cast<double>(get_le<std::uint64_t>(bytes, offset));
    }
    offset += width;
  }
  DenseMatrix matrix(rows, cols, std::move(data));
  check_finite(matrix);
  return matrix;
}

DenseMatrix read_tensor(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw TensorFormatError(TensorErrorKind::kIo,
                            "cannot open " + path.string());
  }
  std::vector<char> raw((std::istreambuf_iterator<char>(in)),
                        std::istreambuf_iterator<char>());
  if (in.bad()) {
    throw TensorFormatError(TensorErrorKind::kIo, "read failed " + path.string());
  }
  try {
    return decode_tensor(std::as_bytes(std::span<const char>(raw)));
  } catch (const TensorFormatError& e) {
    throw TensorFormatError(e.kind(), path.string() + ": " +
                                          std::string(e.what()).substr(
                                              std::strlen(to_string(e.kind()))));
  }
}

void write_tensor(const DenseMatrix& matrix, const std::filesystem::path& path,
                  DType dtype) {
  const auto bytes = encode_tensor(matrix, dtype);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw TensorFormatError(TensorErrorKind::kIo,
                            "cannot open " + path.string() + " for writing");
  }
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) {
    throw TensorFormatError(TensorErrorKind::kIo, "write failed " + path.string());
  }
}

}  // namespace tscore
