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
#include <limits>
#include <numbers>

#include <gtest/gtest.h>

#include "support/oracles.h"
#include "tscore/errors.h"

namespace tscore {
namespace {

using testing::read_file;
using testing::scratch_dir;

std::vector<std::byte> to_bytes(const std::string& text) {
  std::vector<std::byte> out(text.size());
  std::memcpy(out.data(), text.data(), text.size());
  return out;
}

template <typename T>
void append(std::vector<std::byte>& out, T value) {
  const auto* p = reinterpret_cast<const std::byte*>(&value);
  out.insert(out.end(), p, p + sizeof(T));
}

// Header assembled byte by byte, independently of encode_tensor.
std::vector<std::byte> header(const char magic[4], std::uint32_t version,
                              std::uint8_t dtype,
                              const std::vector<std::uint64_t>& dims) {
  std::vector<std::byte> out;
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::byte>(magic[i]));
  append(out, version);
  append(out, dtype);
  append(out, static_cast<std::uint8_t>(dims.size()));
  for (auto d : dims) append(out, d);
  return out;
}

TensorErrorKind decode_error_kind(const std::vector<std::byte>& bytes) {
  try {
    decode_tensor(bytes);
  } catch (const TensorFormatError& e) {
    return e.kind();
  }
  ADD_FAILURE() << "decode_tensor accepted malformed bytes";
  return TensorErrorKind::kIo;
}

TEST(TensorIoTest, ReadsTwoByTwo) {
  const auto dir = scratch_dir("tio_2x2");
  const DenseMatrix m(2, 2, {1, 2, 3, 4});
  write_tensor(m, dir / "m.tsr");
  const DenseMatrix back = read_tensor(dir / "m.tsr");
  EXPECT_EQ(back.rows(), 2u);
  EXPECT_EQ(back.cols(), 2u);
  EXPECT_EQ(back, m);
}

TEST(TensorIoTest, BadMagicIsReported) {
  auto bytes = encode_tensor(DenseMatrix(1, 1, {1.0}));
  std::memcpy(bytes.data(), "XXXX", 4);
  EXPECT_EQ(decode_error_kind(bytes), TensorErrorKind::kBadMagic);
  try {
    decode_tensor(bytes);
  } catch (const TensorFormatError& e) {
    EXPECT_NE(std::string(e.what()).find("bad magic"), std::string::npos);
  }
}

TEST(TensorIoTest, ColumnRoundTripIsBitExact) {
  const auto dir = scratch_dir("tio_col");
  const DenseMatrix m(3, 1, {5.5, -1.0, 0.0});
  write_tensor(m, dir / "c.tsr");
  const DenseMatrix back = read_tensor(dir / "c.tsr");
  ASSERT_EQ(back.rows(), 3u);
  ASSERT_EQ(back.cols(), 1u);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(std::bit_cast<std::uint64_t>(back(i, 0)),
              std::bit_cast<std::uint64_t>(m(i, 0)));
  }
}

TEST(TensorIoTest, SingleZeroRoundTrip) {
  const auto dir = scratch_dir("tio_zero");
  write_tensor(DenseMatrix(1, 1, {0.0}), dir / "z.tsr");
  EXPECT_EQ(read_tensor(dir / "z.tsr"), DenseMatrix(1, 1, {0.0}));
}

TEST(TensorIoTest, ExtremeValuesRoundTripBitExact) {
  const auto dir = scratch_dir("tio_pi");
  const DenseMatrix m(1, 3, {std::numbers::pi, -std::numbers::pi, 1e300});
  write_tensor(m, dir / "p.tsr");
  const DenseMatrix back = read_tensor(dir / "p.tsr");
  for (std::size_t c = 0; c < 3; ++c) {
    EXPECT_EQ(std::bit_cast<std::uint64_t>(back(0, c)),
              std::bit_cast<std::uint64_t>(m(0, c)));
  }
}

TEST(TensorIoTest, RepeatedWritesAreByteIdentical) {
  const auto dir = scratch_dir("tio_det");
  Rng rng(3);
  const DenseMatrix m = testing::random_matrix(7, 4, rng);
  write_tensor(m, dir / "a.tsr");
  write_tensor(m, dir / "b.tsr");
  EXPECT_EQ(read_file(dir / "a.tsr"), read_file(dir / "b.tsr"));
}

TEST(TensorIoTest, LayoutMatchesHandBuiltBytes) {
  const DenseMatrix m(2, 1, {1.5, -2.0});
  auto expected = header(kTensorMagic, 1, 1, {2, 1});
  append(expected, 1.5);
  append(expected, -2.0);
  EXPECT_EQ(encode_tensor(m, DType::kFloat64), expected);

  auto expected32 = header(kTensorMagic, 1, 0, {2, 1});
  append(expected32, 1.5f);
  append(expected32, -2.0f);
  EXPECT_EQ(encode_tensor(m, DType::kFloat32), expected32);
}

TEST(TensorIoTest, Float32PayloadIsWidened) {
  auto bytes = header(kTensorMagic, 1, 0, {1, 2});
  append(bytes, 0.1f);
  append(bytes, 3.0f);
  const DenseMatrix m = decode_tensor(bytes);
  EXPECT_EQ(m(0, 0), static_cast<double>(0.1f));
  EXPECT_EQ(m(0, 1), 3.0);
}

TEST(TensorIoTest, OneDimensionalLoadsAsColumn) {
  auto bytes = header(kTensorMagic, 1, 1, {3});
  append(bytes, 1.0);
  append(bytes, 2.0);
  append(bytes, 3.0);
  const DenseMatrix m = decode_tensor(bytes);
  EXPECT_EQ(m.rows(), 3u);
  EXPECT_EQ(m.cols(), 1u);
}

TEST(TensorIoTest, EachViolationHasItsOwnKind) {
  EXPECT_EQ(decode_error_kind(to_bytes("TSR")), TensorErrorKind::kTruncated);

  EXPECT_EQ(decode_error_kind(header(kTensorMagic, 2, 1, {1, 1})),
            TensorErrorKind::kUnsupportedVersion);
  EXPECT_EQ(decode_error_kind(header(kTensorMagic, 1, 7, {1, 1})),
            TensorErrorKind::kUnsupportedDtype);
  EXPECT_EQ(decode_error_kind(header(kTensorMagic, 1, 1, {1, 1, 1})),
            TensorErrorKind::kUnsupportedRank);
  EXPECT_EQ(decode_error_kind(header(kTensorMagic, 1, 1, {})),
            TensorErrorKind::kUnsupportedRank);

  auto short_payload = header(kTensorMagic, 1, 1, {2, 2});
  append(short_payload, 1.0);
  EXPECT_EQ(decode_error_kind(short_payload), TensorErrorKind::kTruncated);

  auto short_dims = header(kTensorMagic, 1, 1, {2, 2});
  short_dims.resize(short_dims.size() - 4);
  EXPECT_EQ(decode_error_kind(short_dims), TensorErrorKind::kTruncated);

  auto extra = encode_tensor(DenseMatrix(1, 1, {1.0}));
  extra.push_back(std::byte{0});
  EXPECT_EQ(decode_error_kind(extra), TensorErrorKind::kTrailingBytes);

  auto nan = header(kTensorMagic, 1, 1, {1, 2});
  append(nan, 1.0);
  append(nan, std::numeric_limits<double>::quiet_NaN());
  EXPECT_EQ(decode_error_kind(nan), TensorErrorKind::kNonFinite);

  auto inf = header(kTensorMagic, 1, 0, {1, 1});
  append(inf, std::numeric_limits<float>::infinity());
  EXPECT_EQ(decode_error_kind(inf), TensorErrorKind::kNonFinite);

  auto huge = header(kTensorMagic, 1, 1, {~std::uint64_t{0}, 4});
  EXPECT_EQ(decode_error_kind(huge), TensorErrorKind::kTruncated);
}

TEST(TensorIoTest, MissingFileIsIoError) {
  try {
    read_tensor("/nonexistent/dir/x.tsr");
    FAIL() << "expected an error";
  } catch (const TensorFormatError& e) {
    EXPECT_EQ(e.kind(), TensorErrorKind::kIo);
    EXPECT_NE(std::string(e.what()).find("/nonexistent/dir/x.tsr"), std::string::npos);
  }
}

TEST(TensorIoTest, WritingNonFiniteIsRejected) {
  EXPECT_THROW(encode_tensor(DenseMatrix(1, 1, {std::nan("")})), std::invalid_argument);
  EXPECT_THROW(encode_tensor(DenseMatrix(1, 1, {1e300}), DType::kFloat32),
               std::invalid_argument);
}

TEST(TensorIoTest, DenseMatrixRejectsLengthMismatch) {
  EXPECT_THROW(DenseMatrix(2, 2, {1, 2, 3}), std::invalid_argument);
}

// Property: any finite matrix round-trips bit-exactly through either dtype
// (float32 after a prior narrowing).
TEST(TensorIoProperty, RoundTripIsBitExact) {
  Rng rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t rows = 1 + rng.index(9);
    const std::size_t cols = 1 + rng.index(9);
    DenseMatrix m(rows, cols);
    for (double& x : m.data()) {
      // Mix magnitudes, signs, zeros and subnormals.
      const std::size_t pick = rng.index(5);
      if (pick == 0) x = 0.0;
      else if (pick == 1) x = -0.0;
      else if (pick == 2) x = std::ldexp(rng.uniform(), -1060);
      else x = std::ldexp(rng.normal(), static_cast<int>(rng.index(200)) - 100);
    }
    const DenseMatrix back = decode_tensor(encode_tensor(m, DType::kFloat64));
    ASSERT_EQ(back.rows(), rows);
    ASSERT_EQ(back.cols(), cols);
    for (std::size_t i = 0; i < m.size(); ++i) {
      ASSERT_EQ(std::bit_cast<std::uint64_t>(back.data()[i]),
                std::bit_cast<std::uint64_t>(m.data()[i]));
    }

    DenseMatrix narrow = m;
    for (double& x : narrow.data()) x = static_cast<double>(static_cast<float>(x));
    const DenseMatrix back32 = decode_tensor(encode_tensor(narrow, DType::kFloat32));
    for (std::size_t i = 0; i < narrow.size(); ++i) {
      ASSERT_EQ(std::bit_cast<std::uint64_t>(back32.data()[i]),
                std::bit_cast<std::uint64_t>(narrow.data()[i]));
    }
  }
}

}  // namespace
}  // namespace tscore
