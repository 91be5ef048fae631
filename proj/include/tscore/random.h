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


#ifndef TSCORE_RANDOM_H_
#define TSCORE_RANDOM_H_

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

namespace tscore {

// Seeded generator whose output is identical on every platform. Standard
// library distributions are implementation-defined, so the mappings from raw
// 64-bit draws are done here.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  // Uniform in [0, 1) with 53 random bits.
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  // Uniform integer in [0, n). n must be positive.
  std::size_t index(std::size_t n);

  // Standard normal via Box-Muller.
  double normal();

  // m distinct indices from [0, n), in draw order (partial Fisher-Yates).
  std::vector<std::size_t> sample_without_replacement(std::size_t n,
                                                      std::size_t m);

  void shuffle(std::vector<std::size_t>& values);

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace tscore

#endif  // TSCORE_RANDOM_H_
