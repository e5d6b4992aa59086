// Copyright 2026 The ppimpute Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <string_view>

namespace ppimpute {

// Deterministic ChaCha20 keystream. Two parties holding the same seed draw
// identical sequences, which is how correlated randomness is compressed.
class Prg {
 public:
  using Seed = std::array<std::uint8_t, 32>;
  using result_type = std::uint64_t;

  explicit Prg(const Seed& seed);

  // Seed derived from an integer and a domain label (BLAKE2b).
  static Seed derive_seed(std::uint64_t value, std::string_view domain);

  std::uint64_t next();
  void fill(std::span<std::uint64_t> out);
  Seed next_seed();

  // Uniform in [0, bound), rejection sampled. bound > 0.
  std::uint64_t uniform(std::uint64_t bound);
  // Uniform in [0, 1) with 53 bits.
  double uniform_real();

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }
  result_type operator()() { return next(); }

 private:
  void refill();

  static constexpr std::size_t kBufferWords = 512;

  Seed key_;
  std::uint64_t block_nonce_ = 0;
  std::array<std::uint64_t, kBufferWords> buffer_{};
  std::size_t cursor_ = kBufferWords;
};

}  // namespace ppimpute
