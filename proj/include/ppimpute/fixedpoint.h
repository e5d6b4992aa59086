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

#include <bit>
#include <cstdint>
#include <cstring>
#include <stdexcept>
#include <string>

namespace ppimpute {

// Residue mod 2^64. Unsigned arithmetic wraps, which is the ring contract.
using RingElement = std::uint64_t;

constexpr int kRingBits = 64;

class OverflowError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

// Fixed-point parameters shared by every party of a session.
struct FxConfig {
  int frac_bits = 15;

  // Throws std::invalid_argument unless 1 <= frac_bits <= 30.
  void validate() const;

  // Exclusive bound on |x| for encode().
  double max_magnitude() const;

  RingElement one() const { return RingElement{1} << frac_bits; }

  friend bool operator==(const FxConfig&, const FxConfig&) = default;
};

// round(x * 2^f), ties away from zero, wrapped into the ring.
RingElement encode(double x, const FxConfig& cfg);

// Signed interpretation divided by 2^f.
double decode(RingElement v, const FxConfig& cfg);

// Integer-scale embedding (bits, counts, indices): no 2^f factor.
constexpr RingElement encode_integer(std::int64_t v) {
  return static_cast<RingElement>(v);
}

constexpr std::int64_t as_signed(RingElement v) {
  return static_cast<std::int64_t>(v);
}

constexpr RingElement wrap_add(RingElement a, RingElement b) { return a + b; }
constexpr RingElement wrap_sub(RingElement a, RingElement b) { return a - b; }
constexpr RingElement wrap_neg(RingElement a) { return RingElement{0} - a; }

// Product at scale 2^(2f) when both inputs are fixed-point; the caller
// truncates by f before decoding.
constexpr RingElement wrap_mul(RingElement a, RingElement b) { return a * b; }

// Plaintext arithmetic shift right of the signed value.
constexpr RingElement arith_shift_right(RingElement v, int bits) {
  return static_cast<RingElement>(as_signed(v) >> bits);
}

// 8-byte little-endian serialization used on the wire and in files.
inline void store_le(RingElement v, std::uint8_t* out) {
  if constexpr (std::endian::native == std::endian::little) {
    std::memcpy(out, &v, 8);
  } else {
    for (int i = 0; i < 8; ++i) out[i] = static_cast<std::uint8_t>(v >> (8 * i));
  }
}

inline RingElement load_le(const std::uint8_t* in) {
  RingElement v = 0;
  if constexpr (std::endian::native == std::endian::little) {
    std::memcpy(&v, in, 8);
  } else {
    for (int i = 0; i < 8; ++i) v |= static_cast<RingElement>(in[i]) << (8 * i);
  }
  return v;
}

}  // namespace ppimpute
