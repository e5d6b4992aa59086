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

#include <cstdint>
#include <span>
#include <vector>

#include "ppimpute/party.h"
#include "ppimpute/share.h"

namespace ppimpute::mpc {

// Every gadget is called by all three parties in the same order with the same
// shapes. The helper only deals randomness; its share vectors are zero
// placeholders and its return values carry shape only.

// Opens a designated output to both computing parties.
std::vector<RingElement> open(Party& party, const SharedVector& x);

// --- XOR-shared words -------------------------------------------------------

// Bitwise AND of XOR-shared words, one round.
std::vector<std::uint64_t> and_words(Party& party, std::span<const std::uint64_t> x,
                                     std::span<const std::uint64_t> y);

// P0 inputs words a, P1 inputs words b (the helper passes n placeholders).
// Returns XOR shares of [a > b] as unsigned 64-bit integers, in bit 0.
// Seven rounds regardless of batch size.
std::vector<std::uint64_t> greater_than(Party& party, std::span<const std::uint64_t> mine);

// XOR-shared bits (bit 0) to additive shares at integer scale. One round.
SharedVector b2a(Party& party, std::span<const std::uint64_t> bits);

// --- Arithmetic -------------------------------------------------------------

// floor(x / 2^bits) for signed x, exact.
SharedVector truncate(Party& party, const SharedVector& x, int bits);

// Sign bit of x at integer scale.
SharedVector msb(Party& party, const SharedVector& x);

// [x >= y] at integer scale. Requires |x - y| < 2^63.
SharedVector compare(Party& party, const SharedVector& x, const SharedVector& y);

// [x == y] at integer scale.
SharedVector equals(Party& party, const SharedVector& x, const SharedVector& y);

// Fixed-point product, truncated by f.
SharedVector multiply(Party& party, const SharedVector& x, const SharedVector& y);

// Ring product without truncation; for integer-scale factors such as bits.
SharedVector multiply_int(Party& party, const SharedVector& x, const SharedVector& y);

// c ? a : b for integer-scale bits c.
SharedVector multiplex(Party& party, const SharedVector& c, const SharedVector& a,
                       const SharedVector& b);

// Fixed-point matrix product, truncated by f.
SharedMatrix matmul(Party& party, const SharedMatrix& a, const SharedMatrix& b);
// Ring matrix product without truncation.
SharedMatrix matmul_int(Party& party, const SharedMatrix& a, const SharedMatrix& b);

struct DivideOptions {
  // Bound on the quotient: |x / y| < 2^int_bits. Negative means 62 - 2f.
  int int_bits = -1;
  // Accept negative numerators (costs a compare and two bit products).
  bool signed_numerator = false;
  // Accept negative divisors, |y| >= 2^(1-f).
  bool signed_divisor = false;
};

// floor(x * 2^f / y) in fixed point, by restoring long division. Requires
// y >= 2^(1-f) and |x| < 2^(62-2f).
SharedVector divide(Party& party, const SharedVector& x, const SharedVector& y,
                    const DivideOptions& opts = {});

}  // namespace ppimpute::mpc
