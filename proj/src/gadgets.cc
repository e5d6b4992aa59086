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

#include "ppimpute/gadgets.h"

#include <stdexcept>
#include <string>

namespace ppimpute::mpc {
namespace {

constexpr std::uint64_t kLow63 = ~std::uint64_t{0} >> 1;

void require_same(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    throw ShapeError(std::string(what) + ": size mismatch " + std::to_string(a) + " vs " +
                     std::to_string(b));
  }
}

// Exchanges blinded values with the peer. The helper takes no part.
std::vector<RingElement> swap_with_peer(Party& party, MsgTag tag,
                                        const std::vector<RingElement>& mine) {
  if (party.is_helper()) return std::vector<RingElement>(mine.size(), 0);
  return party.exchange(tag, mine);
}

// Bits at even (odd) positions, compacted into the low half. Linear over XOR,
// so it applies share-wise.
std::uint64_t even_bits(std::uint64_t x) {
  x &= 0x5555555555555555ULL;
  x = (x | x >> 1) & 0x3333333333333333ULL;
  x = (x | x >> 2) & 0x0f0f0f0f0f0f0f0fULL;
  x = (x | x >> 4) & 0x00ff00ff00ff00ffULL;
  x = (x | x >> 8) & 0x0000ffff0000ffffULL;
  return (x | x >> 16) & 0x00000000ffffffffULL;
}

std::uint64_t odd_bits(std::uint64_t x) { return even_bits(x >> 1); }

// Concatenates the low w bits of every value (w divides 64).
std::vector<std::uint64_t> pack_bits(std::span<const std::uint64_t> v, int w) {
  const auto width = static_cast<std::size_t>(w);
  std::vector<std::uint64_t> out((v.size() * width + 63) / 64, 0);
  const std::uint64_t mask = w == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << w) - 1;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const std::size_t bit = i * width;
    out[bit / 64] |= (v[i] & mask) << (bit % 64);
  }
  return out;
}

std::vector<std::uint64_t> unpack_bits(std::span<const std::uint64_t> packed, std::size_t n,
                                       int w) {
  const auto width = static_cast<std::size_t>(w);
  const std::uint64_t mask = w == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << w) - 1;
  std::vector<std::uint64_t> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t bit = i * width;
    out[i] = (packed[bit / 64] >> (bit % 64)) & mask;
  }
  return out;
}

std::uint64_t low_mask(int bits) {
  return bits >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << bits) - 1;
}

}  // namespace

std::vector<RingElement> open(Party& party, const SharedVector& x) {
  auto theirs = swap_with_peer(party, MsgTag::kOutput, x.values);
  for (std::size_t i = 0; i < theirs.size(); ++i) theirs[i] += x[i];
  return theirs;
}

std::vector<std::uint64_t> and_words(Party& party, std::span<const std::uint64_t> x,
                                     std::span<const std::uint64_t> y) {
  require_same(x.size(), y.size(), "and_words");
  const std::size_t n = x.size();
  if (n == 0) return {};
  BoolTriples t = party.dealer().bool_triples(n);
  std::vector<std::uint64_t> z(n, 0);
  if (party.is_helper()) return z;

  std::vector<std::uint64_t> masked(2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    masked[i] = x[i] ^ t.u[i];
    masked[n + i] = y[i] ^ t.v[i];
  }
  const auto theirs = party.exchange(MsgTag::kAndOpen, masked);
  const bool p0 = party.is_p0();
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint64_t d = masked[i] ^ theirs[i];
    const std::uint64_t e = masked[n + i] ^ theirs[n + i];
    z[i] = t.w[i] ^ (d & t.v[i]) ^ (e & t.u[i]);
    if (p0) z[i] ^= d & e;
  }
  return z;
}

std::vector<std::uint64_t> greater_than(Party& party, std::span<const std::uint64_t> mine) {
  const std::size_t n = mine.size();
  const bool p0 = party.is_p0();
  // Inputs as XOR shares: A = (a, 0), ~B = (~0, b). G = A & ~B marks bits
  // where a wins, E = ~(A ^ B) bits where they tie.
  std::vector<std::uint64_t> a(n), not_b(n), e(n);
  for (std::size_t i = 0; i < n; ++i) {
    a[i] = p0 ? mine[i] : 0;
    not_b[i] = p0 ? ~std::uint64_t{0} : mine[i];
    e[i] = p0 ? ~mine[i] : mine[i];
  }
  std::vector<std::uint64_t> g = and_words(party, a, not_b);

  // Carry tree: pair adjacent positions, hi = odd bit, lo = even bit.
  // G = G_hi ^ (E_hi & G_lo), E = E_hi & E_lo. Only the live bits of each
  // level are packed into the AND batch.
  std::vector<std::uint64_t> e_hi(n), g_lo(n), e_lo(n), g_hi(n);
  for (int w = 32; w >= 1; w >>= 1) {
    const bool last = w == 1;
    for (std::size_t i = 0; i < n; ++i) {
      g_hi[i] = odd_bits(g[i]);
      g_lo[i] = even_bits(g[i]);
      e_hi[i] = odd_bits(e[i]);
      e_lo[i] = even_bits(e[i]);
    }
    const std::vector<std::uint64_t> packed_e_hi = pack_bits(e_hi, w);
    std::vector<std::uint64_t> lhs = packed_e_hi;
    std::vector<std::uint64_t> rhs = pack_bits(g_lo, w);
    const std::size_t half = lhs.size();
    if (!last) {
      const auto packed_e_lo = pack_bits(e_lo, w);
      lhs.insert(lhs.end(), packed_e_hi.begin(), packed_e_hi.end());
      rhs.insert(rhs.end(), packed_e_lo.begin(), packed_e_lo.end());
    }
    const auto prod = and_words(party, lhs, rhs);
    const auto carry = unpack_bits(std::span(prod).first(half), n, w);
    for (std::size_t i = 0; i < n; ++i) g[i] = g_hi[i] ^ carry[i];
    if (!last) e = unpack_bits(std::span(prod).subspan(half), n, w);
  }
  return g;
}

SharedVector b2a(Party& party, std::span<const std::uint64_t> bits) {
  const std::size_t n = bits.size();
  if (n == 0) return {};
  BitPairs r = party.dealer().bit_pairs(n);
  SharedVector out(n);
  if (party.is_helper()) return out;

  std::vector<std::uint64_t> packed((n + 63) / 64, 0);
  for (std::size_t i = 0; i < n; ++i) {
    packed[i / 64] |= ((bits[i] ^ r.bit[i]) & 1) << (i % 64);
  }
  const auto theirs = party.exchange(MsgTag::kBitOpen, packed);
  const bool p0 = party.is_p0();
  for (std::size_t i = 0; i < n; ++i) {
    const RingElement e = ((packed[i / 64] ^ theirs[i / 64]) >> (i % 64)) & 1;
    // t = e ^ rho = e + (1 - 2e) rho
    out[i] = (RingElement{1} - 2 * e) * r.arith[i] + (p0 ? e : 0);
  }
  return out;
}

SharedVector truncate(Party& party, const SharedVector& x, int bits) {
  if (bits <= 0 || bits >= 63) throw std::invalid_argument("truncate: bits out of range");
  const std::size_t n = x.size();
  const bool p0 = party.is_p0();
  const std::uint64_t low = low_mask(bits);
  // Shift into the unsigned range: u = x + 2^63 = u0 + u1 - w 2^64.
  // floor(u / 2^d) = (u0 >> d) + (u1 >> d) + c - w 2^(64-d), c the carry out
  // of the low d bits.
  std::vector<std::uint64_t> u(n), words(2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    u[i] = p0 ? x[i] + (RingElement{1} << 63) : x[i];
    words[i] = p0 ? u[i] : ~u[i];
    words[n + i] = p0 ? (u[i] & low) : (~u[i] & low);
  }
  const auto carries = b2a(party, greater_than(party, words));
  SharedVector out(n);
  for (std::size_t i = 0; i < n; ++i) {
    RingElement v = (u[i] >> bits) + carries[n + i] - (carries[i] << (64 - bits));
    if (p0) v -= RingElement{1} << (63 - bits);
    out[i] = v;
  }
  return out;
}

SharedVector msb(Party& party, const SharedVector& x) {
  const std::size_t n = x.size();
  const bool p0 = party.is_p0();
  std::vector<std::uint64_t> words(n);
  for (std::size_t i = 0; i < n; ++i) {
    words[i] = p0 ? (x[i] & kLow63) : (~x[i] & kLow63);
  }
  auto bits = greater_than(party, words);
  for (std::size_t i = 0; i < n; ++i) bits[i] ^= x[i] >> 63;
  return b2a(party, bits);
}

SharedVector compare(Party& party, const SharedVector& x, const SharedVector& y) {
  return one_minus(party, msb(party, sub(x, y)));
}

SharedVector equals(Party& party, const SharedVector& x, const SharedVector& y) {
  const SharedVector d = sub(x, y);
  const std::size_t n = d.size();
  const bool p0 = party.is_p0();
  // d = 0 iff d0 == -d1; E marks agreeing bits and is AND-reduced.
  std::vector<std::uint64_t> e(n), hi(n), lo(n);
  for (std::size_t i = 0; i < n; ++i) e[i] = p0 ? ~d[i] : RingElement{0} - d[i];
  for (int w = 32; w >= 1; w >>= 1) {
    for (std::size_t i = 0; i < n; ++i) {
      hi[i] = odd_bits(e[i]);
      lo[i] = even_bits(e[i]);
    }
    e = unpack_bits(and_words(party, pack_bits(hi, w), pack_bits(lo, w)), n, w);
  }
  return b2a(party, e);
}

SharedVector multiply_int(Party& party, const SharedVector& x, const SharedVector& y) {
  require_same(x.size(), y.size(), "multiply");
  const std::size_t n = x.size();
  if (n == 0) return {};
  ArithTriples t = party.dealer().arith_triples(n);
  SharedVector z(n);
  if (party.is_helper()) return z;

  std::vector<RingElement> masked(2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    masked[i] = x[i] - t.a[i];
    masked[n + i] = y[i] - t.b[i];
  }
  const auto theirs = party.exchange(MsgTag::kBeaverOpen, masked);
  const bool p0 = party.is_p0();
  for (std::size_t i = 0; i < n; ++i) {
    const RingElement d = masked[i] + theirs[i];
    const RingElement e = masked[n + i] + theirs[n + i];
    z[i] = t.c[i] + d * t.b[i] + e * t.a[i] + (p0 ? d * e : 0);
  }
  return z;
}

SharedVector multiply(Party& party, const SharedVector& x, const SharedVector& y) {
  return truncate(party, multiply_int(party, x, y), party.frac_bits());
}

SharedVector multiplex(Party& party, const SharedVector& c, const SharedVector& a,
                       const SharedVector& b) {
  return add(b, multiply_int(party, c, sub(a, b)));
}

SharedMatrix matmul_int(Party& party, const SharedMatrix& a, const SharedMatrix& b) {
  if (a.cols != b.rows) {
    throw ShapeError("matmul: inner dimensions " + std::to_string(a.cols) + " and " +
                     std::to_string(b.rows));
  }
  const std::size_t r = a.rows, k = a.cols, c = b.cols;
  MatrixTriple t = party.dealer().matrix_triple(r, k, c);
  if (party.is_helper()) return SharedMatrix(r, c);

  std::vector<RingElement> masked(r * k + k * c);
  for (std::size_t i = 0; i < r * k; ++i) masked[i] = a.values[i] - t.a[i];
  for (std::size_t i = 0; i < k * c; ++i) masked[r * k + i] = b.values[i] - t.b[i];
  const auto theirs = party.exchange(MsgTag::kMatrixOpen, masked);
  std::vector<RingElement> e(r * k), f(k * c);
  for (std::size_t i = 0; i < r * k; ++i) e[i] = masked[i] + theirs[i];
  for (std::size_t i = 0; i < k * c; ++i) f[i] = masked[r * k + i] + theirs[r * k + i];

  // Z = C + E B + A F (+ E F on P0)
  std::vector<RingElement> z = t.c;
  const auto eb = ring_matmul(e, t.b, r, k, c);
  const auto af = ring_matmul(t.a, f, r, k, c);
  for (std::size_t i = 0; i < z.size(); ++i) z[i] += eb[i] + af[i];
  if (party.is_p0()) {
    const auto ef = ring_matmul(e, f, r, k, c);
    for (std::size_t i = 0; i < z.size(); ++i) z[i] += ef[i];
  }
  return SharedMatrix(r, c, std::move(z));
}

SharedMatrix matmul(Party& party, const SharedMatrix& a, const SharedMatrix& b) {
  SharedMatrix z = matmul_int(party, a, b);
  z.values = truncate(party, z.flatten(), party.frac_bits()).values;
  return z;
}

SharedVector divide(Party& party, const SharedVector& x, const SharedVector& y,
                    const DivideOptions& opts) {
  require_same(x.size(), y.size(), "divide");
  const std::size_t n = x.size();
  const int f = party.frac_bits();
  const int int_bits = opts.int_bits < 0 ? 62 - 2 * f : opts.int_bits;
  const int steps = int_bits + f;
  if (int_bits < 1 || steps > 62) throw std::invalid_argument("divide: int_bits out of range");

  // Signs as 0/1 (1 = non-negative); both flips share one compare batch.
  SharedVector num = x, den = y, sign_x, sign_y;
  if (opts.signed_numerator || opts.signed_divisor) {
    const SharedVector empty;
    const SharedVector& xs = opts.signed_numerator ? x : empty;
    const SharedVector& ys = opts.signed_divisor ? y : empty;
    const SharedVector vals = concat({&xs, &ys});
    const SharedVector s = compare(party, vals, SharedVector(vals.size()));
    const SharedVector abs = sub(multiply_int(party, s, shift_left(vals, 1)), vals);
    if (opts.signed_numerator) {
      sign_x = slice(s, 0, n);
      num = slice(abs, 0, n);
    }
    if (opts.signed_divisor) {
      sign_y = slice(s, xs.size(), n);
      den = slice(abs, xs.size(), n);
    }
  }

  // Remainder lives below 2^62. Divisor multiples that would reach 2^62 are
  // replaced by 2^62 itself, which the remainder can never reach.
  constexpr RingElement kCeiling = RingElement{1} << 62;
  SharedVector rem = shift_left(num, f);
  SharedVector repeated(n * steps), scaled(n * steps), bounds(n * steps);
  for (int i = 0; i < steps; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      repeated[i * n + j] = den[j];
      scaled[i * n + j] = den[j] << i;
      bounds[i * n + j] = party.is_p0() ? RingElement{1} << (62 - i) : 0;
    }
  }
  const SharedVector ov = compare(party, repeated, bounds);
  const SharedVector steps_vec =
      add(scaled, multiply_int(party, ov, local_affine(party, scaled, wrap_neg(1), kCeiling)));

  SharedVector q(n);
  for (int i = steps - 1; i >= 0; --i) {
    const SharedVector t = slice(steps_vec, static_cast<std::size_t>(i) * n, n);
    const SharedVector bit = compare(party, rem, t);
    rem = sub(rem, multiply_int(party, bit, t));
    for (std::size_t j = 0; j < n; ++j) q[j] += bit[j] << i;
  }

  SharedVector sign;
  if (opts.signed_numerator && opts.signed_divisor) {
    // Same sign iff sx == sy: 1 - sx - sy + 2 sx sy.
    const SharedVector both = multiply_int(party, sign_x, sign_y);
    sign = sub(add(shift_left(both, 1), local_affine(party, SharedVector(n), 1, 1)),
               add(sign_x, sign_y));
  } else if (opts.signed_numerator) {
    sign = sign_x;
  } else if (opts.signed_divisor) {
    sign = sign_y;
  }
  if (sign.size() == n) q = sub(multiply_int(party, sign, shift_left(q, 1)), q);
  return q;
}

}  // namespace ppimpute::mpc
