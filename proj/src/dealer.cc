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

#include "ppimpute/dealer.h"

#include <string>

#include "ppimpute/party.h"
#include "ppimpute/share.h"

namespace ppimpute::mpc {
namespace {

std::vector<std::uint64_t> draw(Prg& prg, std::size_t n) {
  std::vector<std::uint64_t> v(n);
  prg.fill(v);
  return v;
}

template <typename T>
std::vector<T> cut_front(std::vector<T>& v, std::size_t n) {
  if (v.empty()) return {};  // helper-side placeholder batches carry no data
  std::vector<T> head(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(n));
  v.erase(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(n));
  return head;
}

ArithTriples split_front(ArithTriples& b, std::size_t n) {
  ArithTriples out{cut_front(b.a, n), cut_front(b.b, n), cut_front(b.c, n),
                   b.first_nonce, n};
  b.first_nonce += n;
  b.count -= n;
  return out;
}

BoolTriples split_front(BoolTriples& b, std::size_t n) {
  BoolTriples out{cut_front(b.u, n), cut_front(b.v, n), cut_front(b.w, n),
                  b.first_nonce, n};
  b.first_nonce += n;
  b.count -= n;
  return out;
}

BitPairs split_front(BitPairs& b, std::size_t n) {
  BitPairs out{cut_front(b.bit, n), cut_front(b.arith, n), b.first_nonce, n};
  b.first_nonce += n;
  b.count -= n;
  return out;
}

}  // namespace

Dealer::Dealer(Party& party, bool on_demand) : party_(party), on_demand_(on_demand) {}

ArithTriples Dealer::generate_arith(std::size_t count) {
  ArithTriples t;
  t.count = count;
  t.first_nonce = next_arith_nonce_;
  next_arith_nonce_ += count;
  if (count == 0) return t;
  switch (party_.role()) {
    case Role::Helper: {
      Prg& g0 = party_.dealer_prg(Role::P0);
      Prg& g1 = party_.dealer_prg(Role::P1);
      auto a0 = draw(g0, count), b0 = draw(g0, count), c0 = draw(g0, count);
      auto a1 = draw(g1, count), b1 = draw(g1, count);
      std::vector<RingElement> c1(count);
      for (std::size_t i = 0; i < count; ++i) {
        c1[i] = (a0[i] + a1[i]) * (b0[i] + b1[i]) - c0[i];
      }
      party_.send(Role::P1, MsgTag::kCorrelated, c1);
      break;
    }
    case Role::P0: {
      Prg& g = party_.dealer_prg(Role::Helper);
      t.a = draw(g, count);
      t.b = draw(g, count);
      t.c = draw(g, count);
      break;
    }
    case Role::P1: {
      Prg& g = party_.dealer_prg(Role::Helper);
      t.a = draw(g, count);
      t.b = draw(g, count);
      t.c = party_.recv(Role::Helper, MsgTag::kCorrelated, count);
      break;
    }
  }
  return t;
}

BoolTriples Dealer::generate_bool(std::size_t count) {
  BoolTriples t;
  t.count = count;
  t.first_nonce = next_bool_nonce_;
  next_bool_nonce_ += count;
  if (count == 0) return t;
  switch (party_.role()) {
    case Role::Helper: {
      Prg& g0 = party_.dealer_prg(Role::P0);
      Prg& g1 = party_.dealer_prg(Role::P1);
      auto u0 = draw(g0, count), v0 = draw(g0, count), w0 = draw(g0, count);
      auto u1 = draw(g1, count), v1 = draw(g1, count);
      std::vector<std::uint64_t> w1(count);
      for (std::size_t i = 0; i < count; ++i) {
        w1[i] = ((u0[i] ^ u1[i]) & (v0[i] ^ v1[i])) ^ w0[i];
      }
      party_.send(Role::P1, MsgTag::kCorrelated, w1);
      break;
    }
    case Role::P0: {
      Prg& g = party_.dealer_prg(Role::Helper);
      t.u = draw(g, count);
      t.v = draw(g, count);
      t.w = draw(g, count);
      break;
    }
    case Role::P1: {
      Prg& g = party_.dealer_prg(Role::Helper);
      t.u = draw(g, count);
      t.v = draw(g, count);
      t.w = party_.recv(Role::Helper, MsgTag::kCorrelated, count);
      break;
    }
  }
  return t;
}

BitPairs Dealer::generate_bits(std::size_t count) {
  BitPairs t;
  t.count = count;
  t.first_nonce = next_bit_nonce_;
  next_bit_nonce_ += count;
  if (count == 0) return t;
  switch (party_.role()) {
    case Role::Helper: {
      Prg& g0 = party_.dealer_prg(Role::P0);
      Prg& g1 = party_.dealer_prg(Role::P1);
      auto bit0 = draw(g0, count), arith0 = draw(g0, count);
      auto bit1 = draw(g1, count);
      std::vector<RingElement> arith1(count);
      for (std::size_t i = 0; i < count; ++i) {
        const RingElement rho = (bit0[i] ^ bit1[i]) & 1;
        arith1[i] = rho - arith0[i];
      }
      party_.send(Role::P1, MsgTag::kCorrelated, arith1);
      break;
    }
    case Role::P0: {
      Prg& g = party_.dealer_prg(Role::Helper);
      t.bit = draw(g, count);
      t.arith = draw(g, count);
      for (auto& b : t.bit) b &= 1;
      break;
    }
    case Role::P1: {
      Prg& g = party_.dealer_prg(Role::Helper);
      t.bit = draw(g, count);
      for (auto& b : t.bit) b &= 1;
      t.arith = party_.recv(Role::Helper, MsgTag::kCorrelated, count);
      break;
    }
  }
  return t;
}

MatrixTriple Dealer::generate_matrix(std::size_t rows, std::size_t inner,
                                     std::size_t cols) {
  MatrixTriple t;
  t.rows = rows;
  t.inner = inner;
  t.cols = cols;
  t.nonce = next_matrix_nonce_++;
  const std::size_t na = rows * inner, nb = inner * cols, nc = rows * cols;
  switch (party_.role()) {
    case Role::Helper: {
      Prg& g0 = party_.dealer_prg(Role::P0);
      Prg& g1 = party_.dealer_prg(Role::P1);
      auto a0 = draw(g0, na), b0 = draw(g0, nb), c0 = draw(g0, nc);
      auto a1 = draw(g1, na), b1 = draw(g1, nb);
      for (std::size_t i = 0; i < na; ++i) a0[i] += a1[i];
      for (std::size_t i = 0; i < nb; ++i) b0[i] += b1[i];
      auto c1 = ring_matmul(a0, b0, rows, inner, cols);
      for (std::size_t i = 0; i < nc; ++i) c1[i] -= c0[i];
      party_.send(Role::P1, MsgTag::kCorrelated, c1);
      break;
    }
    case Role::P0: {
      Prg& g = party_.dealer_prg(Role::Helper);
      t.a = draw(g, na);
      t.b = draw(g, nb);
      t.c = draw(g, nc);
      break;
    }
    case Role::P1: {
      Prg& g = party_.dealer_prg(Role::Helper);
      t.a = draw(g, na);
      t.b = draw(g, nb);
      t.c = party_.recv(Role::Helper, MsgTag::kCorrelated, nc);
      break;
    }
  }
  return t;
}

template <typename Batch, typename Gen>
Batch Dealer::take(Pool<Batch>& pool, std::size_t count, Gen&& gen, const char* what) {
  while (!pool.batches.empty() && pool.batches.front().count == 0) {
    pool.batches.pop_front();
  }
  if (!pool.batches.empty() && pool.batches.front().count >= count) {
    pool.available -= count;
    return split_front(pool.batches.front(), count);
  }
  if (!on_demand_) {
    throw RandomnessExhausted(std::string("requested ") + std::to_string(count) + " " +
                              what + " but only " + std::to_string(pool.available) +
                              " are provisioned and on-demand generation is disabled");
  }
  return gen(count);
}

ArithTriples Dealer::arith_triples(std::size_t count) {
  usage_.arith += count;
  return take(arith_pool_, count, [this](std::size_t n) { return generate_arith(n); },
              "arithmetic triples");
}

BoolTriples Dealer::bool_triples(std::size_t count) {
  usage_.boolean += count;
  return take(bool_pool_, count, [this](std::size_t n) { return generate_bool(n); },
              "boolean triples");
}

BitPairs Dealer::bit_pairs(std::size_t count) {
  usage_.bits += count;
  return take(bit_pool_, count, [this](std::size_t n) { return generate_bits(n); },
              "bit pairs");
}

MatrixTriple Dealer::matrix_triple(std::size_t rows, std::size_t inner, std::size_t cols) {
  ++usage_.matrices;
  auto& q = matrix_pool_[{rows, inner, cols}];
  if (!q.empty()) {
    MatrixTriple t = std::move(q.front());
    q.pop_front();
    return t;
  }
  if (!on_demand_) {
    throw RandomnessExhausted("no provisioned matrix triple of shape " +
                              std::to_string(rows) + "x" + std::to_string(inner) + "x" +
                              std::to_string(cols) +
                              " and on-demand generation is disabled");
  }
  return generate_matrix(rows, inner, cols);
}

void Dealer::provision_arith(std::size_t count) {
  arith_pool_.batches.push_back(generate_arith(count));
  arith_pool_.available += count;
}

void Dealer::provision_bool(std::size_t count) {
  bool_pool_.batches.push_back(generate_bool(count));
  bool_pool_.available += count;
}

void Dealer::provision_bits(std::size_t count) {
  bit_pool_.batches.push_back(generate_bits(count));
  bit_pool_.available += count;
}

void Dealer::provision_matrix(std::size_t rows, std::size_t inner, std::size_t cols,
                              std::size_t count) {
  auto& q = matrix_pool_[{rows, inner, cols}];
  for (std::size_t i = 0; i < count; ++i) q.push_back(generate_matrix(rows, inner, cols));
}

}  // namespace ppimpute::mpc
