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

#include <cstddef>
#include <cstdint>
#include <deque>
#include <map>
#include <stdexcept>
#include <tuple>
#include <vector>

#include "ppimpute/fixedpoint.h"

namespace ppimpute::mpc {

class Party;

class RandomnessExhausted : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Element-wise arithmetic triples: c = a * b mod 2^64.
struct ArithTriples {
  std::vector<RingElement> a, b, c;
  std::uint64_t first_nonce = 0;
  std::size_t count = 0;
};

// Word-level boolean triples: w = u & v, XOR-shared.
struct BoolTriples {
  std::vector<std::uint64_t> u, v, w;
  std::uint64_t first_nonce = 0;
  std::size_t count = 0;
};

// A random bit shared both ways: `bit` XOR-shared (low bit of each word) and
// `arith` additively shared.
struct BitPairs {
  std::vector<std::uint64_t> bit;
  std::vector<RingElement> arith;
  std::uint64_t first_nonce = 0;
  std::size_t count = 0;
};

// Matrix-product triple: C = A * B with A rows x inner, B inner x cols.
struct MatrixTriple {
  std::size_t rows = 0, inner = 0, cols = 0;
  std::vector<RingElement> a, b, c;
  std::uint64_t nonce = 0;
};

// Helper-generated correlated randomness. The helper shares one PRG stream
// with each computing party; P0's whole share and P1's random components
// are expanded locally from those streams and only P1's correction words are
// sent. All three parties call the same methods in the same order.
//
// Batches can be provisioned ahead of use. A request is served from the pool
// only when the pool covers it entirely; otherwise it is generated on demand,
// or RandomnessExhausted is thrown if on-demand generation is disabled.
class Dealer {
 public:
  Dealer(Party& party, bool on_demand);

  ArithTriples arith_triples(std::size_t count);
  BoolTriples bool_triples(std::size_t count);
  BitPairs bit_pairs(std::size_t count);
  MatrixTriple matrix_triple(std::size_t rows, std::size_t inner, std::size_t cols);

  void provision_arith(std::size_t count);
  void provision_bool(std::size_t count);
  void provision_bits(std::size_t count);
  void provision_matrix(std::size_t rows, std::size_t inner, std::size_t cols,
                        std::size_t count);

  bool on_demand() const { return on_demand_; }
  void set_on_demand(bool v) { on_demand_ = v; }

  struct Usage {
    std::uint64_t arith = 0, boolean = 0, bits = 0, matrices = 0;
  };
  // Items handed to protocol code so far.
  const Usage& usage() const { return usage_; }

 private:
  ArithTriples generate_arith(std::size_t count);
  BoolTriples generate_bool(std::size_t count);
  BitPairs generate_bits(std::size_t count);
  MatrixTriple generate_matrix(std::size_t rows, std::size_t inner, std::size_t cols);

  template <typename Batch>
  struct Pool {
    std::deque<Batch> batches;
    std::size_t available = 0;
  };

  template <typename Batch, typename Gen>
  Batch take(Pool<Batch>& pool, std::size_t count, Gen&& gen, const char* what);

  Party& party_;
  bool on_demand_;
  Usage usage_;
  std::uint64_t next_arith_nonce_ = 0;
  std::uint64_t next_bool_nonce_ = 0;
  std::uint64_t next_bit_nonce_ = 0;
  std::uint64_t next_matrix_nonce_ = 0;
  Pool<ArithTriples> arith_pool_;
  Pool<BoolTriples> bool_pool_;
  Pool<BitPairs> bit_pool_;
  std::map<std::tuple<std::size_t, std::size_t, std::size_t>, std::deque<MatrixTriple>>
      matrix_pool_;
};

}  // namespace ppimpute::mpc
