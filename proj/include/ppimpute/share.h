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
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "ppimpute/fixedpoint.h"
#include "ppimpute/prg.h"
#include "ppimpute/transport.h"

namespace ppimpute::mpc {

class Party;

class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// One computing party's additive share of a scalar.
struct Share {
  RingElement value = 0;
  Role owner = Role::P0;
};

// One party's shares of a vector. On the helper the values are zero
// placeholders that only carry the shape.
struct SharedVector {
  std::vector<RingElement> values;

  SharedVector() = default;
  explicit SharedVector(std::size_t n) : values(n, 0) {}
  explicit SharedVector(std::vector<RingElement> v) : values(std::move(v)) {}

  std::size_t size() const { return values.size(); }
  RingElement& operator[](std::size_t i) { return values[i]; }
  RingElement operator[](std::size_t i) const { return values[i]; }
  std::span<const RingElement> span() const { return values; }
};

// Row-major shares of a matrix.
struct SharedMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<RingElement> values;

  SharedMatrix() = default;
  SharedMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), values(r * c, 0) {}
  SharedMatrix(std::size_t r, std::size_t c, std::vector<RingElement> v);

  RingElement& at(std::size_t i, std::size_t j) { return values[i * cols + j]; }
  RingElement at(std::size_t i, std::size_t j) const { return values[i * cols + j]; }

  SharedVector column(std::size_t j) const;
  void set_column(std::size_t j, const SharedVector& v);
  SharedVector flatten() const { return SharedVector(values); }
  SharedMatrix transpose() const;
};

// --- Data-owner side (test harness): sharing and reconstruction ----------

std::pair<Share, Share> share_secret(RingElement x, Prg& rng);
RingElement reconstruct(const Share& s0, const Share& s1);

std::pair<SharedVector, SharedVector> share_vector(std::span<const RingElement> x, Prg& rng);
std::vector<RingElement> reconstruct(const SharedVector& s0, const SharedVector& s1);

std::pair<SharedMatrix, SharedMatrix> share_matrix(std::size_t rows, std::size_t cols,
                                                   std::span<const RingElement> x,
                                                   Prg& rng);
std::vector<RingElement> reconstruct(const SharedMatrix& s0, const SharedMatrix& s1);

// --- Local (communication-free) operations on shares ----------------------

SharedVector add(const SharedVector& x, const SharedVector& y);
SharedVector sub(const SharedVector& x, const SharedVector& y);
SharedVector neg(const SharedVector& x);

// scale * x + offset with public scale and offset; P0 alone adds the offset.
SharedVector local_affine(const Party& party, const SharedVector& x, RingElement scale,
                          RingElement offset);

// Shares of a public vector: P0 holds the values, P1 and the helper zeros.
SharedVector public_vector(const Party& party, std::span<const RingElement> values);
SharedVector public_constant(const Party& party, RingElement value, std::size_t n);

// 1 - b for integer-scale bits.
SharedVector one_minus(const Party& party, const SharedVector& bits);

// Multiplies every share by 2^bits: lifts integer-scale values to fixed point
// when bits = f.
SharedVector shift_left(const SharedVector& x, int bits);

RingElement sum(const SharedVector& x);

// Repeats a length-1 share n times.
SharedVector broadcast(const SharedVector& scalar, std::size_t n);

SharedVector concat(std::initializer_list<const SharedVector*> parts);
// Splits off [offset, offset + n).
SharedVector slice(const SharedVector& x, std::size_t offset, std::size_t n);

// Plaintext ring product (rows x inner) * (inner x cols), wrapping.
std::vector<RingElement> ring_matmul(std::span<const RingElement> a,
                                     std::span<const RingElement> b, std::size_t rows,
                                     std::size_t inner, std::size_t cols);

}  // namespace ppimpute::mpc
