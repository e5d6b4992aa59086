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

#include "ppimpute/share.h"

#include <algorithm>
#include <string>

#include "ppimpute/party.h"

namespace ppimpute::mpc {
namespace {

void require_same(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    throw ShapeError(std::string(what) + ": size mismatch " + std::to_string(a) +
                     " vs " + std::to_string(b));
  }
}

}  // namespace

SharedMatrix::SharedMatrix(std::size_t r, std::size_t c, std::vector<RingElement> v)
    : rows(r), cols(c), values(std::move(v)) {
  require_same(values.size(), r * c, "SharedMatrix");
}

SharedVector SharedMatrix::column(std::size_t j) const {
  SharedVector out(rows);
  for (std::size_t i = 0; i < rows; ++i) out[i] = at(i, j);
  return out;
}

void SharedMatrix::set_column(std::size_t j, const SharedVector& v) {
  require_same(v.size(), rows, "set_column");
  for (std::size_t i = 0; i < rows; ++i) at(i, j) = v[i];
}

SharedMatrix SharedMatrix::transpose() const {
  SharedMatrix t(cols, rows);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) t.at(j, i) = at(i, j);
  }
  return t;
}

std::pair<Share, Share> share_secret(RingElement x, Prg& rng) {
  const RingElement r = rng.next();
  return {Share{r, Role::P0}, Share{x - r, Role::P1}};
}

RingElement reconstruct(const Share& s0, const Share& s1) { return s0.value + s1.value; }

std::pair<SharedVector, SharedVector> share_vector(std::span<const RingElement> x,
                                                   Prg& rng) {
  SharedVector s0(x.size()), s1(x.size());
  rng.fill(s0.values);
  for (std::size_t i = 0; i < x.size(); ++i) s1[i] = x[i] - s0[i];
  return {std::move(s0), std::move(s1)};
}

std::vector<RingElement> reconstruct(const SharedVector& s0, const SharedVector& s1) {
  require_same(s0.size(), s1.size(), "reconstruct");
  std::vector<RingElement> out(s0.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = s0[i] + s1[i];
  return out;
}

std::pair<SharedMatrix, SharedMatrix> share_matrix(std::size_t rows, std::size_t cols,
                                                   std::span<const RingElement> x,
                                                   Prg& rng) {
  require_same(x.size(), rows * cols, "share_matrix");
  auto [v0, v1] = share_vector(x, rng);
  return {SharedMatrix(rows, cols, std::move(v0.values)),
          SharedMatrix(rows, cols, std::move(v1.values))};
}

std::vector<RingElement> reconstruct(const SharedMatrix& s0, const SharedMatrix& s1) {
  if (s0.rows != s1.rows || s0.cols != s1.cols) {
    throw ShapeError("reconstruct: matrix shapes differ");
  }
  std::vector<RingElement> out(s0.values.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = s0.values[i] + s1.values[i];
  return out;
}

SharedVector add(const SharedVector& x, const SharedVector& y) {
  require_same(x.size(), y.size(), "add");
  SharedVector out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] + y[i];
  return out;
}

SharedVector sub(const SharedVector& x, const SharedVector& y) {
  require_same(x.size(), y.size(), "sub");
  SharedVector out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] - y[i];
  return out;
}

SharedVector neg(const SharedVector& x) {
  SharedVector out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = RingElement{0} - x[i];
  return out;
}

SharedVector local_affine(const Party& party, const SharedVector& x, RingElement scale,
                          RingElement offset) {
  SharedVector out(x.size());
  const RingElement add_here = party.is_p0() ? offset : 0;
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = scale * x[i] + add_here;
  return out;
}

SharedVector public_vector(const Party& party, std::span<const RingElement> values) {
  SharedVector out(values.size());
  if (party.is_p0()) std::copy(values.begin(), values.end(), out.values.begin());
  return out;
}

SharedVector public_constant(const Party& party, RingElement value, std::size_t n) {
  SharedVector out(n);
  if (party.is_p0()) std::fill(out.values.begin(), out.values.end(), value);
  return out;
}

SharedVector one_minus(const Party& party, const SharedVector& bits) {
  return local_affine(party, bits, wrap_neg(1), 1);
}

SharedVector shift_left(const SharedVector& x, int bits) {
  SharedVector out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] << bits;
  return out;
}

RingElement sum(const SharedVector& x) {
  RingElement s = 0;
  for (RingElement v : x.values) s += v;
  return s;
}

SharedVector broadcast(const SharedVector& scalar, std::size_t n) {
  require_same(scalar.size(), 1, "broadcast");
  return SharedVector(std::vector<RingElement>(n, scalar[0]));
}

SharedVector concat(std::initializer_list<const SharedVector*> parts) {
  SharedVector out;
  for (const SharedVector* p : parts) {
    out.values.insert(out.values.end(), p->values.begin(), p->values.end());
  }
  return out;
}

SharedVector slice(const SharedVector& x, std::size_t offset, std::size_t n) {
  if (offset + n > x.size()) throw ShapeError("slice out of range");
  return SharedVector(std::vector<RingElement>(
      x.values.begin() + static_cast<std::ptrdiff_t>(offset),
      x.values.begin() + static_cast<std::ptrdiff_t>(offset + n)));
}

std::vector<RingElement> ring_matmul(std::span<const RingElement> a,
                                     std::span<const RingElement> b, std::size_t rows,
                                     std::size_t inner, std::size_t cols) {
  require_same(a.size(), rows * inner, "ring_matmul lhs");
  require_same(b.size(), inner * cols, "ring_matmul rhs");
  std::vector<RingElement> c(rows * cols, 0);
  for (std::size_t i = 0; i < rows; ++i) {
    RingElement* crow = c.data() + i * cols;
    for (std::size_t k = 0; k < inner; ++k) {
      const RingElement aik = a[i * inner + k];
      const RingElement* brow = b.data() + k * cols;
      for (std::size_t j = 0; j < cols; ++j) crow[j] += aik * brow[j];
    }
  }
  return c;
}

}  // namespace ppimpute::mpc
