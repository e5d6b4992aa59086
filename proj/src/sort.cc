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

#include "ppimpute/sort.h"

#include <algorithm>
#include <bit>
#include <stdexcept>
#include <string>

#include "ppimpute/gadgets.h"

namespace ppimpute::mpc {

std::vector<std::vector<Comparator>> batcher_layers(std::size_t n) {
  std::vector<std::vector<Comparator>> layers;
  std::size_t size = 1;
  while (size < n) size <<= 1;
  for (std::size_t p = 1; p < size; p <<= 1) {
    for (std::size_t k = p; k >= 1; k >>= 1) {
      std::vector<Comparator> layer;
      for (std::size_t j = k % p; j + k < size; j += 2 * k) {
        for (std::size_t i = 0; i < std::min(k, size - j - k); ++i) {
          const std::size_t a = i + j, b = i + j + k;
          if (a / (2 * p) != b / (2 * p)) continue;
          if (b >= n) continue;
          layer.push_back({a, b});
        }
      }
      if (!layer.empty()) layers.push_back(std::move(layer));
    }
  }
  return layers;
}

std::pair<SharedVector, SharedMatrix> sort_desc(Party& party, const SharedVector& keys,
                                                const SharedMatrix& payload) {
  if (payload.rows != keys.size()) {
    throw ShapeError("sort_desc: " + std::to_string(payload.rows) + " payload rows for " +
                     std::to_string(keys.size()) + " keys");
  }
  // One key row; payload columns become separate single-row matrices.
  SharedMatrix k(1, keys.size(), keys.values);
  SharedMatrix p = payload.transpose();
  std::vector<SharedMatrix> cols;
  cols.reserve(p.rows);
  for (std::size_t c = 0; c < p.rows; ++c) {
    cols.emplace_back(1, p.cols,
                      std::vector<RingElement>(p.values.begin() + c * p.cols,
                                               p.values.begin() + (c + 1) * p.cols));
  }
  std::vector<SharedMatrix*> ptrs;
  for (auto& c : cols) ptrs.push_back(&c);
  sort_rows_desc(party, k, ptrs);

  for (std::size_t c = 0; c < p.rows; ++c) {
    std::copy(cols[c].values.begin(), cols[c].values.end(),
              p.values.begin() + c * p.cols);
  }
  return {SharedVector(std::move(k.values)), p.transpose()};
}

namespace {

// Keeps the comparators that can influence positions [0, k).
std::vector<std::vector<Comparator>> prune_to_prefix(
    const std::vector<std::vector<Comparator>>& layers, std::size_t n, std::size_t k) {
  std::vector<bool> live(n, false);
  std::fill(live.begin(), live.begin() + static_cast<std::ptrdiff_t>(std::min(k, n)), true);
  std::vector<std::vector<Comparator>> out(layers.size());
  for (std::size_t l = layers.size(); l-- > 0;) {
    for (const Comparator& c : layers[l]) {
      if (live[c.hi] || live[c.lo]) out[l].push_back(c);
    }
    for (const Comparator& c : out[l]) live[c.hi] = live[c.lo] = true;
  }
  std::erase_if(out, [](const auto& layer) { return layer.empty(); });
  return out;
}

void apply_network(Party& party, const std::vector<std::vector<Comparator>>& layers,
                   SharedMatrix& keys, const std::vector<SharedMatrix*>& payloads,
                   const char* what) {
  for (const SharedMatrix* m : payloads) {
    if (m->rows != keys.rows || m->cols != keys.cols) {
      throw ShapeError(std::string(what) + ": payload shape differs from keys");
    }
  }
  const std::size_t rows = keys.rows, n = keys.cols;
  const std::size_t planes = 1 + payloads.size();
  auto plane = [&](std::size_t s) -> std::vector<RingElement>& {
    return s == 0 ? keys.values : payloads[s - 1]->values;
  };

  for (const auto& layer : layers) {
    const std::size_t m = rows * layer.size();
    SharedVector hi(m), lo(m);
    for (std::size_t r = 0; r < rows; ++r) {
      for (std::size_t c = 0; c < layer.size(); ++c) {
        hi[r * layer.size() + c] = keys.values[r * n + layer[c].hi];
        lo[r * layer.size() + c] = keys.values[r * n + layer[c].lo];
      }
    }
    const SharedVector keep = compare(party, hi, lo);

    // new_hi = lo + keep * (hi - lo), new_lo = hi + lo - new_hi, for the key
    // and every payload plane in one batched product.
    SharedVector bits(m * planes), diff(m * planes), base(m * planes), total(m * planes);
    for (std::size_t s = 0; s < planes; ++s) {
      const auto& v = plane(s);
      for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < layer.size(); ++c) {
          const std::size_t at = s * m + r * layer.size() + c;
          const RingElement h = v[r * n + layer[c].hi];
          const RingElement l = v[r * n + layer[c].lo];
          bits[at] = keep[r * layer.size() + c];
          diff[at] = h - l;
          base[at] = l;
          total[at] = h + l;
        }
      }
    }
    const SharedVector sel = multiply_int(party, bits, diff);
    for (std::size_t s = 0; s < planes; ++s) {
      auto& v = plane(s);
      for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < layer.size(); ++c) {
          const std::size_t at = s * m + r * layer.size() + c;
          const RingElement new_hi = base[at] + sel[at];
          v[r * n + layer[c].hi] = new_hi;
          v[r * n + layer[c].lo] = total[at] - new_hi;
        }
      }
    }
  }
}

}  // namespace

std::vector<std::vector<Comparator>> top_k_layers(std::size_t n, std::size_t k) {
  if (k == 0 || k > n) throw std::invalid_argument("top_k_layers: need 1 <= k <= n");
  std::size_t b = 1;
  while (b < k) b <<= 1;
  if (b >= n) return prune_to_prefix(batcher_layers(n), n, k);

  // Sort blocks of b, then merge blocks pairwise in a tree; each merge leaves
  // the top b of the pair in the first block's slots.
  const std::size_t blocks = (n + b - 1) / b;
  std::vector<std::vector<Comparator>> layers;
  for (const auto& inner : batcher_layers(b)) {
    std::vector<Comparator> layer;
    for (std::size_t blk = 0; blk < blocks; ++blk) {
      for (const Comparator& c : inner) {
        if (blk * b + c.lo < n) layer.push_back({blk * b + c.hi, blk * b + c.lo});
      }
    }
    layers.push_back(std::move(layer));
  }
  // The final merge phase of a 2b network merges two sorted halves.
  const auto two = batcher_layers(2 * b);
  const std::size_t merge_depth = static_cast<std::size_t>(std::bit_width(b));
  const std::vector<std::vector<Comparator>> merge(two.end() - merge_depth, two.end());
  std::vector<std::size_t> slot(2 * b);
  for (std::size_t step = 1; step < blocks; step *= 2) {
    for (const auto& inner : merge) {
      std::vector<Comparator> layer;
      for (std::size_t blk = 0; blk + step < blocks; blk += 2 * step) {
        for (std::size_t i = 0; i < b; ++i) {
          slot[i] = blk * b + i;
          slot[b + i] = (blk + step) * b + i;
        }
        for (const Comparator& c : inner) {
          // Padding sits at the tail of the last block, so it is always `lo`.
          if (slot[c.lo] < n) layer.push_back({slot[c.hi], slot[c.lo]});
        }
      }
      layers.push_back(std::move(layer));
    }
  }
  return prune_to_prefix(layers, n, k);
}

void sort_rows_desc(Party& party, SharedMatrix& keys, std::vector<SharedMatrix*> payloads) {
  apply_network(party, batcher_layers(keys.cols), keys, payloads, "sort_rows_desc");
}

void select_rows_desc(Party& party, SharedMatrix& keys, std::vector<SharedMatrix*> payloads,
                      std::size_t k) {
  apply_network(party, top_k_layers(keys.cols, k), keys, payloads, "select_rows_desc");
}

}  // namespace ppimpute::mpc
