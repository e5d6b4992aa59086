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
#include <utility>
#include <vector>

#include "ppimpute/party.h"
#include "ppimpute/share.h"

namespace ppimpute::mpc {

// A compare-exchange that leaves the larger key at `hi` (the lower index).
struct Comparator {
  std::size_t hi;
  std::size_t lo;
};

// Batcher odd-even merge sort on n inputs, grouped into layers of disjoint
// comparators. The network is built for the next power of two; comparators
// that touch a padding slot are dropped, since padding with -inf never moves.
std::vector<std::vector<Comparator>> batcher_layers(std::size_t n);

// Sorts keys in descending order and applies the same permutation to the
// payload rows. Communication depends only on the shapes.
std::pair<SharedVector, SharedMatrix> sort_desc(Party& party, const SharedVector& keys,
                                                const SharedMatrix& payload);

// Sorts every row of `keys` independently (descending) and co-permutes the
// matching rows of each payload matrix. All rows share one network, so each
// layer is a single batched compare and a single batched select.
void sort_rows_desc(Party& party, SharedMatrix& keys, std::vector<SharedMatrix*> payloads);

// Network that moves the k largest of n inputs, in descending order, to
// positions [0, k): block sorts of the next power of two >= k, a pairwise
// merge tree, and removal of comparators that cannot reach the prefix.
std::vector<std::vector<Comparator>> top_k_layers(std::size_t n, std::size_t k);

// Like sort_rows_desc, but only columns [0, k) of each row are guaranteed to
// hold its k largest keys in order. The rest is some permutation of the
// remaining entries.
void select_rows_desc(Party& party, SharedMatrix& keys, std::vector<SharedMatrix*> payloads,
                      std::size_t k);

}  // namespace ppimpute::mpc
