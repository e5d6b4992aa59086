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
#include <vector>

#include "ppimpute/dataset.h"
#include "ppimpute/imputation.h"

namespace ppimpute {

// Plaintext imputation with the same conventions as the secure methods:
// median at 1-indexed position ceil(count / 2) of the present values sorted
// descending; regression on masked normal equations solved by LU without
// pivoting; kNN over the other columns with self and target-missing rows
// excluded and distance ties broken by lower row index. Only missing cells of
// `col` change, and its mask becomes all ones.
PlainDataset oracle_impute(const PlainDataset& ds, Method method, std::size_t col,
                           std::size_t k = 0);

// Plaintext Doolittle LU solve without pivoting. Throws IllConditioned on a
// zero pivot.
std::vector<double> oracle_lu_solve(std::vector<double> a, std::vector<double> b,
                                    std::size_t m);

// Per-row kNN estimates of `col` (every row, missing or not).
std::vector<double> oracle_knn_predict(const PlainDataset& ds, std::size_t col,
                                       std::size_t k);

// Mean and maximum absolute difference over all cells. Throws
// std::invalid_argument on a size mismatch.
double mae(std::span<const double> a, std::span<const double> b);
double max_abs_err(std::span<const double> a, std::span<const double> b);

}  // namespace ppimpute
