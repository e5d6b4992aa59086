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
#include <stdexcept>
#include <string_view>

#include "ppimpute/party.h"
#include "ppimpute/schema.h"
#include "ppimpute/share.h"

namespace ppimpute {

enum class Method { kMean, kMedian, kRegression, kKnn };

const char* method_name(Method m);
// Accepts mean, median, regression, knn.
Method parse_method(std::string_view name);

class IllConditioned : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace mpc {

// One party's view of a secret-shared table. Missing cells hold 0 in `data`
// and 0 in `avail`; present cells have avail 1 (integer scale).
struct SharedDataset {
  SharedMatrix data;
  SharedMatrix avail;
  DatasetSchema schema;

  std::size_t rows() const { return data.rows; }
  std::size_t cols() const { return data.cols; }
  // Throws ShapeError if data, avail and schema disagree.
  void validate() const;
};

SharedDataset mean_impute(Party& party, const SharedDataset& ds, std::size_t col);
SharedDataset median_impute(Party& party, const SharedDataset& ds, std::size_t col);

struct LuOptions {
  // Opens every pivot to the computing parties and throws IllConditioned when
  // one falls below 2^(4-f). Diagnostic only: reveals the pivots.
  bool debug_pivots = false;
  // Rounds of iterative refinement reusing the factors; each costs one
  // matrix-vector product and one pair of triangular solves.
  int refine_steps = 1;
  // Residual scale-up (bits) before a refinement solve.
  int refine_shift = 8;
  // Skip the pivot sign handling. Only valid when every pivot is positive,
  // e.g. for symmetric positive definite A.
  bool positive_pivots = false;
};

// Solves A x = b by Doolittle LU without pivoting and two triangular solves.
SharedVector lu_solve(Party& party, const SharedMatrix& a, const SharedVector& b,
                      const LuOptions& opts = {});

SharedDataset regression_impute(Party& party, const SharedDataset& ds, std::size_t col,
                                const LuOptions& opts = {});

// Per-row kNN estimate of column `col` from the k nearest rows that have it.
SharedVector knn_predict(Party& party, const SharedDataset& ds, std::size_t col,
                         std::size_t k);
SharedDataset knn_impute(Party& party, const SharedDataset& ds, std::size_t col,
                         std::size_t k);

// Dispatch. `k` is used by kNN only.
SharedDataset impute(Party& party, const SharedDataset& ds, Method method, std::size_t col,
                     std::size_t k, const LuOptions& lu = {});

}  // namespace mpc
}  // namespace ppimpute
