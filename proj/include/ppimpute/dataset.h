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
#include <stdexcept>
#include <string>
#include <vector>

#include "ppimpute/prg.h"
#include "ppimpute/schema.h"

namespace ppimpute {

class DatasetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Plaintext table with a presence mask (1 = present). Missing cells hold 0.
struct PlainDataset {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;
  std::vector<std::uint8_t> mask;
  DatasetSchema schema;

  PlainDataset() = default;
  PlainDataset(std::size_t r, DatasetSchema s);

  double& at(std::size_t i, std::size_t j) { return data[i * cols + j]; }
  double at(std::size_t i, std::size_t j) const { return data[i * cols + j]; }
  bool present(std::size_t i, std::size_t j) const { return mask[i * cols + j] != 0; }
  void set_missing(std::size_t i, std::size_t j);

  std::vector<double> column(std::size_t j) const;
  std::size_t missing_count(std::size_t j) const;

  // Rows in the given order.
  PlainDataset select_rows(const std::vector<std::size_t>& order) const;

  // Throws DatasetError on inconsistent shapes or a non-zero missing cell.
  void validate() const;
};

// Reads a CSV with a header row. Columns are matched by name and must be
// exactly those of `schema`, in any order. Binary columns accept 0/1 or one
// of the column's positive labels (anything else is 0). Empty fields are
// missing.
PlainDataset load_csv(const std::string& path,
                      const DatasetSchema& schema = DatasetSchema::diabetes());

// Synthetic table with the diabetes schema. Glucose follows
// 25 * HbA1c + 0.3 * age - 15 plus Gaussian noise (sd 8).
PlainDataset synth_dataset(std::size_t n, std::uint64_t seed);

// Removes every tenth value of `col`: rows with i % 10 == 9.
PlainDataset inject_missing(const PlainDataset& ds, std::size_t col);

// n rows drawn without replacement (partial Fisher-Yates), in drawn order.
PlainDataset subsample(const PlainDataset& ds, std::size_t n, Prg& rng);

// FNV-1a over shape, mask and the bit patterns of the data.
std::uint64_t dataset_hash(const PlainDataset& ds);

}  // namespace ppimpute
