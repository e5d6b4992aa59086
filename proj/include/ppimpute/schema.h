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
#include <string>
#include <string_view>
#include <vector>

namespace ppimpute {

enum class ColumnKind {
  kNumeric,
  kBinary,
  // Integer class labels 0..classes-1.
  kCategorical,
};

const char* kind_name(ColumnKind k);

struct ColumnSpec {
  std::string name;
  ColumnKind kind = ColumnKind::kNumeric;
  int classes = 0;  // kCategorical only
  // Text values read as 1 in a binary column; other text reads as 0.
  std::vector<std::string> positive_labels;
};

// Public per-column metadata shared by every party.
struct DatasetSchema {
  std::vector<ColumnSpec> columns;

  std::size_t size() const { return columns.size(); }
  const ColumnSpec& operator[](std::size_t i) const { return columns.at(i); }
  // Throws std::out_of_range for unknown names.
  std::size_t index_of(std::string_view name) const;

  // gender, age, hypertension, heart_disease, smoking_history, bmi,
  // HbA1c_level, blood_glucose_level, diabetes.
  static DatasetSchema diabetes();
};

}  // namespace ppimpute
