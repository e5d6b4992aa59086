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

#include "ppimpute/schema.h"

#include <stdexcept>

namespace ppimpute {

const char* kind_name(ColumnKind k) {
  switch (k) {
    case ColumnKind::kNumeric: return "numeric";
    case ColumnKind::kBinary: return "binary";
    case ColumnKind::kCategorical: return "categorical";
  }
  return "?";
}

std::size_t DatasetSchema::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (columns[i].name == name) return i;
  }
  throw std::out_of_range("unknown column '" + std::string(name) + "'");
}

DatasetSchema DatasetSchema::diabetes() {
  using K = ColumnKind;
  return DatasetSchema{{
      {"gender", K::kBinary, 0, {"Male"}},
      {"age", K::kNumeric, 0, {}},
      {"hypertension", K::kBinary, 0, {}},
      {"heart_disease", K::kBinary, 0, {}},
      {"smoking_history", K::kBinary, 0, {"current", "former"}},
      {"bmi", K::kNumeric, 0, {}},
      {"HbA1c_level", K::kNumeric, 0, {}},
      {"blood_glucose_level", K::kNumeric, 0, {}},
      {"diabetes", K::kBinary, 0, {}},
  }};
}

}  // namespace ppimpute
