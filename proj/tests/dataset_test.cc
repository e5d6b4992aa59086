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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <string>
#include <vector>

#include "ppimpute/dataset.h"
#include "ppimpute/oracle.h"

namespace ppimpute {
namespace {

constexpr const char* kHeader =
    "gender,age,hypertension,heart_disease,smoking_history,bmi,HbA1c_level,"
    "blood_glucose_level,diabetes";

class CsvFile {
 public:
  explicit CsvFile(const std::string& body) {
    path_ = std::filesystem::temp_directory_path() /
            ("ppimpute_" + std::to_string(counter_++) + "_" +
             std::to_string(::testing::UnitTest::GetInstance()->random_seed()) + ".csv");
    std::ofstream(path_) << body;
  }
  ~CsvFile() { std::filesystem::remove(path_); }
  std::string path() const { return path_.string(); }

 private:
  static inline int counter_ = 0;
  std::filesystem::path path_;
};

PlainDataset load(const std::string& body) {
  CsvFile f(body);
  return load_csv(f.path());
}

TEST(LoadCsv, EncodesTextColumns) {
  const auto ds = load(std::string(kHeader) +
                       "\nFemale,80,0,1,never,25.19,6.6,140,0"
                       "\nMale,54,1,0,former,27.32,6.6,80,0"
                       "\nOther,28,0,0,current,27.32,5.7,158,0"
                       "\nMale,36,0,0,No Info,23.45,5,155,0"
                       "\nFemale,76,1,1,ever,20.14,4.8,155,1\n");
  ASSERT_EQ(ds.rows, 5u);
  ASSERT_EQ(ds.cols, 9u);
  EXPECT_EQ(ds.column(0), (std::vector<double>{0, 1, 0, 1, 0}));
  EXPECT_EQ(ds.column(4), (std::vector<double>{0, 1, 1, 0, 0}));
  EXPECT_DOUBLE_EQ(ds.at(0, 5), 25.19);
  EXPECT_DOUBLE_EQ(ds.at(4, 7), 155);
}

TEST(LoadCsv, ColumnsInAnyOrderAndEmptyFieldsMissing) {
  const auto ds = load(
      "diabetes,blood_glucose_level,HbA1c_level,bmi,smoking_history,heart_disease,"
      "hypertension,age,gender\n"
      "1,140,6.6,,never,0,1,80,Male\n"
      "0,,5.0,22.5,current,0,0,40,Female\n");
  const auto& schema = ds.schema;
  EXPECT_EQ(ds.at(0, schema.index_of("diabetes")), 1);
  EXPECT_EQ(ds.at(0, schema.index_of("age")), 80);
  EXPECT_FALSE(ds.present(0, schema.index_of("bmi")));
  EXPECT_EQ(ds.at(0, schema.index_of("bmi")), 0);
  EXPECT_FALSE(ds.present(1, schema.index_of("blood_glucose_level")));
  EXPECT_EQ(ds.missing_count(schema.index_of("bmi")), 1u);
  EXPECT_NO_THROW(ds.validate());
}

TEST(LoadCsv, RejectsMalformedInput) {
  const std::string row = "\nMale,54,1,0,former,27.32,6.6,80,0\n";
  EXPECT_THROW(load(""), DatasetError);
  EXPECT_THROW(load(std::string(kHeader) + "\n"), DatasetError);
  EXPECT_THROW(load(std::string(kHeader) + ",extra" + row), DatasetError);
  EXPECT_THROW(load("gender,age,hypertension" + row), DatasetError);
  EXPECT_THROW(load(std::string(kHeader) + ",age" + row), DatasetError);
  EXPECT_THROW(load(std::string(kHeader) + "\nMale,abc,1,0,former,27.32,6.6,80,0\n"),
               DatasetError);
  EXPECT_THROW(load(std::string(kHeader) + "\nMale,54,2,0,former,27.32,6.6,80,0\n"),
               DatasetError);
  EXPECT_THROW(load(std::string(kHeader) + "\nMale,54,1,0\n"), DatasetError);
  EXPECT_THROW(load_csv("/nonexistent/ppimpute.csv"), DatasetError);
}

TEST(SynthDataset, DeterministicPerSeed) {
  const auto a = synth_dataset(500, 7), b = synth_dataset(500, 7), c = synth_dataset(500, 8);
  EXPECT_EQ(a.cols, 9u);
  EXPECT_EQ(a.data, b.data);
  EXPECT_EQ(dataset_hash(a), dataset_hash(b));
  EXPECT_NE(dataset_hash(a), dataset_hash(c));
  for (std::size_t j = 0; j < a.cols; ++j) EXPECT_EQ(a.missing_count(j), 0u);
  EXPECT_THROW(synth_dataset(9, 1), std::invalid_argument);
}

TEST(SynthDataset, ColumnsRespectTheirKinds) {
  const auto ds = synth_dataset(2000, 3);
  for (std::size_t j = 0; j < ds.cols; ++j) {
    if (ds.schema[j].kind != ColumnKind::kBinary) continue;
    for (double v : ds.column(j)) ASSERT_TRUE(v == 0 || v == 1) << ds.schema[j].name;
  }
  for (double v : ds.column(ds.schema.index_of("blood_glucose_level"))) {
    ASSERT_GE(v, 70);
    ASSERT_LE(v, 300);
  }
}

TEST(SynthDataset, GlucoseFollowsPlantedModel) {
  const auto ds = synth_dataset(10000, 5);
  const std::size_t g = ds.schema.index_of("blood_glucose_level");
  const std::size_t h = ds.schema.index_of("HbA1c_level");
  const std::size_t age = ds.schema.index_of("age");
  // Least squares of glucose on (1, HbA1c, age) via the normal equations.
  std::vector<double> a(9, 0.0), b(3, 0.0);
  for (std::size_t i = 0; i < ds.rows; ++i) {
    const double x[3] = {1.0, ds.at(i, h), ds.at(i, age)};
    for (int r = 0; r < 3; ++r) {
      b[r] += x[r] * ds.at(i, g);
      for (int c = 0; c < 3; ++c) a[r * 3 + c] += x[r] * x[c];
    }
  }
  const auto beta = oracle_lu_solve(a, b, 3);
  EXPECT_NEAR(beta[1], 25.0, 0.5);
  EXPECT_NEAR(beta[2], 0.3, 0.03);
}

TEST(InjectMissing, EveryTenthRow) {
  const auto ds = synth_dataset(100, 1);
  const std::size_t col = 5;
  const auto out = inject_missing(ds, col);
  for (std::size_t i = 0; i < 100; ++i) {
    EXPECT_EQ(out.present(i, col), i % 10 != 9) << i;
    for (std::size_t j = 0; j < ds.cols; ++j) {
      if (j != col) {
        EXPECT_EQ(out.at(i, j), ds.at(i, j));
        EXPECT_TRUE(out.present(i, j));
      }
    }
  }
  EXPECT_EQ(out.missing_count(col), 10u);
  EXPECT_EQ(inject_missing(out, col).mask, out.mask);
  EXPECT_EQ(inject_missing(synth_dataset(10, 1), col).missing_count(col), 1u);
  EXPECT_THROW(inject_missing(ds, 9), std::out_of_range);
}

TEST(Subsample, DrawsDistinctRows) {
  const auto ds = synth_dataset(200, 2);
  Prg a(Prg::derive_seed(1, "sub")), b(Prg::derive_seed(1, "sub"));
  const auto s1 = subsample(ds, 50, a), s2 = subsample(ds, 50, b);
  EXPECT_EQ(s1.rows, 50u);
  EXPECT_EQ(s1.data, s2.data);
  Prg c(Prg::derive_seed(1, "all"));
  const auto all = subsample(ds, 200, c);
  // A full draw is a permutation: same multiset of rows.
  auto rows_of = [](const PlainDataset& d) {
    std::vector<std::vector<double>> r;
    for (std::size_t i = 0; i < d.rows; ++i) {
      r.emplace_back(d.data.begin() + i * d.cols, d.data.begin() + (i + 1) * d.cols);
    }
    std::sort(r.begin(), r.end());
    return r;
  };
  EXPECT_EQ(rows_of(all), rows_of(ds));
  EXPECT_THROW(subsample(ds, 201, c), DatasetError);
}

PlainDataset numeric_table(const std::vector<std::vector<double>>& rows) {
  DatasetSchema schema;
  for (std::size_t j = 0; j < rows[0].size(); ++j) {
    schema.columns.push_back({"c" + std::to_string(j), ColumnKind::kNumeric, 0, {}});
  }
  PlainDataset ds(rows.size(), schema);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows[i].size(); ++j) {
      if (std::isnan(rows[i][j])) {
        ds.set_missing(i, j);
      } else {
        ds.at(i, j) = rows[i][j];
      }
    }
  }
  return ds;
}

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

TEST(Oracle, MeanAndMedianConventions) {
  const auto ds = numeric_table({{1}, {kNaN}, {4}, {2}, {8}});
  const auto m = oracle_impute(ds, Method::kMean, 0);
  EXPECT_DOUBLE_EQ(m.at(1, 0), 3.75);
  EXPECT_TRUE(m.present(1, 0));
  // Four present values sorted descending 8 4 2 1: position ceil(4/2) = 2.
  EXPECT_DOUBLE_EQ(oracle_impute(ds, Method::kMedian, 0).at(1, 0), 4);
  const auto odd = numeric_table({{5}, {kNaN}, {1}, {3}});
  EXPECT_DOUBLE_EQ(oracle_impute(odd, Method::kMedian, 0).at(1, 0), 3);
}

TEST(Oracle, KnnExcludesSelfAndBreaksTiesByIndex) {
  // Rows 0 and 2 are both at distance 1 from row 1; k = 1 picks row 0.
  const auto ds = numeric_table({{0, 10}, {1, kNaN}, {2, 30}, {9, 50}});
  EXPECT_DOUBLE_EQ(oracle_impute(ds, Method::kKnn, 1, 1).at(1, 1), 10);
  const auto pred = oracle_knn_predict(ds, 1, 2);
  EXPECT_DOUBLE_EQ(pred[1], 20);
  // Row 0 skips itself and the missing row 1: neighbours 2 and 3.
  EXPECT_DOUBLE_EQ(pred[0], 40);
}

TEST(Oracle, LuSolveRejectsZeroPivot) {
  EXPECT_THROW(oracle_lu_solve({0, 1, 1, 0}, {1, 1}, 2), IllConditioned);
  const auto x = oracle_lu_solve({4, 3, 6, 3}, {10, 12}, 2);
  EXPECT_NEAR(x[0], 1, 1e-12);
  EXPECT_NEAR(x[1], 2, 1e-12);
}

TEST(Oracle, ErrorMetrics) {
  const std::vector<double> a = {1, 2, 3}, b = {1, 4, 2.5};
  EXPECT_DOUBLE_EQ(mae(a, b), 2.5 / 3);
  EXPECT_DOUBLE_EQ(max_abs_err(a, b), 2);
  const std::vector<double> c = {1};
  EXPECT_THROW(mae(a, c), std::invalid_argument);
  EXPECT_THROW(max_abs_err(a, c), std::invalid_argument);
}

}  // namespace
}  // namespace ppimpute
