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
#include <array>
#include <cmath>
#include <random>
#include <set>

#include "ppimpute/dataset.h"
#include "ppimpute/experiment.h"
#include "ppimpute/imputation.h"
#include "ppimpute/oracle.h"
#include "test_util.h"

namespace ppimpute {
namespace {

using testing::Dealt;
using testing::DealtMatrix;

DatasetSchema make_schema(std::vector<ColumnKind> kinds, int classes = 3) {
  DatasetSchema s;
  for (std::size_t j = 0; j < kinds.size(); ++j) {
    ColumnSpec c;
    c.name = "c" + std::to_string(j);
    c.kind = kinds[j];
    if (kinds[j] == ColumnKind::kCategorical) c.classes = classes;
    s.columns.push_back(c);
  }
  return s;
}

// Rows of values; NaN marks a missing cell.
PlainDataset table(const std::vector<std::vector<double>>& rows, DatasetSchema schema) {
  PlainDataset ds(rows.size(), std::move(schema));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < ds.cols; ++j) {
      if (std::isnan(rows[i][j])) {
        ds.set_missing(i, j);
      } else {
        ds.at(i, j) = rows[i][j];
      }
    }
  }
  return ds;
}

mpc::SessionConfig session(int f, std::uint64_t seed = 11) {
  mpc::SessionConfig cfg;
  cfg.fx.frac_bits = f;
  cfg.seeds = {seed, seed + 1, seed + 2};
  return cfg;
}

SecureRun run(const PlainDataset& ds, Method m, std::size_t col, std::size_t k = 1, int f = 15,
              std::uint64_t seed = 11) {
  return secure_impute(ds, m, col, k, session(f, seed), seed + 100);
}

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Present cells bit-identical, target column complete.
void expect_non_interference(const PlainDataset& in, const PlainDataset& out, std::size_t col) {
  ASSERT_EQ(in.data.size(), out.data.size());
  for (std::size_t i = 0; i < in.rows; ++i) {
    for (std::size_t j = 0; j < in.cols; ++j) {
      if (in.present(i, j)) {
        EXPECT_EQ(in.at(i, j), out.at(i, j)) << "cell " << i << "," << j;
        EXPECT_TRUE(out.present(i, j));
      } else if (j != col) {
        EXPECT_FALSE(out.present(i, j));
      }
    }
    EXPECT_TRUE(out.present(i, col)) << "row " << i;
  }
}

TEST(MeanImpute, Examples) {
  const auto num = table({{2.0}, {4.0}, {kNaN}}, make_schema({ColumnKind::kNumeric}));
  EXPECT_NEAR(run(num, Method::kMean, 0).imputed.at(2, 0), 3.0, std::ldexp(1.0, -12));

  const auto bin = table({{1}, {1}, {0}, {kNaN}}, make_schema({ColumnKind::kBinary}));
  EXPECT_EQ(run(bin, Method::kMean, 0).imputed.at(3, 0), 1.0);

  // Exactly one half rounds to 1.
  const auto tie = table({{1}, {0}, {kNaN}}, make_schema({ColumnKind::kBinary}));
  EXPECT_EQ(run(tie, Method::kMean, 0).imputed.at(2, 0), 1.0);
  const auto low = table({{1}, {0}, {0}, {kNaN}}, make_schema({ColumnKind::kBinary}));
  EXPECT_EQ(run(low, Method::kMean, 0).imputed.at(3, 0), 0.0);
}

TEST(MeanImpute, NegativeValues) {
  const auto ds = table({{-2.5}, {-4.0}, {kNaN}, {1.0}}, make_schema({ColumnKind::kNumeric}));
  EXPECT_NEAR(run(ds, Method::kMean, 0).imputed.at(2, 0), -5.5 / 3, std::ldexp(1.0, -12));
}

TEST(MeanImpute, RejectsCategorical) {
  const auto ds = table({{0}, {2}, {kNaN}}, make_schema({ColumnKind::kCategorical}));
  EXPECT_THROW(run(ds, Method::kMean, 0), std::invalid_argument);
  EXPECT_THROW(oracle_impute(ds, Method::kMean, 0), std::invalid_argument);
}

TEST(MedianImpute, Examples) {
  const auto odd = table({{5.0}, {1.0}, {3.0}, {kNaN}}, make_schema({ColumnKind::kNumeric}));
  EXPECT_EQ(run(odd, Method::kMedian, 0).imputed.at(3, 0), 3.0);

  const auto even = table({{4.0}, {1.0}, {3.0}, {2.0}, {kNaN}, {kNaN}},
                          make_schema({ColumnKind::kNumeric}));
  const auto out = run(even, Method::kMedian, 0).imputed;
  EXPECT_EQ(out.at(4, 0), 3.0);
  EXPECT_EQ(out.at(5, 0), 3.0);
}

TEST(MedianImpute, NegativeAndDuplicateValues) {
  const auto ds = table({{-1.0}, {-1.0}, {kNaN}, {-7.25}, {2.0}},
                        make_schema({ColumnKind::kNumeric}));
  // Descending [2, -1, -1, -7.25], position 2.
  EXPECT_EQ(run(ds, Method::kMedian, 0).imputed.at(2, 0), -1.0);
}

mpc::SharedVector solve(const std::vector<double>& a, const std::vector<double>& b, std::size_t m,
                   int f, std::vector<double>* x, mpc::LuOptions opts = {}) {
  FxConfig fx{f};
  Prg rng(Prg::derive_seed(m, "lu-test"));
  const DealtMatrix da(m, m, testing::encode_all(a, fx), rng);
  const Dealt db(testing::encode_all(b, fx), rng);
  const auto out = testing::run_vector(session(f), [&](mpc::Party& p) {
    return mpc::lu_solve(p, da(p), db(p), opts);
  });
  *x = testing::decode_all(out.value(), fx);
  return out.outs[0];
}

TEST(LuSolve, Examples) {
  std::vector<double> x;
  solve({2, 0, 0, 4}, {2, 8}, 2, 18, &x);
  EXPECT_NEAR(x[0], 1.0, 1e-4);
  EXPECT_NEAR(x[1], 2.0, 1e-4);

  solve({4, 3, 6, 3}, {10, 12}, 2, 18, &x);
  EXPECT_NEAR(x[0], 1.0, 1e-4);
  EXPECT_NEAR(x[1], 2.0, 1e-4);
}

TEST(LuSolve, MatchesPlaintextFactorization) {
  const std::vector<double> a = {4, 3, 6, 3};
  const auto x = oracle_lu_solve(a, {10, 12}, 2);
  EXPECT_DOUBLE_EQ(x[0], 1.0);
  EXPECT_DOUBLE_EQ(x[1], 2.0);
  EXPECT_THROW(oracle_lu_solve({0, 1, 1, 0}, {1, 1}, 2), IllConditioned);
}

// Q diag(lambda) Q^T with eigenvalues in [1, cond].
std::vector<double> random_spd(std::size_t m, double cond, Prg& rng) {
  std::normal_distribution<double> normal;
  std::vector<std::vector<double>> q(m, std::vector<double>(m));
  for (auto& row : q) {
    for (double& v : row) v = normal(rng);
  }
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      double dot = 0;
      for (std::size_t t = 0; t < m; ++t) dot += q[i][t] * q[j][t];
      for (std::size_t t = 0; t < m; ++t) q[i][t] -= dot * q[j][t];
    }
    double norm = 0;
    for (double v : q[i]) norm += v * v;
    for (double& v : q[i]) v /= std::sqrt(norm);
  }
  std::vector<double> lambda(m);
  for (std::size_t i = 0; i < m; ++i) {
    lambda[i] = std::pow(cond, static_cast<double>(i) / static_cast<double>(m - 1));
  }
  std::vector<double> a(m * m, 0.0);
  for (std::size_t r = 0; r < m; ++r) {
    for (std::size_t c = 0; c < m; ++c) {
      for (std::size_t t = 0; t < m; ++t) a[r * m + c] += q[t][r] * lambda[t] * q[t][c];
    }
  }
  return a;
}

double relative_residual(const std::vector<double>& a, const std::vector<double>& b,
                         const std::vector<double>& x) {
  const std::size_t m = b.size();
  double num = 0, den = 0;
  for (std::size_t r = 0; r < m; ++r) {
    double ax = 0;
    for (std::size_t c = 0; c < m; ++c) ax += a[r * m + c] * x[c];
    num = std::max(num, std::fabs(ax - b[r]));
    den = std::max(den, std::fabs(b[r]));
  }
  return num / den;
}

TEST(LuSolve, RandomSpd8x8) {
  Prg rng(Prg::derive_seed(5, "spd"));
  const FxConfig fx{18};
  for (int trial = 0; trial < 10; ++trial) {
    auto a = random_spd(8, 100.0, rng);
    std::vector<double> b(8);
    for (double& v : b) v = 10 * rng.uniform_real() - 5;
    // Residual against what the parties actually hold.
    for (double& v : a) v = decode(encode(v, fx), fx);
    for (double& v : b) v = decode(encode(v, fx), fx);
    std::vector<double> x;
    solve(a, b, 8, 18, &x);
    EXPECT_LE(relative_residual(a, b, x), 1e-3) << "trial " << trial;
  }
}

TEST(LuSolve, DebugPivotsFlagsSingularMatrix) {
  std::vector<double> x;
  mpc::LuOptions opts;
  opts.debug_pivots = true;
  EXPECT_THROW(solve({1, 2, 2, 4}, {1, 2}, 2, 18, &x, opts), IllConditioned);
  EXPECT_NO_THROW(solve({4, 3, 6, 3}, {10, 12}, 2, 18, &x, opts));
}

TEST(RegressionImpute, ExactLinearFit) {
  const auto ds = table({{1, 3}, {2, 5}, {3, kNaN}},
                        make_schema({ColumnKind::kNumeric, ColumnKind::kNumeric}));
  const auto out = run(ds, Method::kRegression, 1, 1, 18).imputed;
  EXPECT_NEAR(out.at(2, 1), 7.0, 1e-3);
}

TEST(RegressionImpute, AllPresentIsIdentity) {
  const auto ds = table({{1, 3.5}, {2, 5}, {3, 7.25}, {5, 10}},
                        make_schema({ColumnKind::kNumeric, ColumnKind::kNumeric}));
  const auto out = run(ds, Method::kRegression, 1, 1, 18).imputed;
  EXPECT_EQ(out.data, ds.data);
}

TEST(KnnImpute, SingleNeighbour) {
  const auto ds = table({{0, 5.0}, {10, kNaN}},
                        make_schema({ColumnKind::kNumeric, ColumnKind::kNumeric}));
  EXPECT_NEAR(run(ds, Method::kKnn, 1, 1).imputed.at(1, 1), 5.0, std::ldexp(1.0, -12));
}

TEST(KnnImpute, BinaryMajority) {
  // Nearest three to the query at 0: labels 1, 1, 0; the far row says 0.
  const auto ds = table({{0, kNaN}, {1, 1}, {2, 1}, {3, 0}, {50, 0}, {60, 0}},
                        make_schema({ColumnKind::kNumeric, ColumnKind::kBinary}));
  EXPECT_EQ(run(ds, Method::kKnn, 1, 3).imputed.at(0, 1), 1.0);
}

TEST(KnnImpute, EqualDistancesPreferLowerIndex) {
  // Rows 1 and 2 are both at distance 1 from the query; k = 1 takes row 1.
  const auto ds = table({{5, kNaN}, {4, 10.0}, {6, 20.0}},
                        make_schema({ColumnKind::kNumeric, ColumnKind::kNumeric}));
  EXPECT_EQ(run(ds, Method::kKnn, 1, 1).imputed.at(0, 1), 10.0);
  EXPECT_EQ(oracle_impute(ds, Method::kKnn, 1, 1).at(0, 1), 10.0);
}

TEST(KnnImpute, NoMissingIsIdentity) {
  const auto ds = table({{0, 1.5}, {1, 2.5}, {4, 3.5}, {9, 4.5}},
                        make_schema({ColumnKind::kNumeric, ColumnKind::kNumeric}));
  EXPECT_EQ(run(ds, Method::kKnn, 1, 2).imputed.data, ds.data);
}

TEST(KnnImpute, SinglePresentLabel) {
  const auto ds = table({{0, kNaN}, {1, kNaN}, {2, 7.5}, {3, kNaN}},
                        make_schema({ColumnKind::kNumeric, ColumnKind::kNumeric}));
  const auto out = run(ds, Method::kKnn, 1, 1).imputed;
  for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(out.at(i, 1), 7.5, 1e-4) << i;
}

TEST(KnnImpute, CategoricalArgmaxWithLowestLabelOnTies) {
  // Neighbours of row 0 by distance: labels 2, 1, 1, 2 -> tie at k = 4
  // between 1 and 2 goes to 1; k = 3 gives 1; k = 1 gives 2.
  const auto ds = table({{0, kNaN}, {1, 2}, {2, 1}, {3, 1}, {4, 2}, {40, 0}},
                        make_schema({ColumnKind::kNumeric, ColumnKind::kCategorical}));
  for (std::size_t k : {1u, 3u, 4u}) {
    const double want = oracle_impute(ds, Method::kKnn, 1, k).at(0, 1);
    EXPECT_EQ(run(ds, Method::kKnn, 1, k).imputed.at(0, 1), want) << "k=" << k;
  }
  EXPECT_EQ(oracle_impute(ds, Method::kKnn, 1, 4).at(0, 1), 1.0);
}

TEST(KnnImpute, RejectsBadK) {
  const auto ds = table({{0, 1}, {1, kNaN}},
                        make_schema({ColumnKind::kNumeric, ColumnKind::kNumeric}));
  EXPECT_THROW(run(ds, Method::kKnn, 1, 0), std::invalid_argument);
  EXPECT_THROW(run(ds, Method::kKnn, 1, 2), std::invalid_argument);
}

// Random table with the target column in `col`; every 10th-ish row missing
// plus a random sprinkle.
PlainDataset random_table(std::size_t n, const DatasetSchema& schema, std::size_t col,
                          Prg& rng) {
  PlainDataset ds(n, schema);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < ds.cols; ++j) {
      switch (schema[j].kind) {
        case ColumnKind::kNumeric: ds.at(i, j) = std::round(2000 * rng.uniform_real()) / 100; break;
        case ColumnKind::kBinary: ds.at(i, j) = static_cast<double>(rng.uniform(2)); break;
        case ColumnKind::kCategorical:
          ds.at(i, j) = static_cast<double>(rng.uniform(static_cast<std::uint64_t>(schema[j].classes)));
          break;
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (i % 10 == 9 || rng.uniform(8) == 0) ds.set_missing(i, col);
  }
  return ds;
}

TEST(OracleEquivalence, TwentyRandomDatasets) {
  Prg rng(Prg::derive_seed(2024, "equivalence"));
  const std::vector<ColumnKind> pool = {ColumnKind::kNumeric, ColumnKind::kNumeric,
                                        ColumnKind::kBinary, ColumnKind::kNumeric,
                                        ColumnKind::kCategorical, ColumnKind::kNumeric};
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 16 + rng.uniform(49);  // 16..64
    const std::size_t m = 2 + rng.uniform(5);    // 2..6
    std::vector<ColumnKind> kinds(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(m));
    const std::size_t col = rng.uniform(m);
    const auto schema = make_schema(kinds);
    const auto raw = random_table(n, schema, col, rng);
    const std::size_t k = std::max<std::size_t>(1, static_cast<std::size_t>(std::sqrt(n)));

    for (Method method : {Method::kMean, Method::kMedian, Method::kRegression, Method::kKnn}) {
      if (method == Method::kMean && kinds[col] == ColumnKind::kCategorical) continue;
      // Regression predicts a real value; only meaningful for numeric targets.
      if (method == Method::kRegression && kinds[col] != ColumnKind::kNumeric) continue;
      const int f = method == Method::kRegression ? 18 : 15;
      const auto input = quantize(raw, FxConfig{f});
      const auto secure = run(input, method, col, k, f, 31 + trial).imputed;
      const auto expected = oracle_impute(input, method, col, k);
      const double tol = method == Method::kRegression ? 1e-3 : std::ldexp(1.0, 4 - f);
      SCOPED_TRACE(std::string(method_name(method)) + " trial " + std::to_string(trial) +
                   " n=" + std::to_string(n) + " m=" + std::to_string(m) +
                   " col=" + std::to_string(col));
      EXPECT_LE(max_abs_err(secure.data, expected.data), tol);
      expect_non_interference(input, secure, col);
    }
  }
}

TEST(Obliviousness, TranscriptLengthIndependentOfMissingness) {
  const auto schema =
      make_schema({ColumnKind::kNumeric, ColumnKind::kNumeric, ColumnKind::kBinary});
  for (Method method : {Method::kMean, Method::kMedian, Method::kRegression, Method::kKnn}) {
    std::set<std::uint64_t> lengths;
    for (int pattern = 0; pattern < 5; ++pattern) {
      Prg rng(Prg::derive_seed(pattern, "pattern"));
      PlainDataset ds(24, schema);
      for (std::size_t i = 0; i < ds.rows; ++i) {
        ds.at(i, 0) = 10 * rng.uniform_real();
        ds.at(i, 1) = 10 * rng.uniform_real();
        ds.at(i, 2) = static_cast<double>(rng.uniform(2));
        // Between 0 and ~8 missing targets, always leaving enough neighbours.
        if (i > 0 && rng.uniform(5) < static_cast<std::uint64_t>(pattern)) ds.set_missing(i, 1);
      }
      const int f = method == Method::kRegression ? 18 : 15;
      const auto input = quantize(ds, FxConfig{f});
      lengths.insert(run(input, method, 1, 3, f, 77).stats.total_bytes());
    }
    EXPECT_EQ(lengths.size(), 1u) << method_name(method);
  }
}

TEST(KnnImpute, AgreesWithScikitLearnKnnImputer) {
  DatasetSchema schema =
      make_schema({ColumnKind::kNumeric, ColumnKind::kNumeric, ColumnKind::kNumeric,
                   ColumnKind::kNumeric});
  schema.columns[0].name = "x1";
  schema.columns[1].name = "x2";
  schema.columns[2].name = "x3";
  schema.columns[3].name = "y";
  const std::string dir = PPIMPUTE_FIXTURE_DIR;
  const auto input = load_csv(dir + "/knn_input.csv", schema);
  const auto expected = load_csv(dir + "/knn_sklearn_k5.csv", schema);
  ASSERT_EQ(input.missing_count(3), 6u);

  const auto plain = oracle_impute(input, Method::kKnn, 3, 5);
  for (std::size_t i = 0; i < input.rows; ++i) {
    EXPECT_NEAR(plain.at(i, 3), expected.at(i, 3), 1e-9) << "row " << i;
  }
  const auto secure = run(quantize(input, FxConfig{15}), Method::kKnn, 3, 5).imputed;
  for (std::size_t i = 0; i < input.rows; ++i) {
    EXPECT_NEAR(secure.at(i, 3), expected.at(i, 3), 1e-4) << "row " << i;
  }
}

TEST(KnnImpute, ScikitLearnFixtureByHand) {
  // Five nearest rows (x1..x3) of five queries, checked by hand against the
  // fixture, and the means of their labels.
  DatasetSchema schema = make_schema(
      {ColumnKind::kNumeric, ColumnKind::kNumeric, ColumnKind::kNumeric, ColumnKind::kNumeric});
  schema.columns[0].name = "x1";
  schema.columns[1].name = "x2";
  schema.columns[2].name = "x3";
  schema.columns[3].name = "y";
  const auto input = load_csv(std::string(PPIMPUTE_FIXTURE_DIR) + "/knn_input.csv", schema);
  struct Case {
    std::size_t row;
    std::array<std::size_t, 5> neighbours;
    double value;
  };
  const Case cases[] = {
      {4, {8, 35, 21, 36, 23}, 3.012},   {9, {28, 27, 20, 24, 0}, 22.336},
      {19, {14, 33, 5, 16, 0}, 6.38},    {22, {12, 18, 1, 13, 31}, 17.094},
      {29, {3, 21, 10, 23, 26}, 10.098},
  };
  const auto out = oracle_impute(input, Method::kKnn, 3, 5);
  for (const Case& c : cases) {
    double mean = 0;
    for (std::size_t j : c.neighbours) mean += input.at(j, 3) / 5;
    EXPECT_NEAR(mean, c.value, 1e-9) << "row " << c.row;
    EXPECT_NEAR(out.at(c.row, 3), c.value, 1e-9) << "row " << c.row;
  }
}

}  // namespace
}  // namespace ppimpute
