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

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string>

#include "ppimpute/experiment.h"

namespace ppimpute {
namespace {

ExperimentConfig small(Method m, std::size_t n = 40, std::size_t reps = 2) {
  ExperimentConfig cfg;
  cfg.method = m;
  cfg.n = n;
  cfg.reps = reps;
  cfg.pool_rows = 500;
  cfg.record_timings = false;
  return cfg;
}

TEST(ExperimentConfig, Defaults) {
  ExperimentConfig cfg;
  EXPECT_EQ(cfg.effective_frac_bits(), 15);
  cfg.method = Method::kRegression;
  EXPECT_EQ(cfg.effective_frac_bits(), 18);
  cfg.frac_bits = 16;
  EXPECT_EQ(cfg.effective_frac_bits(), 16);
  cfg.n = 1000;
  EXPECT_EQ(cfg.effective_k(), 31u);
  cfg.k = 5;
  EXPECT_EQ(cfg.effective_k(), 5u);
}

TEST(ExperimentConfig, Validation) {
  auto cfg = small(Method::kKnn, 20);
  EXPECT_NO_THROW(cfg.validate());
  cfg.k = 17;  // 20 rows, 2 missing, self excluded
  EXPECT_NO_THROW(cfg.validate());
  cfg.k = 18;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg = small(Method::kMean, 9);
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg = small(Method::kMean);
  cfg.reps = 0;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg = small(Method::kMean);
  cfg.frac_bits = 0;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
}

TEST(Experiment, ReportShape) {
  const auto report = run_experiment(small(Method::kMedian));
  ASSERT_EQ(report.reps.size(), 2u);
  const auto j = report.to_json();
  EXPECT_EQ(j["config"]["method"], "median");
  EXPECT_TRUE(j["config"]["k"].is_null());
  EXPECT_EQ(j["mae"].size(), 2u);
  EXPECT_FALSE(j.contains("seconds"));
  for (const auto& r : report.reps) {
    EXPECT_EQ(r.imputed_cells, 4u);
    EXPECT_EQ(r.present_cells_changed, 0u);
    EXPECT_GT(r.bytes, 0u);
  }
  // Median picks an existing quantized value: exact.
  EXPECT_EQ(report.max_abs_err(), 0.0);
}

TEST(Experiment, ByteIdenticalWithoutTimings) {
  for (Method m : {Method::kMean, Method::kKnn}) {
    const auto cfg = small(m);
    EXPECT_EQ(run_experiment(cfg).dump(), run_experiment(cfg).dump()) << method_name(m);
  }
  auto other = small(Method::kMean);
  other.seed = 2;
  EXPECT_NE(run_experiment(small(Method::kMean)).dump(), run_experiment(other).dump());
}

TEST(Experiment, TimingsAreReportedWhenAsked) {
  auto cfg = small(Method::kMean, 20, 1);
  cfg.record_timings = true;
  const auto j = run_experiment(cfg).to_json();
  ASSERT_TRUE(j.contains("seconds"));
  EXPECT_GT(j["seconds"]["compute"].get<double>(), 0.0);
}

TEST(Experiment, RepetitionsUseDifferentSubsets) {
  const auto report = run_experiment(small(Method::kMean, 40, 3));
  EXPECT_NE(report.reps[0].subset_hash, report.reps[1].subset_hash);
  EXPECT_NE(report.reps[1].subset_hash, report.reps[2].subset_hash);
}

TEST(Experiment, HigherPrecisionHelpsRegression) {
  auto cfg = small(Method::kRegression, 100, 2);
  cfg.target = "blood_glucose_level";
  cfg.frac_bits = 13;
  const double coarse = run_experiment(cfg).mean_mae();
  cfg.frac_bits = 18;
  const double fine = run_experiment(cfg).mean_mae();
  EXPECT_LT(fine, coarse);
  EXPECT_LT(fine, 1e-4);
}

TEST(Experiment, UnknownTargetOrSource) {
  auto cfg = small(Method::kMean);
  cfg.target = "weight";
  EXPECT_ANY_THROW(run_experiment(cfg));
  cfg = small(Method::kMean);
  cfg.data = "/nonexistent/data.csv";
  EXPECT_THROW(run_experiment(cfg), DatasetError);
}

TEST(Bench, CsvAndSlope) {
  auto cfg = small(Method::kMean, 0, 1);
  const auto rows = bench_scaling(cfg, {20, 40});
  ASSERT_EQ(rows.size(), 2u);
  std::ostringstream out;
  write_scaling_csv(out, rows);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "n,seconds,method");
  std::getline(in, line);
  EXPECT_EQ(line.rfind("20,", 0), 0u);
  EXPECT_NE(line.find(",mean"), std::string::npos);
  EXPECT_THROW(bench_scaling(cfg, {40, 20}), std::invalid_argument);

  const std::vector<ScalingRow> linear = {{100, 1.0}, {200, 2.0}, {400, 4.0}};
  EXPECT_NEAR(loglog_slope(linear), 1.0, 1e-12);
  const std::vector<ScalingRow> flat = {{100, 3.0}, {1600, 3.0}};
  EXPECT_NEAR(loglog_slope(flat), 0.0, 1e-12);
}

}  // namespace
}  // namespace ppimpute
