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
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "ppimpute/dataset.h"
#include "ppimpute/imputation.h"
#include "ppimpute/session.h"

namespace ppimpute {

struct ExperimentConfig {
  Method method = Method::kMean;
  std::string target = "bmi";
  std::size_t n = 100;
  std::size_t k = 0;              // 0 = floor(sqrt(n))
  std::optional<int> frac_bits;   // default 15, or 18 for regression
  std::uint64_t seed = 1;
  std::size_t reps = 10;
  std::string data = "synthetic";  // or a CSV path
  mpc::TransportKind transport = mpc::TransportKind::kInProcess;
  // Wall-clock figures vary run to run; leave them out for byte-stable reports.
  bool record_timings = true;
  // Rows in the synthetic pool that each repetition samples from.
  std::size_t pool_rows = 10000;

  int effective_frac_bits() const;
  std::size_t effective_k() const;
  // Throws std::invalid_argument on a contract violation.
  void validate() const;
};

struct RepetitionResult {
  std::uint64_t subset_hash = 0;
  std::size_t imputed_cells = 0;
  double mae = 0;
  double max_abs_err = 0;
  // Present cells whose reconstruction differs from the input.
  std::size_t present_cells_changed = 0;
  std::uint64_t bytes = 0;
  std::uint64_t transcript_digest = 0;
  double share_seconds = 0;
  double compute_seconds = 0;
  double reconstruct_seconds = 0;
};

struct ExperimentReport {
  ExperimentConfig config;
  std::uint64_t source_hash = 0;
  std::vector<RepetitionResult> reps;

  double mean_mae() const;
  double max_abs_err() const;
  double mean_compute_seconds() const;

  nlohmann::json to_json() const;
  std::string dump() const;  // to_json() with two-space indent
};

// Fixed-point round trip of every cell: what the parties actually compute on.
PlainDataset quantize(const PlainDataset& ds, const FxConfig& fx);

struct SecureRun {
  PlainDataset imputed;  // reconstructed by the data owner
  mpc::SessionStats stats;
  double share_seconds = 0;
  double reconstruct_seconds = 0;
};

// Shares `ds` (data and mask), runs one imputation across the three parties
// and reconstructs the result. Only the final output is reconstructed.
SecureRun secure_impute(const PlainDataset& ds, Method method, std::size_t col, std::size_t k,
                        const mpc::SessionConfig& session, std::uint64_t share_seed);

// The table experiments draw from: synthetic or loaded from cfg.data.
PlainDataset load_source(const ExperimentConfig& cfg);

ExperimentReport run_experiment(const ExperimentConfig& cfg);
ExperimentReport run_experiment(const ExperimentConfig& cfg, const PlainDataset& source);

struct ScalingRow {
  std::size_t n = 0;
  double seconds = 0;
  Method method = Method::kMean;
};

// One row per size; seconds is the mean secure compute time over cfg.reps.
std::vector<ScalingRow> bench_scaling(const ExperimentConfig& base,
                                      const std::vector<std::size_t>& sizes);
void write_scaling_csv(std::ostream& out, const std::vector<ScalingRow>& rows);

// Least-squares slope of log(seconds) on log(n).
double loglog_slope(const std::vector<ScalingRow>& rows);

}  // namespace ppimpute
