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

#include "ppimpute/experiment.h"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

#include "ppimpute/oracle.h"

namespace ppimpute {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

const char* transport_name(mpc::TransportKind t) {
  return t == mpc::TransportKind::kTcp ? "tcp" : "inproc";
}

std::uint64_t derive_u64(std::uint64_t seed, const std::string& domain) {
  Prg rng(Prg::derive_seed(seed, domain));
  return rng.next();
}

}  // namespace

int ExperimentConfig::effective_frac_bits() const {
  if (frac_bits) return *frac_bits;
  return method == Method::kRegression ? 18 : 15;
}

std::size_t ExperimentConfig::effective_k() const {
  if (k != 0) return k;
  return static_cast<std::size_t>(std::floor(std::sqrt(static_cast<double>(n))));
}

void ExperimentConfig::validate() const {
  FxConfig{effective_frac_bits()}.validate();
  if (n < 10) throw std::invalid_argument("n must be at least 10");
  if (reps < 1) throw std::invalid_argument("reps must be at least 1");
  if (method == Method::kKnn) {
    // Every query needs k candidates that hold the target.
    const std::size_t candidates = n - n / 10 - 1;
    if (effective_k() < 1 || effective_k() > candidates) {
      throw std::invalid_argument("k = " + std::to_string(effective_k()) +
                                  " needs 1 <= k <= " + std::to_string(candidates));
    }
  }
}

double ExperimentReport::mean_mae() const {
  if (reps.empty()) return 0;
  double s = 0;
  for (const auto& r : reps) s += r.mae;
  return s / static_cast<double>(reps.size());
}

double ExperimentReport::max_abs_err() const {
  double m = 0;
  for (const auto& r : reps) m = std::max(m, r.max_abs_err);
  return m;
}

double ExperimentReport::mean_compute_seconds() const {
  if (reps.empty()) return 0;
  double s = 0;
  for (const auto& r : reps) s += r.compute_seconds;
  return s / static_cast<double>(reps.size());
}

nlohmann::json ExperimentReport::to_json() const {
  using nlohmann::json;
  json cfg = {
      {"method", method_name(config.method)},
      {"target", config.target},
      {"n", config.n},
      {"k", config.method == Method::kKnn ? json(config.effective_k()) : json(nullptr)},
      {"frac_bits", config.effective_frac_bits()},
      {"seed", config.seed},
      {"reps", config.reps},
      {"data", config.data},
      {"transport", transport_name(config.transport)},
  };
  json per_rep = json::array();
  json maes = json::array();
  double share = 0, compute = 0, reconstruct = 0;
  for (const auto& r : reps) {
    json entry = {
        {"subset_hash", hex64(r.subset_hash)},
        {"imputed_cells", r.imputed_cells},
        {"mae", r.mae},
        {"max_abs_err", r.max_abs_err},
        {"present_cells_changed", r.present_cells_changed},
        {"bytes", r.bytes},
        {"transcript_digest", hex64(r.transcript_digest)},
    };
    if (config.record_timings) {
      entry["seconds"] = {{"share", r.share_seconds},
                          {"compute", r.compute_seconds},
                          {"reconstruct", r.reconstruct_seconds}};
    }
    per_rep.push_back(std::move(entry));
    maes.push_back(r.mae);
    share += r.share_seconds;
    compute += r.compute_seconds;
    reconstruct += r.reconstruct_seconds;
  }
  json out = {
      {"config", cfg},
      {"dataset_hash", hex64(source_hash)},
      {"mae", maes},
      {"mean_mae", mean_mae()},
      {"max_abs_err", max_abs_err()},
      {"repetitions", per_rep},
  };
  if (config.record_timings) {
    out["seconds"] = {{"share", share}, {"compute", compute}, {"reconstruct", reconstruct}};
  }
  return out;
}

std::string ExperimentReport::dump() const { return to_json().dump(2) + "\n"; }

PlainDataset quantize(const PlainDataset& ds, const FxConfig& fx) {
  PlainDataset out = ds;
  for (double& v : out.data) v = decode(encode(v, fx), fx);
  return out;
}

SecureRun secure_impute(const PlainDataset& ds, Method method, std::size_t col, std::size_t k,
                        const mpc::SessionConfig& session, std::uint64_t share_seed) {
  ds.validate();
  const FxConfig& fx = session.fx;
  fx.validate();
  SecureRun run;

  auto start = Clock::now();
  std::vector<RingElement> values(ds.data.size()), avail(ds.mask.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    values[i] = encode(ds.data[i], fx);
    avail[i] = ds.mask[i];
  }
  Prg rng(Prg::derive_seed(share_seed, "data-owner-sharing"));
  auto [d0, d1] = mpc::share_matrix(ds.rows, ds.cols, values, rng);
  auto [a0, a1] = mpc::share_matrix(ds.rows, ds.cols, avail, rng);
  run.share_seconds = seconds_since(start);

  std::array<mpc::SharedDataset, 2> outs;
  run.stats = mpc::run_session(session, [&](mpc::Party& p) {
    mpc::SharedDataset mine;
    mine.schema = ds.schema;
    switch (p.role()) {
      case mpc::Role::P0:
        mine.data = d0;
        mine.avail = a0;
        break;
      case mpc::Role::P1:
        mine.data = d1;
        mine.avail = a1;
        break;
      default:
        mine.data = mpc::SharedMatrix(ds.rows, ds.cols);
        mine.avail = mpc::SharedMatrix(ds.rows, ds.cols);
        break;
    }
    mpc::SharedDataset result = mpc::impute(p, mine, method, col, k);
    if (!p.is_helper()) outs[mpc::index_of(p.role())] = std::move(result);
  });

  start = Clock::now();
  const auto data = mpc::reconstruct(outs[0].data, outs[1].data);
  const auto mask = mpc::reconstruct(outs[0].avail, outs[1].avail);
  run.imputed = PlainDataset(ds.rows, ds.schema);
  for (std::size_t i = 0; i < data.size(); ++i) {
    run.imputed.data[i] = decode(data[i], fx);
    run.imputed.mask[i] = static_cast<std::uint8_t>(mask[i]);
  }
  run.reconstruct_seconds = seconds_since(start);
  return run;
}

PlainDataset load_source(const ExperimentConfig& cfg) {
  if (cfg.data == "synthetic") {
    return synth_dataset(std::max(cfg.pool_rows, cfg.n), cfg.seed);
  }
  return load_csv(cfg.data);
}

ExperimentReport run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  return run_experiment(cfg, load_source(cfg));
}

ExperimentReport run_experiment(const ExperimentConfig& cfg, const PlainDataset& source) {
  cfg.validate();
  source.validate();
  std::size_t col;
  try {
    col = source.schema.index_of(cfg.target);
  } catch (const std::out_of_range&) {
    throw std::invalid_argument("unknown target column '" + cfg.target + "'");
  }
  if (cfg.n > source.rows) {
    throw std::invalid_argument("n = " + std::to_string(cfg.n) + " exceeds the " +
                                std::to_string(source.rows) + " available rows");
  }
  if (cfg.method == Method::kMean && source.schema[col].kind == ColumnKind::kCategorical) {
    throw std::invalid_argument("mean imputation is undefined for multi-class columns");
  }

  const FxConfig fx{cfg.effective_frac_bits()};
  const std::size_t k = cfg.effective_k();
  ExperimentReport report;
  report.config = cfg;
  report.source_hash = dataset_hash(source);

  for (std::size_t r = 0; r < cfg.reps; ++r) {
    const std::string tag = "rep-" + std::to_string(r);
    Prg pick(Prg::derive_seed(cfg.seed, tag + "-subsample"));
    const PlainDataset input = quantize(inject_missing(subsample(source, cfg.n, pick), col), fx);

    mpc::SessionConfig session;
    session.fx = fx;
    session.session_id = r + 1;
    session.transport = cfg.transport;
    for (std::size_t p = 0; p < session.seeds.size(); ++p) {
      session.seeds[p] = derive_u64(cfg.seed, tag + "-party-" + std::to_string(p));
    }
    const SecureRun run = secure_impute(input, cfg.method, col, k, session,
                                        derive_u64(cfg.seed, tag + "-sharing"));
    const PlainDataset expected = oracle_impute(input, cfg.method, col, k);

    RepetitionResult res;
    res.subset_hash = dataset_hash(input);
    res.imputed_cells = input.missing_count(col);
    res.mae = mae(run.imputed.column(col), expected.column(col));
    res.max_abs_err = max_abs_err(run.imputed.data, expected.data);
    for (std::size_t i = 0; i < input.data.size(); ++i) {
      if (input.mask[i] && (run.imputed.data[i] != input.data[i] || !run.imputed.mask[i])) {
        ++res.present_cells_changed;
      }
    }
    res.bytes = run.stats.total_bytes();
    res.transcript_digest = run.stats.digest();
    res.share_seconds = run.share_seconds;
    res.compute_seconds = run.stats.seconds;
    res.reconstruct_seconds = run.reconstruct_seconds;
    report.reps.push_back(res);
  }
  return report;
}

std::vector<ScalingRow> bench_scaling(const ExperimentConfig& base,
                                      const std::vector<std::size_t>& sizes) {
  for (std::size_t i = 1; i < sizes.size(); ++i) {
    if (sizes[i] <= sizes[i - 1]) throw std::invalid_argument("sizes must be ascending");
  }
  std::vector<ScalingRow> rows;
  for (std::size_t n : sizes) {
    ExperimentConfig cfg = base;
    cfg.n = n;
    rows.push_back({n, run_experiment(cfg).mean_compute_seconds(), cfg.method});
  }
  return rows;
}

void write_scaling_csv(std::ostream& out, const std::vector<ScalingRow>& rows) {
  out << "n,seconds,method\n";
  for (const auto& r : rows) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6f", r.seconds);
    out << r.n << ',' << buf << ',' << method_name(r.method) << '\n';
  }
}

double loglog_slope(const std::vector<ScalingRow>& rows) {
  if (rows.size() < 2) throw std::invalid_argument("slope needs at least two rows");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& r : rows) {
    const double x = std::log(static_cast<double>(r.n));
    const double y = std::log(r.seconds);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double m = static_cast<double>(rows.size());
  return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

}  // namespace ppimpute
