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

// ppimpute: secure imputation experiments and scaling benchmarks.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ppimpute/experiment.h"

namespace {

using ppimpute::ExperimentConfig;
using ppimpute::Method;
using ppimpute::mpc::TransportKind;

const std::map<std::string, Method> kMethods = {{"mean", Method::kMean},
                                                {"median", Method::kMedian},
                                                {"regression", Method::kRegression},
                                                {"knn", Method::kKnn}};
const std::map<std::string, TransportKind> kTransports = {{"inproc", TransportKind::kInProcess},
                                                          {"tcp", TransportKind::kTcp}};

struct Options {
  ExperimentConfig cfg;
  std::string k = "auto";
  int frac_bits = 0;  // 0 = method default
  std::string report;
  std::string out;
  std::vector<std::size_t> sizes{100, 200, 400, 800, 1600};
};

void add_common(CLI::App* cmd, Options& o) {
  cmd->add_option("--method", o.cfg.method, "Imputation method")
      ->required()
      ->transform(CLI::CheckedTransformer(kMethods, CLI::ignore_case));
  cmd->add_option("--target", o.cfg.target, "Column to impute")->capture_default_str();
  cmd->add_option("--k", o.k, "Neighbours for knn, or auto = floor(sqrt(n))")
      ->capture_default_str();
  cmd->add_option("--frac-bits", o.frac_bits,
                  "Fractional bits (default 15, 18 for regression)")
      ->check(CLI::Range(1, 30));
  cmd->add_option("--seed", o.cfg.seed, "Experiment seed")->capture_default_str();
  cmd->add_option("--reps", o.cfg.reps, "Repetitions")->capture_default_str();
  cmd->add_option("--data", o.cfg.data, "CSV path or 'synthetic'")->capture_default_str();
  cmd->add_option("--transport", o.cfg.transport, "Party channels")
      ->transform(CLI::CheckedTransformer(kTransports, CLI::ignore_case));
  cmd->add_flag("!--no-timings", o.cfg.record_timings,
                "Leave wall-clock figures out of the report");
}

void finish(Options& o) {
  if (o.frac_bits != 0) o.cfg.frac_bits = o.frac_bits;
  if (o.k == "auto") {
    o.cfg.k = 0;
  } else {
    try {
      const long v = std::stol(o.k);
      if (v < 1) throw std::invalid_argument("k");
      o.cfg.k = static_cast<std::size_t>(v);
    } catch (const std::exception&) {
      throw CLI::ValidationError("--k", "expected a positive integer or 'auto'");
    }
  }
}

int run_impute(Options& o) {
  finish(o);
  const ppimpute::ExperimentReport report = ppimpute::run_experiment(o.cfg);
  const std::string text = report.dump();
  if (o.report.empty() || o.report == "-") {
    std::cout << text;
  } else {
    std::ofstream f(o.report);
    if (!(f << text)) throw std::runtime_error("cannot write " + o.report);
    std::fprintf(stderr, "%s n=%zu: mean MAE %.3g, max error %.3g -> %s\n",
                 ppimpute::method_name(o.cfg.method), o.cfg.n, report.mean_mae(),
                 report.max_abs_err(), o.report.c_str());
  }
  return 0;
}

int run_bench(Options& o) {
  finish(o);
  const auto rows = ppimpute::bench_scaling(o.cfg, o.sizes);
  if (o.out.empty() || o.out == "-") {
    ppimpute::write_scaling_csv(std::cout, rows);
  } else {
    std::ofstream f(o.out);
    ppimpute::write_scaling_csv(f, rows);
    if (!f) throw std::runtime_error("cannot write " + o.out);
  }
  if (rows.size() >= 2) {
    std::fprintf(stderr, "log-log slope: %.3f\n", ppimpute::loglog_slope(rows));
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Three-party secure imputation of missing values"};
  app.require_subcommand(1);

  Options impute;
  auto* imp = app.add_subcommand("impute", "Run an imputation experiment and emit a JSON report");
  add_common(imp, impute);
  imp->add_option("--n", impute.cfg.n, "Rows per repetition")->capture_default_str();
  imp->add_option("--report", impute.report, "Report path (default stdout)");

  Options bench;
  bench.cfg.reps = 3;
  auto* bch = app.add_subcommand("bench", "Time imputation over a ladder of sizes");
  add_common(bch, bench);
  bch->add_option("--sizes", bench.sizes, "Ascending sample sizes")
      ->delimiter(',')
      ->capture_default_str();
  bch->add_option("--out", bench.out, "CSV path (default stdout)");

  CLI11_PARSE(app, argc, argv);
  try {
    if (imp->parsed()) return run_impute(impute);
    return run_bench(bench);
  } catch (const CLI::Error& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
