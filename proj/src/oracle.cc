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

#include "ppimpute/oracle.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace ppimpute {
namespace {

std::vector<double> present_values(const PlainDataset& ds, std::size_t col) {
  std::vector<double> v;
  for (std::size_t i = 0; i < ds.rows; ++i) {
    if (ds.present(i, col)) v.push_back(ds.at(i, col));
  }
  if (v.empty()) throw std::invalid_argument("column has no present values");
  return v;
}

double mean_value(const PlainDataset& ds, std::size_t col) {
  const auto v = present_values(ds, col);
  const double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  if (ds.schema[col].kind == ColumnKind::kBinary) return mean >= 0.5 ? 1.0 : 0.0;
  return mean;
}

double median_value(const PlainDataset& ds, std::size_t col) {
  auto v = present_values(ds, col);
  std::sort(v.begin(), v.end(), std::greater<>());
  return v[(v.size() + 1) / 2 - 1];
}

std::vector<double> regression_fit(const PlainDataset& ds, std::size_t col) {
  const std::size_t m = ds.cols;
  auto design_row = [&](std::size_t i) {
    std::vector<double> x{1.0};
    for (std::size_t j = 0; j < m; ++j) {
      if (j != col) x.push_back(ds.at(i, j));
    }
    return x;
  };
  std::vector<double> gram(m * m, 0.0), moment(m, 0.0);
  for (std::size_t i = 0; i < ds.rows; ++i) {
    if (!ds.present(i, col)) continue;
    const auto x = design_row(i);
    for (std::size_t r = 0; r < m; ++r) {
      for (std::size_t c = 0; c < m; ++c) gram[r * m + c] += x[r] * x[c];
      moment[r] += x[r] * ds.at(i, col);
    }
  }
  const auto beta = oracle_lu_solve(gram, moment, m);
  std::vector<double> fitted(ds.rows);
  for (std::size_t i = 0; i < ds.rows; ++i) {
    const auto x = design_row(i);
    fitted[i] = std::inner_product(x.begin(), x.end(), beta.begin(), 0.0);
  }
  return fitted;
}

}  // namespace

std::vector<double> oracle_lu_solve(std::vector<double> a, std::vector<double> b,
                                    std::size_t m) {
  if (a.size() != m * m || b.size() != m) throw std::invalid_argument("lu: bad shapes");
  std::vector<double> lower(m * m, 0.0), upper(m * m, 0.0);
  for (std::size_t k = 0; k < m; ++k) {
    for (std::size_t j = k; j < m; ++j) {
      double acc = a[k * m + j];
      for (std::size_t s = 0; s < k; ++s) acc -= lower[k * m + s] * upper[s * m + j];
      upper[k * m + j] = acc;
    }
    const double pivot = upper[k * m + k];
    if (pivot == 0.0) throw IllConditioned("zero pivot at " + std::to_string(k));
    lower[k * m + k] = 1.0;
    for (std::size_t i = k + 1; i < m; ++i) {
      double acc = a[i * m + k];
      for (std::size_t s = 0; s < k; ++s) acc -= lower[i * m + s] * upper[s * m + k];
      lower[i * m + k] = acc / pivot;
    }
  }
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t s = 0; s < i; ++s) b[i] -= lower[i * m + s] * b[s];
  }
  std::vector<double> x(m);
  for (std::size_t i = m; i-- > 0;) {
    double acc = b[i];
    for (std::size_t j = i + 1; j < m; ++j) acc -= upper[i * m + j] * x[j];
    x[i] = acc / upper[i * m + i];
  }
  return x;
}

std::vector<double> oracle_knn_predict(const PlainDataset& ds, std::size_t col,
                                       std::size_t k) {
  const std::size_t n = ds.rows;
  if (k < 1) throw std::invalid_argument("knn: k must be positive");
  const ColumnSpec& spec = ds.schema[col];
  std::vector<double> out(n);
  std::vector<std::pair<double, std::size_t>> cand;
  for (std::size_t i = 0; i < n; ++i) {
    cand.clear();
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i || !ds.present(j, col)) continue;
      double d = 0;
      for (std::size_t c = 0; c < ds.cols; ++c) {
        if (c == col) continue;
        const double diff = ds.at(i, c) - ds.at(j, c);
        d += diff * diff;
      }
      cand.emplace_back(d, j);
    }
    if (cand.size() < k) throw std::invalid_argument("knn: fewer candidates than k");
    std::partial_sort(cand.begin(), cand.begin() + static_cast<std::ptrdiff_t>(k), cand.end());

    switch (spec.kind) {
      case ColumnKind::kNumeric: {
        double s = 0;
        for (std::size_t r = 0; r < k; ++r) s += ds.at(cand[r].second, col);
        out[i] = s / static_cast<double>(k);
        break;
      }
      case ColumnKind::kBinary: {
        double s = 0;
        for (std::size_t r = 0; r < k; ++r) s += ds.at(cand[r].second, col);
        out[i] = 2 * s >= static_cast<double>(k) ? 1.0 : 0.0;
        break;
      }
      case ColumnKind::kCategorical: {
        std::vector<std::size_t> counts(static_cast<std::size_t>(spec.classes), 0);
        for (std::size_t r = 0; r < k; ++r) {
          const auto label = static_cast<std::size_t>(ds.at(cand[r].second, col));
          if (label < counts.size()) ++counts[label];
        }
        out[i] = static_cast<double>(
            std::max_element(counts.begin(), counts.end()) - counts.begin());
        break;
      }
    }
  }
  return out;
}

PlainDataset oracle_impute(const PlainDataset& ds, Method method, std::size_t col,
                           std::size_t k) {
  if (col >= ds.cols) throw std::out_of_range("column out of range");
  std::vector<double> fill;
  switch (method) {
    case Method::kMean:
      if (ds.schema[col].kind == ColumnKind::kCategorical) {
        throw std::invalid_argument("mean imputation is undefined for multi-class columns");
      }
      fill.assign(ds.rows, mean_value(ds, col));
      break;
    case Method::kMedian: fill.assign(ds.rows, median_value(ds, col)); break;
    case Method::kRegression: fill = regression_fit(ds, col); break;
    case Method::kKnn: fill = oracle_knn_predict(ds, col, k); break;
  }
  PlainDataset out = ds;
  for (std::size_t i = 0; i < ds.rows; ++i) {
    if (!ds.present(i, col)) {
      out.at(i, col) = fill[i];
      out.mask[i * ds.cols + col] = 1;
    }
  }
  return out;
}

double mae(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("mae: size mismatch");
  if (a.empty()) return 0.0;
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::fabs(a[i] - b[i]);
  return s / static_cast<double>(a.size());
}

double max_abs_err(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("max_abs_err: size mismatch");
  double m = 0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::fabs(a[i] - b[i]));
  return m;
}

}  // namespace ppimpute
