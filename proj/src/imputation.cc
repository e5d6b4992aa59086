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

#include "ppimpute/imputation.h"

#include <bit>
#include <cmath>
#include <string>

#include "ppimpute/gadgets.h"
#include "ppimpute/sort.h"

namespace ppimpute {

const char* method_name(Method m) {
  switch (m) {
    case Method::kMean: return "mean";
    case Method::kMedian: return "median";
    case Method::kRegression: return "regression";
    case Method::kKnn: return "knn";
  }
  return "?";
}

Method parse_method(std::string_view name) {
  for (Method m : {Method::kMean, Method::kMedian, Method::kRegression, Method::kKnn}) {
    if (name == method_name(m)) return m;
  }
  throw std::invalid_argument("unknown method '" + std::string(name) + "'");
}

namespace mpc {
namespace {

// Sits below every representable data value; padding for missing entries.
constexpr RingElement kLowest = RingElement{0} - (RingElement{1} << 62);
// Pushes an invalid kNN candidate past every valid one.
constexpr RingElement kPenalty = RingElement{1} << 62;

void require_column(const SharedDataset& ds, std::size_t col) {
  ds.validate();
  if (col >= ds.cols()) {
    throw std::out_of_range("column " + std::to_string(col) + " out of range");
  }
}

// data[:, col] += (1 - a) * fill, avail[:, col] = 1.
SharedDataset fill_missing(Party& party, const SharedDataset& ds, std::size_t col,
                           const SharedVector& fill) {
  const SharedVector a = ds.avail.column(col);
  const SharedVector x = ds.data.column(col);
  SharedDataset out = ds;
  out.data.set_column(col, add(x, multiply_int(party, one_minus(party, a), fill)));
  out.avail.set_column(col, public_constant(party, 1, ds.rows()));
  return out;
}

SharedVector scalar(RingElement v) { return SharedVector(std::vector<RingElement>{v}); }

}  // namespace

void SharedDataset::validate() const {
  if (data.rows != avail.rows || data.cols != avail.cols) {
    throw ShapeError("data and availability shapes differ");
  }
  if (schema.size() != data.cols) {
    throw ShapeError("schema has " + std::to_string(schema.size()) + " columns, data " +
                     std::to_string(data.cols));
  }
}

SharedDataset mean_impute(Party& party, const SharedDataset& ds, std::size_t col) {
  require_column(ds, col);
  const ColumnKind kind = ds.schema[col].kind;
  if (kind == ColumnKind::kCategorical) {
    throw std::invalid_argument("mean imputation is undefined for multi-class columns");
  }
  const SharedVector x = ds.data.column(col);
  const SharedVector a = ds.avail.column(col);
  const int f = party.frac_bits();

  DivideOptions opts;
  opts.signed_numerator = true;
  SharedVector value = divide(party, scalar(sum(x)), scalar(sum(a) << f), opts);
  if (kind == ColumnKind::kBinary) {
    // Mode of a 0/1 column: 1 iff the mean reaches one half.
    const SharedVector half = public_constant(party, party.fx().one() >> 1, 1);
    value = shift_left(compare(party, value, half), f);
  }
  return fill_missing(party, ds, col, broadcast(value, ds.rows()));
}

SharedDataset median_impute(Party& party, const SharedDataset& ds, std::size_t col) {
  require_column(ds, col);
  const std::size_t n = ds.rows();
  const SharedVector x = ds.data.column(col);
  const SharedVector a = ds.avail.column(col);

  // Missing entries become the lowest value and sink to the tail.
  const SharedVector keys = add(x, local_affine(party, a, RingElement{0} - kLowest, kLowest));
  const SharedVector sorted = sort_desc(party, keys, SharedMatrix(n, 0)).first;

  // 1-indexed position ceil(count / 2) = floor((count + 1) / 2). The divisor
  // is public, so an exact one-bit truncation does the division.
  const SharedVector count = scalar(sum(a));
  const SharedVector position = truncate(party, local_affine(party, count, 1, 1), 1);

  std::vector<RingElement> index(n);
  for (std::size_t i = 0; i < n; ++i) index[i] = i + 1;
  const SharedVector hit = equals(party, public_vector(party, index), broadcast(position, n));
  const SharedVector median = scalar(sum(multiply_int(party, hit, sorted)));
  return fill_missing(party, ds, col, broadcast(median, n));
}

namespace {

struct LuFactors {
  SharedMatrix lower, upper;
};

LuFactors lu_factor(Party& party, const SharedMatrix& a, const LuOptions& opts) {
  const std::size_t m = a.rows;
  DivideOptions div;
  div.signed_numerator = true;
  div.signed_divisor = !opts.positive_pivots;

  SharedMatrix lower(m, m), upper(m, m);
  for (std::size_t k = 0; k < m; ++k) {
    // Row k of U and column k of L share one batched product.
    std::vector<std::pair<std::size_t, std::size_t>> targets;  // (row, col)
    SharedVector lhs, rhs;
    for (std::size_t j = k; j < m; ++j) targets.emplace_back(k, j);
    for (std::size_t i = k + 1; i < m; ++i) targets.emplace_back(i, k);
    for (const auto& [i, j] : targets) {
      for (std::size_t s = 0; s < std::min(i, k); ++s) {
        lhs.values.push_back(lower.at(i, s));
        rhs.values.push_back(upper.at(s, j));
      }
    }
    const SharedVector prod = multiply(party, lhs, rhs);
    std::size_t at = 0;
    SharedVector numer;
    for (const auto& [i, j] : targets) {
      RingElement acc = a.at(i, j);
      for (std::size_t s = 0; s < std::min(i, k); ++s) acc -= prod[at++];
      if (i == k) {
        upper.at(i, j) = acc;
      } else {
        numer.values.push_back(acc);
      }
    }
    lower.at(k, k) = party.is_p0() ? party.fx().one() : 0;

    const SharedVector pivot = scalar(upper.at(k, k));
    if (opts.debug_pivots && !party.is_helper()) {
      const auto mine = pivot.values;
      party.send(party.peer(), MsgTag::kDebugReveal, mine);
      const RingElement value = mine[0] + party.recv(party.peer(), MsgTag::kDebugReveal, 1)[0];
      if (std::fabs(decode(value, party.fx())) < std::ldexp(1.0, 4 - party.frac_bits())) {
        throw IllConditioned("pivot " + std::to_string(k) + " is " +
                             std::to_string(decode(value, party.fx())));
      }
    }
    if (!numer.values.empty()) {
      const SharedVector l = divide(party, numer, broadcast(pivot, numer.size()), div);
      for (std::size_t i = k + 1; i < m; ++i) lower.at(i, k) = l[i - k - 1];
    }
  }
  return {std::move(lower), std::move(upper)};
}

SharedVector lu_substitute(Party& party, const LuFactors& lu, const SharedVector& b,
                           const LuOptions& opts) {
  const std::size_t m = b.size();
  const SharedMatrix& lower = lu.lower;
  const SharedMatrix& upper = lu.upper;
  DivideOptions div;
  div.signed_numerator = true;
  div.signed_divisor = !opts.positive_pivots;

  // L z = b, column by column.
  SharedVector z = b;
  for (std::size_t s = 0; s + 1 < m; ++s) {
    SharedVector lhs, rhs;
    for (std::size_t i = s + 1; i < m; ++i) {
      lhs.values.push_back(lower.at(i, s));
      rhs.values.push_back(z[s]);
    }
    const SharedVector prod = multiply(party, lhs, rhs);
    for (std::size_t i = s + 1; i < m; ++i) z[i] -= prod[i - s - 1];
  }

  // U x = z, from the bottom.
  SharedVector x(m);
  for (std::size_t i = m; i-- > 0;) {
    x[i] = divide(party, scalar(z[i]), scalar(upper.at(i, i)), div)[0];
    if (i == 0) break;
    SharedVector lhs, rhs;
    for (std::size_t r = 0; r < i; ++r) {
      lhs.values.push_back(upper.at(r, i));
      rhs.values.push_back(x[i]);
    }
    const SharedVector prod = multiply(party, lhs, rhs);
    for (std::size_t r = 0; r < i; ++r) z[r] -= prod[r];
  }
  return x;
}

}  // namespace

SharedVector lu_solve(Party& party, const SharedMatrix& a, const SharedVector& b,
                      const LuOptions& opts) {
  if (a.rows != a.cols || b.size() != a.rows) throw ShapeError("lu_solve: bad shapes");
  if (opts.refine_shift < 0 || opts.refine_shift > 20) {
    throw std::invalid_argument("lu_solve: refine_shift out of range");
  }
  const LuFactors lu = lu_factor(party, a, opts);
  SharedVector x = lu_substitute(party, lu, b, opts);
  // Iterative refinement on the same factors. The residual is small, so it is
  // scaled up before the solve to get below the fixed-point floor.
  for (int step = 0; step < opts.refine_steps; ++step) {
    const SharedMatrix ax = matmul(party, a, SharedMatrix(x.size(), 1, x.values));
    const SharedVector r = shift_left(sub(b, ax.flatten()), opts.refine_shift);
    x = add(x, truncate(party, lu_substitute(party, lu, r, opts), opts.refine_shift));
  }
  return x;
}

SharedDataset regression_impute(Party& party, const SharedDataset& ds, std::size_t col,
                                const LuOptions& opts) {
  require_column(ds, col);
  const std::size_t n = ds.rows(), m = ds.cols();
  const SharedVector a = ds.avail.column(col);

  // Design matrix: intercept then every other column.
  SharedMatrix design(n, m);
  for (std::size_t i = 0; i < n; ++i) {
    design.at(i, 0) = party.is_p0() ? party.fx().one() : 0;
    std::size_t c = 1;
    for (std::size_t j = 0; j < m; ++j) {
      if (j != col) design.at(i, c++) = ds.data.at(i, j);
    }
  }

  // Rows with a missing target are zeroed, intercept included.
  SharedVector row_mask(n * m);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) row_mask[i * m + j] = a[i];
  }
  const SharedMatrix masked(n, m, multiply_int(party, row_mask, design.flatten()).values);

  SharedMatrix rhs(n, m + 1);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) rhs.at(i, j) = masked.at(i, j);
    rhs.at(i, m) = ds.data.at(i, col);
  }
  const SharedMatrix normal = matmul(party, masked.transpose(), rhs);
  SharedMatrix gram(m, m);
  SharedVector moment(m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) gram.at(i, j) = normal.at(i, j);
    moment[i] = normal.at(i, m);
  }

  // A Gram matrix is positive semidefinite, so nonzero pivots are positive.
  LuOptions lu = opts;
  lu.positive_pivots = true;
  const SharedVector beta = lu_solve(party, gram, moment, lu);
  const SharedMatrix fitted = matmul(party, design, SharedMatrix(m, 1, beta.values));
  return fill_missing(party, ds, col, fitted.flatten());
}

SharedVector knn_predict(Party& party, const SharedDataset& ds, std::size_t col,
                         std::size_t k) {
  require_column(ds, col);
  const std::size_t n = ds.rows(), m = ds.cols();
  if (k < 1 || k >= n) throw std::invalid_argument("knn: need 1 <= k < n");
  const int f = party.frac_bits();

  SharedMatrix features(n, m - 1);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t c = 0;
    for (std::size_t j = 0; j < m; ++j) {
      if (j != col) features.at(i, c++) = ds.data.at(i, j);
    }
  }
  // Squared distances at scale 2^(2f), exact for the encoded inputs.
  const SharedMatrix gram = matmul_int(party, features, features.transpose());

  // Keys: -(d << t) - j ranks nearer rows first and equal distances by index.
  // Rows lacking the target, and the query row itself, take the penalty.
  const int t = std::max(1, static_cast<int>(std::bit_width(n - 1)));
  const SharedVector a = ds.avail.column(col);
  const SharedVector labels = ds.data.column(col);
  SharedMatrix keys(n, n), payload(n, n);
  const bool p0 = party.is_p0();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const RingElement d = gram.at(i, i) + gram.at(j, j) - 2 * gram.at(i, j);
      RingElement key = RingElement{0} - (d << t);
      if (i == j) {
        if (p0) key -= kPenalty;
      } else {
        key += a[j] * kPenalty;
        if (p0) key -= kPenalty;
      }
      if (p0) key -= j;
      keys.at(i, j) = key;
      payload.at(i, j) = labels[j];
    }
  }
  select_rows_desc(party, keys, {&payload}, k);

  const ColumnSpec& spec = ds.schema[col];
  SharedVector top_sum(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t c = 0; c < k; ++c) top_sum[i] += payload.at(i, c);
  }

  switch (spec.kind) {
    case ColumnKind::kNumeric: {
      // Average via a public reciprocal with s extra bits.
      const int s = 24 + static_cast<int>(std::bit_width(k - 1));
      const auto recip = static_cast<RingElement>(std::llround(std::ldexp(1.0, s) / k));
      SharedVector scaled(n);
      for (std::size_t i = 0; i < n; ++i) scaled[i] = top_sum[i] * recip;
      return truncate(party, scaled, s);
    }
    case ColumnKind::kBinary: {
      // Majority: sum >= k/2, ties to 1.
      const SharedVector half = public_constant(party, k << (f - 1), n);
      return shift_left(compare(party, top_sum, half), f);
    }
    case ColumnKind::kCategorical: {
      const std::size_t classes = static_cast<std::size_t>(spec.classes);
      if (classes < 2) throw std::invalid_argument("categorical column needs >= 2 classes");
      SharedVector top(n * k * classes), probe(n * k * classes);
      for (std::size_t c = 0; c < classes; ++c) {
        for (std::size_t i = 0; i < n; ++i) {
          for (std::size_t r = 0; r < k; ++r) {
            const std::size_t at = (c * n + i) * k + r;
            top[at] = payload.at(i, r);
            probe[at] = p0 ? static_cast<RingElement>(c) << f : 0;
          }
        }
      }
      const SharedVector hits = equals(party, top, probe);
      std::vector<SharedVector> counts(classes, SharedVector(n));
      for (std::size_t c = 0; c < classes; ++c) {
        for (std::size_t i = 0; i < n; ++i) {
          for (std::size_t r = 0; r < k; ++r) counts[c][i] += hits[(c * n + i) * k + r];
        }
      }
      // Tournament: a later class must strictly beat the current best.
      SharedVector best = counts[0];
      SharedVector winner(n);
      for (std::size_t c = 1; c < classes; ++c) {
        const SharedVector take = one_minus(party, compare(party, best, counts[c]));
        const SharedVector cand = public_constant(party, static_cast<RingElement>(c), n);
        const SharedVector next = multiplex(party, concat({&take, &take}),
                                            concat({&counts[c], &cand}),
                                            concat({&best, &winner}));
        best = slice(next, 0, n);
        winner = slice(next, n, n);
      }
      return shift_left(winner, f);
    }
  }
  throw std::logic_error("unhandled column kind");
}

SharedDataset knn_impute(Party& party, const SharedDataset& ds, std::size_t col,
                         std::size_t k) {
  return fill_missing(party, ds, col, knn_predict(party, ds, col, k));
}

SharedDataset impute(Party& party, const SharedDataset& ds, Method method, std::size_t col,
                     std::size_t k, const LuOptions& lu) {
  switch (method) {
    case Method::kMean: return mean_impute(party, ds, col);
    case Method::kMedian: return median_impute(party, ds, col);
    case Method::kRegression: return regression_impute(party, ds, col, lu);
    case Method::kKnn: return knn_impute(party, ds, col, k);
  }
  throw std::logic_error("unhandled method");
}

}  // namespace mpc
}  // namespace ppimpute
