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

#include "ppimpute/dataset.h"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

namespace ppimpute {
namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        field += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        field += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(std::move(field));
      field.clear();
    } else if (c != '\r') {
      field += c;
    }
  }
  out.push_back(std::move(field));
  return out;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

bool parse_double(const std::string& s, double* out) {
  const char* first = s.data();
  const char* last = s.data() + s.size();
  const auto res = std::from_chars(first, last, *out);
  return res.ec == std::errc() && res.ptr == last && std::isfinite(*out);
}

}  // namespace

PlainDataset::PlainDataset(std::size_t r, DatasetSchema s)
    : rows(r), cols(s.size()), data(r * s.size(), 0.0), mask(r * s.size(), 1),
      schema(std::move(s)) {}

void PlainDataset::set_missing(std::size_t i, std::size_t j) {
  at(i, j) = 0.0;
  mask[i * cols + j] = 0;
}

std::vector<double> PlainDataset::column(std::size_t j) const {
  std::vector<double> out(rows);
  for (std::size_t i = 0; i < rows; ++i) out[i] = at(i, j);
  return out;
}

std::size_t PlainDataset::missing_count(std::size_t j) const {
  std::size_t n = 0;
  for (std::size_t i = 0; i < rows; ++i) n += !present(i, j);
  return n;
}

PlainDataset PlainDataset::select_rows(const std::vector<std::size_t>& order) const {
  PlainDataset out(order.size(), schema);
  for (std::size_t r = 0; r < order.size(); ++r) {
    const std::size_t src = order[r];
    if (src >= rows) throw DatasetError("row index out of range");
    std::copy_n(data.begin() + src * cols, cols, out.data.begin() + r * cols);
    std::copy_n(mask.begin() + src * cols, cols, out.mask.begin() + r * cols);
  }
  return out;
}

void PlainDataset::validate() const {
  if (cols != schema.size() || data.size() != rows * cols || mask.size() != rows * cols) {
    throw DatasetError("dataset shape is inconsistent with its schema");
  }
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (!mask[i] && data[i] != 0.0) throw DatasetError("missing cell holds a value");
  }
}

PlainDataset load_csv(const std::string& path, const DatasetSchema& schema) {
  std::ifstream in(path);
  if (!in) throw DatasetError("cannot open " + path);
  std::string line;
  if (!std::getline(in, line) || trim(line).empty()) throw DatasetError(path + " is empty");

  const auto header = split_csv_line(line);
  std::vector<std::size_t> target(header.size());
  std::vector<bool> seen(schema.size(), false);
  for (std::size_t h = 0; h < header.size(); ++h) {
    const std::string name = trim(header[h]);
    std::size_t idx;
    try {
      idx = schema.index_of(name);
    } catch (const std::out_of_range&) {
      throw DatasetError("unknown column '" + name + "' in " + path);
    }
    if (seen[idx]) throw DatasetError("duplicate column '" + name + "'");
    seen[idx] = true;
    target[h] = idx;
  }
  for (std::size_t j = 0; j < schema.size(); ++j) {
    if (!seen[j]) throw DatasetError("missing column '" + schema[j].name + "' in " + path);
  }

  std::vector<std::vector<std::string>> records;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    auto fields = split_csv_line(line);
    if (fields.size() != header.size()) {
      throw DatasetError("line " + std::to_string(records.size() + 2) + " has " +
                         std::to_string(fields.size()) + " fields, expected " +
                         std::to_string(header.size()));
    }
    records.push_back(std::move(fields));
  }
  if (records.empty()) throw DatasetError(path + " has no data rows");

  PlainDataset ds(records.size(), schema);
  for (std::size_t i = 0; i < records.size(); ++i) {
    for (std::size_t h = 0; h < header.size(); ++h) {
      const std::size_t j = target[h];
      const ColumnSpec& spec = schema[j];
      const std::string value = trim(records[i][h]);
      if (value.empty()) {
        ds.set_missing(i, j);
        continue;
      }
      double v = 0;
      const bool numeric = parse_double(value, &v);
      if (spec.kind == ColumnKind::kBinary && !numeric) {
        const auto& pos = spec.positive_labels;
        v = std::find(pos.begin(), pos.end(), value) != pos.end() ? 1.0 : 0.0;
      } else if (!numeric) {
        throw DatasetError("unparseable value '" + value + "' in column " + spec.name +
                           " at line " + std::to_string(i + 2));
      } else if (spec.kind == ColumnKind::kBinary && v != 0.0 && v != 1.0) {
        throw DatasetError("binary column " + spec.name + " holds " + value);
      }
      ds.at(i, j) = v;
    }
  }
  return ds;
}

PlainDataset synth_dataset(std::size_t n, std::uint64_t seed) {
  if (n < 10) throw std::invalid_argument("synth_dataset needs n >= 10");
  Prg rng(Prg::derive_seed(seed, "synthetic-diabetes"));
  std::normal_distribution<double> normal(0.0, 1.0);
  auto bernoulli = [&](double p) { return rng.uniform_real() < p ? 1.0 : 0.0; };
  auto round_to = [](double v, double step) { return std::round(v / step) * step; };

  const DatasetSchema schema = DatasetSchema::diabetes();
  PlainDataset ds(n, schema);
  for (std::size_t i = 0; i < n; ++i) {
    const double gender = bernoulli(0.41);
    const double age = std::round(18 + 72 * rng.uniform_real());
    const double hypertension = bernoulli(age > 60 ? 0.2 : 0.05);
    const double heart = bernoulli(age > 60 ? 0.1 : 0.02);
    const double smoking = bernoulli(0.3);
    const double bmi = round_to(std::clamp(27.3 + 6.0 * normal(rng), 15.0, 50.0), 0.01);
    const double hba1c = round_to(std::clamp(5.5 + 1.0 * normal(rng), 3.5, 9.0), 0.1);
    const double glucose =
        std::round(std::clamp(25.0 * hba1c + 0.3 * age - 15.0 + 8.0 * normal(rng), 70.0, 300.0));
    const double risk = 1.0 / (1.0 + std::exp(-(2.0 * (hba1c - 6.5) + 0.02 * (glucose - 160))));
    const double diabetes = bernoulli(risk);
    const double row[] = {gender, age,   hypertension, heart,   smoking,
                          bmi,    hba1c, glucose,      diabetes};
    std::copy(std::begin(row), std::end(row), ds.data.begin() + i * ds.cols);
  }
  return ds;
}

PlainDataset inject_missing(const PlainDataset& ds, std::size_t col) {
  if (col >= ds.cols) throw std::out_of_range("column out of range");
  PlainDataset out = ds;
  for (std::size_t i = 9; i < out.rows; i += 10) out.set_missing(i, col);
  return out;
}

PlainDataset subsample(const PlainDataset& ds, std::size_t n, Prg& rng) {
  if (n > ds.rows) {
    throw DatasetError("cannot draw " + std::to_string(n) + " rows from " +
                       std::to_string(ds.rows));
  }
  std::vector<std::size_t> idx(ds.rows);
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = i + rng.uniform(ds.rows - i);
    std::swap(idx[i], idx[j]);
  }
  idx.resize(n);
  return ds.select_rows(idx);
}

std::uint64_t dataset_hash(const PlainDataset& ds) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&](std::uint64_t v) {
    for (int b = 0; b < 8; ++b) {
      h ^= (v >> (8 * b)) & 0xff;
      h *= 0x100000001b3ULL;
    }
  };
  mix(ds.rows);
  mix(ds.cols);
  for (double v : ds.data) mix(std::bit_cast<std::uint64_t>(v));
  for (auto m : ds.mask) mix(m);
  for (const auto& c : ds.schema.columns) {
    for (char ch : c.name) mix(static_cast<unsigned char>(ch));
    mix(static_cast<std::uint64_t>(c.kind));
  }
  return h;
}

}  // namespace ppimpute
