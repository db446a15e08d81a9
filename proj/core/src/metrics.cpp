// Copyright 2026 The svme Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "svme/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace svme {
namespace {

constexpr const char* kCsvHeader =
    "mechanism,regime,k,d,n,epsilon,delta,beta,linf,mse,bytes_per_client,"
    "wall_ms,runs,master_seed,status";

// CSV fields are comma-separated and unquoted; free-text fields get
// commas and newlines replaced so rows stay machine-splittable.
std::string sanitize_field(std::string s) {
  for (char& c : s) {
    if (c == ',' || c == '\n' || c == '\r') c = ';';
  }
  return s;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  fields.push_back(cur);
  return fields;
}

double parse_double(const std::string& s, const char* what) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0') {
    throw std::runtime_error(std::string("metrics csv: bad ") + what +
                             " field '" + s + "'");
  }
  return v;
}

std::uint64_t parse_u64(const std::string& s, const char* what) {
  char* end = nullptr;
  const unsigned long long v = std::strtoull(s.c_str(), &end, 10);
  if (end == s.c_str() || *end != '\0') {
    throw std::runtime_error(std::string("metrics csv: bad ") + what +
                             " field '" + s + "'");
  }
  return static_cast<std::uint64_t>(v);
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  // Shortest decimal form that parses back to the same bits.
  char buf[64];
  for (int prec = 1; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) return buf;
  }
  return buf;
}

double linf_error(std::span<const double> truth,
                  std::span<const double> estimate) {
  if (truth.size() != estimate.size() || truth.empty()) {
    throw std::invalid_argument(
        "linf_error: arrays must be non-empty and equal length");
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    worst = std::max(worst, std::fabs(truth[i] - estimate[i]));
  }
  return worst;
}

double mse(std::span<const double> truth, std::span<const double> estimate) {
  if (truth.size() != estimate.size() || truth.empty()) {
    throw std::invalid_argument(
        "mse: arrays must be non-empty and equal length");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const double diff = truth[i] - estimate[i];
    sum += diff * diff;
  }
  return sum / static_cast<double>(truth.size());
}

std::vector<std::uint32_t> select_probes_all(std::uint64_t d) {
  std::vector<std::uint32_t> probes(d);
  std::iota(probes.begin(), probes.end(), 0u);
  return probes;
}

std::vector<std::uint32_t> select_probes_top(std::span<const double> truth,
                                             std::uint64_t m) {
  if (m == 0) throw std::invalid_argument("select_probes_top: m == 0");
  std::vector<std::uint32_t> order(truth.size());
  std::iota(order.begin(), order.end(), 0u);
  std::sort(order.begin(), order.end(),
            [&](std::uint32_t a, std::uint32_t b) {
              const double fa = std::fabs(truth[a]);
              const double fb = std::fabs(truth[b]);
              if (fa != fb) return fa > fb;
              return a < b;  // ties toward the smaller index
            });
  order.resize(std::min<std::uint64_t>(m, order.size()));
  return order;
}

std::string metrics_csv_header() { return kCsvHeader; }

std::string to_csv_row(const MetricsRow& row) {
  std::ostringstream out;
  out << sanitize_field(row.mechanism) << ',' << sanitize_field(row.regime)
      << ',' << row.k << ',' << row.d << ',' << row.n << ','
      << format_double(row.epsilon) << ',' << format_double(row.delta) << ','
      << format_double(row.beta) << ',' << format_double(row.linf) << ','
      << format_double(row.mse) << ',' << format_double(row.bytes_per_client)
      << ',' << format_double(row.wall_ms) << ',' << row.runs << ','
      << row.master_seed << ',' << sanitize_field(row.status);
  return out.str();
}

void append_metrics_csv(const std::string& path,
                        std::span<const MetricsRow> rows) {
  namespace fs = std::filesystem;
  bool need_header = true;
  if (fs::exists(path) && fs::file_size(path) > 0) {
    std::ifstream in(path);
    std::string first;
    std::getline(in, first);
    if (!first.empty() && first.back() == '\r') first.pop_back();
    if (first != kCsvHeader) {
      throw std::runtime_error(
          "append_metrics_csv: existing file has a different schema header");
    }
    need_header = false;
  }
  std::ofstream out(path, std::ios::app);
  if (!out) {
    throw std::runtime_error("append_metrics_csv: cannot open " + path);
  }
  if (need_header) out << kCsvHeader << '\n';
  for (const MetricsRow& row : rows) out << to_csv_row(row) << '\n';
}

std::vector<MetricsRow> read_metrics_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("read_metrics_csv: cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) {
    throw std::runtime_error("read_metrics_csv: empty file");
  }
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kCsvHeader) {
    throw std::runtime_error("read_metrics_csv: unknown schema header");
  }
  std::vector<MetricsRow> rows;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::vector<std::string> f = split_csv_line(line);
    if (f.size() != 15) {
      throw std::runtime_error("read_metrics_csv: wrong field count in '" +
                               line + "'");
    }
    MetricsRow row;
    row.mechanism = f[0];
    row.regime = f[1];
    row.k = parse_u64(f[2], "k");
    row.d = parse_u64(f[3], "d");
    row.n = parse_u64(f[4], "n");
    row.epsilon = parse_double(f[5], "epsilon");
    row.delta = parse_double(f[6], "delta");
    row.beta = parse_double(f[7], "beta");
    row.linf = parse_double(f[8], "linf");
    row.mse = parse_double(f[9], "mse");
    row.bytes_per_client = parse_double(f[10], "bytes_per_client");
    row.wall_ms = parse_double(f[11], "wall_ms");
    row.runs = parse_u64(f[12], "runs");
    row.master_seed = parse_u64(f[13], "master_seed");
    row.status = f[14];
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace svme
