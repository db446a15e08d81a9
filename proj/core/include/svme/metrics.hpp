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

// Error metrics, probe selection, and the append-only metrics CSV.

#ifndef SVME_METRICS_HPP_
#define SVME_METRICS_HPP_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace svme {

// One benchmark result row.  `status` is "ok" for a completed cell; a
// cell whose parameters are unsatisfiable is recorded (not dropped) with
// status "failed: <reason>" and zeroed metrics.
struct MetricsRow {
  std::string mechanism;
  std::string regime;
  std::uint64_t k = 0;
  std::uint64_t d = 0;
  std::uint64_t n = 0;
  double epsilon = 0.0;
  double delta = 0.0;
  double beta = 0.0;
  double linf = 0.0;
  double mse = 0.0;
  double bytes_per_client = 0.0;
  double wall_ms = 0.0;
  std::uint64_t runs = 0;
  std::uint64_t master_seed = 0;
  std::string status = "ok";
};

// Shortest round-trip-exact decimal form of a double (deterministic,
// locale-independent).
std::string format_double(double v);

// max_i |truth[i] - estimate[i]| over probe-aligned arrays.
double linf_error(std::span<const double> truth,
                  std::span<const double> estimate);

// (1/m) * sum_i (truth[i] - estimate[i])^2 over the m probed coordinates.
double mse(std::span<const double> truth, std::span<const double> estimate);

// Probe sets: every coordinate, or the m coordinates with the largest
// |truth| (ties broken toward the smaller index).
std::vector<std::uint32_t> select_probes_all(std::uint64_t d);
std::vector<std::uint32_t> select_probes_top(std::span<const double> truth,
                                             std::uint64_t m);

// CSV schema v1: the header row below is the schema marker; appending to
// a file with any other header is refused.
std::string metrics_csv_header();
std::string to_csv_row(const MetricsRow& row);

// Appends rows, writing the header first when the file is new or empty.
void append_metrics_csv(const std::string& path,
                        std::span<const MetricsRow> rows);

// Reads a metrics CSV back (used by tests and the audit tooling).
std::vector<MetricsRow> read_metrics_csv(const std::string& path);

}  // namespace svme

#endif  // SVME_METRICS_HPP_
