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

// The experiment runner: a key-value config describing parameter sweeps
// is expanded into cells; each cell runs `reps` replicates (fresh data
// and fresh noise per replicate, all derived from the master seed) and is
// reported as one averaged metrics row.  Everything is deterministic
// given the config: same file, same seed, same thread count or not —
// byte-identical rows.

#ifndef SVME_EXPERIMENT_HPP_
#define SVME_EXPERIMENT_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "svme/metrics.hpp"
#include "svme/transport.hpp"

namespace svme {

enum class ProbeKind { kAll, kTop };

struct ProbePolicy {
  ProbeKind kind = ProbeKind::kTop;
  std::uint64_t top_m = 100;  // used when kind == kTop
};

// Parsed experiment description.  Defaults reproduce the headline
// synthetic setting: n = 1e5 clients, domain capped at 1e4, k = 64,
// epsilon = 1, beta = 0.05, Zipf(1.4) coordinates with N(1, 0.3) values
// clipped to [-1, 1], top-100 probes, 10 replicates.
struct ExperimentConfig {
  std::uint64_t master_seed = 1;

  // Mechanisms: main, bucketed, blh, kfold, sampling, naive.  The names
  // harmony and pckv are recognized but emit an "n/a" row (external
  // algorithms, intentionally not reimplemented here).
  std::vector<std::string> mechanisms = {"main"};
  // Regime tokens: "event" (L = 2), "user" (L = 2k), or "L=<value>".
  std::vector<std::string> regimes = {"event", "user"};

  std::vector<std::uint64_t> k_values = {64};
  std::vector<std::uint64_t> n_values = {100000};
  std::vector<std::uint64_t> d_values = {10000};
  std::vector<double> epsilon_values = {1.0};

  double delta = 0.0;
  double beta = 0.05;
  std::uint64_t reps = 10;
  ProbePolicy probe;
  bool discretize = false;
  Accounting accounting = Accounting::kPaperConvention;
  unsigned threads = 1;
  // When false, wall_ms is reported as 0 so output is byte-reproducible.
  bool record_timing = true;

  double zipf_s = 1.4;
  double mu = 1.0;
  double sigma = 0.3;

  // When set, this dataset file is used for every replicate (fresh noise
  // only) and the n/d/k sweeps must be absent from the config.
  std::string dataset_path;
};

// Parses "key = value" lines; '#' starts a comment.  List-valued keys
// take comma-separated values.  Unknown or duplicate keys are errors.
ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig parse_config_file(const std::string& path);

// Expands the sweeps and runs every cell, returning one row per
// (n, d, k, epsilon, mechanism, regime) in that nesting order.  Cells
// with unsatisfiable parameters yield a row with status "failed: ..."
// rather than aborting the run.
std::vector<MetricsRow> run_experiment(const ExperimentConfig& config);

}  // namespace svme

#endif  // SVME_EXPERIMENT_HPP_
