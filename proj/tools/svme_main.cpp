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

// svme command-line benchmark harness.
//
//   svme gen     --n 1000 --d 256 --k 8 --out data.txt
//   svme ingest  --csv ratings.csv --k 8 --lo 1 --hi 5 --out data.txt
//   svme run     --config sweep.cfg --out metrics.csv
//   svme audit   --k 64 --epsilon 1 --l1 2 --pairs 100 --trials 100
//
// `run` reads a key-value config (see ExperimentConfig for keys and
// defaults) and appends one CSV row per benchmark cell.  `audit` draws
// random L-neighboring vector pairs and reports the worst observed bin
// sensitivity and Laplace density log-ratio against their bounds.

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "svme/data.hpp"
#include "svme/experiment.hpp"
#include "svme/mechanism.hpp"
#include "svme/metrics.hpp"
#include "svme/random.hpp"
#include "svme/types.hpp"

namespace {

// Random k-sparse vector on the 1/64 grid (exact in floating point, so
// bin-sum comparisons in the audit are exact too).
svme::SparseVector random_grid_vector(std::uint32_t d, std::uint32_t k,
                                      svme::Rng& rng) {
  std::vector<svme::Entry> entries;
  std::uint32_t idx = 0;
  const std::uint32_t stride = d / k;
  for (std::uint32_t j = 0; j < k; ++j, idx += stride) {
    const double v =
        (static_cast<double>(rng.next_below(128)) - 64.0) / 64.0;  // [-1, 1)
    if (v == 0.0) continue;
    entries.push_back({idx + static_cast<std::uint32_t>(
                                 rng.next_below(stride)),
                       v});
  }
  return svme::SparseVector(d, k, std::move(entries));
}

// Perturbs `v` into an L-neighboring vector on the same grid: grid steps
// of 1/64 are moved between coordinates until the L1 budget is spent.
svme::SparseVector neighbor_on_grid(const svme::SparseVector& v, double l1,
                                    svme::Rng& rng) {
  std::vector<svme::Entry> entries(v.entries().begin(), v.entries().end());
  // Budget in grid steps; stay strictly within L to be safe under ties.
  auto steps = static_cast<std::int64_t>(std::floor(l1 * 64.0));
  while (steps > 0 && !entries.empty()) {
    const std::size_t slot = rng.next_below(entries.size());
    const std::int64_t take = 1 + static_cast<std::int64_t>(rng.next_below(
                                      static_cast<std::uint64_t>(steps)));
    const double delta = static_cast<double>(take) / 64.0;
    double& value = entries[slot].value;
    const double moved = (value > 0.0) ? std::fmin(delta, value + 1.0)
                                       : std::fmin(delta, 1.0 - value);
    value += (value > 0.0) ? -moved : moved;
    steps -= static_cast<std::int64_t>(std::llround(moved * 64.0));
    if (value == 0.0) entries.erase(entries.begin() + slot);
    if (moved == 0.0) break;
  }
  return svme::SparseVector(v.dim(), v.sparsity(), std::move(entries));
}

int run_audit(std::uint64_t k, std::uint64_t d, double epsilon, double delta,
              double l1, std::uint64_t pairs, std::uint64_t trials,
              std::uint64_t seed) {
  svme::PrivacyBudget budget;
  budget.epsilon = epsilon;
  budget.delta = delta;
  budget.neighbor_l1 = l1;
  const svme::MechanismParams params =
      svme::select_params(k, d, /*n=*/1000, budget, /*beta=*/0.05);

  svme::Rng rng(seed);
  double worst_l1 = 0.0;
  double worst_tail = 0.0;
  double worst_log_ratio = 0.0;
  for (std::uint64_t p = 0; p < pairs; ++p) {
    const svme::SparseVector v = random_grid_vector(
        static_cast<std::uint32_t>(d), static_cast<std::uint32_t>(k), rng);
    const svme::SparseVector vp = neighbor_on_grid(v, l1, rng);
    const svme::SensitivityAudit audit =
        svme::sensitivity_audit(v, vp, params, trials, rng);
    worst_l1 = std::fmax(worst_l1, audit.max_l1);
    worst_tail = std::fmax(worst_tail, audit.tail_rate);

    const svme::BinHash h(rng.next_seed40(),
                          static_cast<std::uint32_t>(d),
                          static_cast<std::uint32_t>(params.bins));
    const svme::SignHash s(rng.next_seed40(), static_cast<std::uint32_t>(d));
    const std::vector<double> bins_v = svme::fold_bins(v, params, h, s);
    const std::vector<double> bins_vp = svme::fold_bins(vp, params, h, s);
    std::vector<std::vector<double>> probes(16);
    for (auto& z : probes) {
      z.resize(params.bins);
      for (double& zj : z) zj = 8.0 * rng.next_unit() - 4.0;
    }
    worst_log_ratio =
        std::fmax(worst_log_ratio,
                  svme::density_ratio_check(bins_v, bins_vp,
                                            params.noise_scale, epsilon,
                                            probes));
  }

  std::printf("regime            %s\n", svme::regime_name(params.regime));
  std::printf("bins              %" PRIu64 "\n", params.bins);
  std::printf("noise_scale       %s\n",
              svme::format_double(params.noise_scale).c_str());
  std::printf("max bin L1 shift  %s (bound %s)\n",
              svme::format_double(worst_l1).c_str(),
              svme::format_double(l1).c_str());
  std::printf("tail rate         %s (delta %s)\n",
              svme::format_double(worst_tail).c_str(),
              svme::format_double(delta).c_str());
  std::printf("max log ratio     %s (bound %s)\n",
              svme::format_double(worst_log_ratio).c_str(),
              svme::format_double(epsilon).c_str());
  const bool ok = worst_l1 <= l1 + 1e-9 &&
                  worst_log_ratio <= epsilon + 1e-9 &&
                  (delta <= 0.0 || worst_tail <= delta + 0.05);
  std::printf("audit             %s\n", ok ? "ok" : "VIOLATION");
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"k-sparse vector mean estimation benchmark harness"};
  app.require_subcommand(1);

  // --- gen -------------------------------------------------------------
  auto* gen = app.add_subcommand("gen", "generate a synthetic dataset file");
  std::uint64_t gen_n = 1000, gen_d = 1024, gen_k = 16, gen_seed = 1;
  double gen_zipf = 1.4, gen_mu = 1.0, gen_sigma = 0.3;
  std::string gen_out;
  gen->add_option("--n", gen_n, "number of clients")->check(CLI::PositiveNumber);
  gen->add_option("--d", gen_d, "domain size")->check(CLI::PositiveNumber);
  gen->add_option("--k", gen_k, "per-client sparsity")
      ->check(CLI::PositiveNumber);
  gen->add_option("--zipf-s", gen_zipf, "zipf skew exponent (default 1.4)");
  gen->add_option("--mu", gen_mu, "value mean (default 1.0)");
  gen->add_option("--sigma", gen_sigma, "value stddev (default 0.3)");
  gen->add_option("--seed", gen_seed, "master seed (default 1)");
  gen->add_option("--out", gen_out, "output dataset file")->required();

  // --- ingest ----------------------------------------------------------
  auto* ingest = app.add_subcommand("ingest",
                                    "convert a ratings CSV to a dataset file");
  std::string ingest_csv_path, ingest_out;
  std::uint64_t ingest_k = 16, ingest_seed = 1;
  double ingest_lo = 1.0, ingest_hi = 5.0;
  ingest->add_option("--csv", ingest_csv_path,
                     "input CSV (user_id,item_id,value)")
      ->required();
  ingest->add_option("--k", ingest_k, "per-client sparsity cap")
      ->check(CLI::PositiveNumber);
  ingest->add_option("--lo", ingest_lo, "rating range lower bound");
  ingest->add_option("--hi", ingest_hi, "rating range upper bound");
  ingest->add_option("--seed", ingest_seed,
                     "seed for sampling over-full users");
  ingest->add_option("--out", ingest_out, "output dataset file")->required();

  // --- run ---------------------------------------------------------–---
  auto* run = app.add_subcommand("run", "run a benchmark sweep to a CSV");
  std::string run_config, run_out;
  unsigned run_threads = 0;
  run->add_option("--config", run_config, "key-value config file")->required();
  run->add_option("--out", run_out, "metrics CSV to append to")->required();
  run->add_option("--threads", run_threads,
                  "override the config's thread count");

  // --- audit -------------------------------------------------------–---
  auto* audit = app.add_subcommand(
      "audit", "sensitivity and density-ratio audit of the main mechanism");
  std::uint64_t audit_k = 64, audit_d = 4096, audit_pairs = 100,
                audit_trials = 100, audit_seed = 1;
  double audit_eps = 1.0, audit_delta = 0.0, audit_l1 = 2.0;
  audit->add_option("--k", audit_k, "sparsity")->check(CLI::PositiveNumber);
  audit->add_option("--d", audit_d, "domain size")
      ->check(CLI::PositiveNumber);
  audit->add_option("--epsilon", audit_eps, "privacy budget epsilon");
  audit->add_option("--delta", audit_delta, "privacy budget delta");
  audit->add_option("--l1", audit_l1, "neighboring L1 distance L");
  audit->add_option("--pairs", audit_pairs, "number of random vector pairs");
  audit->add_option("--trials", audit_trials, "hash seeds per pair");
  audit->add_option("--seed", audit_seed, "audit seed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) {
      const svme::Dataset data = svme::gen_synthetic(
          gen_n, gen_d, gen_k, gen_zipf, gen_mu, gen_sigma, gen_seed);
      svme::save_dataset(data, gen_out);
      std::printf("wrote %s: n=%" PRIu64 " d=%" PRIu64 " k=%" PRIu64 "\n",
                  gen_out.c_str(), data.n, data.d, data.k);
      return 0;
    }
    if (*ingest) {
      const svme::Dataset data = svme::ingest_csv(
          ingest_csv_path, ingest_k, ingest_lo, ingest_hi, ingest_seed);
      svme::save_dataset(data, ingest_out);
      std::printf("wrote %s: n=%" PRIu64 " d=%" PRIu64 " k=%" PRIu64 "\n",
                  ingest_out.c_str(), data.n, data.d, data.k);
      return 0;
    }
    if (*run) {
      svme::ExperimentConfig cfg = svme::parse_config_file(run_config);
      if (run_threads > 0) cfg.threads = run_threads;
      const std::vector<svme::MetricsRow> rows = svme::run_experiment(cfg);
      svme::append_metrics_csv(run_out, rows);
      std::uint64_t ok = 0;
      for (const svme::MetricsRow& r : rows) {
        if (r.status == "ok") ++ok;
      }
      std::printf("appended %zu rows to %s (%" PRIu64 " ok)\n", rows.size(),
                  run_out.c_str(), ok);
      return 0;
    }
    if (*audit) {
      return run_audit(audit_k, audit_d, audit_eps, audit_delta, audit_l1,
                       audit_pairs, audit_trials, audit_seed);
    }
  } catch (const std::exception& ex) {
    std::fprintf(stderr, "error: %s\n", ex.what());
    return 1;
  }
  return 0;
}
