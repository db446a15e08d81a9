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

// End-to-end acceptance suite.  Each numbered check prints exactly one
//   [PASS] N. <what was checked, with the measured numbers>
// or [FAIL] line, and the process exits nonzero if any check fails.
// Statistical checks run on pinned seeds so the suite is reproducible;
// each check also enforces its own wall-clock budget.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "svme/baselines.hpp"
#include "svme/data.hpp"
#include "svme/experiment.hpp"
#include "svme/hashing.hpp"
#include "svme/mechanism.hpp"
#include "svme/metrics.hpp"
#include "svme/random.hpp"
#include "svme/transport.hpp"
#include "svme/types.hpp"
#include "svme/warmup.hpp"

namespace {

using svme::BlhReport;
using svme::ClientReport;
using svme::Dataset;
using svme::Entry;
using svme::MechanismParams;
using svme::MetricsRow;
using svme::PrivacyBudget;
using svme::Regime;
using svme::Rng;
using svme::SparseVector;

int g_failed = 0;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

// Runs one numbered check, appends the elapsed time, and enforces the
// wall-clock budget (limit_s = 0 means no budget).
void run_check(int num, double limit_s, const std::function<Outcome()>& fn) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome out;
  try {
    out = fn();
  } catch (const std::exception& ex) {
    out.pass = false;
    out.detail = std::string("unexpected exception: ") + ex.what();
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  if (limit_s > 0.0 && secs > limit_s) {
    out.pass = false;
    out.detail += "; over time budget of " + fmt(limit_s) + "s";
  }
  std::printf("[%s] %d. %s [%ss]\n", out.pass ? "PASS" : "FAIL", num,
              out.detail.c_str(), fmt(secs).c_str());
  std::fflush(stdout);
  if (!out.pass) ++g_failed;
}

// ---- Monte-Carlo band helpers -------------------------------------------

// Runs `reps` replicates; each gets its own generator derived from `salt`.
template <typename Fn>
std::vector<std::vector<double>> collect(std::uint64_t reps,
                                         std::uint64_t salt, Fn fn) {
  std::vector<std::vector<double>> out;
  out.reserve(reps);
  for (std::uint64_t r = 0; r < reps; ++r) {
    Rng rng(svme::seed_chain(salt, r));
    out.push_back(fn(rng));
  }
  return out;
}

struct BandCheck {
  int probes = 0;
  int violations = 0;
  double worst_z = 0.0;  // |mean - truth| in standard-error units
};

// The replicate mean at every probe must sit within three standard errors
// of the ground truth.
BandCheck check_bands(const std::vector<double>& truth,
                      const std::vector<std::uint32_t>& probes,
                      const std::vector<std::vector<double>>& per_rep) {
  BandCheck bc;
  const double reps = static_cast<double>(per_rep.size());
  for (std::size_t i = 0; i < probes.size(); ++i) {
    double mean = 0.0;
    for (const auto& row : per_rep) mean += row[i];
    mean /= reps;
    double ss = 0.0;
    for (const auto& row : per_rep) ss += (row[i] - mean) * (row[i] - mean);
    const double se = std::sqrt(ss / (reps - 1.0)) / std::sqrt(reps);
    const double gap = std::fabs(mean - truth[probes[i]]);
    const double z = se > 0.0 ? gap / se
                              : (gap == 0.0
                                     ? 0.0
                                     : std::numeric_limits<double>::infinity());
    bc.worst_z = std::fmax(bc.worst_z, z);
    ++bc.probes;
    if (z > 3.0) ++bc.violations;
  }
  return bc;
}

// Six heaviest coordinates plus two (near-)empty ones.
std::vector<std::uint32_t> band_probes(const std::vector<double>& truth) {
  std::vector<std::uint32_t> probes = svme::select_probes_top(truth, 6);
  std::vector<std::uint32_t> rest;
  for (std::uint32_t x = 0; x < truth.size(); ++x) {
    if (std::find(probes.begin(), probes.end(), x) == probes.end()) {
      rest.push_back(x);
    }
  }
  std::sort(rest.begin(), rest.end(), [&](std::uint32_t a, std::uint32_t b) {
    return std::fabs(truth[a]) < std::fabs(truth[b]);
  });
  for (std::size_t i = 0; i < rest.size() && probes.size() < 8; ++i) {
    probes.push_back(rest[i]);
  }
  return probes;
}

// ---- random vectors on the 1/64 grid ------------------------------------
//
// Grid values make every bin sum exact in double arithmetic, so the
// sensitivity checks below can compare against L with no tolerance.

SparseVector grid_vector(std::uint32_t d, std::uint32_t k, Rng& rng) {
  std::vector<Entry> entries;
  const std::uint32_t stride = d / k;
  for (std::uint32_t j = 0; j < k; ++j) {
    const double value =
        (static_cast<double>(rng.next_below(129)) - 64.0) / 64.0;
    if (value == 0.0) continue;
    entries.push_back(
        {j * stride + static_cast<std::uint32_t>(rng.next_below(stride)),
         value});
  }
  return SparseVector(d, k, std::move(entries));
}

// Replaces `changes` stored values with fresh grid values (possibly zero,
// which removes the coordinate).  Each change moves at most 2 in L1, so
// the result is (2 * changes)-neighboring on the grid, exactly.
SparseVector perturb_grid(const SparseVector& v, std::uint32_t changes,
                          Rng& rng) {
  std::vector<Entry> entries(v.entries().begin(), v.entries().end());
  for (std::uint32_t c = 0; c < changes && !entries.empty(); ++c) {
    const std::size_t slot = rng.next_below(entries.size());
    const double value =
        (static_cast<double>(rng.next_below(129)) - 64.0) / 64.0;
    if (value == 0.0) {
      entries.erase(entries.begin() + static_cast<std::ptrdiff_t>(slot));
    } else {
      entries[slot].value = value;
    }
  }
  return SparseVector(v.dim(), v.sparsity(), std::move(entries));
}

const MetricsRow* find_row(const std::vector<MetricsRow>& rows,
                           const std::string& mechanism,
                           const std::string& regime, std::uint64_t k,
                           std::uint64_t n) {
  for (const MetricsRow& row : rows) {
    if (row.mechanism == mechanism && row.regime == regime && row.k == k &&
        row.n == n) {
      return &row;
    }
  }
  return nullptr;
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// ---- 1. unbiasedness of every estimator ---------------------------------

Outcome check_unbiasedness() {
  constexpr std::uint64_t kReps = 200;
  constexpr std::uint32_t kN = 2000, kD = 100, kK = 8;
  const Dataset real = svme::gen_synthetic(kN, kD, kK, 1.4, 0.5, 0.3, 101);
  const Dataset bin8 = svme::gen_synthetic(kN, kD, kK, 1.4, 1.0, 0.0, 102);
  const Dataset bin1 = svme::gen_synthetic(kN, kD, 1, 1.4, 1.0, 0.0, 103);
  const std::vector<double> truth_real = svme::true_mean(real);
  const std::vector<double> truth_bin8 = svme::true_mean(bin8);
  const std::vector<double> truth_bin1 = svme::true_mean(bin1);
  const std::vector<std::uint32_t> probes_real = band_probes(truth_real);
  const std::vector<std::uint32_t> probes_bin8 = band_probes(truth_bin8);
  const std::vector<std::uint32_t> probes_bin1 = band_probes(truth_bin1);

  int total_probes = 0;
  int violations = 0;
  double worst_z = 0.0;
  std::string worst_name = "-";
  const auto absorb = [&](const char* name, const BandCheck& bc) {
    total_probes += bc.probes;
    violations += bc.violations;
    if (bc.worst_z > worst_z) {
      worst_z = bc.worst_z;
      worst_name = name;
    }
  };

  // Main mechanism, one run per parameter regime.
  struct RegimeCase {
    const char* name;
    PrivacyBudget budget;
  };
  const RegimeCase regime_cases[] = {
      {"main/event", {1.0, 0.0, 2.0}},
      {"main/pure-L", {1.0, 0.0, 1.5}},
      {"main/approx-L", {1.0, 0.05, 6.0}},
      {"main/user", {1.0, 0.0, 16.0}},
  };
  std::uint64_t salt = 0xACCE5501;
  for (const RegimeCase& rc : regime_cases) {
    const MechanismParams params =
        svme::select_params(kK, kD, kN, rc.budget, 0.05);
    const auto per_rep = collect(kReps, salt++, [&](Rng& rng) {
      std::vector<ClientReport> reports;
      reports.reserve(kN);
      for (const SparseVector& v : real.vectors) {
        const std::uint64_t seed_h = rng.next_seed40();
        const std::uint64_t seed_s = rng.next_seed40();
        reports.push_back(svme::client_encode(v, params, seed_h, seed_s, rng));
      }
      std::vector<double> est(probes_real.size());
      for (std::size_t i = 0; i < probes_real.size(); ++i) {
        est[i] = svme::server_estimate(reports, probes_real[i], params);
      }
      return est;
    });
    absorb(rc.name, check_bands(truth_real, probes_real, per_rep));
  }

  // Bucketed warmup on the binary dataset.
  absorb("bucketed",
         check_bands(truth_bin8, probes_bin8,
                     collect(kReps, salt++, [&](Rng& rng) {
                       std::vector<svme::BucketedReport> reports;
                       reports.reserve(kN);
                       for (const SparseVector& v : bin8.vectors) {
                         const std::vector<std::uint32_t> items =
                             svme::support_items(v);
                         const std::uint64_t bucket_seed = rng.next_seed40();
                         reports.push_back(svme::bucketed_encode(
                             items, kD, kK, 1.0, bucket_seed, rng));
                       }
                       std::vector<double> est(probes_bin8.size());
                       for (std::size_t i = 0; i < probes_bin8.size(); ++i) {
                         est[i] = svme::bucketed_aggregate(
                             reports, probes_bin8[i], kD, kK, 1.0);
                       }
                       return est;
                     })));

  // One-item oracle on the 1-sparse binary dataset.
  absorb("blh", check_bands(truth_bin1, probes_bin1,
                            collect(kReps, salt++, [&](Rng& rng) {
                              std::vector<BlhReport> reports;
                              reports.reserve(kN);
                              for (const SparseVector& v : bin1.vectors) {
                                const std::uint32_t item =
                                    v.entries()[0].index;
                                const std::uint64_t seed = rng.next_seed40();
                                reports.push_back(svme::blh_encode(
                                    item, kD, 1.0, seed, rng));
                              }
                              std::vector<double> est(probes_bin1.size());
                              for (std::size_t i = 0; i < probes_bin1.size();
                                   ++i) {
                                est[i] = svme::blh_aggregate(
                                    reports, probes_bin1[i], kD, 1.0);
                              }
                              return est;
                            })));

  // k-fold repetition on the binary dataset.
  absorb("kfold", check_bands(truth_bin8, probes_bin8,
                              collect(kReps, salt++, [&](Rng& rng) {
                                std::vector<BlhReport> flat;
                                flat.reserve(kN * kK);
                                for (const SparseVector& v : bin8.vectors) {
                                  const auto part =
                                      svme::kfold_encode(v, 1.0, rng);
                                  flat.insert(flat.end(), part.begin(),
                                              part.end());
                                }
                                std::vector<double> est(probes_bin8.size());
                                for (std::size_t i = 0;
                                     i < probes_bin8.size(); ++i) {
                                  est[i] = svme::kfold_aggregate(
                                      flat, probes_bin8[i], kD, kK, 1.0);
                                }
                                return est;
                              })));

  // Slot sampling on the real-valued dataset.
  absorb("sampling", check_bands(truth_real, probes_real,
                                 collect(kReps, salt++, [&](Rng& rng) {
                                   std::vector<svme::SamplingReport> reports;
                                   reports.reserve(kN);
                                   for (const SparseVector& v : real.vectors) {
                                     reports.push_back(
                                         svme::sampling_encode(v, 1.0, rng));
                                   }
                                   std::vector<double> est(probes_real.size());
                                   for (std::size_t i = 0;
                                        i < probes_real.size(); ++i) {
                                     est[i] = svme::sampling_aggregate(
                                         reports, probes_real[i], kD, kK, 1.0);
                                   }
                                   return est;
                                 })));

  // Naive dense perturbation on the real-valued dataset.
  const PrivacyBudget event_budget{1.0, 0.0, 2.0};
  absorb("naive",
         check_bands(truth_real, probes_real,
                     collect(kReps, salt++, [&](Rng& rng) {
                       std::vector<std::vector<double>> dense;
                       dense.reserve(kN);
                       for (const SparseVector& v : real.vectors) {
                         dense.push_back(
                             svme::naive_encode(v, event_budget, rng));
                       }
                       const std::vector<double> means =
                           svme::naive_aggregate(dense);
                       std::vector<double> est(probes_real.size());
                       for (std::size_t i = 0; i < probes_real.size(); ++i) {
                         est[i] = means[probes_real[i]];
                       }
                       return est;
                     })));

  Outcome out;
  out.pass = violations == 0;
  out.detail = "unbiasedness: 9 estimators x " + std::to_string(kReps) +
               " replicates, " + std::to_string(violations) + " of " +
               std::to_string(total_probes) +
               " probe means outside 3 standard errors (worst " +
               fmt(worst_z) + "se at " + worst_name + ")";
  return out;
}

// ---- 2. deterministic bin-sum sensitivity -------------------------------

Outcome check_sensitivity() {
  constexpr std::uint32_t kD = 1024, kK = 16;
  Rng rng(0xACCE5502);

  const MechanismParams event_params =
      svme::select_params(kK, kD, 1000, {1.0, 0.0, 2.0}, 0.05);

  MechanismParams general_params;
  general_params.bins = 8;
  general_params.clip_range = std::numeric_limits<double>::infinity();
  general_params.noise_scale = 6.0;
  general_params.budget = {1.0, 0.05, 6.0};
  general_params.k = kK;
  general_params.d = kD;
  general_params.n = 1000;
  general_params.beta = 0.05;
  general_params.regime = Regime::kApproxL;

  int bad_pairs = 0;
  double worst_event = 0.0;
  double worst_general = 0.0;
  for (int pair = 0; pair < 500; ++pair) {
    const SparseVector v = grid_vector(kD, kK, rng);
    if (v.entries().empty()) continue;
    const SparseVector vp_event = perturb_grid(v, 1, rng);
    const auto event_audit =
        svme::sensitivity_audit(v, vp_event, event_params, 100, rng);
    worst_event = std::fmax(worst_event, event_audit.max_l1);
    if (event_audit.max_l1 > 2.0) ++bad_pairs;

    const SparseVector vp_gen = perturb_grid(v, 3, rng);
    const auto general_audit =
        svme::sensitivity_audit(v, vp_gen, general_params, 100, rng);
    worst_general = std::fmax(worst_general, general_audit.max_l1);
    if (general_audit.max_l1 > 6.0) ++bad_pairs;
  }

  Outcome out;
  out.pass = bad_pairs == 0;
  out.detail =
      "bin-sum sensitivity: 1000 neighboring pairs x 100 seeds, " +
      std::to_string(bad_pairs) + " exceed L (worst event sum " +
      fmt(worst_event) + " of 2, worst general sum " + fmt(worst_general) +
      " of 6, exact arithmetic)";
  return out;
}

// ---- 3. squeeze-bound tail rate ------------------------------------------

Outcome check_squeeze_tail() {
  constexpr std::uint32_t kD = 1024, kK = 64;
  MechanismParams params;
  params.bins = 4;
  params.clip_range = std::numeric_limits<double>::infinity();
  params.noise_scale = 16.0;
  params.budget = {1.0, 0.05, 16.0};
  params.k = kK;
  params.d = kD;
  params.n = 1000;
  params.beta = 0.05;
  params.regime = Regime::kApproxL;

  Rng rng(0xACCE5503);
  const std::uint32_t stride = kD / kK;
  double tail_trials = 0.0;
  double threshold = 0.0;
  for (int pair = 0; pair < 10; ++pair) {
    std::vector<Entry> entries;
    for (std::uint32_t j = 0; j < kK; ++j) {
      const double sign = rng.next_bernoulli(0.5) ? 0.5 : -0.5;
      entries.push_back(
          {j * stride + static_cast<std::uint32_t>(rng.next_below(stride)),
           sign});
    }
    std::vector<Entry> flipped = entries;
    for (std::uint32_t j = 0; j < 16; ++j) {
      flipped[j].value = -flipped[j].value;  // |delta| = 1 each, L1 = 16
    }
    const SparseVector v(kD, kK, std::move(entries));
    const SparseVector vp(kD, kK, std::move(flipped));
    const auto audit = svme::sensitivity_audit(v, vp, params, 1000, rng);
    tail_trials += audit.tail_rate * 1000.0;
    threshold = audit.threshold;
  }
  const double tail = tail_trials / 10000.0;
  const double bound = 0.05 + 3.0 * std::sqrt(0.05 / 10000.0);

  Outcome out;
  out.pass = tail <= bound;
  out.detail = "squeeze bound at k=64, b=4, L=16, delta=0.05: tail rate " +
               fmt(tail) + " over 10000 seeds <= " + fmt(bound) +
               " (threshold " + fmt(threshold) + ")";
  return out;
}

// ---- 4-7. scaling laws via the experiment runner -------------------------

svme::ExperimentConfig scaling_base() {
  svme::ExperimentConfig cfg;
  cfg.master_seed = 2026;
  cfg.mechanisms = {"main"};
  cfg.epsilon_values = {1.0};
  cfg.d_values = {512};
  cfg.reps = 10;
  cfg.probe.kind = svme::ProbeKind::kAll;
  cfg.record_timing = false;
  cfg.threads = 8;
  return cfg;
}

Outcome check_event_k_independence() {
  svme::ExperimentConfig cfg = scaling_base();
  cfg.regimes = {"event"};
  cfg.k_values = {4, 256};
  cfg.n_values = {10000};
  const auto rows = svme::run_experiment(cfg);
  const MetricsRow* low = find_row(rows, "main", "event", 4, 10000);
  const MetricsRow* high = find_row(rows, "main", "event", 256, 10000);
  Outcome out;
  if (!low || !high || low->status != "ok" || high->status != "ok") {
    out.detail = "event-level k sweep did not produce two ok rows";
    return out;
  }
  out.pass = high->linf <= 1.5 * low->linf;
  out.detail = "event-level error flat in k: linf(k=256) " + fmt(high->linf) +
               " <= 1.5 x linf(k=4) " + fmt(1.5 * low->linf) +
               " (10-run averages, n=10000, d=512)";
  return out;
}

Outcome check_user_sqrt_k() {
  svme::ExperimentConfig cfg = scaling_base();
  cfg.regimes = {"user"};
  cfg.k_values = {16, 256};
  cfg.n_values = {10000};
  const auto rows = svme::run_experiment(cfg);
  const MetricsRow* low = find_row(rows, "main", "user", 16, 10000);
  const MetricsRow* high = find_row(rows, "main", "user", 256, 10000);
  Outcome out;
  if (!low || !high || low->status != "ok" || high->status != "ok" ||
      low->linf <= 0.0) {
    out.detail = "user-level k sweep did not produce two ok rows";
    return out;
  }
  const double ratio = high->linf / low->linf;
  out.pass = ratio >= 2.5 && ratio <= 6.0;
  out.detail = "user-level error grows like sqrt(k): linf(k=256)/linf(k=16) = " +
               fmt(ratio) + " in [2.5, 6] (sqrt(256/16) = 4)";
  return out;
}

Outcome check_root_n() {
  svme::ExperimentConfig cfg = scaling_base();
  cfg.regimes = {"event"};
  cfg.k_values = {64};
  cfg.n_values = {10000, 40000};
  const auto rows = svme::run_experiment(cfg);
  const MetricsRow* small = find_row(rows, "main", "event", 64, 10000);
  const MetricsRow* large = find_row(rows, "main", "event", 64, 40000);
  Outcome out;
  if (!small || !large || small->status != "ok" || large->status != "ok" ||
      small->linf <= 0.0) {
    out.detail = "n sweep did not produce two ok rows";
    return out;
  }
  const double ratio = large->linf / small->linf;
  out.pass = ratio >= 0.35 && ratio <= 0.70;
  out.detail = "error shrinks like 1/sqrt(n): linf(n=40000)/linf(n=10000) = " +
               fmt(ratio) + " in [0.35, 0.7]";
  return out;
}

Outcome check_beats_strawmen() {
  svme::ExperimentConfig cfg;
  cfg.master_seed = 2027;
  cfg.mechanisms = {"main", "kfold", "sampling"};
  cfg.regimes = {"event", "user"};
  cfg.k_values = {64};
  cfg.n_values = {10000};
  cfg.d_values = {10000};
  cfg.epsilon_values = {1.0};
  cfg.reps = 10;
  cfg.probe = {svme::ProbeKind::kTop, 100};
  cfg.record_timing = false;
  cfg.threads = 8;
  cfg.sigma = 0.0;  // binary values so the discrete baselines apply
  cfg.mu = 1.0;
  const auto rows = svme::run_experiment(cfg);
  const MetricsRow* main_event = find_row(rows, "main", "event", 64, 10000);
  const MetricsRow* main_user = find_row(rows, "main", "user", 64, 10000);
  const MetricsRow* kfold = find_row(rows, "kfold", "event", 64, 10000);
  const MetricsRow* sampling = find_row(rows, "sampling", "user", 64, 10000);
  Outcome out;
  for (const MetricsRow* row : {main_event, main_user, kfold, sampling}) {
    if (!row || row->status != "ok" || row->linf <= 0.0) {
      out.detail = "strawman comparison did not produce four ok rows";
      return out;
    }
  }
  const double event_ratio = main_event->linf / kfold->linf;
  const double user_ratio = main_user->linf / sampling->linf;
  out.pass = event_ratio <= 0.6 && user_ratio <= 0.6;
  out.detail = "beats strawmen at n=10000, d=10000, k=64: main/kfold linf "
               "ratio " +
               fmt(event_ratio) + " <= 0.6 (event), main/sampling ratio " +
               fmt(user_ratio) + " <= 0.6 (user)";
  return out;
}

// ---- 8. communication accounting -----------------------------------------

Outcome check_accounting() {
  const Dataset tiny = svme::gen_synthetic(4, 10000, 64, 1.4, 1.0, 0.3, 7);
  const auto encode_with = [&](const PrivacyBudget& budget) {
    const MechanismParams params =
        svme::select_params(64, 10000, 100000, budget, 0.05);
    Rng rng(1);
    const std::uint64_t seed_h = rng.next_seed40();
    const std::uint64_t seed_s = rng.next_seed40();
    return std::make_pair(
        params,
        svme::client_encode(tiny.vectors[0], params, seed_h, seed_s, rng));
  };

  const auto [user_params, user_report] = encode_with({1.0, 0.0, 128.0});
  const std::uint64_t user_bytes =
      svme::comm_cost(user_report, svme::Accounting::kPaperConvention);
  const auto [event_params, event_report] = encode_with({1.0, 0.0, 2.0});
  const std::uint64_t event_bytes =
      svme::comm_cost(event_report, svme::Accounting::kPaperConvention);

  Outcome out;
  out.pass = user_params.bins == 1 && user_bytes == 9 &&
             event_bytes == 5 + 4 * event_params.bins;
  out.detail = "per-client payload accounting: user level b=1 -> " +
               std::to_string(user_bytes) + " bytes (expected 9); event "
               "level b=" +
               std::to_string(event_params.bins) + " -> " +
               std::to_string(event_bytes) + " bytes (expected " +
               std::to_string(5 + 4 * event_params.bins) + ")";
  return out;
}

// ---- 9. bucket survival rate ----------------------------------------------

Outcome check_survival() {
  constexpr std::uint32_t kD = 100, kK = 16;
  constexpr std::uint32_t kItem = 7;
  const std::vector<std::uint32_t> items = {kItem};
  Rng rng(0xACCE5509);
  std::uint64_t survived = 0;
  constexpr std::uint64_t kTrials = 100000;
  std::vector<std::uint32_t> fillers(kK - 1);
  for (std::uint64_t t = 0; t < kTrials; ++t) {
    const svme::BinHash bucket_hash(rng.next_seed40(), kD, kK);
    for (auto& f : fillers) {
      f = static_cast<std::uint32_t>(rng.next_below(kK));
    }
    const auto plan = svme::bucket_plan(items, kD, kK, bucket_hash, fillers);
    if (plan[bucket_hash.bin_of(kItem)] == kItem) ++survived;
  }
  const double rate = static_cast<double>(survived) / kTrials;
  const double expected = svme::survival_probability(kK);

  Outcome out;
  out.pass = std::fabs(rate - expected) <= 0.01;
  out.detail = "bucket survival at k=16: observed " + fmt(rate) +
               " vs (15/16)^15 = " + fmt(expected) + " (+/- 0.01, " +
               std::to_string(kTrials) + " seeds)";
  return out;
}

// ---- 10. stochastic rounding unbiasedness ---------------------------------

Outcome check_dsc() {
  Rng rng(0xACCE5510);
  constexpr std::uint64_t kDraws = 100000;
  double worst_ratio = 0.0;
  double worst_x = 0.0;
  bool pass = true;
  for (int i = 0; i < 20; ++i) {
    const double x = -50.0 + 100.0 * rng.next_unit();
    double sum = 0.0;
    for (std::uint64_t t = 0; t < kDraws; ++t) {
      sum += static_cast<double>(svme::dsc(x, rng));
    }
    const double mean = sum / static_cast<double>(kDraws);
    const double tol = 0.01 * (1.0 + std::fabs(x) / 10.0);
    const double ratio = std::fabs(mean - x) / tol;
    if (ratio > worst_ratio) {
      worst_ratio = ratio;
      worst_x = x;
    }
    if (ratio > 1.0) pass = false;
  }
  Outcome out;
  out.pass = pass;
  out.detail = "stochastic rounding unbiased: 20 reals in [-50,50] x " +
               std::to_string(kDraws) + " draws, worst |mean - x| at " +
               fmt(worst_ratio * 100.0) + "% of tolerance (x = " +
               fmt(worst_x) + ")";
  return out;
}

// ---- 11. one-item oracle error bound ---------------------------------------

Outcome check_blh_bound() {
  constexpr std::uint32_t kN = 100000, kD = 100;
  const double bound = 3.0 * std::sqrt(std::log(kD / 0.05) / kN);
  int runs_ok = 0;
  double worst = 0.0;
  for (int run = 0; run < 10; ++run) {
    const Dataset data = svme::gen_synthetic(
        kN, kD, 1, 1.4, 1.0, 0.0, svme::seed_chain(0xACCE5511, run));
    const std::vector<double> truth = svme::true_mean(data);
    Rng rng(svme::seed_chain(0xACCE5512, run));
    std::vector<BlhReport> reports;
    reports.reserve(kN);
    for (const SparseVector& v : data.vectors) {
      const std::uint32_t item = v.entries()[0].index;
      const std::uint64_t seed = rng.next_seed40();
      reports.push_back(svme::blh_encode(item, kD, 1.0, seed, rng));
    }
    std::vector<double> est(kD);
    for (std::uint32_t x = 0; x < kD; ++x) {
      est[x] = svme::blh_aggregate(reports, x, kD, 1.0);
    }
    const double linf = svme::linf_error(truth, est);
    worst = std::fmax(worst, linf);
    if (linf <= bound) ++runs_ok;
  }
  Outcome out;
  out.pass = runs_ok >= 9;
  out.detail = "one-item oracle linf bound at n=100000, d=100: " +
               std::to_string(runs_ok) + "/10 runs under " + fmt(bound) +
               " (worst run " + fmt(worst) + ")";
  return out;
}

// ---- 12. density-ratio bound ------------------------------------------------

Outcome check_density_ratio() {
  Rng rng(0xACCE5512);
  double worst = 0.0;
  double worst_eps = 1.0;
  bool pass = true;
  for (int pair = 0; pair < 1000; ++pair) {
    const bool tight_budget = pair % 2 == 0;
    const double epsilon = tight_budget ? 1.0 : 0.5;
    const double l1 = tight_budget ? 2.0 : 6.0;
    constexpr std::size_t kBins = 8;
    std::vector<double> bins(kBins), diff(kBins);
    double diff_l1 = 0.0;
    for (std::size_t j = 0; j < kBins; ++j) {
      bins[j] = 6.0 * rng.next_unit() - 3.0;
      diff[j] = 2.0 * rng.next_unit() - 1.0;
      diff_l1 += std::fabs(diff[j]);
    }
    std::vector<double> bins_p(kBins);
    for (std::size_t j = 0; j < kBins; ++j) {
      bins_p[j] = bins[j] - diff[j] * (l1 / diff_l1);  // ||B - B'||_1 = L
    }
    std::vector<std::vector<double>> probes(16);
    for (auto& z : probes) {
      z.resize(kBins);
      for (double& zj : z) zj = 12.0 * rng.next_unit() - 6.0;
    }
    const double ratio = svme::density_ratio_check(bins, bins_p, l1 / epsilon,
                                                   epsilon, probes);
    if (ratio / epsilon > worst) {
      worst = ratio / epsilon;
      worst_eps = epsilon;
    }
    if (ratio > epsilon + 1e-9) pass = false;
  }
  Outcome out;
  out.pass = pass;
  out.detail =
      "Laplace density log-ratio over 1000 neighboring bin pairs: worst "
      "ratio/epsilon = " +
      fmt(worst) + " <= 1 + 1e-9 (at epsilon " + fmt(worst_eps) + ")";
  return out;
}

// ---- 13. byte-identical reproducibility -------------------------------------

Outcome check_reproducibility() {
  const std::string cfg_text =
      "# pinned determinism check\n"
      "master_seed = 424242\n"
      "mechanisms = main, kfold, sampling, blh, naive\n"
      "regimes = event, user\n"
      "k = 4\n"
      "n = 400\n"
      "d = 64\n"
      "epsilon = 0.5, 1\n"
      "reps = 3\n"
      "probe = top:16\n"
      "record_timing = false\n"
      "sigma = 0\n"
      "mu = 1\n"
      "threads = 1\n";
  svme::ExperimentConfig cfg = svme::parse_config_text(cfg_text);
  const auto rows1 = svme::run_experiment(cfg);
  const auto rows2 = svme::run_experiment(cfg);
  svme::ExperimentConfig threaded = cfg;
  threaded.threads = 8;
  const auto rows3 = svme::run_experiment(threaded);

  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path();
  const fs::path paths[] = {dir / "svme_accept_run1.csv",
                            dir / "svme_accept_run2.csv",
                            dir / "svme_accept_run3.csv"};
  const std::vector<MetricsRow>* all_rows[] = {&rows1, &rows2, &rows3};
  std::string bytes[3];
  for (int i = 0; i < 3; ++i) {
    fs::remove(paths[i]);
    svme::append_metrics_csv(paths[i].string(), *all_rows[i]);
    bytes[i] = slurp(paths[i]);
    fs::remove(paths[i]);
  }

  Outcome out;
  out.pass = !bytes[0].empty() && bytes[0] == bytes[1] && bytes[0] == bytes[2];
  out.detail = "pinned config reproducibility: " +
               std::to_string(rows1.size()) + " rows, " +
               std::to_string(bytes[0].size()) +
               " CSV bytes identical across two runs and 1 vs 8 threads" +
               (out.pass ? "" : " -- MISMATCH");
  return out;
}

}  // namespace

int main() {
  run_check(1, 60.0, check_unbiasedness);
  run_check(2, 10.0, check_sensitivity);
  run_check(3, 10.0, check_squeeze_tail);
  run_check(4, 120.0, check_event_k_independence);
  run_check(5, 120.0, check_user_sqrt_k);
  run_check(6, 180.0, check_root_n);
  run_check(7, 300.0, check_beats_strawmen);
  run_check(8, 5.0, check_accounting);
  run_check(9, 5.0, check_survival);
  run_check(10, 5.0, check_dsc);
  run_check(11, 30.0, check_blh_bound);
  run_check(12, 5.0, check_density_ratio);
  run_check(13, 0.0, check_reproducibility);
  return g_failed == 0 ? 0 : 1;
}
