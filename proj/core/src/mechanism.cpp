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

#include "svme/mechanism.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "svme/parallel.hpp"

namespace svme {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::uint64_t round_clamp_bins(double raw, std::uint64_t k) {
  if (!std::isfinite(raw)) raw = static_cast<double>(k);
  long long r = std::llround(raw);
  if (r < 1) r = 1;
  if (r > static_cast<long long>(k)) r = static_cast<long long>(k);
  return static_cast<std::uint64_t>(r);
}

// The b = 1 clipped configuration; valid for every neighboring relation
// because clipping deterministically bounds the per-report change by
// 2 * eta.
MechanismParams clipped_candidate(std::uint64_t k, std::uint64_t d,
                                  std::uint64_t n,
                                  const PrivacyBudget& budget, double beta) {
  MechanismParams p;
  p.bins = 1;
  p.clip_range = std::sqrt(2.0 * static_cast<double>(k) *
                           std::log(4.0 * static_cast<double>(n) / beta));
  p.noise_scale = 2.0 * p.clip_range;
  p.budget = budget;
  p.budget.delta = 0.0;  // pure eps-DP
  p.k = k;
  p.d = d;
  p.n = n;
  p.beta = beta;
  p.regime = Regime::kClippedUser;
  return p;
}

void set_small_sample_warning(MechanismParams& p) {
  const double lhs = static_cast<double>(p.n) * static_cast<double>(p.k) /
                     static_cast<double>(p.bins);
  const double rhs = std::log(5.0 * static_cast<double>(p.d) / p.beta);
  p.small_sample_warning = lhs < rhs;
}

}  // namespace

double predicted_error(const MechanismParams& params) {
  return std::sqrt(static_cast<double>(params.k) /
                   static_cast<double>(params.bins)) +
         params.noise_scale / params.budget.epsilon;
}

MechanismParams select_params(std::uint64_t k, std::uint64_t d,
                              std::uint64_t n, const PrivacyBudget& budget,
                              double beta) {
  budget.validate();
  if (k == 0 || d == 0 || n == 0) {
    throw std::invalid_argument("select_params: k, d, n must be positive");
  }
  if (k > d) throw std::invalid_argument("select_params: k must be <= d");
  if (!(beta > 0.0 && beta < 1.0)) {
    throw std::invalid_argument("select_params: beta must lie in (0, 1)");
  }
  const double kd = static_cast<double>(k);
  const double eps = budget.epsilon;
  const double L = budget.neighbor_l1;
  const double delta = budget.delta;
  if (L > 2.0 * kd) {
    throw std::invalid_argument("select_params: neighbor_l1 exceeds 2k");
  }

  MechanismParams clipped = clipped_candidate(k, d, n, budget, beta);

  if (L >= 2.0 * kd) {  // user-level: the clipped configuration directly
    clipped.validate();
    set_small_sample_warning(clipped);
    return clipped;
  }

  MechanismParams p;
  p.budget = budget;
  p.k = k;
  p.d = d;
  p.n = n;
  p.beta = beta;
  p.clip_range = kInf;

  if (L <= std::cbrt(kd) || L <= 2.0) {
    // Deterministic sensitivity: folding changes by at most L in L1, so
    // Laplace(L / eps) is pure eps-DP.  L = 2 is the event-level setting.
    p.bins = round_clamp_bins(eps * eps * kd / (L * L), k);
    p.noise_scale = L;
    p.budget.delta = 0.0;
    p.regime = (L == 2.0) ? Regime::kEventLevel : Regime::kPureL;
  } else if (delta > 0.0) {
    // High-probability sensitivity: over the hash randomness the folded
    // L1 change stays under 3 sqrt(b L ln(2b/delta)) except with
    // probability delta, provided L/b >= ln(2b/delta).  Shrinking b only
    // helps that constraint, so walk down until it holds.
    std::uint64_t b =
        round_clamp_bins(std::sqrt(eps * eps * kd / (L * std::log(1.0 / delta))), k);
    while (b > 1 &&
           L / static_cast<double>(b) <
               std::log(2.0 * static_cast<double>(b) / delta)) {
      --b;
    }
    if (L / static_cast<double>(b) <
        std::log(2.0 * static_cast<double>(b) / delta)) {
      throw std::invalid_argument(
          "select_params: no bin count satisfies L/b >= ln(2b/delta); "
          "increase delta or use the user-level budget (L = 2k)");
    }
    const double squeeze =
        3.0 * std::sqrt(static_cast<double>(b) * L *
                        std::log(2.0 * static_cast<double>(b) / delta));
    p.bins = b;
    p.noise_scale = std::min(L, squeeze);
    p.regime = Regime::kApproxL;
  } else {
    throw std::invalid_argument(
        "select_params: neighbor_l1 exceeds k^(1/3) and delta = 0; supply "
        "delta > 0 or use the user-level budget (L = 2k)");
  }

  // Keep whichever of {branch winner, clipped b = 1} predicts the smaller
  // error; ties stay with the unclipped branch.
  MechanismParams chosen =
      (predicted_error(clipped) < predicted_error(p)) ? clipped : p;
  chosen.validate();
  set_small_sample_warning(chosen);
  return chosen;
}

std::vector<double> fold_bins(const SparseVector& v,
                              const MechanismParams& params,
                              const BinHash& h, const SignHash& s) {
  std::vector<double> bins(params.bins, 0.0);
  for (const Entry& e : v.entries()) {
    bins[h.bin_of(e.index)] += s.sign_of(e.index) * e.value;
  }
  if (std::isfinite(params.clip_range)) {
    const double eta = params.clip_range;
    for (double& b : bins) b = std::clamp(b, -eta, eta);
  }
  return bins;
}

ClientReport client_encode(const SparseVector& v,
                           const MechanismParams& params,
                           std::uint64_t seed_h, std::uint64_t seed_s,
                           Rng& noise_rng, NoiseMode mode) {
  params.validate();
  if (v.dim() != params.d) {
    throw std::invalid_argument("client_encode: vector dim != params.d");
  }
  if (v.entries().size() > params.k) {
    throw std::invalid_argument("client_encode: vector has more than k "
                                "entries");
  }
  const BinHash h(seed_h, static_cast<std::uint32_t>(params.d),
                  static_cast<std::uint32_t>(params.bins));
  const SignHash s(seed_s, static_cast<std::uint32_t>(params.d));

  ClientReport report;
  report.seed_h = seed_h;
  report.seed_s = seed_s;
  report.bin_values = fold_bins(v, params, h, s);
  if (mode == NoiseMode::kOn) {
    const double scale = params.noise_scale / params.budget.epsilon;
    for (double& b : report.bin_values) b += laplace_sample(scale, noise_rng);
  }
  return report;
}

double server_estimate(std::span<const ClientReport> reports, std::uint32_t x,
                       const MechanismParams& params) {
  if (reports.empty()) {
    throw std::invalid_argument("server_estimate: no reports");
  }
  if (x >= params.d) {
    throw std::invalid_argument("server_estimate: coordinate out of range");
  }
  const auto d32 = static_cast<std::uint32_t>(params.d);
  const auto b32 = static_cast<std::uint32_t>(params.bins);
  for (const ClientReport& r : reports) {
    if (r.bin_values.size() != params.bins) {
      throw std::invalid_argument(
          "server_estimate: report bin count does not match params");
    }
  }
  const double total = pairwise_sum(0, reports.size(), [&](std::uint64_t i) {
    const ClientReport& r = reports[i];
    const BinHash h(r.seed_h, d32, b32);
    const SignHash s(r.seed_s, d32);
    return s.sign_of(x) * r.bin_values[h.bin_of(x)];
  });
  return total / static_cast<double>(reports.size());
}

SensitivityAudit sensitivity_audit(const SparseVector& v,
                                   const SparseVector& vp,
                                   const MechanismParams& params,
                                   std::uint64_t trials, Rng& rng) {
  params.validate();
  if (trials == 0) {
    throw std::invalid_argument("sensitivity_audit: trials must be > 0");
  }
  if (v.dim() != params.d || vp.dim() != params.d) {
    throw std::invalid_argument("sensitivity_audit: vector dim != params.d");
  }
  const double L = params.budget.neighbor_l1;
  if (v.l1_distance(vp) > L + 1e-9) {
    throw std::invalid_argument(
        "sensitivity_audit: inputs are not L-neighboring");
  }

  SensitivityAudit out;
  const double delta = params.budget.delta;
  out.threshold =
      (delta > 0.0)
          ? 3.0 * std::sqrt(static_cast<double>(params.bins) * L *
                            std::log(2.0 * static_cast<double>(params.bins) /
                                     delta))
          : kInf;

  const auto d32 = static_cast<std::uint32_t>(params.d);
  const auto b32 = static_cast<std::uint32_t>(params.bins);
  std::uint64_t exceed = 0;
  for (std::uint64_t t = 0; t < trials; ++t) {
    const BinHash h(rng.next_seed40(), d32, b32);
    const SignHash s(rng.next_seed40(), d32);
    const std::vector<double> a = fold_bins(v, params, h, s);
    const std::vector<double> b = fold_bins(vp, params, h, s);
    double l1 = 0.0;
    for (std::uint64_t j = 0; j < params.bins; ++j) {
      l1 += std::fabs(a[j] - b[j]);
    }
    out.max_l1 = std::max(out.max_l1, l1);
    if (l1 > out.threshold) ++exceed;
  }
  out.tail_rate = static_cast<double>(exceed) / static_cast<double>(trials);
  return out;
}

double density_ratio_check(std::span<const double> bins_v,
                           std::span<const double> bins_vp,
                           double noise_scale, double epsilon,
                           std::span<const std::vector<double>> probes) {
  if (bins_v.size() != bins_vp.size() || bins_v.empty()) {
    throw std::invalid_argument(
        "density_ratio_check: bin vectors must be non-empty and equal size");
  }
  if (!(noise_scale > 0.0) || !(epsilon > 0.0)) {
    throw std::invalid_argument(
        "density_ratio_check: noise_scale and epsilon must be positive");
  }
  // Joint density of b independent Laplace(noise_scale / epsilon)
  // perturbations:  log p_B(z) - log p_B'(z)
  //   = (epsilon / noise_scale) * sum_j (|z_j - B'_j| - |z_j - B_j|).
  double max_lr = -kInf;
  for (const std::vector<double>& z : probes) {
    if (z.size() != bins_v.size()) {
      throw std::invalid_argument(
          "density_ratio_check: probe dimension does not match bins");
    }
    double acc = 0.0;
    for (std::size_t j = 0; j < z.size(); ++j) {
      acc += std::fabs(z[j] - bins_vp[j]) - std::fabs(z[j] - bins_v[j]);
    }
    max_lr = std::max(max_lr, (epsilon / noise_scale) * acc);
  }
  return max_lr;
}

}  // namespace svme
