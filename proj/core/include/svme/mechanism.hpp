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

// The binning mechanism.  Each client folds its k-sparse vector into b
// bins through a seeded bin hash and a seeded sign hash, optionally clips
// each bin, and adds Laplace(Delta / epsilon) noise per bin.  The server
// re-instantiates the hashes from the transmitted seeds and averages the
// sign-corrected bin values to estimate any coordinate's mean.

#ifndef SVME_MECHANISM_HPP_
#define SVME_MECHANISM_HPP_

#include <cstdint>
#include <span>
#include <vector>

#include "svme/hashing.hpp"
#include "svme/random.hpp"
#include "svme/types.hpp"

namespace svme {

// Resolves (b, clip_range, noise_scale) from the budget:
//
//   - neighbor_l1 = 2k      : b = 1, eta = sqrt(2k ln(4n/beta)),
//                             Delta = 2 eta, pure eps-DP.
//   - neighbor_l1 = 2, or   : b = round(eps^2 k / L^2) clamped to [1, k],
//     neighbor_l1 <= k^(1/3)   no clipping, Delta = L, pure eps-DP.
//   - otherwise (delta > 0) : b = round(sqrt(eps^2 k / (L ln(1/delta))))
//                             shrunk until L/b >= ln(2b/delta),
//                             Delta = min(L, 3 sqrt(b L ln(2b/delta))).
//
// The winner of the branch above is then compared against the clipped
// b = 1 configuration via the predicted error sqrt(k/b) + Delta/eps and
// the smaller one is returned (ties keep the unclipped branch).
//
// Throws std::invalid_argument when L > k^(1/3) (and L != 2) with
// delta = 0, or when no b satisfies L/b >= ln(2b/delta).
MechanismParams select_params(std::uint64_t k, std::uint64_t d,
                              std::uint64_t n, const PrivacyBudget& budget,
                              double beta);

// Predicted error coefficient sqrt(k/b) + Delta/eps for a configuration;
// exposed because parameter selection and tests both need it.
double predicted_error(const MechanismParams& params);

// The pre-noise bin fold: bins[j] = sum over stored entries with
// h(index) = j of s(index) * value, clipped to [-eta, eta] when the
// regime clips.  Entry order is the canonical index order, so the result
// is bit-reproducible.
std::vector<double> fold_bins(const SparseVector& v,
                              const MechanismParams& params,
                              const BinHash& h, const SignHash& s);

// One client's report: fold, clip, and add Laplace(Delta/epsilon) per bin
// (skipped entirely under NoiseMode::kOff).
ClientReport client_encode(const SparseVector& v,
                           const MechanismParams& params,
                           std::uint64_t seed_h, std::uint64_t seed_s,
                           Rng& noise_rng, NoiseMode mode = NoiseMode::kOn);

// Mean estimate for coordinate x:
//   (1/n) * sum_i s_i(x) * report_i.bin_values[h_i(x)]
// summed in a fixed pairwise order regardless of thread count.
double server_estimate(std::span<const ClientReport> reports, std::uint32_t x,
                       const MechanismParams& params);

struct SensitivityAudit {
  double max_l1 = 0.0;     // max over trials of sum_j |B_j - B'_j|
  double tail_rate = 0.0;  // fraction of trials exceeding `threshold`
  double threshold = 0.0;  // 3 sqrt(b L ln(2b/delta)); +inf when delta = 0
};

// Empirically audits the per-report sensitivity over `trials` fresh hash
// seed pairs, using raw post-clip bins with no noise.  Requires
// ||v - v'||_1 <= neighbor_l1.
SensitivityAudit sensitivity_audit(const SparseVector& v,
                                   const SparseVector& vp,
                                   const MechanismParams& params,
                                   std::uint64_t trials, Rng& rng);

// Evaluates the joint Laplace density ratio of two bin vectors at each
// probe point (a full b-dimensional output) and returns the maximum
// log-ratio observed.  Analytically this is bounded by
// (epsilon / noise_scale) * sum_j |B_j - B'_j|.
double density_ratio_check(std::span<const double> bins_v,
                           std::span<const double> bins_vp,
                           double noise_scale, double epsilon,
                           std::span<const std::vector<double>> probes);

}  // namespace svme

#endif  // SVME_MECHANISM_HPP_
