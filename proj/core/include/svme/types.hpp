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

// Core value types shared by every mechanism: sparse client vectors,
// privacy budgets, resolved mechanism parameters, and client reports.

#ifndef SVME_TYPES_HPP_
#define SVME_TYPES_HPP_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace svme {

// One stored coordinate of a sparse vector.
struct Entry {
  std::uint32_t index;
  double value;
};

// A k-sparse vector over [0, d) with entries in [-1, 1].
//
// Canonical form is enforced at construction: entries sorted by index,
// indices unique and in range, values non-zero (a zero coordinate is
// represented by absence, never stored), |value| <= 1, and at most k
// entries.  Instances are immutable afterwards.
class SparseVector {
 public:
  // Validates and canonicalizes (sorts) the given entries.
  SparseVector(std::uint32_t dim, std::uint32_t sparsity,
               std::vector<Entry> entries);

  std::uint32_t dim() const { return dim_; }
  std::uint32_t sparsity() const { return sparsity_; }  // declared k
  std::span<const Entry> entries() const { return entries_; }

  // Value at coordinate x (0 if absent).  x must be in [0, dim).
  double value_at(std::uint32_t x) const;

  // L1 distance to another vector of the same dim.
  double l1_distance(const SparseVector& other) const;

 private:
  std::uint32_t dim_;
  std::uint32_t sparsity_;
  std::vector<Entry> entries_;
};

// Privacy budget plus the neighboring relation it protects: vectors v, v'
// with ||v - v'||_1 <= neighbor_l1.  Event-level corresponds to
// neighbor_l1 = 2 and user-level to neighbor_l1 = 2k.
struct PrivacyBudget {
  double epsilon = 1.0;
  double delta = 0.0;
  double neighbor_l1 = 2.0;  // L

  void validate() const;  // epsilon > 0, delta in [0,1), neighbor_l1 > 0
};

// Which branch of the parameter selection produced the configuration.
enum class Regime {
  kEventLevel,   // L = 2, pure eps-DP, noise scale 2
  kPureL,        // general L with deterministic sensitivity L, pure eps-DP
  kApproxL,      // general L with high-probability sensitivity, (eps,delta)
  kClippedUser,  // b = 1 with per-bin clipping, pure eps-DP
};

const char* regime_name(Regime r);

// Fully resolved parameters for the binning mechanism.
struct MechanismParams {
  std::uint64_t bins = 1;      // b, in [1, k]
  double clip_range = 0.0;     // eta; +infinity unless regime is kClippedUser
  double noise_scale = 2.0;    // Delta; Laplace scale is Delta / epsilon
  PrivacyBudget budget;
  std::uint64_t k = 1;
  std::uint64_t d = 1;
  std::uint64_t n = 1;
  double beta = 0.05;          // utility failure probability
  Regime regime = Regime::kEventLevel;
  // Set when n*k/b < ln(5d/beta), i.e. the sample is too small for the
  // utility analysis to bite.  Advisory only; the mechanism still runs.
  bool small_sample_warning = false;

  void validate() const;
};

// What one client sends: the two hash seeds (40-bit) and the noised bin
// values.  When `discretized` is set the values are integers produced by
// the transport-layer stochastic rounding, stored exactly in doubles.
struct ClientReport {
  std::uint64_t seed_h = 0;
  std::uint64_t seed_s = 0;
  std::vector<double> bin_values;
  bool discretized = false;
};

// Noise switch for tests and debugging.  A dedicated sentinel (rather
// than epsilon = infinity) keeps infinities out of the arithmetic.
enum class NoiseMode { kOn, kOff };

}  // namespace svme

#endif  // SVME_TYPES_HPP_
