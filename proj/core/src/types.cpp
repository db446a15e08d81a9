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

#include "svme/types.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace svme {

SparseVector::SparseVector(std::uint32_t dim, std::uint32_t sparsity,
                           std::vector<Entry> entries)
    : dim_(dim), sparsity_(sparsity), entries_(std::move(entries)) {
  if (dim == 0) throw std::invalid_argument("SparseVector: dim must be > 0");
  if (sparsity == 0 || sparsity > dim) {
    throw std::invalid_argument("SparseVector: need 0 < k <= d");
  }
  if (entries_.size() > sparsity_) {
    throw std::invalid_argument("SparseVector: more than k entries");
  }
  std::sort(entries_.begin(), entries_.end(),
            [](const Entry& a, const Entry& b) { return a.index < b.index; });
  std::uint32_t prev = 0;
  bool first = true;
  for (const Entry& e : entries_) {
    if (e.index >= dim_) {
      throw std::invalid_argument("SparseVector: index out of range");
    }
    if (!first && e.index == prev) {
      throw std::invalid_argument("SparseVector: duplicate index");
    }
    if (!(std::fabs(e.value) <= 1.0)) {  // also rejects NaN
      throw std::invalid_argument("SparseVector: value outside [-1, 1]");
    }
    if (e.value == 0.0) {
      throw std::invalid_argument(
          "SparseVector: explicit zero entry (zeros are represented by "
          "absence)");
    }
    prev = e.index;
    first = false;
  }
}

double SparseVector::value_at(std::uint32_t x) const {
  if (x >= dim_) throw std::invalid_argument("value_at: index out of range");
  auto it = std::lower_bound(
      entries_.begin(), entries_.end(), x,
      [](const Entry& e, std::uint32_t v) { return e.index < v; });
  if (it != entries_.end() && it->index == x) return it->value;
  return 0.0;
}

double SparseVector::l1_distance(const SparseVector& other) const {
  if (other.dim_ != dim_) {
    throw std::invalid_argument("l1_distance: dimension mismatch");
  }
  double sum = 0.0;
  auto a = entries_.begin();
  auto b = other.entries_.begin();
  while (a != entries_.end() || b != other.entries_.end()) {
    if (b == other.entries_.end() ||
        (a != entries_.end() && a->index < b->index)) {
      sum += std::fabs(a->value);
      ++a;
    } else if (a == entries_.end() || b->index < a->index) {
      sum += std::fabs(b->value);
      ++b;
    } else {
      sum += std::fabs(a->value - b->value);
      ++a;
      ++b;
    }
  }
  return sum;
}

void PrivacyBudget::validate() const {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    throw std::invalid_argument("PrivacyBudget: epsilon must be positive");
  }
  if (!(delta >= 0.0 && delta < 1.0)) {
    throw std::invalid_argument("PrivacyBudget: delta must lie in [0, 1)");
  }
  if (!(neighbor_l1 > 0.0) || !std::isfinite(neighbor_l1)) {
    throw std::invalid_argument(
        "PrivacyBudget: neighbor_l1 must be positive and finite");
  }
}

const char* regime_name(Regime r) {
  switch (r) {
    case Regime::kEventLevel: return "event";
    case Regime::kPureL: return "pure-L";
    case Regime::kApproxL: return "approx-L";
    case Regime::kClippedUser: return "user";
  }
  return "unknown";
}

void MechanismParams::validate() const {
  budget.validate();
  if (k == 0 || d == 0 || n == 0) {
    throw std::invalid_argument("MechanismParams: k, d, n must be positive");
  }
  if (bins < 1 || bins > k) {
    throw std::invalid_argument("MechanismParams: bins must lie in [1, k]");
  }
  if (!(noise_scale > 0.0) || !std::isfinite(noise_scale)) {
    throw std::invalid_argument("MechanismParams: noise_scale must be > 0");
  }
  if (!(beta > 0.0 && beta < 1.0)) {
    throw std::invalid_argument("MechanismParams: beta must lie in (0, 1)");
  }
  const bool clipped = regime == Regime::kClippedUser;
  const bool finite_clip = std::isfinite(clip_range);
  if (clipped && (!finite_clip || !(clip_range > 0.0))) {
    throw std::invalid_argument(
        "MechanismParams: clipped regime needs a positive finite clip_range");
  }
  if (!clipped && finite_clip) {
    throw std::invalid_argument(
        "MechanismParams: clip_range must be +infinity outside the clipped "
        "regime");
  }
  if (budget.neighbor_l1 > 2.0 * static_cast<double>(k)) {
    throw std::invalid_argument("MechanismParams: neighbor_l1 exceeds 2k");
  }
}

}  // namespace svme
