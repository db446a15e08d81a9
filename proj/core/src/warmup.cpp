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

#include "svme/warmup.hpp"

#include <cmath>
#include <stdexcept>
#include <unordered_set>

namespace svme {
namespace {

void check_epsilon(double epsilon) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    throw std::invalid_argument("epsilon must be positive and finite");
  }
}

void check_items(std::span<const std::uint32_t> items, std::uint32_t d,
                 std::uint64_t k) {
  if (k == 0 || k > d) throw std::invalid_argument("need 0 < k <= d");
  if (items.size() > k) {
    throw std::invalid_argument("item set larger than k");
  }
  std::unordered_set<std::uint32_t> seen;
  for (std::uint32_t x : items) {
    if (x >= d) throw std::invalid_argument("item outside [0, d)");
    if (!seen.insert(x).second) {
      throw std::invalid_argument("duplicate item in set");
    }
  }
}

}  // namespace

double blh_flip_probability(double epsilon) {
  // epsilon = 0 is a legal (if useless) budget here: the flip probability
  // degenerates to a fair coin.  Only aggregation needs epsilon > 0,
  // because its debiasing factor divides by exp(epsilon) - 1.
  if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) {
    throw std::invalid_argument("epsilon must be non-negative and finite");
  }
  return 1.0 / (1.0 + std::exp(epsilon));
}

BlhReport blh_encode(std::uint32_t x, std::uint32_t d, double epsilon,
                     std::uint64_t seed, Rng& rng, NoiseMode mode) {
  if (x > d) {  // extended domain: [0, d) plus the dummy index d
    throw std::invalid_argument("blh_encode: item outside [0, d]");
  }
  const BitHash s(seed, d + 1);
  BlhReport report;
  report.seed = seed;
  report.bit = static_cast<std::uint8_t>(s.bit_of(x));
  if (mode == NoiseMode::kOn) {
    if (rng.next_unit() < blh_flip_probability(epsilon)) report.bit ^= 1;
  }
  return report;
}

double blh_aggregate(std::span<const BlhReport> reports, std::uint32_t x,
                     std::uint32_t d, double epsilon, NoiseMode mode) {
  if (reports.empty()) {
    throw std::invalid_argument("blh_aggregate: no reports");
  }
  if (x >= d) throw std::invalid_argument("blh_aggregate: item outside [0, d)");
  std::uint64_t t = 0;
  for (const BlhReport& r : reports) {
    const BitHash s(r.seed, d + 1);
    if (static_cast<int>(r.bit) == s.bit_of(x)) ++t;
  }
  const double n = static_cast<double>(reports.size());
  double factor = 1.0;
  if (mode == NoiseMode::kOn) {
    check_epsilon(epsilon);
    factor = (std::exp(epsilon) + 1.0) / (std::exp(epsilon) - 1.0);
  }
  return (2.0 * static_cast<double>(t) / n - 1.0) * factor;
}

double survival_probability(std::uint64_t k) {
  if (k == 0) throw std::invalid_argument("survival_probability: k == 0");
  if (k == 1) return 1.0;
  const double kd = static_cast<double>(k);
  return std::pow(1.0 - 1.0 / kd, kd - 1.0);
}

std::vector<std::uint32_t> bucket_plan(std::span<const std::uint32_t> items,
                                       std::uint32_t d, std::uint64_t k,
                                       const BinHash& bucket_hash,
                                       std::span<const std::uint32_t> fillers) {
  check_items(items, d, k);
  if (items.size() + fillers.size() != k) {
    throw std::invalid_argument(
        "bucket_plan: items plus fillers must total exactly k slots");
  }
  std::vector<std::uint32_t> real_count(k, 0);
  std::vector<std::uint32_t> candidate(k, d);
  for (std::uint32_t x : items) {
    const std::uint32_t j = bucket_hash.bin_of(x);
    ++real_count[j];
    candidate[j] = x;
  }
  std::vector<std::uint32_t> filler_count(k, 0);
  for (std::uint32_t j : fillers) {
    if (j >= k) throw std::invalid_argument("bucket_plan: filler bucket >= k");
    ++filler_count[j];
  }
  std::vector<std::uint32_t> plan(k, d);
  for (std::uint64_t j = 0; j < k; ++j) {
    if (real_count[j] == 1 && filler_count[j] == 0) plan[j] = candidate[j];
  }
  return plan;
}

BucketedReport bucketed_encode(std::span<const std::uint32_t> items,
                               std::uint32_t d, std::uint64_t k,
                               double epsilon, std::uint64_t bucket_seed,
                               Rng& rng, NoiseMode mode) {
  check_items(items, d, k);
  if (mode == NoiseMode::kOn) check_epsilon(epsilon);
  const BinHash bucket_hash(bucket_seed, d, static_cast<std::uint32_t>(k));

  std::vector<std::uint32_t> fillers(k - items.size());
  for (std::uint32_t& f : fillers) {
    f = static_cast<std::uint32_t>(rng.next_below(k));
  }
  const std::vector<std::uint32_t> plan =
      bucket_plan(items, d, k, bucket_hash, fillers);

  BucketedReport report;
  report.bucket_seed = bucket_seed;
  report.buckets.reserve(k);
  for (std::uint32_t target : plan) {
    report.buckets.push_back(
        blh_encode(target, d, epsilon, rng.next_seed40(), rng, mode));
  }
  return report;
}

double bucketed_aggregate(std::span<const BucketedReport> reports,
                          std::uint32_t x, std::uint32_t d, std::uint64_t k,
                          double epsilon, NoiseMode mode) {
  if (reports.empty()) {
    throw std::invalid_argument("bucketed_aggregate: no reports");
  }
  if (x >= d) {
    throw std::invalid_argument("bucketed_aggregate: item outside [0, d)");
  }
  std::vector<BlhReport> relevant;
  relevant.reserve(reports.size());
  for (const BucketedReport& r : reports) {
    if (r.buckets.size() != k) {
      throw std::invalid_argument(
          "bucketed_aggregate: report bucket count does not match k");
    }
    const BinHash bucket_hash(r.bucket_seed, d, static_cast<std::uint32_t>(k));
    relevant.push_back(r.buckets[bucket_hash.bin_of(x)]);
  }
  return blh_aggregate(relevant, x, d, epsilon, mode) /
         survival_probability(k);
}

}  // namespace svme
