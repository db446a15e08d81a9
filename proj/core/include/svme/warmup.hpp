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

// Discrete warmup mechanisms for item (set) frequency estimation.
//
// The one-item randomizer hashes the item domain to a single bit and
// randomized-responds on that bit.  The bucketed scheme splits a k-item
// set across k buckets by a seeded hash; buckets holding exactly one item
// run the one-item randomizer on it, and every other bucket reports the
// reserved dummy item.  The item domain [0, d) is extended by one dummy
// index d for this purpose.  Inputs with fewer than k items are padded
// with filler slots placed in uniformly random buckets so that the
// survival probability of a real item is (1 - 1/k)^(k-1) regardless of
// how many items the client actually holds.

#ifndef SVME_WARMUP_HPP_
#define SVME_WARMUP_HPP_

#include <cstdint>
#include <span>
#include <vector>

#include "svme/hashing.hpp"
#include "svme/random.hpp"
#include "svme/types.hpp"

namespace svme {

// One randomized-response report: the bit hash seed and the (possibly
// flipped) bit.
struct BlhReport {
  std::uint64_t seed = 0;
  std::uint8_t bit = 0;
};

// Probability that the true hash bit is flipped: 1 / (1 + e^epsilon).
double blh_flip_probability(double epsilon);

// Encodes item x from the extended domain [0, d] (x = d is the dummy).
// Under NoiseMode::kOff the bit is reported exactly as hashed.
BlhReport blh_encode(std::uint32_t x, std::uint32_t d, double epsilon,
                     std::uint64_t seed, Rng& rng,
                     NoiseMode mode = NoiseMode::kOn);

// Unbiased frequency estimate of item x in [0, d):
//   (2 t / n - 1) * (e^eps + 1) / (e^eps - 1)
// where t counts reports whose bit matches the hash bit of x.  The
// correction factor is 1 under NoiseMode::kOff.
double blh_aggregate(std::span<const BlhReport> reports, std::uint32_t x,
                     std::uint32_t d, double epsilon,
                     NoiseMode mode = NoiseMode::kOn);

// Probability that an item lands alone in its bucket: (1 - 1/k)^(k-1).
double survival_probability(std::uint64_t k);

// Per-client report of the bucketed scheme: the bucket-hash seed and one
// BLH report per bucket.
struct BucketedReport {
  std::uint64_t bucket_seed = 0;
  std::vector<BlhReport> buckets;
};

// What each bucket will encode, given the bucket hash and the filler
// placements: the bucket's item when exactly one real item and no filler
// landed there, the dummy index d otherwise.  Exposed separately so the
// bucket-level structure is testable without randomized response on top.
std::vector<std::uint32_t> bucket_plan(std::span<const std::uint32_t> items,
                                       std::uint32_t d, std::uint64_t k,
                                       const BinHash& bucket_hash,
                                       std::span<const std::uint32_t> fillers);

// Encodes a set of at most k distinct items from [0, d).  Filler
// placements, per-bucket seeds, and response flips are all drawn from
// `rng`.
BucketedReport bucketed_encode(std::span<const std::uint32_t> items,
                               std::uint32_t d, std::uint64_t k,
                               double epsilon, std::uint64_t bucket_seed,
                               Rng& rng, NoiseMode mode = NoiseMode::kOn);

// Frequency estimate of item x: runs blh_aggregate on each client's
// bucket for x and debiases by the survival probability.
double bucketed_aggregate(std::span<const BucketedReport> reports,
                          std::uint32_t x, std::uint32_t d, std::uint64_t k,
                          double epsilon, NoiseMode mode = NoiseMode::kOn);

}  // namespace svme

#endif  // SVME_WARMUP_HPP_
