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

// Deterministic randomness: a seeded generator, seed derivation for
// per-client streams, and the Laplace / Gaussian samplers used by the
// mechanisms.  Everything here is reproducible: the same seed yields the
// same stream on every run and every thread schedule, which is what makes
// the whole pipeline replayable from a single master seed.

#ifndef SVME_RANDOM_HPP_
#define SVME_RANDOM_HPP_

#include <cstdint>
#include <random>

namespace svme {

// Hash seeds travel on the wire as 40-bit values (5 bytes).
inline constexpr int kSeedBits = 40;
inline constexpr std::uint64_t kSeedMask = (std::uint64_t{1} << kSeedBits) - 1;

// splitmix64 finalizer; full-avalanche 64-bit mixer.
inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Disjoint sub-stream labels hung off one per-client seed.  Keeping the
// hash-seed streams separate from the noise stream means "same hashes,
// fresh noise" replays are possible without re-deriving anything.
enum class SeedPurpose : std::uint64_t {
  kBinHash = 1,
  kSignHash = 2,
  kNoise = 3,
};

// Stable per-client, per-purpose seed derived from a master seed.  Pure
// function: no global state, so clients can be processed in any order and
// on any thread while producing identical output.
std::uint64_t derive_client_seed(std::uint64_t master_seed,
                                 std::uint64_t client_index,
                                 SeedPurpose purpose);

// Folds one more component into a stream-root seed (used to split the
// master seed into dataset / mechanism / replicate roots).
inline std::uint64_t seed_chain(std::uint64_t acc, std::uint64_t v) {
  return mix64(acc ^ (mix64(v) + 0x9e3779b97f4a7c15ULL));
}

// Deterministic generator.  The raw mt19937_64 output sequence is pinned
// by the standard; doubles are derived from it explicitly below instead of
// going through std::uniform_real_distribution, whose mapping is
// implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  std::uint64_t next_seed40() { return next_u64() & kSeedMask; }

  // Uniform on [0, 1), 53-bit resolution.
  double next_unit() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Uniform on the open interval (0, 1); safe to feed through log().
  double next_unit_open() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  bool next_bernoulli(double p) { return next_unit() < p; }

  // Uniform integer in [0, bound) via 128-bit multiply-shift.
  std::uint64_t next_below(std::uint64_t bound) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(next_u64()) * bound) >> 64);
  }

 private:
  std::mt19937_64 engine_;
};

// Inverse-CDF transform of a uniform u in (0, 1) to Laplace(0, scale):
//   x = -scale * sign(u - 1/2) * ln(1 - 2|u - 1/2|).
// Exposed separately so the transform itself is testable at pinned u.
double laplace_from_uniform(double scale, double u);

// Draws Laplace(0, scale) noise.  scale must be positive and finite.
double laplace_sample(double scale, Rng& rng);

// Box-Muller Gaussian; stddev = 0 degenerates to the mean.
double gaussian_sample(double mean, double stddev, Rng& rng);

}  // namespace svme

#endif  // SVME_RANDOM_HPP_
