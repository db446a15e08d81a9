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

// Seeded coordinate hashing.  A client transmits only its 40-bit seeds;
// the server re-instantiates the exact same hash functions from them, so
// everything here must stay bit-stable: the wire seed fully determines
// the function (truncate-then-expand), and the mixing never depends on
// platform or locale.

#ifndef SVME_HASHING_HPP_
#define SVME_HASHING_HPP_

#include <cstdint>

#include "svme/random.hpp"

namespace svme {

// Keyed 64-bit hash of a coordinate: avalanche the input, fold in the
// expanded seed, avalanche again.
inline std::uint64_t keyed_mix(std::uint64_t seed64, std::uint64_t x) {
  return mix64(seed64 ^ mix64(x + 0x9e3779b97f4a7c15ULL));
}

// Validates that a seed fits in 40 bits and returns the expanded 64-bit
// key.  All hash objects expand through here so that the truncated wire
// seed is the single source of truth.
std::uint64_t expand_seed40(std::uint64_t seed40);

// h : [d] -> [b].  Bins are assigned by multiply-shift on the keyed hash,
// i.e. floor(mix * b / 2^64), which is uniform without any modulo bias.
class BinHash {
 public:
  BinHash(std::uint64_t seed40, std::uint32_t domain, std::uint32_t range);

  std::uint32_t bin_of(std::uint32_t x) const {
    check_domain(x);
    return static_cast<std::uint32_t>(
        (static_cast<unsigned __int128>(keyed_mix(key_, x)) * range_) >> 64);
  }

  std::uint64_t seed() const { return seed_; }
  std::uint32_t domain() const { return domain_; }
  std::uint32_t range() const { return range_; }

 private:
  void check_domain(std::uint32_t x) const;

  std::uint64_t seed_;
  std::uint64_t key_;
  std::uint32_t domain_;
  std::uint32_t range_;
};

// s : [d] -> {-1, +1}, read off the top bit of the keyed hash.
class SignHash {
 public:
  SignHash(std::uint64_t seed40, std::uint32_t domain);

  int sign_of(std::uint32_t x) const {
    check_domain(x);
    return (keyed_mix(key_, x) >> 63) ? 1 : -1;
  }

  std::uint64_t seed() const { return seed_; }
  std::uint32_t domain() const { return domain_; }

 private:
  void check_domain(std::uint32_t x) const;

  std::uint64_t seed_;
  std::uint64_t key_;
  std::uint32_t domain_;
};

// s : [d] -> {0, 1}, the binary variant used by the one-item local hasher.
class BitHash {
 public:
  BitHash(std::uint64_t seed40, std::uint32_t domain);

  int bit_of(std::uint32_t x) const {
    check_domain(x);
    return static_cast<int>(keyed_mix(key_, x) >> 63);
  }

  std::uint64_t seed() const { return seed_; }
  std::uint32_t domain() const { return domain_; }

 private:
  void check_domain(std::uint32_t x) const;

  std::uint64_t seed_;
  std::uint64_t key_;
  std::uint32_t domain_;
};

// Wire form of a seed: exactly 5 bytes, little-endian.
void write_seed40(std::uint8_t out[5], std::uint64_t seed40);
std::uint64_t read_seed40(const std::uint8_t in[5]);

}  // namespace svme

#endif  // SVME_HASHING_HPP_
