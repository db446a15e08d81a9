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

#include "svme/hashing.hpp"

#include <stdexcept>

namespace svme {

std::uint64_t expand_seed40(std::uint64_t seed40) {
  if (seed40 > kSeedMask) {
    throw std::invalid_argument("hash seed does not fit in 40 bits");
  }
  return mix64(seed40);
}

BinHash::BinHash(std::uint64_t seed40, std::uint32_t domain,
                 std::uint32_t range)
    : seed_(seed40), key_(expand_seed40(seed40)), domain_(domain),
      range_(range) {
  if (domain == 0) throw std::invalid_argument("BinHash: domain must be > 0");
  if (range == 0) throw std::invalid_argument("BinHash: range must be > 0");
}

void BinHash::check_domain(std::uint32_t x) const {
  if (x >= domain_) {
    throw std::invalid_argument("BinHash: input outside [0, domain)");
  }
}

SignHash::SignHash(std::uint64_t seed40, std::uint32_t domain)
    : seed_(seed40), key_(expand_seed40(seed40)), domain_(domain) {
  if (domain == 0) throw std::invalid_argument("SignHash: domain must be > 0");
}

void SignHash::check_domain(std::uint32_t x) const {
  if (x >= domain_) {
    throw std::invalid_argument("SignHash: input outside [0, domain)");
  }
}

BitHash::BitHash(std::uint64_t seed40, std::uint32_t domain)
    : seed_(seed40), key_(expand_seed40(seed40)), domain_(domain) {
  if (domain == 0) throw std::invalid_argument("BitHash: domain must be > 0");
}

void BitHash::check_domain(std::uint32_t x) const {
  if (x >= domain_) {
    throw std::invalid_argument("BitHash: input outside [0, domain)");
  }
}

void write_seed40(std::uint8_t out[5], std::uint64_t seed40) {
  if (seed40 > kSeedMask) {
    throw std::invalid_argument("write_seed40: seed does not fit in 40 bits");
  }
  for (int i = 0; i < 5; ++i) {
    out[i] = static_cast<std::uint8_t>((seed40 >> (8 * i)) & 0xff);
  }
}

std::uint64_t read_seed40(const std::uint8_t in[5]) {
  std::uint64_t seed = 0;
  for (int i = 0; i < 5; ++i) {
    seed |= static_cast<std::uint64_t>(in[i]) << (8 * i);
  }
  return seed;
}

}  // namespace svme
