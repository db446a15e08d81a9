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

// Wire format and discretization.  A report is serialized as
//
//   byte 0      : header; version in the high nibble (bits 7..4),
//                 discretized flag in bit 3, bits 2..0 reserved zero
//   bytes 1-5   : bin-hash seed, 40-bit little-endian
//   bytes 6-10  : sign-hash seed, 40-bit little-endian
//   bytes 11-12 : bin count b, uint16 little-endian
//   then b * 4  : bin values; IEEE-754 float32 little-endian, or int32
//                 little-endian when discretized
//
// for exactly 13 + 4b bytes.  Discretization first clips to the transmit
// bound U = k + (Delta/eps) * ln(10 n b / beta) (values land outside it
// with probability under beta/(10n) each, so clipping is effectively
// free), then applies unbiased stochastic rounding to an integer.

#ifndef SVME_TRANSPORT_HPP_
#define SVME_TRANSPORT_HPP_

#include <cstdint>
#include <span>
#include <vector>

#include "svme/random.hpp"
#include "svme/types.hpp"

namespace svme {

inline constexpr std::uint8_t kWireVersion = 1;
inline constexpr std::size_t kWireHeaderBytes = 13;  // header + seeds + count

// Unbiased stochastic rounding: floor(x) with probability 1 - frac(x),
// floor(x) + 1 with probability frac(x), so E[dsc(x)] = x exactly.
std::int64_t dsc(double x, Rng& rng);

// The transmit clip bound U for this configuration.
double transmit_clip_bound(const MechanismParams& params, std::uint64_t n,
                           double beta);

// Clamps a bin value into [-U, +U].
double transmit_clip(double value, const MechanismParams& params,
                     std::uint64_t n, double beta);

// Applies transmit_clip then dsc to every bin value and marks the report
// discretized.  The input report must not already be discretized.
ClientReport discretize_report(const ClientReport& report,
                               const MechanismParams& params, Rng& rng);

// Serializes to the wire layout above.  When `discretize` is set and the
// report is still real-valued, discretize_report runs first (drawing from
// rng); otherwise rng is untouched.
std::vector<std::uint8_t> serialize(const ClientReport& report,
                                    const MechanismParams& params,
                                    bool discretize, Rng& rng);

// Parses a wire report; throws std::invalid_argument on version, length,
// or count mismatches.
ClientReport deserialize(std::span<const std::uint8_t> bytes);

// How to count a report's bytes.
enum class Accounting {
  kWire,             // the full layout above: 13 + 4b
  kPaperConvention,  // one seed plus values: 5 + 4b
};

std::uint64_t comm_cost(const ClientReport& report, Accounting accounting);

}  // namespace svme

#endif  // SVME_TRANSPORT_HPP_
