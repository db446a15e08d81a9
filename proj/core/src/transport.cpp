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

#include "svme/transport.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <stdexcept>

#include "svme/hashing.hpp"

namespace svme {
namespace {

void put_u16_le(std::uint8_t* out, std::uint16_t v) {
  out[0] = static_cast<std::uint8_t>(v & 0xff);
  out[1] = static_cast<std::uint8_t>(v >> 8);
}

std::uint16_t get_u16_le(const std::uint8_t* in) {
  return static_cast<std::uint16_t>(in[0] |
                                    (static_cast<std::uint16_t>(in[1]) << 8));
}

void put_u32_le(std::uint8_t* out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) {
    out[i] = static_cast<std::uint8_t>((v >> (8 * i)) & 0xff);
  }
}

std::uint32_t get_u32_le(const std::uint8_t* in) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) {
    v |= static_cast<std::uint32_t>(in[i]) << (8 * i);
  }
  return v;
}

}  // namespace

std::int64_t dsc(double x, Rng& rng) {
  if (!std::isfinite(x)) {
    throw std::invalid_argument("dsc: input must be finite");
  }
  const double fl = std::floor(x);
  const double frac = x - fl;
  const auto lo = static_cast<std::int64_t>(fl);
  return rng.next_unit() < frac ? lo + 1 : lo;
}

double transmit_clip_bound(const MechanismParams& params, std::uint64_t n,
                           double beta) {
  if (n == 0) throw std::invalid_argument("transmit_clip_bound: n == 0");
  if (!(beta > 0.0 && beta < 1.0)) {
    throw std::invalid_argument("transmit_clip_bound: beta outside (0, 1)");
  }
  return static_cast<double>(params.k) +
         (params.noise_scale / params.budget.epsilon) *
             std::log(10.0 * static_cast<double>(n) *
                      static_cast<double>(params.bins) / beta);
}

double transmit_clip(double value, const MechanismParams& params,
                     std::uint64_t n, double beta) {
  const double u = transmit_clip_bound(params, n, beta);
  return std::clamp(value, -u, u);
}

ClientReport discretize_report(const ClientReport& report,
                               const MechanismParams& params, Rng& rng) {
  if (report.discretized) {
    throw std::invalid_argument("discretize_report: already discretized");
  }
  ClientReport out;
  out.seed_h = report.seed_h;
  out.seed_s = report.seed_s;
  out.discretized = true;
  out.bin_values.reserve(report.bin_values.size());
  for (double v : report.bin_values) {
    const double clipped = transmit_clip(v, params, params.n, params.beta);
    out.bin_values.push_back(static_cast<double>(dsc(clipped, rng)));
  }
  return out;
}

std::vector<std::uint8_t> serialize(const ClientReport& report,
                                    const MechanismParams& params,
                                    bool discretize, Rng& rng) {
  const ClientReport& src = report;
  ClientReport discretized_storage;
  const ClientReport* r = &src;
  if (discretize && !report.discretized) {
    discretized_storage = discretize_report(report, params, rng);
    r = &discretized_storage;
  }

  const std::size_t b = r->bin_values.size();
  if (b == 0) throw std::invalid_argument("serialize: report has no bins");
  if (b > std::numeric_limits<std::uint16_t>::max()) {
    throw std::invalid_argument("serialize: bin count exceeds uint16");
  }

  std::vector<std::uint8_t> bytes(kWireHeaderBytes + 4 * b);
  bytes[0] = static_cast<std::uint8_t>((kWireVersion << 4) |
                                       (r->discretized ? 0x08 : 0x00));
  write_seed40(&bytes[1], r->seed_h);
  write_seed40(&bytes[6], r->seed_s);
  put_u16_le(&bytes[11], static_cast<std::uint16_t>(b));

  std::uint8_t* out = &bytes[kWireHeaderBytes];
  for (std::size_t j = 0; j < b; ++j, out += 4) {
    if (r->discretized) {
      const double v = r->bin_values[j];
      if (v != std::floor(v) ||
          v < static_cast<double>(std::numeric_limits<std::int32_t>::min()) ||
          v > static_cast<double>(std::numeric_limits<std::int32_t>::max())) {
        throw std::invalid_argument(
            "serialize: discretized value is not an int32");
      }
      const auto iv = static_cast<std::int32_t>(v);
      put_u32_le(out, static_cast<std::uint32_t>(iv));
    } else {
      const auto fv = static_cast<float>(r->bin_values[j]);
      std::uint32_t u = 0;
      static_assert(sizeof(float) == 4);
      std::memcpy(&u, &fv, 4);
      put_u32_le(out, u);
    }
  }
  return bytes;
}

ClientReport deserialize(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kWireHeaderBytes) {
    throw std::invalid_argument("deserialize: truncated report");
  }
  const std::uint8_t header = bytes[0];
  if ((header >> 4) != kWireVersion) {
    throw std::invalid_argument("deserialize: unknown wire version");
  }
  if ((header & 0x07) != 0) {
    throw std::invalid_argument("deserialize: reserved header bits set");
  }
  ClientReport report;
  report.discretized = (header & 0x08) != 0;
  report.seed_h = read_seed40(&bytes[1]);
  report.seed_s = read_seed40(&bytes[6]);
  const std::uint16_t b = get_u16_le(&bytes[11]);
  if (b == 0) throw std::invalid_argument("deserialize: zero bin count");
  if (bytes.size() != kWireHeaderBytes + 4 * static_cast<std::size_t>(b)) {
    throw std::invalid_argument("deserialize: length does not match count");
  }
  report.bin_values.reserve(b);
  const std::uint8_t* in = &bytes[kWireHeaderBytes];
  for (std::uint16_t j = 0; j < b; ++j, in += 4) {
    const std::uint32_t u = get_u32_le(in);
    if (report.discretized) {
      std::int32_t iv = 0;
      std::memcpy(&iv, &u, 4);
      report.bin_values.push_back(static_cast<double>(iv));
    } else {
      float fv = 0.0f;
      std::memcpy(&fv, &u, 4);
      report.bin_values.push_back(static_cast<double>(fv));
    }
  }
  return report;
}

std::uint64_t comm_cost(const ClientReport& report, Accounting accounting) {
  const std::uint64_t b = report.bin_values.size();
  if (b == 0) throw std::invalid_argument("comm_cost: report has no bins");
  switch (accounting) {
    case Accounting::kWire:
      return kWireHeaderBytes + 4 * b;
    case Accounting::kPaperConvention:
      return 5 + 4 * b;
  }
  throw std::invalid_argument("comm_cost: unknown accounting");
}

}  // namespace svme
