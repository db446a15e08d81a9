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

#include "svme/random.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace svme {

std::uint64_t derive_client_seed(std::uint64_t master_seed,
                                 std::uint64_t client_index,
                                 SeedPurpose purpose) {
  std::uint64_t z = mix64(master_seed ^ 0x7c3a9d1f2b8e5640ULL);
  z = mix64(z ^ (client_index + 0x9e3779b97f4a7c15ULL));
  z = mix64(z ^ (static_cast<std::uint64_t>(purpose) * 0xc2b2ae3d27d4eb4fULL));
  return z;
}

double laplace_from_uniform(double scale, double u) {
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    throw std::invalid_argument("laplace: scale must be positive and finite");
  }
  if (!(u > 0.0 && u < 1.0)) {
    throw std::invalid_argument("laplace: u must lie in (0, 1)");
  }
  const double t = u - 0.5;
  const double sign = (t < 0.0) ? -1.0 : 1.0;
  return -scale * sign * std::log(1.0 - 2.0 * std::fabs(t));
}

double laplace_sample(double scale, Rng& rng) {
  return laplace_from_uniform(scale, rng.next_unit_open());
}

double gaussian_sample(double mean, double stddev, Rng& rng) {
  if (stddev < 0.0 || !std::isfinite(stddev)) {
    throw std::invalid_argument("gaussian: stddev must be non-negative");
  }
  if (stddev == 0.0) return mean;
  // Box-Muller, one fresh pair per call (the spare is discarded so the
  // draw count per call is fixed, keeping streams easy to reason about).
  const double u1 = rng.next_unit_open();
  const double u2 = rng.next_unit();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * 3.14159265358979323846 * u2;
  return mean + stddev * r * std::cos(theta);
}

}  // namespace svme
