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

#include "svme/baselines.hpp"

#include <cmath>
#include <stdexcept>

namespace svme {
namespace {

void check_binary(const SparseVector& v) {
  for (const Entry& e : v.entries()) {
    if (e.value != 1.0) {
      throw std::invalid_argument(
          "baseline requires a binary vector (every stored value 1)");
    }
  }
}

void check_epsilon(double epsilon) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    throw std::invalid_argument("epsilon must be positive and finite");
  }
}

}  // namespace

std::vector<BlhReport> kfold_encode(const SparseVector& v, double epsilon,
                                    Rng& rng, NoiseMode mode) {
  check_binary(v);
  if (mode == NoiseMode::kOn) check_epsilon(epsilon);
  const std::uint32_t d = v.dim();
  std::vector<BlhReport> reports;
  reports.reserve(v.sparsity());
  for (const Entry& e : v.entries()) {
    reports.push_back(blh_encode(e.index, d, epsilon, rng.next_seed40(), rng,
                                 mode));
  }
  while (reports.size() < v.sparsity()) {  // dummy-pad to exactly k reports
    reports.push_back(blh_encode(d, d, epsilon, rng.next_seed40(), rng, mode));
  }
  return reports;
}

double kfold_aggregate(std::span<const BlhReport> reports, std::uint32_t x,
                       std::uint32_t d, std::uint64_t k, double epsilon,
                       NoiseMode mode) {
  if (k == 0) throw std::invalid_argument("kfold_aggregate: k == 0");
  if (reports.empty() || reports.size() % k != 0) {
    throw std::invalid_argument(
        "kfold_aggregate: report count must be a positive multiple of k");
  }
  return static_cast<double>(k) * blh_aggregate(reports, x, d, epsilon, mode);
}

double randomize_value(double x, double epsilon, Rng& rng, NoiseMode mode) {
  if (!(std::fabs(x) <= 1.0)) {
    throw std::invalid_argument("randomize_value: x outside [-1, 1]");
  }
  if (mode == NoiseMode::kOff) return x;
  check_epsilon(epsilon);
  const double ee = std::exp(epsilon);
  const double c = (ee + 1.0) / (ee - 1.0);
  const double p_plus = (x * (ee - 1.0) + ee + 1.0) / (2.0 * (1.0 + ee));
  return rng.next_unit() < p_plus ? c : -c;
}

SamplingReport sampling_encode(const SparseVector& v, double epsilon,
                               Rng& rng, NoiseMode mode) {
  if (mode == NoiseMode::kOn) check_epsilon(epsilon);
  const std::uint32_t d = v.dim();
  const std::uint64_t k = v.sparsity();
  // Evenly split budget: half for which item, half for its value.
  const double eps_half = epsilon / 2.0;

  const std::uint64_t slot = rng.next_below(k);
  std::uint32_t item = d;  // dummy
  double value = 0.0;
  if (slot < v.entries().size()) {
    item = v.entries()[slot].index;
    value = v.entries()[slot].value;
  }
  SamplingReport report;
  report.item = blh_encode(item, d, eps_half, rng.next_seed40(), rng, mode);
  report.value = randomize_value(value, eps_half, rng, mode);
  return report;
}

double sampling_aggregate(std::span<const SamplingReport> reports,
                          std::uint32_t x, std::uint32_t d, std::uint64_t k,
                          double epsilon, NoiseMode mode) {
  if (reports.empty()) {
    throw std::invalid_argument("sampling_aggregate: no reports");
  }
  if (x >= d) {
    throw std::invalid_argument("sampling_aggregate: item outside [0, d)");
  }
  if (k == 0) throw std::invalid_argument("sampling_aggregate: k == 0");
  double factor = 1.0;
  if (mode == NoiseMode::kOn) {
    check_epsilon(epsilon);
    const double ee = std::exp(epsilon / 2.0);
    factor = (ee + 1.0) / (ee - 1.0);
  }
  // Per report, (2 * match - 1) * factor is an unbiased indicator of
  // "the sampled item is x"; multiplying by the value report and by k
  // undoes the uniform slot sampling.
  double sum = 0.0;
  for (const SamplingReport& r : reports) {
    const BitHash s(r.item.seed, d + 1);
    const double match = (static_cast<int>(r.item.bit) == s.bit_of(x)) ? 1.0
                                                                       : -1.0;
    sum += match * factor * r.value;
  }
  return static_cast<double>(k) * sum / static_cast<double>(reports.size());
}

std::vector<double> naive_encode(const SparseVector& v,
                                 const PrivacyBudget& budget, Rng& rng,
                                 NoiseMode mode) {
  budget.validate();
  std::vector<double> out(v.dim(), 0.0);
  for (const Entry& e : v.entries()) out[e.index] = e.value;
  if (mode == NoiseMode::kOn) {
    const double scale = budget.neighbor_l1 / budget.epsilon;
    for (double& o : out) o += laplace_sample(scale, rng);
  }
  return out;
}

std::vector<double> naive_aggregate(
    std::span<const std::vector<double>> reports) {
  if (reports.empty()) {
    throw std::invalid_argument("naive_aggregate: no reports");
  }
  const std::size_t d = reports.front().size();
  std::vector<double> mean(d, 0.0);
  for (const std::vector<double>& r : reports) {
    if (r.size() != d) {
      throw std::invalid_argument("naive_aggregate: ragged report sizes");
    }
    for (std::size_t x = 0; x < d; ++x) mean[x] += r[x];
  }
  const double n = static_cast<double>(reports.size());
  for (double& m : mean) m /= n;
  return mean;
}

}  // namespace svme
