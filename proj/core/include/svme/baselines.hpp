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

// Strawman baselines the binning mechanism is benchmarked against:
//
//   - k-fold repetition: one full-budget one-item report per item slot
//     (k reports per client), estimates scaled back up by k.
//   - sampling: one uniformly chosen slot out of k reported with the
//     budget split evenly between the item identity and its value.
//   - naive perturbation: Laplace(L/eps) on every one of the d
//     coordinates, i.e. O(d) communication.

#ifndef SVME_BASELINES_HPP_
#define SVME_BASELINES_HPP_

#include <cstdint>
#include <span>
#include <vector>

#include "svme/random.hpp"
#include "svme/types.hpp"
#include "svme/warmup.hpp"

namespace svme {

// --- k-fold repetition (binary vectors: every stored value is 1) -------

// One one-item report per item, dummies padding the set up to k reports.
// Each report spends the full epsilon; user-level privacy then follows
// from k-fold composition, which is exactly what makes this a strawman.
std::vector<BlhReport> kfold_encode(const SparseVector& v, double epsilon,
                                    Rng& rng, NoiseMode mode = NoiseMode::kOn);

// Frequency estimate of x from the flattened k*n reports: the one-item
// estimate over all reports, scaled by k.
double kfold_aggregate(std::span<const BlhReport> reports, std::uint32_t x,
                       std::uint32_t d, std::uint64_t k, double epsilon,
                       NoiseMode mode = NoiseMode::kOn);

// --- sampling + 1-sparse mechanism --------------------------------------

// Unbiased two-point value randomizer: releases +/- c_eps with
// c_eps = (e^eps + 1) / (e^eps - 1) and Pr[+c_eps] chosen so the
// expectation is exactly x.  Requires x in [-1, 1].
double randomize_value(double x, double epsilon, Rng& rng,
                       NoiseMode mode = NoiseMode::kOn);

struct SamplingReport {
  BlhReport item;      // identity report at budget epsilon/2
  double value = 0.0;  // value report at budget epsilon/2
};

// Pads the entry list with dummy slots up to k, samples one slot
// uniformly, and reports its identity and value.
SamplingReport sampling_encode(const SparseVector& v, double epsilon,
                               Rng& rng, NoiseMode mode = NoiseMode::kOn);

// Mean estimate of coordinate x, scaled by k to undo the slot sampling.
double sampling_aggregate(std::span<const SamplingReport> reports,
                          std::uint32_t x, std::uint32_t d, std::uint64_t k,
                          double epsilon, NoiseMode mode = NoiseMode::kOn);

// --- naive dense perturbation -------------------------------------------

// Dense report: v_x + Laplace(neighbor_l1 / epsilon) for every x in [0, d).
std::vector<double> naive_encode(const SparseVector& v,
                                 const PrivacyBudget& budget, Rng& rng,
                                 NoiseMode mode = NoiseMode::kOn);

// Coordinate-wise mean of dense reports.
std::vector<double> naive_aggregate(
    std::span<const std::vector<double>> reports);

}  // namespace svme

#endif  // SVME_BASELINES_HPP_
