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

// Datasets: synthetic generation with Zipf-distributed coordinates, CSV
// ingestion of (user, item, value) records, and a plain-text dataset file
// format so generated data can be reused across runs.

#ifndef SVME_DATA_HPP_
#define SVME_DATA_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "svme/types.hpp"

namespace svme {

struct Provenance {
  enum class Kind { kSynthetic, kCsv } kind = Kind::kSynthetic;
  std::string detail;  // human-readable parameter / path summary
};

struct Dataset {
  std::uint64_t n = 0;  // number of clients
  std::uint64_t d = 0;  // coordinate domain size
  std::uint64_t k = 0;  // per-client sparsity bound
  std::vector<SparseVector> vectors;
  Provenance provenance;
};

// Synthetic data: each client holds k distinct coordinates drawn without
// replacement with probability proportional to rank^(-zipf_s), with
// values Normal(mu, sigma) clipped into [-1, 1].  A value that clips to
// exactly zero is dropped (zero coordinates are represented by absence).
// Fully determined by master_seed.
Dataset gen_synthetic(std::uint64_t n, std::uint64_t d, std::uint64_t k,
                      double zipf_s, double mu, double sigma,
                      std::uint64_t master_seed);

// Affine map of a rating in [lo, hi] onto [-1, 1].
double normalize_rating(double v, double lo, double hi);

// Reads a CSV with columns user_id,item_id,value (header row optional).
// Users and items are densified in first-seen order; ratings are
// normalized from [lo, hi] onto [-1, 1]; a user with more than k records
// keeps a seeded uniform sample of k of them.  Malformed rows, values
// outside [lo, hi], and duplicate (user, item) pairs raise
// std::runtime_error naming the line.
Dataset ingest_csv(const std::string& path, std::uint64_t k, double lo,
                   double hi, std::uint64_t seed);

// Plain-text dataset file round-trip.
void save_dataset(const Dataset& data, const std::string& path);
Dataset load_dataset(const std::string& path);

// Brute-force per-coordinate mean over all clients (the ground truth the
// estimators are scored against).
std::vector<double> true_mean(const Dataset& data);

// The vector's support as an item set (for the discrete mechanisms).
std::vector<std::uint32_t> support_items(const SparseVector& v);

// True when every stored value of every client equals 1, i.e. the dataset
// is an item-set dataset the binary mechanisms can consume.
bool is_binary(const Dataset& data);

}  // namespace svme

#endif  // SVME_DATA_HPP_
