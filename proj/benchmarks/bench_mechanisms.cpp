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

// Microbenchmarks for the hot paths: hashing, client encoding, server
// aggregation, the discrete warmup randomizer, and wire serialization.

#include <cstdint>
#include <vector>

#include <benchmark/benchmark.h>

#include "svme/data.hpp"
#include "svme/hashing.hpp"
#include "svme/mechanism.hpp"
#include "svme/random.hpp"
#include "svme/transport.hpp"
#include "svme/types.hpp"
#include "svme/warmup.hpp"

namespace {

constexpr std::uint32_t kDomain = 100000;

svme::MechanismParams event_params(std::uint64_t k) {
  return svme::select_params(k, kDomain, 100000, {1.0, 0.0, 2.0}, 0.05);
}

void BM_BinHash(benchmark::State& state) {
  const svme::BinHash h(0x12345678ab, kDomain, 64);
  std::uint32_t x = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(h.bin_of(x));
    x = (x + 1) % kDomain;
  }
}
BENCHMARK(BM_BinHash);

void BM_LaplaceSample(benchmark::State& state) {
  svme::Rng rng(42);
  for (auto _ : state) {
    benchmark::DoNotOptimize(svme::laplace_sample(2.0, rng));
  }
}
BENCHMARK(BM_LaplaceSample);

void BM_ClientEncode(benchmark::State& state) {
  const auto k = static_cast<std::uint64_t>(state.range(0));
  const svme::MechanismParams params = event_params(k);
  const svme::Dataset data =
      svme::gen_synthetic(64, kDomain, k, 1.4, 1.0, 0.3, 9);
  svme::Rng rng(7);
  std::size_t i = 0;
  for (auto _ : state) {
    const std::uint64_t seed_h = rng.next_seed40();
    const std::uint64_t seed_s = rng.next_seed40();
    benchmark::DoNotOptimize(svme::client_encode(
        data.vectors[i % data.vectors.size()], params, seed_h, seed_s, rng));
    ++i;
  }
}
BENCHMARK(BM_ClientEncode)->Arg(16)->Arg(64)->Arg(256);

void BM_ServerEstimate(benchmark::State& state) {
  const auto n = static_cast<std::uint64_t>(state.range(0));
  const svme::MechanismParams params = event_params(64);
  const svme::Dataset data =
      svme::gen_synthetic(n, kDomain, 64, 1.4, 1.0, 0.3, 11);
  svme::Rng rng(13);
  std::vector<svme::ClientReport> reports;
  reports.reserve(n);
  for (const svme::SparseVector& v : data.vectors) {
    const std::uint64_t seed_h = rng.next_seed40();
    const std::uint64_t seed_s = rng.next_seed40();
    reports.push_back(svme::client_encode(v, params, seed_h, seed_s, rng));
  }
  std::uint32_t x = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(svme::server_estimate(reports, x, params));
    x = (x + 1) % kDomain;
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}
BENCHMARK(BM_ServerEstimate)->Arg(1000)->Arg(10000);

void BM_BlhEncode(benchmark::State& state) {
  svme::Rng rng(17);
  std::uint32_t x = 0;
  for (auto _ : state) {
    const std::uint64_t seed = rng.next_seed40();
    benchmark::DoNotOptimize(svme::blh_encode(x, kDomain, 1.0, seed, rng));
    x = (x + 1) % kDomain;
  }
}
BENCHMARK(BM_BlhEncode);

void BM_BucketedEncode(benchmark::State& state) {
  constexpr std::uint64_t kK = 16;
  const svme::Dataset data =
      svme::gen_synthetic(64, kDomain, kK, 1.4, 1.0, 0.0, 19);
  std::vector<std::vector<std::uint32_t>> item_sets;
  item_sets.reserve(data.vectors.size());
  for (const svme::SparseVector& v : data.vectors) {
    item_sets.push_back(svme::support_items(v));
  }
  svme::Rng rng(23);
  std::size_t i = 0;
  for (auto _ : state) {
    const std::uint64_t bucket_seed = rng.next_seed40();
    benchmark::DoNotOptimize(
        svme::bucketed_encode(item_sets[i % item_sets.size()], kDomain, kK,
                              1.0, bucket_seed, rng));
    ++i;
  }
}
BENCHMARK(BM_BucketedEncode);

void BM_SerializeRoundTrip(benchmark::State& state) {
  const svme::MechanismParams params = event_params(64);
  const svme::Dataset data =
      svme::gen_synthetic(1, kDomain, 64, 1.4, 1.0, 0.3, 29);
  svme::Rng rng(31);
  const svme::ClientReport report = svme::client_encode(
      data.vectors[0], params, rng.next_seed40(), rng.next_seed40(), rng);
  for (auto _ : state) {
    const std::vector<std::uint8_t> wire =
        svme::serialize(report, params, /*discretize=*/false, rng);
    benchmark::DoNotOptimize(svme::deserialize(wire));
  }
}
BENCHMARK(BM_SerializeRoundTrip);

}  // namespace

BENCHMARK_MAIN();
