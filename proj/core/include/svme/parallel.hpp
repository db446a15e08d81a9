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

// Determinism utilities.  Results must be byte-identical across runs and
// across thread counts, so (a) floating-point reductions always use the
// same fixed chunked-pairwise order, and (b) parallel loops only ever
// write to disjoint, index-addressed slots.

#ifndef SVME_PARALLEL_HPP_
#define SVME_PARALLEL_HPP_

#include <cstdint>
#include <functional>
#include <thread>
#include <vector>

namespace svme {

// Sums term(i) for i in [begin, end) in a fixed pairwise order (chunks of
// 64 summed left-to-right, then a balanced binary combine).  The order
// depends only on [begin, end), never on threads, so totals are stable.
template <typename TermFn>
double pairwise_sum(std::uint64_t begin, std::uint64_t end, TermFn&& term) {
  const std::uint64_t len = end - begin;
  if (len <= 64) {
    double s = 0.0;
    for (std::uint64_t i = begin; i < end; ++i) s += term(i);
    return s;
  }
  const std::uint64_t mid = begin + len / 2;
  return pairwise_sum(begin, mid, term) + pairwise_sum(mid, end, term);
}

// Runs fn(i) for i in [0, n) across at most `threads` workers on disjoint
// contiguous slices.  fn must only touch state owned by index i.
inline void parallel_for(std::uint64_t n, unsigned threads,
                         const std::function<void(std::uint64_t)>& fn) {
  if (n == 0) return;
  if (threads <= 1 || n == 1) {
    for (std::uint64_t i = 0; i < n; ++i) fn(i);
    return;
  }
  const unsigned workers =
      static_cast<unsigned>(std::min<std::uint64_t>(threads, n));
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    const std::uint64_t lo = n * w / workers;
    const std::uint64_t hi = n * (w + 1) / workers;
    pool.emplace_back([lo, hi, &fn] {
      for (std::uint64_t i = lo; i < hi; ++i) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace svme

#endif  // SVME_PARALLEL_HPP_
