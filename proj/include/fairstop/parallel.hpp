// Copyright 2026 The fairstop Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef FAIRSTOP_PARALLEL_HPP_
#define FAIRSTOP_PARALLEL_HPP_

#include <cstdint>
#include <cstdlib>
#include <random>
#include <thread>
#include <vector>

namespace fairstop {

/// Worker cap: FAIRSTOP_THREADS when set, hardware concurrency otherwise.
inline int thread_cap() {
  if (const char* env = std::getenv("FAIRSTOP_THREADS")) {
    int v = std::atoi(env);
    if (v >= 1) return v;
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw ? static_cast<int>(hw) : 1;
}

/// splitmix64 finalizer; decorrelates counter-derived seeds.
inline std::uint64_t mix_seed(std::uint64_t root, std::uint64_t counter) {
  std::uint64_t z = root + 0x9e3779b97f4a7c15ULL * (counter + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Independent deterministic generator for one trial.
inline std::mt19937_64 trial_rng(std::uint64_t root_seed, long trial) {
  return std::mt19937_64(mix_seed(root_seed, static_cast<std::uint64_t>(trial)));
}

/// Runs fn(trial_index, rng) for every trial, fanned out over at most
/// thread_cap() workers.  Each trial owns a counter-derived rng, so
/// results are identical for any worker count; callers merge by trial
/// index (or by any order-independent reduction).
template <typename Fn>
void for_each_trial(long trials, std::uint64_t root_seed, Fn&& fn) {
  int workers = thread_cap();
  if (workers <= 1 || trials < 256) {
    for (long t = 0; t < trials; ++t) {
      auto rng = trial_rng(root_seed, t);
      fn(t, rng);
    }
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w]() {
      for (long t = w; t < trials; t += workers) {
        auto rng = trial_rng(root_seed, t);
        fn(t, rng);
      }
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace fairstop

#endif  // FAIRSTOP_PARALLEL_HPP_
