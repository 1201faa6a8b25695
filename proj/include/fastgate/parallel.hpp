// Copyright 2026 The fastgate Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef FASTGATE_PARALLEL_HPP
#define FASTGATE_PARALLEL_HPP

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <random>
#include <thread>
#include <vector>

namespace fastgate {

// Runs fn(i) for i in [0, n) on up to `threads` workers. Work items must write
// only to their own slot; the first exception by index is rethrown.
template <class Fn>
void parallel_for(size_t n, int threads, Fn &&fn) {
    const size_t workers = std::min<size_t>(n, static_cast<size_t>(std::max(1, threads)));
    if (workers <= 1) {
        for (size_t i = 0; i < n; ++i) {
            fn(i);
        }
        return;
    }
    std::vector<std::exception_ptr> errors(n);
    std::atomic<size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (size_t i = next++; i < n; i = next++) {
                try {
                    fn(i);
                } catch (...) {
                    errors[i] = std::current_exception();
                }
            }
        });
    }
    for (auto &t : pool) {
        t.join();
    }
    for (auto &e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
}

inline uint64_t splitmix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Independent generator for stream `index` of a master seed.
inline std::mt19937_64 make_stream(uint64_t seed, uint64_t index) {
    std::seed_seq seq{static_cast<uint32_t>(splitmix64(seed)), static_cast<uint32_t>(splitmix64(seed) >> 32),
                      static_cast<uint32_t>(splitmix64(seed ^ splitmix64(index + 1))),
                      static_cast<uint32_t>(index), static_cast<uint32_t>(index >> 32)};
    return std::mt19937_64(seq);
}

// Default worker count: FASTGATE_THREADS if set, else hardware concurrency.
int default_thread_cap();

}  // namespace fastgate

#endif
