// rng.hpp
// Seeded random streams and the chunked partition used by every Monte-Carlo
// driver. Pulses are split into fixed-size chunks; chunk k draws from a
// stream seeded by (seed, k), so tallies do not depend on the thread count.

#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <thread>
#include <vector>

namespace saqkd {

using Rng = std::mt19937_64;

inline constexpr std::uint64_t kChunkPulses = 1u << 18;

inline Rng make_stream(std::uint64_t seed, std::uint64_t stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32),
                      0x5a9du};
    return Rng(seq);
}

// Runs body(rng, count) -> Tally on every chunk and sums the results with
// Tally::operator+=. Merge order is the chunk order.
template <class Tally, class Body>
Tally run_chunked(std::uint64_t n_pulses, std::uint64_t seed, Body body, unsigned threads = 0) {
    const std::uint64_t n_chunks = (n_pulses + kChunkPulses - 1) / kChunkPulses;
    std::vector<Tally> partial(n_chunks);
    auto work = [&](std::uint64_t k) {
        Rng rng = make_stream(seed, k);
        const std::uint64_t begin = k * kChunkPulses;
        const std::uint64_t count = std::min(kChunkPulses, n_pulses - begin);
        partial[k] = body(rng, count);
    };
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, n_chunks));
    if (threads <= 1) {
        for (std::uint64_t k = 0; k < n_chunks; ++k) work(k);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(threads);
        for (unsigned t = 0; t < threads; ++t)
            pool.emplace_back([&, t] {
                for (std::uint64_t k = t; k < n_chunks; k += threads) work(k);
            });
        for (auto& th : pool) th.join();
    }
    Tally total{};
    for (const auto& p : partial) total += p;
    return total;
}

}  // namespace saqkd
