#pragma once

// Shared by the verification layers: a deterministic RNG wrapper and a
// bounded worker pool. Internal to the library sources; not installed.

#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <random>
#include <thread>
#include <vector>

namespace resgames::detail {

// Deterministic helper draws from raw mt19937_64 output (the same discipline
// as the random object constructors, so results do not depend on the
// standard library's distribution implementations).
struct Rng {
    explicit Rng(std::uint64_t seed) : eng(seed) {}
    std::mt19937_64 eng;

    std::uint64_t raw() { return eng(); }
    double uniform01() { return static_cast<double>((eng() >> 11) + 1) * 0x1.0p-53; }
    std::size_t index_below(std::size_t n) { return static_cast<std::size_t>(raw() % n); }
    std::vector<double> full_support_pmf(std::size_t n) {
        std::vector<double> p(n);
        double sum = 0.0;
        for (double& v : p) {
            v = 0.2 + uniform01();
            sum += v;
        }
        for (double& v : p) v /= sum;
        return p;
    }
};

inline std::size_t thread_budget(std::size_t n) {
    std::size_t budget = 1;
    if (const char* env = std::getenv("RESOURCE_GAMES_THREADS")) {
        char* end = nullptr;
        const unsigned long v = std::strtoul(env, &end, 10);
        budget = (end != env && v >= 1) ? static_cast<std::size_t>(std::min(v, 64ul)) : 1;
    } else {
        const unsigned hw = std::thread::hardware_concurrency();
        budget = hw == 0 ? 1 : std::min<std::size_t>(hw, 8);
    }
    return std::min(budget, n);
}

// Runs body(0..n-1) on up to RESOURCE_GAMES_THREADS workers. Each index owns
// its output slot, so results are identical to the serial order; the first
// exception wins and is rethrown after all workers stop.
template <typename Body>
void parallel_for(std::size_t n, const Body& body) {
    const std::size_t workers = thread_budget(n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::mutex fail_mutex;
    std::exception_ptr failure;
    auto run = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n) return;
            {
                std::lock_guard<std::mutex> lock(fail_mutex);
                if (failure) return;
            }
            try {
                body(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(fail_mutex);
                if (!failure) failure = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers - 1);
    for (std::size_t w = 0; w + 1 < workers; ++w) pool.emplace_back(run);
    run();
    for (std::thread& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
}

}  // namespace resgames::detail
