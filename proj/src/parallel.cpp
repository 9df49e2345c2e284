#include "mlab/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <limits>
#include <thread>
#include <vector>

namespace mlab {

int worker_count() {
    // read per call so the setting can change within one process
    if (const char* env = std::getenv("MLAB_THREADS")) {
        char* end = nullptr;
        const long requested = std::strtol(env, &end, 10);
        if (end != env && requested >= 1)
            return static_cast<int>(std::min<long>(requested, 256));
    }
    const int hw = static_cast<int>(std::thread::hardware_concurrency());
    return hw < 1 ? 1 : hw;
}

void parallel_for(std::int64_t begin, std::int64_t end,
                  const std::function<void(std::int64_t)>& body) {
    const std::int64_t total = end - begin;
    if (total <= 0) return;
    const int workers = worker_count();
    if (workers == 1 || total == 1) {
        for (std::int64_t i = begin; i < end; ++i) body(i);
        return;
    }
    const std::int64_t block = std::max<std::int64_t>(1, total / (8 * workers));
    std::atomic<std::int64_t> next{begin};
    auto run = [&] {
        for (;;) {
            std::int64_t lo = next.fetch_add(block);
            if (lo >= end) return;
            std::int64_t hi = std::min(lo + block, end);
            for (std::int64_t i = lo; i < hi; ++i) body(i);
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers) - 1);
    for (int t = 1; t < workers; ++t) pool.emplace_back(run);
    run();
    for (auto& th : pool) th.join();
}

double parallel_max(std::int64_t begin, std::int64_t end,
                    const std::function<double(std::int64_t)>& per_index) {
    const std::int64_t total = end - begin;
    double result = -std::numeric_limits<double>::infinity();
    if (total <= 0) return result;
    const int workers = worker_count();
    if (workers == 1 || total == 1) {
        for (std::int64_t i = begin; i < end; ++i) result = std::max(result, per_index(i));
        return result;
    }
    std::vector<double> partial(static_cast<std::size_t>(workers),
                                -std::numeric_limits<double>::infinity());
    const std::int64_t block = std::max<std::int64_t>(1, total / (8 * workers));
    std::atomic<std::int64_t> next{begin};
    auto run = [&](int slot) {
        double local = -std::numeric_limits<double>::infinity();
        for (;;) {
            std::int64_t lo = next.fetch_add(block);
            if (lo >= end) break;
            std::int64_t hi = std::min(lo + block, end);
            for (std::int64_t i = lo; i < hi; ++i) local = std::max(local, per_index(i));
        }
        partial[static_cast<std::size_t>(slot)] = local;
    };
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers) - 1);
    for (int t = 1; t < workers; ++t) pool.emplace_back(run, t);
    run(0);
    for (auto& th : pool) th.join();
    for (double v : partial) result = std::max(result, v);
    return result;
}

}  // namespace mlab
