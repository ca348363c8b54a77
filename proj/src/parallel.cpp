#include "ckn/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

namespace ckn {

namespace {
std::atomic<int> g_threads{1};

std::size_t block_size_for(std::size_t n) {
    // Granularity chosen once from n so block boundaries are stable.
    const std::size_t target_blocks = 64;
    std::size_t bs = (n + target_blocks - 1) / target_blocks;
    return std::max<std::size_t>(bs, 1024);
}
} // namespace

void set_thread_count(int n) { g_threads.store(n < 1 ? 1 : n); }
int thread_count() { return g_threads.load(); }

void parallel_for_blocks(std::size_t n,
                         const std::function<void(std::size_t, std::size_t)>& body) {
    if (n == 0) return;
    const std::size_t bs = block_size_for(n);
    const std::size_t nblocks = (n + bs - 1) / bs;
    const int workers = std::min<std::size_t>(thread_count(), nblocks);
    if (workers <= 1) {
        for (std::size_t b = 0; b < nblocks; ++b)
            body(b * bs, std::min(n, (b + 1) * bs));
        return;
    }
    std::atomic<std::size_t> next{0};
    auto drain = [&] {
        for (;;) {
            const std::size_t b = next.fetch_add(1);
            if (b >= nblocks) return;
            body(b * bs, std::min(n, (b + 1) * bs));
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers - 1);
    for (int w = 1; w < workers; ++w) pool.emplace_back(drain);
    drain();
    for (auto& t : pool) t.join();
}

double pairwise_sum(const double* v, std::size_t n) {
    if (n == 0) return 0.0;
    if (n <= 8) {
        double s = v[0];
        for (std::size_t i = 1; i < n; ++i) s += v[i];
        return s;
    }
    const std::size_t half = n / 2;
    return pairwise_sum(v, half) + pairwise_sum(v + half, n - half);
}

double pairwise_sum(const std::vector<double>& v) { return pairwise_sum(v.data(), v.size()); }

double max_abs(const double* v, std::size_t n) {
    double m = 0.0;
    for (std::size_t i = 0; i < n; ++i) m = std::max(m, std::fabs(v[i]));
    return m;
}

double max_abs(const std::vector<double>& v) { return max_abs(v.data(), v.size()); }

} // namespace ckn
