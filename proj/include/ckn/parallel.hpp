#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace ckn {

// Global worker count. Thread count must never change any reported double,
// so every parallel construct here is value-deterministic: static block
// partitions for writes, and reductions that always run over a fixed tree.
void set_thread_count(int n);
int thread_count();

// Calls body(begin, end) on disjoint contiguous blocks covering [0, n).
// Blocks and their boundaries depend only on n, not on the worker count.
void parallel_for_blocks(std::size_t n,
                         const std::function<void(std::size_t, std::size_t)>& body);

// Fixed-shape pairwise reduction; result depends only on the values.
double pairwise_sum(const double* v, std::size_t n);
double pairwise_sum(const std::vector<double>& v);

// Max of |v[i]|; associative, safe to combine per-block partials.
double max_abs(const double* v, std::size_t n);
double max_abs(const std::vector<double>& v);

} // namespace ckn
