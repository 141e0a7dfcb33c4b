#pragma once

#include <cstddef>
#include <functional>
#include <span>

namespace qatlas {

// Worker count: QUADRANT_ATLAS_THREADS when it holds a positive integer,
// otherwise the hardware concurrency. Read on every call.
unsigned thread_count();

// Calls fn(k) for every k in [0, n). Indices are handed out in blocks, so
// fn must only write to state owned by index k.
void parallel_for(std::size_t n, const std::function<void(std::size_t)> &fn);

// Fixed binary-tree summation; the result depends only on the values.
double pairwise_sum(std::span<const double> values);

} // namespace qatlas
