#pragma once

#include <cstddef>
#include <functional>
#include <span>

namespace gevrey {

/// Worker count: GEVREY_EULER_THREADS when set to a positive integer,
/// otherwise the hardware concurrency (at least 1).
int thread_count();

/// Runs body(i) for i in [0, count). Each index is visited exactly once; the
/// caller stores per-index results and reduces them afterwards so the result
/// does not depend on the number of workers.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

/// Pairwise (tree) summation. The reduction order depends only on the length
/// of the input.
double pairwise_sum(std::span<const double> values);

}  // namespace gevrey
