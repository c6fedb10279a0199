#pragma once

#include <functional>
#include <vector>

namespace chernoff_lab {

/// Finite sampling window standing in for the real line: sup over R becomes
/// max over this grid. For periodic functions one full period makes the two
/// agree up to grid resolution.
struct SamplingDomain {
    double x_min = 0.0;
    double x_max = 1.0;
    int points = 2;

    bool operator==(const SamplingDomain&) const = default;
};

/// The grid x_j = x_min + j * (x_max - x_min) / (points - 1).
/// Throws std::invalid_argument unless x_min < x_max and points >= 2.
std::vector<double> sample_grid(const SamplingDomain& domain);

using RealFn = std::function<double(double)>;

/// max_j |lhs(x_j) - rhs(x_j)|, one grid point at a time. Reference
/// implementation for the parallel kernel below.
double max_abs_diff_serial(const std::vector<double>& xs,
                           const RealFn& lhs, const RealFn& rhs);

/// Same reduction with the grid split across OpenMP threads. Each point is
/// evaluated exactly as in the serial kernel, and a floating-point max is
/// order-independent, so the result is bit-identical to the serial one for
/// any thread count. threads = 0 picks the environment default.
double max_abs_diff_parallel(const std::vector<double>& xs,
                             const RealFn& lhs, const RealFn& rhs, int threads = 0);

/// Thread count used when a kernel is called with threads = 0: the value of
/// CHERNOFF_LAB_THREADS when set to a positive integer, otherwise OpenMP's
/// default.
int effective_threads();

}  // namespace chernoff_lab
