#include "chernoff_lab/grid_kernel.hpp"

#include <omp.h>

#include <cmath>
#include <cstdlib>
#include <stdexcept>

namespace chernoff_lab {

std::vector<double> sample_grid(const SamplingDomain& domain) {
    if (!(domain.x_min < domain.x_max))
        throw std::invalid_argument("SamplingDomain: x_min must be < x_max");
    if (domain.points < 2)
        throw std::invalid_argument("SamplingDomain: points must be >= 2");
    const double dx = (domain.x_max - domain.x_min) / (domain.points - 1);
    std::vector<double> xs(domain.points);
    for (int j = 0; j < domain.points; ++j) xs[j] = domain.x_min + j * dx;
    return xs;
}

double max_abs_diff_serial(const std::vector<double>& xs,
                           const RealFn& lhs, const RealFn& rhs) {
    double best = 0.0;
    for (double x : xs) best = std::max(best, std::abs(lhs(x) - rhs(x)));
    return best;
}

double max_abs_diff_parallel(const std::vector<double>& xs,
                             const RealFn& lhs, const RealFn& rhs, int threads) {
    const int nt = threads > 0 ? threads : effective_threads();
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(xs.size());
    double best = 0.0;
#pragma omp parallel for reduction(max : best) num_threads(nt) schedule(static)
    for (std::ptrdiff_t j = 0; j < n; ++j)
        best = std::max(best, std::abs(lhs(xs[j]) - rhs(xs[j])));
    return best;
}

int effective_threads() {
    static const int cached = [] {
        if (const char* env = std::getenv("CHERNOFF_LAB_THREADS")) {
            const long v = std::strtol(env, nullptr, 10);
            if (v >= 1) return static_cast<int>(v);
        }
        return omp_get_max_threads();
    }();
    return cached;
}

}  // namespace chernoff_lab
