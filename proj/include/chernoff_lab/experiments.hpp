#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "chernoff_lab/chernoff.hpp"
#include "chernoff_lab/grid_kernel.hpp"
#include "chernoff_lab/semigroups.hpp"

namespace chernoff_lab {

/// One sup-norm error curve n -> ||G(t/n)^n f - e^{tL} f|| at fixed t,
/// with the sampling window it was measured on.
struct ErrorCurve {
    double t = 0.0;
    std::vector<std::int64_t> ns;  // ascending
    std::vector<double> errors;    // same length, >= 0
    std::string family;
    std::string function;
    SamplingDomain domain;
    std::string oracle;
};

/// Power-law fit error ~ C n^-p from a log-log least-squares regression.
struct RateFit {
    double exponent = 0.0;       // p, positive for decaying curves
    double log_intercept = 0.0;  // ln C
    double r_squared = 0.0;
    std::int64_t n_min_used = 0;
    std::int64_t n_max_used = 0;
    int points_used = 0;
};

/// max over the grid of |(G(t/n)^n f)(x) - (e^{tL} f)(x)|. Throws
/// std::invalid_argument when the family and oracle target different
/// generators; AtomCapError propagates from the mixture power.
double sup_error(const ChernoffFamily& fam, const SemigroupOracle& oracle,
                 const TestFunction& f, double t, std::int64_t n,
                 const SamplingDomain& domain);

/// Element-wise sup_error over ascending ns.
ErrorCurve error_curve(const ChernoffFamily& fam, const SemigroupOracle& oracle,
                       const TestFunction& f, double t,
                       const std::vector<std::int64_t>& ns,
                       const SamplingDomain& domain);

/// Least-squares fit of ln(error) against ln(n) over the points with n >=
/// n_min_cut and error > 0. Returns nullopt when fewer than 3 such points
/// remain (exact families / underflow: order faster than measurable).
std::optional<RateFit> fit_rate(const ErrorCurve& curve, std::int64_t n_min_cut = 0);

struct SubspaceVerdict {
    bool bounded = false;   // empirical O(w(n)) verdict (tail-vs-median rule)
    double sup_ratio = 0.0; // sup over n of max_t error / w(n)
};

/// Probes membership in the approximation subspace of order w over the finite
/// t-set the curves were computed on: r(n) = max over curves of error(n),
/// ratio(n) = r(n)/w(n). bounded is true when every ratio in the last third
/// of the n-grid stays within twice the median ratio; this is an explicitly
/// heuristic finite-sample stand-in for O(w(n)). All curves must share ns,
/// family and function.
SubspaceVerdict subspace_probe(const std::vector<ErrorCurve>& curves,
                               const RateFunction& w);

struct LinearityResult {
    double max_violation = 0.0;  // max over ns of err(h) - |alpha| err(f) - |beta| err(g)
    double scale = 1.0;          // 1 + |alpha| err(f) + |beta| err(g) at the same n
};

/// Triangle-inequality check for h = alpha f + beta g: the violation is
/// nonpositive in exact arithmetic, so anything beyond 1e-10 * scale signals
/// a broken harness rather than mathematics.
LinearityResult linearity_check(const ChernoffFamily& fam, const SemigroupOracle& oracle,
                                const TestFunction& f, const TestFunction& g,
                                double alpha, double beta, double t,
                                const std::vector<std::int64_t>& ns,
                                const SamplingDomain& domain);

struct SlowConvergenceResult {
    std::int64_t n0 = -1;  // smallest probed threshold; -1 if none works
    bool holds = false;    // errors >= (t/2) w(n/t) beyond n0, with a non-empty tail
    std::vector<double> errors;
    std::vector<double> bounds;  // (t/2) w(n/t) per n
};

/// Measures the perturbed-shift family built from w against the translation
/// semigroup on f = sin and locates the threshold past which the error stays
/// above the (t/2) w(n/t) lower envelope. holds = false is a reportable
/// outcome, not an error.
SlowConvergenceResult slow_convergence_experiment(const RateFunction& w, double t,
                                                  const std::vector<std::int64_t>& ns,
                                                  const SamplingDomain& domain);

/// Default sampling window: one full period with 2001 points for periodic f
/// (symmetric about 0, so sine grids hit their extrema exactly); otherwise the
/// function's own half-width padded by the n-fold lattice extent, 4001 points.
SamplingDomain default_domain(const TestFunction& f, const ChernoffFamily& fam,
                              double t, std::int64_t n_max);

}  // namespace chernoff_lab
