#include "chernoff_lab/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "chernoff_lab/errors.hpp"

namespace chernoff_lab {

namespace {

void check_compatible(const ChernoffFamily& fam, const SemigroupOracle& oracle) {
    using FK = GeneratorTarget::Kind;
    using OK = SemigroupOracle::Kind;
    const bool fam_heat = fam.target.kind == FK::heat;
    const bool oracle_heat = oracle.kind != OK::translation;
    if (fam_heat != oracle_heat)
        throw std::invalid_argument("sup_error: family \"" + fam.name +
                                    "\" and oracle \"" + oracle.kind_name() +
                                    "\" target different generators");
    if (fam_heat) {
        const double scale = std::max({1.0, std::abs(fam.target.a), std::abs(oracle.a)});
        if (std::abs(fam.target.a - oracle.a) > 1e-12 * scale)
            throw std::invalid_argument("sup_error: family and oracle disagree on the "
                                        "diffusion coefficient a");
    }
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

double sup_error(const ChernoffFamily& fam, const SemigroupOracle& oracle,
                 const TestFunction& f, double t, std::int64_t n,
                 const SamplingDomain& domain) {
    if (!(t > 0.0)) throw std::invalid_argument("sup_error: t must be > 0");
    if (n < 1) throw std::invalid_argument("sup_error: n must be >= 1");
    check_compatible(fam, oracle);
    const ShiftMixture m = ShiftMixture::power(fam.build(t / static_cast<double>(n)), n);
    const std::vector<double> xs = sample_grid(domain);
    return max_abs_diff_parallel(
        xs,
        [&](double x) { return m.apply(f.eval, x); },
        [&](double x) { return oracle.evolve(f, t, x); });
}

ErrorCurve error_curve(const ChernoffFamily& fam, const SemigroupOracle& oracle,
                       const TestFunction& f, double t,
                       const std::vector<std::int64_t>& ns,
                       const SamplingDomain& domain) {
    if (ns.empty()) throw std::invalid_argument("error_curve: ns must be non-empty");
    if (!std::is_sorted(ns.begin(), ns.end()))
        throw std::invalid_argument("error_curve: ns must be ascending");
    ErrorCurve curve;
    curve.t = t;
    curve.ns = ns;
    curve.family = fam.name;
    curve.function = f.name;
    curve.domain = domain;
    curve.oracle = oracle.kind_name();
    curve.errors.reserve(ns.size());
    for (std::int64_t n : ns) curve.errors.push_back(sup_error(fam, oracle, f, t, n, domain));
    return curve;
}

std::optional<RateFit> fit_rate(const ErrorCurve& curve, std::int64_t n_min_cut) {
    std::vector<double> lx, ly;
    std::int64_t n_lo = 0, n_hi = 0;
    for (std::size_t i = 0; i < curve.ns.size(); ++i) {
        if (curve.ns[i] < n_min_cut || !(curve.errors[i] > 0.0)) continue;
        lx.push_back(std::log(static_cast<double>(curve.ns[i])));
        ly.push_back(std::log(curve.errors[i]));
        if (n_lo == 0) n_lo = curve.ns[i];
        n_hi = curve.ns[i];
    }
    const int m = static_cast<int>(lx.size());
    if (m < 3) return std::nullopt;

    double mx = 0.0, my = 0.0;
    for (int i = 0; i < m; ++i) { mx += lx[i]; my += ly[i]; }
    mx /= m;
    my /= m;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (int i = 0; i < m; ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
        syy += (ly[i] - my) * (ly[i] - my);
    }
    const double slope = sxy / sxx;
    double ss_res = 0.0;
    for (int i = 0; i < m; ++i) {
        const double r = ly[i] - (my + slope * (lx[i] - mx));
        ss_res += r * r;
    }
    RateFit fit;
    fit.exponent = -slope;
    fit.log_intercept = my - slope * mx;
    fit.r_squared = syy > 0.0 ? std::max(0.0, 1.0 - ss_res / syy) : 1.0;
    fit.n_min_used = n_lo;
    fit.n_max_used = n_hi;
    fit.points_used = m;
    return fit;
}

SubspaceVerdict subspace_probe(const std::vector<ErrorCurve>& curves,
                               const RateFunction& w) {
    if (curves.empty()) throw std::invalid_argument("subspace_probe: no curves");
    for (const ErrorCurve& c : curves) {
        if (c.ns != curves.front().ns || c.family != curves.front().family ||
            c.function != curves.front().function)
            throw std::invalid_argument(
                "subspace_probe: curves must share ns, family and function");
    }
    const std::size_t len = curves.front().ns.size();
    std::vector<double> ratios(len);
    bool finite = true;
    double sup_ratio = 0.0;
    for (std::size_t i = 0; i < len; ++i) {
        double r = 0.0;
        for (const ErrorCurve& c : curves) r = std::max(r, c.errors[i]);
        const double wn = w.eval(static_cast<double>(curves.front().ns[i]));
        double ratio;
        if (wn > 0.0) ratio = r / wn;
        else if (r == 0.0) ratio = 0.0;  // 0 is O(anything)
        else { ratio = std::numeric_limits<double>::infinity(); finite = false; }
        ratios[i] = ratio;
        sup_ratio = std::max(sup_ratio, ratio);
    }
    if (!finite) return {false, sup_ratio};

    const double med = median(ratios);
    const std::size_t tail_start = len - (len + 2) / 3;  // last third, rounded up
    bool bounded = true;
    for (std::size_t i = tail_start; i < len; ++i)
        if (ratios[i] > 2.0 * med) bounded = false;
    return {bounded, sup_ratio};
}

LinearityResult linearity_check(const ChernoffFamily& fam, const SemigroupOracle& oracle,
                                const TestFunction& f, const TestFunction& g,
                                double alpha, double beta, double t,
                                const std::vector<std::int64_t>& ns,
                                const SamplingDomain& domain) {
    const TestFunction h = linear_combination(alpha, f, beta, g);
    const ErrorCurve cf = error_curve(fam, oracle, f, t, ns, domain);
    const ErrorCurve cg = error_curve(fam, oracle, g, t, ns, domain);
    const ErrorCurve ch = error_curve(fam, oracle, h, t, ns, domain);
    LinearityResult result;
    result.max_violation = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < ns.size(); ++i) {
        const double budget = std::abs(alpha) * cf.errors[i] + std::abs(beta) * cg.errors[i];
        const double violation = ch.errors[i] - budget;
        if (violation > result.max_violation) {
            result.max_violation = violation;
            result.scale = 1.0 + budget;
        }
    }
    return result;
}

SlowConvergenceResult slow_convergence_experiment(const RateFunction& w, double t,
                                                  const std::vector<std::int64_t>& ns,
                                                  const SamplingDomain& domain) {
    if (!(t > 0.0))
        throw std::invalid_argument("slow_convergence_experiment: t must be > 0");
    if (!std::is_sorted(ns.begin(), ns.end()))
        throw std::invalid_argument("slow_convergence_experiment: ns must be ascending");
    const ChernoffFamily fam = perturbed_shift(w);
    const SemigroupOracle oracle = SemigroupOracle::translation();
    const TestFunction f = sine(1.0);  // the witness function from the lower-bound proof

    SlowConvergenceResult result;
    result.errors.reserve(ns.size());
    result.bounds.reserve(ns.size());
    for (std::int64_t n : ns) {
        result.errors.push_back(sup_error(fam, oracle, f, t, n, domain));
        result.bounds.push_back(0.5 * t * w.eval(static_cast<double>(n) / t));
    }

    // Smallest probed threshold followed by a non-empty all-satisfying tail.
    const std::ptrdiff_t len = static_cast<std::ptrdiff_t>(ns.size());
    std::ptrdiff_t last_bad = -1;
    for (std::ptrdiff_t i = 0; i < len; ++i)
        if (result.errors[i] < result.bounds[i]) last_bad = i;
    if (last_bad == -1) {
        result.n0 = ns[0];
        result.holds = true;
    } else if (last_bad < len - 1) {
        result.n0 = ns[last_bad];
        result.holds = true;
    }
    return result;
}

SamplingDomain default_domain(const TestFunction& f, const ChernoffFamily& fam,
                              double t, std::int64_t n_max) {
    if (f.period) {
        const double half = *f.period / 2.0;
        return {-half, half, 2001};
    }
    const double halfwidth = f.suggested_halfwidth.value_or(8.0);
    double extent;
    if (fam.target.kind == GeneratorTarget::Kind::heat)
        extent = 2.0 * fam.target.a * std::sqrt(t) * std::sqrt(static_cast<double>(n_max));
    else
        extent = 2.0 * t + 1.0;
    return {-(halfwidth + extent), halfwidth + extent, 4001};
}

}  // namespace chernoff_lab
