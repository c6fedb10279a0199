#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "chernoff_lab/shift_mixture.hpp"
#include "chernoff_lab/test_functions.hpp"

namespace chernoff_lab {

struct SamplingDomain;  // grid_kernel.hpp

/// Which semigroup a Chernoff family approximates.
struct GeneratorTarget {
    enum class Kind { translation, heat };
    Kind kind = Kind::translation;
    double a = 0.0;  // diffusion coefficient, heat only
};

/// A decay profile w: [1, inf) -> [0, inf) with w(x) -> 0. Supplied instances
/// are certified by sampling (certify_decay) before use.
struct RateFunction {
    std::function<double(double)> w;
    std::string description;

    /// w clamped to its domain: values below 1 evaluate w(1).
    double eval(double x) const { return w(x < 1.0 ? 1.0 : x); }
};

/// Samples w at x = 10^1..10^8 and accepts iff all values are finite and
/// nonnegative, the last three samples are non-increasing (1e-12 slack) and
/// the final sample has dropped to at most half of the largest one.
bool certify_decay(const RateFunction& w);

/// Named rate functions for CLI configs: "invlog" = 1/ln(e+x), "pow:p" = x^-p,
/// "zero". Throws ConfigError on unknown specs.
RateFunction parse_rate(const std::string& spec);
std::string rate_catalog();

/// A named map t -> ShiftMixture together with the generator it approximates.
/// build(0) is always the identity mixture.
struct ChernoffFamily {
    std::string name;
    std::function<ShiftMixture(double)> build;
    GeneratorTarget target;
    std::map<std::string, double> params;
};

/// G(t) = e^{tL} itself: build(t) = {(t, 1)}. The zero-error reference family.
ChernoffFamily translation_exact();

/// G(t) f = f(. + t + t w(1/t)): converges, but no faster than w lets it.
/// Throws std::invalid_argument if w fails decay certification.
ChernoffFamily perturbed_shift(RateFunction w);

/// G(t) f = f(. + t + coef t^2). Throws for coef = 0 (that would be the exact
/// family; use translation_exact).
ChernoffFamily quadratic_shift(double coef);

/// Heat family with weights (1/4, 1/2, 1/4) at offsets (-2a sqrt(t), 0, +2a sqrt(t)).
ChernoffFamily heat_G(double a);

/// Heat family with weights (1/6, 2/3, 1/6) at offsets (-a sqrt(6t), 0, +a sqrt(6t));
/// matches the Gaussian moments through order 5.
ChernoffFamily heat_S(double a);

/// Family specs for CLI configs: "translation_exact", "heat_G", "heat_S"
/// (read the diffusion coefficient from `a`), "quadratic_shift:coef",
/// "perturbed_shift:<rate spec>".
ChernoffFamily parse_family(const std::string& spec, double a);
std::string family_catalog();

/// For each t in ts (positive, decreasing) returns
///   sup over the grid of |(G(t) f - f)/t - Lf|,
/// the first-order tangency residual. Lf is the caller's exact generator
/// action; numerical differentiation is deliberately not used. Throws
/// std::domain_error if any t <= 0, std::invalid_argument if f is not
/// flagged smooth.
std::vector<double> tangency_check(const ChernoffFamily& fam, const TestFunction& f,
                                   const TestFunction& Lf, const std::vector<double>& ts,
                                   const SamplingDomain& domain);

struct NormGrowthResult {
    double omega_estimate = 0.0;  // max over ts of ln ||G(t)|| / t
    bool satisfied = false;       // omega_estimate <= omega + 1e-12
};

/// Checks ||G(t)|| <= e^{omega t} over the sampled ts (default omega = 0,
/// which every catalog family satisfies).
NormGrowthResult norm_growth_check(const ChernoffFamily& fam,
                                   const std::vector<double>& ts, double omega = 0.0);

struct MomentMatchResult {
    int first_mismatch_k = -1;        // -1: all moments up to kmax matched
    double predicted_exponent = 0.0;  // (k - 2) / 2; +inf when no mismatch
};

/// Compares the moments of build(t) against the Gaussian heat-kernel moments
/// (2 a^2 t)^{k/2} (k-1)!! for even k (0 for odd) at relative tolerance 1e-9,
/// k = 0..kmax. The first mismatching order k predicts an empirical rate
/// n^-(k-2)/2. Throws std::domain_error for kmax < 2 or a non-heat family.
MomentMatchResult moment_match_order(const ChernoffFamily& fam, double a, double t,
                                     int kmax);

/// Gaussian moment of the heat kernel at time t: (2 a^2 t)^{k/2} (k-1)!! for
/// even k, 0 for odd k.
double gaussian_moment(double a, double t, int k);

}  // namespace chernoff_lab
