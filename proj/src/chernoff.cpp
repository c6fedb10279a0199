#include "chernoff_lab/chernoff.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "chernoff_lab/errors.hpp"
#include "chernoff_lab/experiments.hpp"
#include "chernoff_lab/grid_kernel.hpp"

namespace chernoff_lab {

bool certify_decay(const RateFunction& w) {
    if (!w.w) return false;
    std::vector<double> samples;
    double largest = 0.0;
    for (int j = 1; j <= 8; ++j) {
        const double v = w.eval(std::pow(10.0, j));
        if (!std::isfinite(v) || v < 0.0) return false;
        samples.push_back(v);
        largest = std::max(largest, v);
    }
    const std::size_t n = samples.size();
    for (std::size_t i = n - 2; i < n; ++i)
        if (samples[i] > samples[i - 1] * (1.0 + 1e-12) + 1e-300) return false;
    return samples.back() <= 0.5 * largest || largest == 0.0;
}

RateFunction parse_rate(const std::string& spec) {
    if (spec == "invlog")
        return {[](double x) { return 1.0 / std::log(std::numbers::e + x); },
                "1/ln(e+x)"};
    if (spec == "zero") return {[](double) { return 0.0; }, "0"};
    if (spec.starts_with("pow:")) {
        double p = 0.0;
        try {
            p = std::stod(spec.substr(4));
        } catch (const std::exception&) {
            throw ConfigError("could not parse exponent in rate spec \"" + spec + "\"");
        }
        if (!(p > 0.0)) throw ConfigError("rate \"pow:p\" needs p > 0");
        return {[p](double x) { return std::pow(x, -p); },
                "x^-" + std::to_string(p)};
    }
    throw ConfigError("unknown rate function \"" + spec + "\"; catalog:\n" + rate_catalog());
}

std::string rate_catalog() {
    return "  invlog   1/ln(e+x), slower than any power\n"
           "  pow:p    x^-p for p > 0\n"
           "  zero     identically 0 (reduces perturbed_shift to translation_exact)\n";
}

ChernoffFamily translation_exact() {
    ChernoffFamily fam;
    fam.name = "translation_exact";
    fam.target = {GeneratorTarget::Kind::translation, 0.0};
    fam.build = [](double t) {
        if (!(t >= 0.0)) throw std::invalid_argument("translation_exact: t must be >= 0");
        return ShiftMixture::make({{t, 1.0}});
    };
    return fam;
}

ChernoffFamily perturbed_shift(RateFunction w) {
    if (!certify_decay(w))
        throw std::invalid_argument(
            "perturbed_shift: rate function failed decay certification (" +
            w.description + ")");
    ChernoffFamily fam;
    fam.name = "perturbed_shift[" + w.description + "]";
    fam.target = {GeneratorTarget::Kind::translation, 0.0};
    fam.build = [w](double t) {
        if (!(t >= 0.0)) throw std::invalid_argument("perturbed_shift: t must be >= 0");
        if (t == 0.0) return ShiftMixture::identity();
        return ShiftMixture::make({{t + t * w.eval(1.0 / t), 1.0}});
    };
    return fam;
}

ChernoffFamily quadratic_shift(double coef) {
    if (coef == 0.0 || !std::isfinite(coef))
        throw std::invalid_argument(
            "quadratic_shift: coef must be nonzero (coef = 0 is translation_exact)");
    ChernoffFamily fam;
    fam.name = "quadratic_shift:" + std::to_string(coef);
    fam.target = {GeneratorTarget::Kind::translation, 0.0};
    fam.params["coef"] = coef;
    fam.build = [coef](double t) {
        if (!(t >= 0.0)) throw std::invalid_argument("quadratic_shift: t must be >= 0");
        return ShiftMixture::make({{t + coef * t * t, 1.0}});
    };
    return fam;
}

ChernoffFamily heat_G(double a) {
    if (!(a > 0.0)) throw std::invalid_argument("heat_G: a must be > 0");
    ChernoffFamily fam;
    fam.name = "heat_G";
    fam.target = {GeneratorTarget::Kind::heat, a};
    fam.params["a"] = a;
    fam.build = [a](double t) {
        if (!(t >= 0.0)) throw std::invalid_argument("heat_G: t must be >= 0");
        const double h = 2.0 * a * std::sqrt(t);
        return ShiftMixture::make({{-h, 0.25}, {0.0, 0.5}, {h, 0.25}});
    };
    return fam;
}

ChernoffFamily heat_S(double a) {
    if (!(a > 0.0)) throw std::invalid_argument("heat_S: a must be > 0");
    ChernoffFamily fam;
    fam.name = "heat_S";
    fam.target = {GeneratorTarget::Kind::heat, a};
    fam.params["a"] = a;
    fam.build = [a](double t) {
        if (!(t >= 0.0)) throw std::invalid_argument("heat_S: t must be >= 0");
        const double h = a * std::sqrt(6.0 * t);
        return ShiftMixture::make({{-h, 1.0 / 6.0}, {0.0, 2.0 / 3.0}, {h, 1.0 / 6.0}});
    };
    return fam;
}

ChernoffFamily parse_family(const std::string& spec, double a) {
    if (spec == "translation_exact") return translation_exact();
    if (spec == "heat_G") return heat_G(a);
    if (spec == "heat_S") return heat_S(a);
    if (spec.starts_with("quadratic_shift:")) {
        double coef = 0.0;
        try {
            coef = std::stod(spec.substr(16));
        } catch (const std::exception&) {
            throw ConfigError("could not parse coefficient in \"" + spec + "\"");
        }
        return quadratic_shift(coef);
    }
    if (spec.starts_with("perturbed_shift:"))
        return perturbed_shift(parse_rate(spec.substr(16)));
    throw ConfigError("unknown family \"" + spec + "\"; catalog:\n" + family_catalog());
}

std::string family_catalog() {
    return "  translation_exact      G(t) = e^{tL}, zero error\n"
           "  perturbed_shift:<w>    shift by t + t w(1/t); <w> from the rate catalog\n"
           "  quadratic_shift:coef   shift by t + coef t^2\n"
           "  heat_G                 weights (1/4,1/2,1/4) at 0, +-2a sqrt(t)\n"
           "  heat_S                 weights (2/3,1/6,1/6) at 0, +-a sqrt(6t)\n";
}

std::vector<double> tangency_check(const ChernoffFamily& fam, const TestFunction& f,
                                   const TestFunction& Lf, const std::vector<double>& ts,
                                   const SamplingDomain& domain) {
    if (!f.smooth)
        throw std::invalid_argument("tangency_check: f must be flagged smooth");
    for (std::size_t i = 1; i < ts.size(); ++i)
        if (!(ts[i] < ts[i - 1]))
            throw std::invalid_argument("tangency_check: ts must be strictly decreasing");
    const std::vector<double> xs = sample_grid(domain);
    std::vector<double> residuals;
    residuals.reserve(ts.size());
    for (double t : ts) {
        if (!(t > 0.0)) throw std::domain_error("tangency_check: ts must be positive");
        const ShiftMixture m = fam.build(t);
        residuals.push_back(max_abs_diff_parallel(
            xs,
            [&](double x) { return (m.apply(f.eval, x) - f.eval(x)) / t; },
            [&](double x) { return Lf.eval(x); }));
    }
    return residuals;
}

NormGrowthResult norm_growth_check(const ChernoffFamily& fam,
                                   const std::vector<double>& ts, double omega) {
    if (ts.empty()) throw std::invalid_argument("norm_growth_check: ts must be non-empty");
    double estimate = -std::numeric_limits<double>::infinity();
    for (double t : ts) {
        if (!(t > 0.0)) throw std::domain_error("norm_growth_check: ts must be positive");
        estimate = std::max(estimate, std::log(fam.build(t).operator_norm()) / t);
    }
    return {estimate, estimate <= omega + 1e-12};
}

double gaussian_moment(double a, double t, int k) {
    if (k < 0) throw std::invalid_argument("gaussian_moment: k must be >= 0");
    if (k % 2 == 1) return 0.0;
    double m = 1.0;
    for (int j = k - 1; j >= 1; j -= 2) m *= j;        // (k-1)!!
    return m * std::pow(2.0 * a * a * t, k / 2.0);
}

MomentMatchResult moment_match_order(const ChernoffFamily& fam, double a, double t,
                                     int kmax) {
    if (kmax < 2) throw std::domain_error("moment_match_order: kmax must be >= 2");
    if (fam.target.kind != GeneratorTarget::Kind::heat)
        throw std::domain_error("moment_match_order: family \"" + fam.name +
                                "\" does not target the heat semigroup");
    const ShiftMixture m = fam.build(t);
    const double scale_base = 2.0 * a * a * t;
    for (int k = 0; k <= kmax; ++k) {
        const double have = m.moment(k);
        const double want = gaussian_moment(a, t, k);
        const double scale =
            std::max({std::abs(have), std::abs(want), std::pow(scale_base, k / 2.0)});
        if (std::abs(have - want) > 1e-9 * scale)
            return {k, (k - 2) / 2.0};
    }
    return {-1, std::numeric_limits<double>::infinity()};
}

}  // namespace chernoff_lab
