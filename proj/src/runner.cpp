#include "chernoff_lab/runner.hpp"

#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

#include "chernoff_lab/errors.hpp"
#include "chernoff_lab/experiments.hpp"

namespace chernoff_lab {

namespace {

std::string g17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string g6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary);  // LF endings everywhere
    if (!out) throw std::runtime_error("cannot write output file \"" + path + "\"");
    return out;
}

// Exact spectral oracle when the function carries a closed form, otherwise
// 128-node quadrature.
SemigroupOracle oracle_for(const ChernoffFamily& fam, const TestFunction& f) {
    if (fam.target.kind == GeneratorTarget::Kind::translation)
        return SemigroupOracle::translation();
    if (f.heat_closed_form) return SemigroupOracle::heat_spectral(fam.target.a);
    return SemigroupOracle::heat_quadrature(fam.target.a, 128);
}

SamplingDomain domain_for(const ExperimentConfig& cfg, const TestFunction& f,
                          const ChernoffFamily& fam) {
    if (cfg.domain) return *cfg.domain;
    double t_max = cfg.t_values.front();
    for (double t : cfg.t_values) t_max = std::max(t_max, t);
    return default_domain(f, fam, t_max, cfg.ns.back());
}

std::string fit_line(const ErrorCurve& curve) {
    const auto fit = fit_rate(curve);
    if (!fit)
        return "degenerate fit (fewer than 3 positive errors): order faster than measurable";
    std::ostringstream os;
    os << "fitted error ~ C n^-p with p = " << g6(fit->exponent)
       << ", ln C = " << g6(fit->log_intercept) << ", r^2 = " << g6(fit->r_squared)
       << " (n = " << fit->n_min_used << ".." << fit->n_max_used << ", "
       << fit->points_used << " points)";
    return os.str();
}

void run_rates(const ExperimentConfig& cfg, std::ostream& csv, std::ostream& rep) {
    const ChernoffFamily fam = parse_family(cfg.family, cfg.a);
    const TestFunction f = parse_function(cfg.function);
    const SamplingDomain domain = domain_for(cfg, f, fam);
    const SemigroupOracle oracle = oracle_for(fam, f);
    csv << "t,n,error\n";
    for (double t : cfg.t_values) {
        const ErrorCurve curve = error_curve(fam, oracle, f, t, cfg.ns, domain);
        for (std::size_t i = 0; i < curve.ns.size(); ++i)
            csv << g17(t) << "," << curve.ns[i] << "," << g17(curve.errors[i]) << "\n";
        rep << "t = " << g6(t) << ": " << fit_line(curve) << "\n";
    }
}

void run_compare(const ExperimentConfig& cfg, std::ostream& csv, std::ostream& rep) {
    std::vector<ChernoffFamily> fams;
    for (const std::string& spec : cfg.families) fams.push_back(parse_family(spec, cfg.a));
    const TestFunction f = parse_function(cfg.function);
    const SamplingDomain domain = domain_for(cfg, f, fams.front());
    csv << "t,n";
    for (const ChernoffFamily& fam : fams) csv << ",error_" << fam.name;
    csv << "\n";
    for (double t : cfg.t_values) {
        std::vector<ErrorCurve> curves;
        for (const ChernoffFamily& fam : fams)
            curves.push_back(error_curve(fam, oracle_for(fam, f), f, t, cfg.ns, domain));
        for (std::size_t i = 0; i < cfg.ns.size(); ++i) {
            csv << g17(t) << "," << cfg.ns[i];
            for (const ErrorCurve& c : curves) csv << "," << g17(c.errors[i]);
            csv << "\n";
        }
        rep << "t = " << g6(t) << " on " << f.name << ":\n";
        double best_p = -1.0;
        std::string best_name = "(none measurable)";
        for (const ErrorCurve& c : curves) {
            rep << "  " << c.family << ": " << fit_line(c) << "\n";
            if (const auto fit = fit_rate(c); fit && fit->exponent > best_p) {
                best_p = fit->exponent;
                best_name = c.family;
            }
        }
        rep << "  fastest fitted convergence: " << best_name << "\n";
    }
}

void run_slow(const ExperimentConfig& cfg, std::ostream& csv, std::ostream& rep) {
    const RateFunction w = parse_rate(cfg.rate);
    const TestFunction f = sine(1.0);
    const SamplingDomain domain =
        cfg.domain ? *cfg.domain : default_domain(f, translation_exact(), 1.0, cfg.ns.back());
    csv << "t,n,error,lower_bound,satisfied\n";
    for (double t : cfg.t_values) {
        const SlowConvergenceResult r = slow_convergence_experiment(w, t, cfg.ns, domain);
        for (std::size_t i = 0; i < cfg.ns.size(); ++i)
            csv << g17(t) << "," << cfg.ns[i] << "," << g17(r.errors[i]) << ","
                << g17(r.bounds[i]) << "," << (r.errors[i] >= r.bounds[i] ? 1 : 0) << "\n";
        rep << "t = " << g6(t) << ", w = " << w.description << ": ";
        if (r.holds)
            rep << "error >= (t/2) w(n/t) for all probed n > n0 = " << r.n0 << "\n";
        else
            rep << "lower bound not established within the probed ns\n";
    }
}

void run_tangency(const ExperimentConfig& cfg, std::ostream& csv, std::ostream& rep) {
    const ChernoffFamily fam = parse_family(cfg.family, cfg.a);
    const TestFunction f = parse_function(cfg.function);
    TestFunction Lf;
    if (fam.target.kind == GeneratorTarget::Kind::translation) {
        if (!f.deriv)
            throw ConfigError("tangency needs f' for translation targets; \"" + f.name +
                              "\" has no derivative metadata");
        Lf.name = "d/dx " + f.name;
        Lf.eval = f.deriv;
    } else {
        if (!f.deriv2)
            throw ConfigError("tangency needs f'' for heat targets; \"" + f.name +
                              "\" has no second-derivative metadata");
        const double a2 = fam.target.a * fam.target.a;
        auto d2 = f.deriv2;
        Lf.name = "a^2 d^2/dx^2 " + f.name;
        Lf.eval = [a2, d2](double x) { return a2 * d2(x); };
    }
    const SamplingDomain domain = domain_for(cfg, f, fam);
    const std::vector<double> residuals = tangency_check(fam, f, Lf, cfg.t_values, domain);
    csv << "t,residual\n";
    for (std::size_t i = 0; i < residuals.size(); ++i)
        csv << g17(cfg.t_values[i]) << "," << g17(residuals[i]) << "\n";
    bool monotone = true;
    for (std::size_t i = 1; i < residuals.size(); ++i)
        if (residuals[i] > 1.1 * residuals[i - 1]) monotone = false;
    rep << "sup |(G(t)f - f)/t - Lf| over " << residuals.size() << " decreasing t:\n";
    rep << "  non-increasing within 10%: " << (monotone ? "yes" : "no") << "\n";
    if (residuals.front() > 0.0)
        rep << "  last/first residual ratio: " << g6(residuals.back() / residuals.front())
            << "\n";
}

void run_moments(const ExperimentConfig& cfg, std::ostream& csv, std::ostream& rep) {
    const ChernoffFamily fam = parse_family(cfg.family, cfg.a);
    if (fam.target.kind != GeneratorTarget::Kind::heat)
        throw ConfigError("moments: family \"" + fam.name + "\" does not target the heat "
                          "semigroup");
    const double t = cfg.t_values.front();
    const ShiftMixture m = fam.build(t);
    csv << "k,moment,gaussian_moment,matched\n";
    for (int k = 0; k <= cfg.kmax; ++k) {
        const double have = m.moment(k);
        const double want = gaussian_moment(cfg.a, t, k);
        const double scale = std::max({std::abs(have), std::abs(want),
                                       std::pow(2.0 * cfg.a * cfg.a * t, k / 2.0)});
        const bool ok = std::abs(have - want) <= 1e-9 * scale;
        csv << k << "," << g17(have) << "," << g17(want) << "," << (ok ? 1 : 0) << "\n";
    }
    const MomentMatchResult r = moment_match_order(fam, cfg.a, t, cfg.kmax);
    if (r.first_mismatch_k < 0)
        rep << "all moments up to k = " << cfg.kmax << " match the Gaussian values\n";
    else
        rep << "first mismatched moment: k = " << r.first_mismatch_k
            << "; predicted empirical rate n^-" << g6(r.predicted_exponent)
            << " (a prediction to compare against fitted rates, not a guarantee)\n";
}

void run_subspace(const ExperimentConfig& cfg, std::ostream& csv, std::ostream& rep) {
    const ChernoffFamily fam = parse_family(cfg.family, cfg.a);
    const TestFunction f = parse_function(cfg.function);
    const RateFunction w = parse_rate(cfg.rate);
    const SamplingDomain domain = domain_for(cfg, f, fam);
    const SemigroupOracle oracle = oracle_for(fam, f);
    std::vector<ErrorCurve> curves;
    for (double t : cfg.t_values)
        curves.push_back(error_curve(fam, oracle, f, t, cfg.ns, domain));
    const SubspaceVerdict verdict = subspace_probe(curves, w);
    csv << "n,max_error,w,ratio\n";
    for (std::size_t i = 0; i < cfg.ns.size(); ++i) {
        double r = 0.0;
        for (const ErrorCurve& c : curves) r = std::max(r, c.errors[i]);
        const double wn = w.eval(static_cast<double>(cfg.ns[i]));
        csv << cfg.ns[i] << "," << g17(r) << "," << g17(wn) << ","
            << g17(wn > 0.0 ? r / wn : (r == 0.0 ? 0.0 : INFINITY)) << "\n";
    }
    rep << "sup over tau = {";
    for (std::size_t i = 0; i < cfg.t_values.size(); ++i)
        rep << (i ? ", " : "") << g6(cfg.t_values[i]);
    rep << "} of the error, against w = " << w.description << ":\n";
    rep << "  empirically O(w(n)) (tail within 2x median ratio): "
        << (verdict.bounded ? "yes" : "no") << "\n";
    rep << "  sup ratio: " << g6(verdict.sup_ratio) << "\n";
}

void run_linearity(const ExperimentConfig& cfg, std::ostream& csv, std::ostream& rep) {
    const ChernoffFamily fam = parse_family(cfg.family, cfg.a);
    const TestFunction f = parse_function(cfg.function);
    const TestFunction g = parse_function(cfg.function2);
    const TestFunction probe = linear_combination(1.0, f, 1.0, g);
    const SamplingDomain domain = domain_for(cfg, probe, fam);
    const SemigroupOracle oracle = oracle_for(fam, probe);
    const double t = cfg.t_values.front();

    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> coef(-10.0, 10.0);
    csv << "draw,alpha,beta,violation,scale\n";
    double worst = -INFINITY, worst_scale = 1.0;
    for (int d = 0; d < cfg.draws; ++d) {
        const double alpha = coef(rng);
        const double beta = coef(rng);
        const LinearityResult r =
            linearity_check(fam, oracle, f, g, alpha, beta, t, cfg.ns, domain);
        csv << d << "," << g17(alpha) << "," << g17(beta) << "," << g17(r.max_violation)
            << "," << g17(r.scale) << "\n";
        if (r.max_violation / r.scale > worst / worst_scale) {
            worst = r.max_violation;
            worst_scale = r.scale;
        }
    }
    rep << cfg.draws << " random (alpha, beta) draws, t = " << g6(t) << ":\n";
    rep << "  worst violation of the triangle inequality: " << g6(worst)
        << " (scale " << g6(worst_scale) << ")\n";
    rep << "  within 1e-10 * scale: " << (worst <= 1e-10 * worst_scale ? "yes" : "no")
        << "\n";
}

}  // namespace

void run(const ExperimentConfig& cfg) {
    std::ostringstream csv, rep;
    rep << "chernoff-lab " << kind_name(cfg.kind) << " report\n";
    rep << "config:\n" << serialize_config(cfg) << "---\n";
    switch (cfg.kind) {
        case ExperimentKind::rates: run_rates(cfg, csv, rep); break;
        case ExperimentKind::compare: run_compare(cfg, csv, rep); break;
        case ExperimentKind::slow: run_slow(cfg, csv, rep); break;
        case ExperimentKind::tangency: run_tangency(cfg, csv, rep); break;
        case ExperimentKind::moments: run_moments(cfg, csv, rep); break;
        case ExperimentKind::subspace: run_subspace(cfg, csv, rep); break;
        case ExperimentKind::linearity: run_linearity(cfg, csv, rep); break;
    }
    open_out(cfg.output + ".csv") << csv.str();
    open_out(cfg.output + ".report.txt") << rep.str();
}

std::string catalog_text() {
    return "families:\n" + family_catalog() + "functions:\n" + function_catalog() +
           "rate functions (for \"rate\" fields and perturbed_shift):\n" + rate_catalog();
}

}  // namespace chernoff_lab
