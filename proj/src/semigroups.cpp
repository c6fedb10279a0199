#include "chernoff_lab/semigroups.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "chernoff_lab/errors.hpp"

namespace chernoff_lab {

namespace {

// Eigenvalues of a symmetric tridiagonal matrix plus the first row of the
// eigenvector matrix, by the implicit-shift QL iteration (classic tql2,
// restricted to the one row we need for quadrature weights).
//
// d: diagonal (length n, overwritten with eigenvalues)
// e: off-diagonal (length n, e[0..n-2] used, destroyed)
// z: on entry the first unit vector, on exit first components of eigenvectors
void tridiag_eigen_first_row(std::vector<double>& d, std::vector<double>& e,
                             std::vector<double>& z) {
    const int n = static_cast<int>(d.size());
    if (n == 1) return;
    e[n - 1] = 0.0;
    for (int l = 0; l < n; ++l) {
        int iter = 0;
        int m;
        do {
            for (m = l; m < n - 1; ++m) {
                const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
                if (std::abs(e[m]) <= 1e-300 || std::abs(e[m]) <= 2.3e-16 * dd) break;
            }
            if (m != l) {
                if (++iter > 50)
                    throw std::runtime_error("tridiag_eigen: QL iteration failed to converge");
                double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
                double r = std::hypot(g, 1.0);
                g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
                double s = 1.0, c = 1.0, p = 0.0;
                int i = m - 1;
                for (; i >= l; --i) {
                    double f = s * e[i];
                    const double b = c * e[i];
                    r = std::hypot(f, g);
                    e[i + 1] = r;
                    if (r == 0.0) {  // recover from an exact-zero rotation
                        d[i + 1] -= p;
                        e[m] = 0.0;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = d[i + 1] - p;
                    r = (d[i] - g) * s + 2.0 * c * b;
                    p = s * r;
                    d[i + 1] = g + p;
                    g = c * r - b;
                    f = z[i + 1];
                    z[i + 1] = s * z[i] + c * f;
                    z[i] = c * z[i] - s * f;
                }
                if (r == 0.0 && i >= l) continue;
                d[l] -= p;
                e[l] = g;
                e[m] = 0.0;
            }
        } while (m != l);
    }
}

}  // namespace

GaussHermiteRule::GaussHermiteRule(int n) {
    if (n < 1) throw std::invalid_argument("GaussHermiteRule: node count must be >= 1");
    // Jacobi matrix of the (physicists') Hermite polynomials: zero diagonal,
    // off-diagonals sqrt(k/2).
    std::vector<double> d(n, 0.0), e(n, 0.0), z(n, 0.0);
    for (int k = 1; k < n; ++k) e[k - 1] = std::sqrt(0.5 * k);
    z[0] = 1.0;
    tridiag_eigen_first_row(d, e, z);

    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](int a, int b) { return d[a] < d[b]; });

    nodes.resize(n);
    weights.resize(n);
    const double mu0 = std::sqrt(std::numbers::pi);  // integral of exp(-x^2)
    for (int i = 0; i < n; ++i) {
        nodes[i] = d[order[i]];
        weights[i] = mu0 * z[order[i]] * z[order[i]];
    }
}

double translate(const TestFunction& f, double t, double x) {
    if (t < 0.0) throw std::invalid_argument("translate: t must be >= 0");
    return f.eval(x + t);
}

double heat_spectral(double k, double a, double t, double x) {
    if (t < 0.0) throw std::invalid_argument("heat_spectral: t must be >= 0");
    if (!(a > 0.0)) throw std::invalid_argument("heat_spectral: a must be > 0");
    return std::exp(-a * a * k * k * t) * std::sin(k * x);
}

HeatQuadrature::HeatQuadrature(double a, int nodes) : a_(a) {
    if (!(a > 0.0)) throw std::invalid_argument("HeatQuadrature: a must be > 0");
    if (nodes < 2 || nodes % 2 != 0)
        throw std::invalid_argument("HeatQuadrature: node count must be >= 2 and even");
    rule_ = std::make_shared<GaussHermiteRule>(nodes);
}

double HeatQuadrature::evolve(const TestFunction& f, double t, double x) const {
    if (!(t > 0.0))
        throw std::domain_error("HeatQuadrature::evolve: t must be > 0 (use f(x) at t = 0)");
    const double spread = 2.0 * a_ * std::sqrt(t);
    double acc = 0.0;
    const auto& nodes = rule_->nodes;
    const auto& weights = rule_->weights;
    for (std::size_t i = 0; i < nodes.size(); ++i)
        acc += weights[i] * f.eval(x + spread * nodes[i]);
    acc /= std::sqrt(std::numbers::pi);
    if (!std::isfinite(acc))
        throw EvaluationError("HeatQuadrature::evolve: non-finite result at x=" +
                              std::to_string(x));
    return acc;
}

SemigroupOracle SemigroupOracle::translation() {
    SemigroupOracle o;
    o.kind = Kind::translation;
    return o;
}

SemigroupOracle SemigroupOracle::heat_spectral(double a) {
    if (!(a > 0.0)) throw std::invalid_argument("SemigroupOracle: a must be > 0");
    SemigroupOracle o;
    o.kind = Kind::heat_spectral;
    o.a = a;
    return o;
}

SemigroupOracle SemigroupOracle::heat_quadrature(double a, int nodes) {
    SemigroupOracle o;
    o.kind = Kind::heat_quadrature;
    o.a = a;
    o.quad_ = std::make_shared<HeatQuadrature>(a, nodes);
    return o;
}

double SemigroupOracle::evolve(const TestFunction& f, double t, double x) const {
    switch (kind) {
        case Kind::translation:
            return translate(f, t, x);
        case Kind::heat_spectral:
            if (!f.heat_closed_form)
                throw std::invalid_argument(
                    "SemigroupOracle: the spectral oracle needs a closed-form heat "
                    "evolution; function \"" + f.name + "\" has none (use heat_quadrature)");
            return f.heat_closed_form(a, t, x);
        case Kind::heat_quadrature:
            return quad_->evolve(f, t, x);
    }
    throw std::logic_error("SemigroupOracle: bad kind");
}

const char* SemigroupOracle::kind_name() const {
    switch (kind) {
        case Kind::translation: return "translation";
        case Kind::heat_spectral: return "heat_spectral";
        case Kind::heat_quadrature: return "heat_quadrature";
    }
    return "?";
}

}  // namespace chernoff_lab
