#pragma once

#include <memory>
#include <vector>

#include "chernoff_lab/test_functions.hpp"

namespace chernoff_lab {

/// Gauss-Hermite nodes and weights for the weight exp(-x^2) on the whole line,
/// computed by Golub-Welsch: eigenvalues of the symmetric tridiagonal Jacobi
/// matrix give the nodes, the squared first eigenvector components scaled by
/// sqrt(pi) give the weights. Deterministic; no external solver involved.
struct GaussHermiteRule {
    std::vector<double> nodes;    // ascending
    std::vector<double> weights;  // positive, sum = sqrt(pi)

    explicit GaussHermiteRule(int n);
};

/// Translation semigroup: (e^{tL} f)(x) = f(x + t) for L = d/dx.
double translate(const TestFunction& f, double t, double x);

/// Exact heat evolution of sin(k x): exp(-a^2 k^2 t) sin(k x).
double heat_spectral(double k, double a, double t, double x);

/// Heat evolution by Gaussian-kernel quadrature. Substituting y = x + 2a sqrt(t) s
/// turns the kernel convolution into (1/sqrt(pi)) * integral of exp(-s^2) f(...) ds,
/// the natural Gauss-Hermite form. Accurate for smooth f while a*k*sqrt(t) <= 2
/// at 64 nodes; double the node count for more oscillatory data.
class HeatQuadrature {
public:
    /// Throws std::invalid_argument unless a > 0 and nodes >= 2 and even.
    HeatQuadrature(double a, int nodes);

    /// Throws std::domain_error for t <= 0 (the identity at t = 0 is the
    /// caller's job), EvaluationError on a non-finite result.
    double evolve(const TestFunction& f, double t, double x) const;

    double diffusion() const { return a_; }
    int node_count() const { return static_cast<int>(rule_->nodes.size()); }

private:
    double a_;
    std::shared_ptr<const GaussHermiteRule> rule_;
};

/// Descriptor + dispatcher for the exact-semigroup side of every experiment.
struct SemigroupOracle {
    enum class Kind { translation, heat_spectral, heat_quadrature };

    Kind kind = Kind::translation;
    double a = 0.0;  // diffusion coefficient, heat kinds only

    static SemigroupOracle translation();
    static SemigroupOracle heat_spectral(double a);
    static SemigroupOracle heat_quadrature(double a, int nodes = 64);

    /// e^{tL} f at x. The heat_spectral kind requires f to carry a closed-form
    /// heat evolution (every catalog sine/gaussian/const does) and throws
    /// std::invalid_argument otherwise.
    double evolve(const TestFunction& f, double t, double x) const;

    const char* kind_name() const;

private:
    std::shared_ptr<const HeatQuadrature> quad_;  // heat_quadrature only
};

}  // namespace chernoff_lab
