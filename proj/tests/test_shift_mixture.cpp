#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>
#include <random>

#include "chernoff_lab/chernoff.hpp"
#include "chernoff_lab/shift_mixture.hpp"

using namespace chernoff_lab;

namespace {

// Independent oracle: dense polynomial multiplication over integer lattice
// exponents. A lattice mixture with spacing h is the polynomial
// sum_k w_k x^k evaluated at the shift-by-h operator.
std::map<int, double> poly_mult(const std::map<int, double>& p,
                                const std::map<int, double>& q) {
    std::map<int, double> r;
    for (const auto& [i, a] : p)
        for (const auto& [j, b] : q) r[i + j] += a * b;
    return r;
}

// Independent oracle: n-step sequential convolution (no squaring).
ShiftMixture sequential_power(const ShiftMixture& m, int n) {
    ShiftMixture acc = m;
    for (int i = 1; i < n; ++i) acc = ShiftMixture::convolve(acc, m);
    return acc;
}

void check_atomwise_equal(const ShiftMixture& a, const ShiftMixture& b,
                          double weight_rel_tol = 1e-12) {
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        const Atom& x = a.atoms()[i];
        const Atom& y = b.atoms()[i];
        const double off_tol =
            ShiftMixture::merge_tolerance *
            std::max({1.0, std::abs(x.offset), std::abs(y.offset)});
        CHECK(std::abs(x.offset - y.offset) <= off_tol);
        const double w_scale = std::max({1e-30, std::abs(x.weight), std::abs(y.weight)});
        CHECK(std::abs(x.weight - y.weight) <= weight_rel_tol * w_scale);
    }
}

ShiftMixture random_mixture(std::mt19937_64& rng, int max_atoms) {
    std::uniform_int_distribution<int> count(1, max_atoms);
    std::uniform_real_distribution<double> offset(-2.0, 2.0);
    std::uniform_real_distribution<double> weight(-1.0, 1.0);
    std::vector<Atom> atoms;
    const int n = count(rng);
    for (int i = 0; i < n; ++i) atoms.push_back({offset(rng), weight(rng)});
    return ShiftMixture::make(atoms);
}

}  // namespace

TEST_CASE("make sorts, merges and validates") {
    const ShiftMixture id = ShiftMixture::make({{0.0, 1.0}});
    REQUIRE(id.size() == 1);
    CHECK(id.atoms()[0].offset == 0.0);
    CHECK(id.atoms()[0].weight == 1.0);

    // heat_G shape: three atoms come back sorted
    const double h = 2.0 * std::sqrt(1.0);
    const ShiftMixture g = ShiftMixture::make({{h, 0.25}, {-h, 0.25}, {0.0, 0.5}});
    REQUIRE(g.size() == 3);
    CHECK(g.atoms()[0].offset == -h);
    CHECK(g.atoms()[1].offset == 0.0);
    CHECK(g.atoms()[2].offset == h);

    // coincident offsets merge by summing weights
    const ShiftMixture merged = ShiftMixture::make({{0.0, 0.5}, {1e-18, 0.5}});
    REQUIRE(merged.size() == 1);
    CHECK(merged.atoms()[0].weight == 1.0);
    CHECK(std::abs(merged.atoms()[0].offset) <= 1e-18);

    // offsets strictly increasing and farther apart than the merge tolerance
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 50; ++trial) {
        const ShiftMixture m = random_mixture(rng, 8);
        for (std::size_t i = 1; i < m.size(); ++i) {
            const Atom& a = m.atoms()[i - 1];
            const Atom& b = m.atoms()[i];
            CHECK(a.offset < b.offset);
            CHECK(b.offset - a.offset >
                  ShiftMixture::merge_tolerance *
                      std::max({1.0, std::abs(a.offset), std::abs(b.offset)}));
        }
    }

    CHECK_THROWS_AS(ShiftMixture::make({}), std::invalid_argument);
    CHECK_THROWS_AS(ShiftMixture::make({{std::nan(""), 1.0}}), std::invalid_argument);
    CHECK_THROWS_AS(ShiftMixture::make({{0.0, INFINITY}}), std::invalid_argument);

    // exact cancellation keeps a single zero atom rather than an empty mixture
    const ShiftMixture zero = ShiftMixture::make({{0.0, 0.5}, {0.0, -0.5}});
    REQUIRE(zero.size() == 1);
    CHECK(zero.atoms()[0].weight == 0.0);
}

TEST_CASE("apply") {
    auto f = [](double x) { return std::sin(x); };
    const ShiftMixture id = ShiftMixture::identity();
    CHECK(id.apply(f, 0.3) == f(0.3));
    CHECK(id.apply(f, -7.0) == f(-7.0));

    // heat_G(a=1, t=1) on sin at 0: odd symmetry cancels exactly
    const ShiftMixture g = heat_G(1.0).build(1.0);
    CHECK(std::abs(g.apply(f, 0.0)) <= 1e-16);

    // pure shift acts as translation
    const ShiftMixture shift = ShiftMixture::make({{1.25, 1.0}});
    CHECK(shift.apply(f, 2.0) == f(3.25));

    const ShiftMixture bad = ShiftMixture::make({{0.0, 1.0}});
    CHECK_THROWS_AS(bad.apply([](double) { return INFINITY; }, 0.0), EvaluationError);
}

TEST_CASE("convolve against the polynomial oracle") {
    const ShiftMixture id = ShiftMixture::identity();
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        const ShiftMixture m = random_mixture(rng, 6);
        check_atomwise_equal(ShiftMixture::convolve(id, m), m, 0.0);
        check_atomwise_equal(ShiftMixture::convolve(m, id), m, 0.0);
    }

    // binomial square {(0,1/2),(h,1/2)}^2 = {(0,1/4),(h,1/2),(2h,1/4)}
    const double h = 0.75;
    const ShiftMixture b = ShiftMixture::make({{0.0, 0.5}, {h, 0.5}});
    const ShiftMixture b2 = ShiftMixture::convolve(b, b);
    REQUIRE(b2.size() == 3);
    CHECK(b2.atoms()[0].weight == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(b2.atoms()[1].weight == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(b2.atoms()[2].weight == doctest::Approx(0.25).epsilon(1e-15));

    // heat_G squared against the coefficient oracle (1/4 x^-1 + 1/2 + 1/4 x)^2
    const std::map<int, double> p{{-1, 0.25}, {0, 0.5}, {1, 0.25}};
    const std::map<int, double> p2 = poly_mult(p, p);
    const ShiftMixture g = heat_G(1.0).build(0.09);  // h = 2*0.3
    const ShiftMixture g2 = ShiftMixture::convolve(g, g);
    REQUIRE(g2.size() == p2.size());
    const double spacing = 2.0 * std::sqrt(0.09);
    std::size_t i = 0;
    for (const auto& [k, w] : p2) {
        CHECK(g2.atoms()[i].offset == doctest::Approx(k * spacing).epsilon(1e-14));
        CHECK(g2.atoms()[i].weight == doctest::Approx(w).epsilon(1e-15));
        ++i;
    }
    // frozen values from the oracle: (1/16, 1/4, 3/8, 1/4, 1/16)
    CHECK(p2.at(-2) == 0.0625);
    CHECK(p2.at(0) == 0.375);
}

TEST_CASE("convolve is commutative and associative") {
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 40; ++trial) {
        const ShiftMixture a = random_mixture(rng, 5);
        const ShiftMixture b = random_mixture(rng, 5);
        const ShiftMixture c = random_mixture(rng, 5);
        check_atomwise_equal(ShiftMixture::convolve(a, b), ShiftMixture::convolve(b, a));
        check_atomwise_equal(
            ShiftMixture::convolve(ShiftMixture::convolve(a, b), c),
            ShiftMixture::convolve(a, ShiftMixture::convolve(b, c)), 1e-11);
    }
}

TEST_CASE("power by squaring equals sequential convolution") {
    SUBCASE("pure shifts add") {
        const ShiftMixture s = ShiftMixture::make({{0.0625, 1.0}});
        const ShiftMixture s16 = ShiftMixture::power(s, 16);
        REQUIRE(s16.size() == 1);
        CHECK(s16.atoms()[0].offset == 1.0);  // dyadic, exact
        CHECK(s16.atoms()[0].weight == 1.0);
        check_atomwise_equal(ShiftMixture::power(s, 1), s, 0.0);
    }
    SUBCASE("catalog lattice families, n <= 64") {
        for (const ChernoffFamily& fam :
             {heat_G(1.0), heat_S(1.0), heat_G(0.5), translation_exact()}) {
            for (int n : {2, 3, 7, 16, 33, 64}) {
                const ShiftMixture base = fam.build(1.0 / n);
                check_atomwise_equal(ShiftMixture::power(base, n),
                                     sequential_power(base, n));
            }
        }
        // lattice powers keep exactly 2n+1 atoms
        CHECK(ShiftMixture::power(heat_G(1.0).build(1.0 / 64), 64).size() == 129);
        CHECK(ShiftMixture::power(heat_S(1.0).build(1.0 / 64), 64).size() == 129);
    }
    SUBCASE("generic non-lattice mixtures") {
        std::mt19937_64 rng(31);
        for (int trial = 0; trial < 6; ++trial) {
            const ShiftMixture m = random_mixture(rng, 3);
            for (int n : {2, 5, 16, 33}) {
                check_atomwise_equal(ShiftMixture::power(m, n), sequential_power(m, n),
                                     1e-11);
            }
        }
    }
    SUBCASE("power(m, a+b) = convolve(power(m,a), power(m,b))") {
        std::mt19937_64 rng(37);
        const ShiftMixture m = random_mixture(rng, 3);
        check_atomwise_equal(
            ShiftMixture::power(m, 13),
            ShiftMixture::convolve(ShiftMixture::power(m, 6), ShiftMixture::power(m, 7)),
            1e-11);
    }
    CHECK_THROWS_AS(ShiftMixture::power(ShiftMixture::identity(), 0),
                    std::invalid_argument);
}

TEST_CASE("atom cap is a reported resource error, not truncation") {
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> offset(-1.0, 1.0);
    std::vector<Atom> big;
    for (int i = 0; i < 2000; ++i) big.push_back({offset(rng), 1e-3});
    std::vector<Atom> big2;
    for (int i = 0; i < 1200; ++i) big2.push_back({offset(rng), 1e-3});
    const ShiftMixture a = ShiftMixture::make(big);
    const ShiftMixture b = ShiftMixture::make(big2);
    CHECK_THROWS_AS(ShiftMixture::convolve(a, b), AtomCapError);
    try {
        ShiftMixture::power(a, 2);
        FAIL("expected AtomCapError");
    } catch (const AtomCapError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("n=2") != std::string::npos);
        CHECK(msg.find("2000001") != std::string::npos);
    }
}

TEST_CASE("operator_norm") {
    CHECK(heat_G(1.0).build(1.0).operator_norm() == 1.0);
    CHECK(heat_S(1.0).build(1.0).operator_norm() == doctest::Approx(1.0).epsilon(1e-15));
    const ShiftMixture m = ShiftMixture::make({{0.0, -1.0}, {1.0, 2.0}});
    CHECK(m.operator_norm() == 3.0);
    CHECK(m.operator_norm() >= std::abs(m.moment(0)));

    std::mt19937_64 rng(43);
    for (int trial = 0; trial < 40; ++trial) {
        const ShiftMixture x = random_mixture(rng, 5);
        const ShiftMixture y = random_mixture(rng, 5);
        CHECK(ShiftMixture::convolve(x, y).operator_norm() <=
              x.operator_norm() * y.operator_norm() * (1.0 + 1e-12) + 1e-300);
    }
}

TEST_CASE("moments") {
    const double a = 1.3, t = 0.7;
    // symbolic oracles: 2 * 1/4 * (2a sqrt(t))^2 = 2 a^2 t, and
    // 2 * 1/6 * (a sqrt(6t))^4 = 12 a^4 t^2 (the Gaussian value 3 (2a^2t)^2)
    const ShiftMixture g = heat_G(a).build(t);
    CHECK(g.moment(0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(g.moment(2) == doctest::Approx(2.0 * a * a * t).epsilon(1e-13));
    CHECK(g.moment(4) == doctest::Approx(8.0 * std::pow(a, 4) * t * t).epsilon(1e-13));
    const ShiftMixture s = heat_S(a).build(t);
    CHECK(s.moment(2) == doctest::Approx(2.0 * a * a * t).epsilon(1e-13));
    CHECK(s.moment(4) == doctest::Approx(12.0 * std::pow(a, 4) * t * t).epsilon(1e-13));
    CHECK(s.moment(6) == doctest::Approx(72.0 * std::pow(a, 6) * t * t * t).epsilon(1e-13));

    // odd moments of symmetric mixtures vanish exactly
    for (int k : {1, 3, 5, 7}) {
        CHECK(g.moment(k) == 0.0);
        CHECK(s.moment(k) == 0.0);
    }

    // mean and variance are additive under powers of probability mixtures
    const ShiftMixture p = ShiftMixture::make({{-0.3, 0.2}, {0.1, 0.5}, {0.9, 0.3}});
    REQUIRE(p.moment(0) == doctest::Approx(1.0).epsilon(1e-15));
    auto variance = [](const ShiftMixture& m) {
        return m.moment(2) - m.moment(1) * m.moment(1);
    };
    for (int n : {2, 8, 31}) {
        const ShiftMixture pn = ShiftMixture::power(p, n);
        CHECK(pn.moment(1) == doctest::Approx(n * p.moment(1)).epsilon(1e-10));
        CHECK(variance(pn) == doctest::Approx(n * variance(p)).epsilon(1e-10));
    }
}

TEST_CASE("charfn") {
    const ShiftMixture id = ShiftMixture::identity();
    CHECK(id.charfn(3.7) == std::complex<double>(1.0, 0.0));

    // closed forms for the heat families
    const double a = 0.8, t = 0.5;
    for (double k : {0.3, 1.0, 4.0}) {
        const auto cg = heat_G(a).build(t).charfn(k);
        CHECK(cg.real() ==
              doctest::Approx(0.5 + 0.5 * std::cos(2 * a * std::sqrt(t) * k)).epsilon(1e-14));
        CHECK(std::abs(cg.imag()) <= 1e-15);
        const auto cs = heat_S(a).build(t).charfn(k);
        CHECK(cs.real() ==
              doctest::Approx(2.0 / 3.0 + std::cos(a * std::sqrt(6 * t) * k) / 3.0)
                  .epsilon(1e-14));
        CHECK(std::abs(cs.imag()) <= 1e-15);
    }

    // multiplicativity under powers: the achievable accuracy is relative to
    // the powered norm, since signed weights cancel inside charfn while the
    // weight roundoff scales with the norm
    std::mt19937_64 rng(53);
    for (int trial = 0; trial < 10; ++trial) {
        const ShiftMixture m = random_mixture(rng, 4);
        for (int n : {2, 7, 16}) {
            const ShiftMixture mn = ShiftMixture::power(m, n);
            const double noise_floor = mn.operator_norm() * n * 1e-15;
            for (double k : {0.5, 2.0}) {
                const std::complex<double> direct = mn.charfn(k);
                const std::complex<double> powered = std::pow(m.charfn(k), n);
                CHECK(std::abs(direct - powered) <=
                      1e-10 * std::abs(powered) + noise_floor);
            }
        }
    }
    // for the probability-weight catalog families the strict relative bound
    // holds wherever |c|^n stays clear of the cancellation floor
    for (int n : {8, 64}) {
        const ShiftMixture base = heat_S(1.0).build(1.0 / n);
        const ShiftMixture mn = ShiftMixture::power(base, n);
        for (double k : {0.5, 1.0, 1.5}) {
            const std::complex<double> powered = std::pow(base.charfn(k), n);
            REQUIRE(std::abs(powered) > 1e-2);
            CHECK(std::abs(mn.charfn(k) - powered) <= 1e-10 * std::abs(powered));
        }
    }
}

TEST_CASE("streaming convolution path keeps the exact algebra") {
    // two mixtures large enough that the pairwise product is never
    // materialized; charfn multiplicativity and moment identities pin the
    // result down without a dense mirror
    std::mt19937_64 rng(61);
    std::uniform_real_distribution<double> offset(-1.0, 1.0);
    std::uniform_real_distribution<double> weight(0.0, 1.0);
    std::vector<Atom> xs, ys;
    for (int i = 0; i < 1100; ++i) xs.push_back({offset(rng), weight(rng)});
    for (int i = 0; i < 1030; ++i) ys.push_back({offset(rng), weight(rng)});
    const ShiftMixture a = ShiftMixture::make(xs);
    const ShiftMixture b = ShiftMixture::make(ys);
    REQUIRE(a.size() * b.size() > (std::size_t{1} << 20));
    const ShiftMixture c = ShiftMixture::convolve(a, b);
    CHECK(c.moment(0) == doctest::Approx(a.moment(0) * b.moment(0)).epsilon(1e-11));
    CHECK(c.moment(1) ==
          doctest::Approx(a.moment(0) * b.moment(1) + b.moment(0) * a.moment(1))
              .epsilon(1e-11));
    for (double k : {0.7, 3.1}) {
        const auto want = a.charfn(k) * b.charfn(k);
        CHECK(std::abs(c.charfn(k) - want) <= 1e-9 * std::max(1.0, std::abs(want)));
    }
    for (std::size_t i = 1; i < c.size(); ++i)
        CHECK(c.atoms()[i - 1].offset < c.atoms()[i].offset);
}
