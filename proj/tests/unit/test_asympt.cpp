#include <doctest.h>

#include "oracle_values.hpp"
#include "toeplab/asympt.hpp"
#include "toeplab/errors.hpp"

#include <cmath>

using namespace toeplab;

namespace {

constexpr double kPi = MathConstants::pi;
const double kA = MathConstants::glaisher_A;

double rel(cplx a, cplx b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

// Least-squares slope of log y against log n.
double loglog_slope(const std::vector<double>& n, const std::vector<double>& y) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double m = static_cast<double>(n.size());
    for (std::size_t i = 0; i < n.size(); ++i) {
        const double x = std::log(n[i]), v = std::log(y[i]);
        sx += x;
        sy += v;
        sxx += x * x;
        sxy += x * v;
    }
    return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

CircleSymbol smooth_with(std::vector<FHSingularity> sing) {
    CircleSymbol s;
    s.smooth = SmoothPart::from_coeffs({{1, 0.3}, {-1, 0.2}, {2, cplx(0.0, 0.1)}, {-2, -0.05}, {0, 0.1}});
    s.singularities = std::move(sing);
    s.validate();
    return s;
}

} // namespace

TEST_CASE("strong Szego limit for e^{2t cos theta}") {
    const double t = 0.9;
    const AsymptoticPrediction p = szego_fh_predict(builtin("exp_trig", {{"t", t}}));
    REQUIRE(p.terms.size() == 1);
    CHECK(std::abs(p.terms[0].a) < 1e-15);
    CHECK(std::abs(p.terms[0].p) < 1e-15);
    CHECK(std::abs(p.terms[0].c - t * t) < 1e-13);
}

TEST_CASE("diagonal symbol below T_c") {
    for (double k : {0.3, 0.5, 0.8}) {
        const AsymptoticPrediction p = szego_fh_predict(builtin("diag", {{"k_ons", k}}));
        CHECK(std::exp(p.terms[0].c.real()) == doctest::Approx(std::pow(1.0 - k * k, 0.25)).epsilon(1e-12));
        CHECK(std::abs(p.terms[0].a) < 1e-14);
    }
}

TEST_CASE("critical Onsager symbol reproduces the critical row law") {
    const double g1 = 3.0 - 2.0 * std::sqrt(2.0);
    const AsymptoticPrediction p = szego_fh_predict(builtin("onsager", {{"gamma1", g1}, {"gamma2", 1.0}}));
    REQUIRE(p.terms.size() == 1);
    CHECK(std::abs(p.terms[0].p + 0.25) < 1e-14);
    const double c = std::pow(2.0, 1.0 / 12.0) * std::exp(0.25) * std::pow(kA, -3.0) * std::pow(1 + g1, 0.25) *
                     std::pow(1 - g1, -0.25);
    CHECK(std::abs(p.terms[0].c - std::log(c)) < 1e-12);
}

TEST_CASE("property: Basor constant equals Widom constant when beta = 0") {
    const std::vector<CircleSymbol> symbols = {
        smooth_with({{0.0, 0.3, 0.0}}),
        smooth_with({{1.0, 0.2, 0.0}, {4.0, cplx(-0.1, 0.2), 0.0}}),
        builtin("lenard", {{"t", 2.0}}),
    };
    for (const auto& s : symbols) {
        const AsymptoticPrediction p = szego_fh_predict(s);
        CHECK(std::abs(p.terms[0].c - log_widom_constant(s)) < 1e-12);
    }
}

TEST_CASE("degenerate representations are refused") {
    CHECK_THROWS_AS(szego_fh_predict(builtin("pure_fh", {{"alpha", 0.0}, {"beta", 1.0}})), InputError);
}

TEST_CASE("Basor-Tracy symbol: two terms, parity law") {
    const AsymptoticPrediction p = bt_predict(builtin("bt", {}));
    REQUIRE(p.terms.size() == 2);
    CHECK(p.terms[0].p.real() == doctest::Approx(p.terms[1].p.real()));
    const double g = std::exp(2.0 * (log_barnes_g(0.5) + log_barnes_g(1.5)).real());
    for (int n : {10, 11, 40, 41}) {
        const LogDet v = p.at(n);
        if (n % 2) {
            CHECK(v.exact_zero);
        } else {
            CHECK(rel(v.value(), std::sqrt(2.0 / n) * g) < 1e-12);
        }
    }
}

TEST_CASE("Basor-Tracy equals FH when the orbit minimum is unique") {
    const CircleSymbol s = smooth_with({{0.5, 0.2, cplx(0.3, 0.1)}, {3.0, 0.1, -0.2}});
    const AsymptoticPrediction a = szego_fh_predict(s), b = bt_predict(s);
    REQUIRE(b.terms.size() == 1);
    CHECK(std::abs(a.terms[0].a - b.terms[0].a) < 1e-14);
    CHECK(std::abs(a.terms[0].p - b.terms[0].p) < 1e-14);
    CHECK(std::abs(a.terms[0].c - b.terms[0].c) < 1e-12);
}

TEST_CASE("complex Basor-Tracy pair") {
    CircleSymbol s;
    s.singularities = {{0.0, 0.0, cplx(0.5, 0.3)}, {kPi, 0.0, cplx(-0.5, -0.3)}};
    s.validate();
    const AsymptoticPrediction p = bt_predict(s);
    REQUIRE(p.terms.size() == 2);
    CHECK(p.terms[0].p.real() == doctest::Approx(p.terms[1].p.real()).epsilon(1e-12));
    // The exact determinants follow the two-term sum.
    for (int n : {40, 41}) {
        const cplx exact = toeplitz_det(s, n).value(), pred = p.at(n).value();
        CHECK(std::abs(exact - pred) < 0.1 * std::abs(std::exp(p.terms[0].p * std::log(double(n)) + p.terms[0].c)));
    }
}

TEST_CASE("pure FH closed form") {
    for (int n : {1, 5, 30}) CHECK(std::abs(bs_exact(0.0, 0.0, n).value() - 1.0) < 1e-12);
    const cplx a = 0.3, b(0.1, 0.2);
    const cplx n1 = std::exp(log_gamma(1.0 + 2.0 * a) - log_gamma(1.0 + a + b) - log_gamma(1.0 + a - b));
    CHECK(rel(bs_exact(a, b, 1).value(), n1) < 1e-13);
    CHECK(rel(bs_exact(a, b, 8).value(), oracle::pure_fh_det_8) < 1e-12);
    const CircleSymbol s = builtin("pure_fh", {{"alpha", a}, {"beta", b}});
    CHECK(rel(bs_exact(a, b, 10).value(), toeplitz_det(s, 10).value()) < 1e-10);
}

TEST_CASE("property: closed form equals the LU determinant for n <= 20") {
    const std::vector<std::pair<cplx, cplx>> samples = {{0.3, cplx(0.1, 0.2)}, {0.5, 0.0}, {-0.25, 0.4}};
    for (const auto& [a, b] : samples) {
        const CircleSymbol s = builtin("pure_fh", {{"alpha", a}, {"beta", b}});
        for (int n = 1; n <= 20; ++n) CHECK(rel(toeplitz_det(s, n).value(), bs_exact(a, b, n).value()) < 1e-9);
    }
}

TEST_CASE("Selberg integral") {
    const cplx a = 0.3, b(0.1, 0.2);
    const cplx n1 = std::exp(log_gamma(1.0 + 2.0 * a) - log_gamma(1.0 + a + b) - log_gamma(1.0 + a - b));
    for (double g : {0.5, 1.0, 2.5}) CHECK(rel(selberg_value(1, a, b, g), n1) < 1e-13);
    double fact = 1.0;
    for (int n = 1; n <= 6; ++n) {
        fact *= n;
        CHECK(rel(selberg_value(n, 0.0, 0.0, 1.0), fact) < 1e-12);
        CHECK(rel(selberg_value(n, a, b, 1.0), fact * bs_exact(a, b, n).value()) < 1e-11);
    }
    CHECK(rel(selberg_value(3, a, b, 1.5), oracle::selberg_3) < 1e-12);
}

TEST_CASE("property: Ehrhardt regime error decays like n^{|||beta||| - 1}") {
    const CircleSymbol s = smooth_with({{0.5, 0.2, 0.3}, {3.5, cplx(0.15, 0.1), -0.2}});
    const double seminorm = 0.5;
    const AsymptoticPrediction p = szego_fh_predict(s);
    std::vector<double> ns, err;
    for (int n = 16; n <= 128; n *= 2) {
        ns.push_back(n);
        err.push_back(std::abs(toeplitz_det(s, n).log() - p.at(n).log()));
    }
    for (std::size_t i = 1; i < err.size(); ++i) CHECK(err[i] < err[i - 1]);
    CHECK(loglog_slope(ns, err) <= seminorm - 1.0 + 0.1);
    CHECK(err.back() < 1e-2);
}

TEST_CASE("central limit corollary for V = cos theta") {
    const double t = 0.8;
    // e^{i t cos theta} is e^{2 s cos theta} with s = i t / 2
    const CircleSymbol s = builtin("exp_trig", {{"t", cplx(0.0, 0.5 * t)}});
    const cplx d = toeplitz_det(s, 64).value();
    CHECK(std::abs(d - std::exp(-t * t * 0.25)) < 1e-4);
}

TEST_CASE("Hankel and T+H exponents") {
    SUBCASE("Jacobi-type weight") {
        JumpWeight jw;
        jw.u = {0.0};
        jw.lambda = {1.0, -1.0};
        jw.alpha = {0.2, -0.1};
        jw.beta = {0.0, 0.0};
        const AsymptoticPrediction p = hankel_th_predict(StructuredKind::Hankel, jw);
        REQUIRE(p.terms.size() == 1);
        CHECK(p.terms[0].p.real() == doctest::Approx(-0.25 + 2.0 * (0.04 + 0.01)));
        CHECK(p.terms[0].quad.real() == doctest::Approx(-std::log(2.0)));
        CHECK_FALSE(p.terms[0].constant_known);
    }
    SUBCASE("interior root maps to a symmetric pair on the circle") {
        JumpWeight jw;
        jw.u = {0.0};
        jw.lambda = {1.0, 0.3, -1.0};
        jw.alpha = {0.0, 0.5, 0.0};
        jw.beta = {0.0, 0.0, 0.0};
        const CircleSymbol f = jump_weight_circle_symbol(jw);
        const double th = std::acos(0.3);
        int hits = 0;
        for (const auto& sg : f.singularities) {
            if (std::abs(sg.theta - th) < 1e-12 || std::abs(sg.theta - (2 * kPi - th)) < 1e-12) {
                CHECK(std::abs(sg.alpha - 0.5) < 1e-14);
                ++hits;
            }
            if (std::abs(sg.theta) < 1e-12 || std::abs(sg.theta - kPi) < 1e-12) CHECK(std::abs(sg.alpha - 0.5) < 1e-14);
        }
        CHECK(hits == 2);
        const AsymptoticPrediction p = hankel_th_predict(StructuredKind::Hankel, jw);
        CHECK(p.terms[0].p.real() == doctest::Approx(-0.25 + 0.25));
    }
    SUBCASE("th_plus_0 of an even smooth symbol") {
        const CircleSymbol f = builtin("exp_trig", {{"t", 0.4}});
        const AsymptoticPrediction p = hankel_th_predict(StructuredKind::THPlus0, f);
        REQUIRE(p.terms.size() == 1);
        CHECK(std::abs(p.terms[0].p) < 1e-14);
    }
}
