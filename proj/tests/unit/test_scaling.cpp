#include <doctest.h>

#include "oracle_values.hpp"
#include "toeplab/errors.hpp"
#include "toeplab/scaling.hpp"

#include <cmath>

using namespace toeplab;

namespace {

constexpr double kPi = MathConstants::pi;
const double kGammaE = MathConstants::euler_gamma;

double g_minus_limit() {
    return std::exp(0.25) * std::pow(MathConstants::glaisher_A, -3.0) * std::pow(2.0, -1.0 / 6.0);
}

} // namespace

TEST_CASE("Painleve III near r = 0 at lambda = 1/pi") {
    for (double r : {1e-3, 3e-3, 1e-2}) {
        const P3Scaling p = p3_scaling(r, 1.0 / kPi, ScalingSign::Minus);
        const double law = -(r / 2.0) * (std::log(r / 8.0) + kGammaE);
        CHECK(std::abs(p.eta_at_half_r / law - 1.0) < 0.02);
    }
}

TEST_CASE("Painleve III power law at lambda = 0.2") {
    const double lam = 0.2;
    const double sigma = (2.0 / kPi) * std::asin(kPi * lam);
    const double B = std::pow(2.0, -3.0 * sigma) * std::tgamma((1.0 - sigma) / 2.0) / std::tgamma((1.0 + sigma) / 2.0);
    for (double r : {1e-3, 1e-2}) {
        const P3Scaling p = p3_scaling(r, lam, ScalingSign::Minus);
        const double law = B * std::pow(r, sigma) *
                           (1.0 - std::pow(r, 2.0 - 2.0 * sigma) / (16.0 * B * B * std::pow(1.0 - sigma, 2.0)));
        CHECK(std::abs(p.eta_at_half_r / law - 1.0) < 0.01);
    }
}

TEST_CASE("G_- approaches its r -> 0 limit with the logarithmic correction") {
    for (double r : {0.002, 0.02}) {
        const double g = p3_scaling(r, 1.0 / kPi, ScalingSign::Minus).G;
        const double corrected = g_minus_limit() * (1.0 - (r / 2.0) * (std::log(r / 8.0) + kGammaE));
        CHECK(std::abs(std::pow(r, 0.25) * g / corrected - 1.0) < 5e-3);
    }
    const double g = p3_scaling(0.002, 1.0 / kPi, ScalingSign::Minus).G;
    CHECK(std::abs(std::pow(0.002, 0.25) * g / g_minus_limit() - 1.0) < 0.02);
}

TEST_CASE("input checks") {
    CHECK_THROWS_AS(p3_scaling(0.1, 0.5, ScalingSign::Minus), InputError);
    CHECK_THROWS_AS(p3_scaling(-1.0, 0.2, ScalingSign::Minus), InputError);
    CHECK_THROWS_AS(sine_gap(1.0, 16), InputError);
    CHECK_THROWS_AS(sine_gap(-1.0), InputError);
    CHECK_THROWS_AS(dyson_asymptote({2.0, 4.0, 6.0}), InputError);
    CHECK_THROWS_AS(dyson_asymptote({6.0, 12.0, 8.0}), InputError);
}

TEST_CASE("property: eta stays in (0, 1)") {
    for (double lam : {0.05, 0.2, 1.0 / kPi}) {
        const PainleveSolution s = p3_solve(lam, 1e-3);
        CHECK(s.grid.size() > 10);
        for (double v : s.values) {
            CHECK(v > 0.0);
            CHECK(v < 1.0);
        }
    }
}

TEST_CASE("Painleve V sigma-form") {
    CHECK(std::abs(p5_sigma(1e-3) + 0.25) < 5e-3);
    // six terms of the large-x series -e^{-x} / (2 pi) sum_m a_m x^{-m-1}
    const double a[] = {1.0, -1.5, 4.125, -15.9375, 78.3984375, -466.34765625};
    for (auto [x, tol] : {std::pair{10.0, 3e-3}, std::pair{20.0, 1e-4}, std::pair{30.0, 1e-5}}) {
        double series = 0.0;
        for (int m = 0; m < 6; ++m) series += a[m] / std::pow(x, m + 1);
        series *= -std::exp(-x) / (2.0 * kPi);
        CHECK(std::abs(p5_sigma(x) / series - 1.0) < tol);
    }
    const PainleveSolution s = p5_solve(0.1);
    CHECK(s.start_point == doctest::Approx(kP5XMax));
}

TEST_CASE("property: Painleve III and V routes to G_- agree") {
    for (double r : {0.5, 1.0, 2.0}) {
        const double a = p3_scaling(r, 1.0 / kPi, ScalingSign::Minus).G;
        const double b = g_minus_p5(r);
        CHECK(std::abs(a / b - 1.0) < 0.01);
    }
}

TEST_CASE("property: G_+ < G_-") {
    for (double r : {0.01, 0.1, 0.5, 1.0, 3.0}) {
        CHECK(p3_scaling(r, 1.0 / kPi, ScalingSign::Plus).G < p3_scaling(r, 1.0 / kPi, ScalingSign::Minus).G);
    }
}

TEST_CASE("sine-kernel gap probability") {
    CHECK(std::abs(sine_gap(1e-3).p_s.value().real() - oracle::sine_gap_small) < 1e-6);
    for (double s : {0.5, 2.0, 5.0, 9.0}) {
        const FredholmGap g = sine_gap(s);
        CHECK(std::abs(g.p_s.log_modulus - (g.d_plus * g.d_minus).log_modulus) < 1e-8);
    }
}

TEST_CASE("property: Nystrom doubling and monotonicity") {
    double prev = 0.0;
    for (double s : {1.0, 3.0, 6.0, 9.0, 12.0}) {
        const FredholmGap a = sine_gap(s, 48), b = sine_gap(s, 96);
        CHECK(std::abs(a.p_s.log_modulus - b.p_s.log_modulus) < 1e-9);
        CHECK(b.p_s.log_modulus < prev);
        CHECK(b.p_s.log_modulus + s * s / 2.0 <= 0.0);
        prev = b.p_s.log_modulus;
    }
}

TEST_CASE("Widom-Dyson constant") {
    CHECK(widom_dyson_constant() == doctest::Approx(oracle::widom_dyson_c0).epsilon(1e-14));
    // the characteristic-interval route at a modest size
    CHECK(std::abs(widom_constant_estimate(0.6, 48) - oracle::widom_dyson_c0) < 2e-2);
}
