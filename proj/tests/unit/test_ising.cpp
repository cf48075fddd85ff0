#include <doctest.h>

#include "oracle_values.hpp"
#include "toeplab/asympt.hpp"
#include "toeplab/errors.hpp"
#include "toeplab/exactdet.hpp"
#include "toeplab/ising.hpp"

#include <cmath>
#include <random>

using namespace toeplab;

namespace {

constexpr double kPi = MathConstants::pi;
const double kA = MathConstants::glaisher_A;

// Symmetric coupling with the given k_ons.
IsingParams symmetric(double k) { return ising_params(0.5 * std::asinh(1.0 / std::sqrt(k)), 0.5 * std::asinh(1.0 / std::sqrt(k))); }

// Root of sinh(2 chi) = 1 by bisection.
double critical_chi() {
    double lo = 0.1, hi = 1.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (std::sinh(2.0 * mid) < 1.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

} // namespace

TEST_CASE("coupling parameters and regimes") {
    const double chic = critical_chi();
    CHECK(chic == doctest::Approx(0.5 * std::asinh(1.0)).epsilon(1e-14));
    const IsingParams c = ising_params(chic, chic);
    CHECK(c.regime == IsingRegime::Critical);
    CHECK(c.gamma1 == doctest::Approx(3.0 - 2.0 * std::sqrt(2.0)).epsilon(1e-12));
    const IsingParams low = ising_params(1.5, 1.5);
    CHECK(low.regime == IsingRegime::Subcritical);
    CHECK(low.k_ons < 1.0);
    CHECK(ising_params(0.2, 0.3).regime == IsingRegime::Supercritical);
    CHECK_THROWS_AS(ising_params(-1.0, 0.3), InputError);
    CHECK(regime_name(IsingRegime::Critical) == "critical");
}

TEST_CASE("property: regime dichotomy gamma2 vs k_ons") {
    std::mt19937 rng(2024);
    std::uniform_real_distribution<double> u(0.05, 2.0);
    for (int i = 0; i < 200; ++i) {
        const double c1 = u(rng), c2 = u(rng);
        const IsingParams p = ising_params(c1, c2);
        const double s = std::sinh(2 * c1) * std::sinh(2 * c2);
        if (std::abs(s - 1.0) < 1e-9) continue;
        // gamma2 from its definition z2* / z1
        const double g2 = std::exp(-2.0 * c2) / std::tanh(c1);
        CHECK((g2 < 1.0) == (1.0 / s < 1.0));
        CHECK((p.regime == IsingRegime::Subcritical) == (g2 < 1.0));
    }
}

TEST_CASE("free energy") {
    CHECK(std::abs(onsager_integral(0.0, FreeEnergyForm::DoubleIntegral)) < 1e-15);
    CHECK(std::abs(onsager_integral(0.0, FreeEnergyForm::SingleIntegral)) < 1e-15);
    const double crit = onsager_integral(1.0, FreeEnergyForm::SingleIntegral);
    CHECK(std::isfinite(crit));
    CHECK(crit == doctest::Approx(oracle::onsager_critical_integral).epsilon(1e-10));
    CHECK(onsager_integral(1.0, FreeEnergyForm::DoubleIntegral) == doctest::Approx(crit).epsilon(1e-8));
    CHECK_THROWS_AS(free_energy(ising_params(0.3, 0.5), FreeEnergyForm::SingleIntegral), InputError);
}

TEST_CASE("property: the two free-energy forms agree to 1e-10") {
    for (double chi : {0.1, 0.3, 0.4, 0.6, 1.0, 2.0}) {
        const IsingParams p = ising_params(chi, chi);
        CHECK(std::abs(free_energy(p, FreeEnergyForm::DoubleIntegral) - free_energy(p, FreeEnergyForm::SingleIntegral)) <
              1e-10);
    }
}

TEST_CASE("diagonal correlations") {
    CHECK(std::abs(toeplitz_det(builtin("diag", {{"k_ons", 0.0}}), 17).value() - 1.0) < 1e-14);
    const IsingParams c = ising_params(critical_chi(), critical_chi());
    const double g = correlation(c, CorrelationKind::Diag, 20, CorrelationRoute::GammaProduct).value;
    const double t = correlation(c, CorrelationKind::Diag, 20, CorrelationRoute::Toeplitz).value;
    CHECK(std::abs(g - t) <= 1e-9 * std::abs(g));
    CHECK(std::abs(t - std::exp(log_w_critical(20))) <= 1e-9 * t);
    const IsingParams p = symmetric(0.5);
    CHECK(p.k_ons == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(std::abs(correlation(p, CorrelationKind::Diag, 40).value - std::pow(0.75, 0.25)) < 1e-6);
}

TEST_CASE("magnetization") {
    CHECK(magnetization(symmetric(0.6)) == doctest::Approx(std::pow(1.0 - 0.36, 0.125)).epsilon(1e-12));
    CHECK(magnetization(ising_params(critical_chi(), critical_chi())) == 0.0);
    CHECK(magnetization(ising_params(0.2, 0.2)) == 0.0);
    CHECK(magnetization(ising_params(20.0, 20.0)) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("leading asymptotic values") {
    const IsingParams c = ising_params(critical_chi(), critical_chi());
    for (int n : {5, 50}) {
        const double lead = std::exp(0.25) * std::pow(2.0, 5.0 / 24.0) * std::pow(kA, -3.0) * std::pow(n, -0.25);
        CHECK(wu_leading(c, CorrelationKind::Row, n) == doctest::Approx(lead).epsilon(1e-12));
    }
    const IsingParams s = ising_params(0.7, 0.6);
    REQUIRE(s.regime == IsingRegime::Subcritical);
    for (int n : {3, 10}) {
        const double g2 = s.gamma2, m2 = std::pow(magnetization(s), 2);
        const double lead = m2 * (1.0 + std::pow(g2, 2 * n) / (2 * kPi * n * n) / std::pow(1.0 / g2 - g2, 2));
        CHECK(wu_leading(s, CorrelationKind::Row, n) == doctest::Approx(lead).epsilon(1e-12));
    }
    const IsingParams hot = symmetric(2.0);
    const double ratio = correlation(hot, CorrelationKind::Diag, 30).value / wu_leading(hot, CorrelationKind::Diag, 30);
    CHECK(std::abs(ratio - 1.0) < 0.05);
}

TEST_CASE("property: row correlation tends to M^2 with a shrinking gap") {
    const IsingParams p = ising_params(0.47, 0.47);
    REQUIRE(p.regime == IsingRegime::Subcritical);
    const double m2 = std::pow(magnetization(p), 2);
    double prev = 1e300;
    for (int n = 10; n <= 60; n += 10) {
        const double gap = std::abs(correlation(p, CorrelationKind::Row, n).value - m2);
        CHECK(gap < prev);
        prev = gap;
    }
    CHECK(prev < 1e-6 * m2);
}

TEST_CASE("property: SSLT constant of the Onsager symbol in closed form") {
    for (auto [g1, g2] : {std::pair{0.1, 0.5}, std::pair{0.3, 0.9}, std::pair{0.05, 0.2}}) {
        const AsymptoticPrediction p = szego_fh_predict(builtin("onsager", {{"gamma1", g1}, {"gamma2", g2}}));
        const double closed = 0.25 * std::log((1 - g1 * g1) * (1 - g2 * g2) / std::pow(1 - g1 * g2, 2));
        CHECK(std::abs(p.terms[0].c - closed) < 1e-10);
    }
}

TEST_CASE("property: critical diagonal decay with the 1/(64 n^2) correction") {
    const IsingParams c = ising_params(critical_chi(), critical_chi());
    const double lead = std::exp(0.25) * std::pow(kA, -3.0) * std::pow(2.0, 1.0 / 12.0);
    for (int n : {16, 32, 64, 128}) {
        const double v = std::pow(n, 0.25) * correlation(c, CorrelationKind::Diag, n, CorrelationRoute::GammaProduct).value;
        const double resid = v / lead - 1.0;
        CHECK(std::abs(resid) <= 3.0 / (64.0 * n * n));
        CHECK(resid < 0.0);
    }
}

TEST_CASE("property: T > T_c factorization through the complementary polynomials") {
    const IsingParams p = ising_params(0.3, 0.35);
    REQUIRE(p.regime == IsingRegime::Supercritical);
    const CircleSymbol ons = builtin("onsager", {{"gamma1", p.gamma1}, {"gamma2", p.gamma2}});
    const CircleSymbol tilde = builtin("onsager_tilde", {{"gamma1", p.gamma1}, {"gamma2", p.gamma2}});
    for (int n : {4, 8, 15}) {
        const OpucValues o = opuc_at_points(tilde, n, {0.0}, true);
        REQUIRE(o.complementary);
        const cplx rhs = (*o.complementary)[0] * toeplitz_det(tilde, n).value();
        const cplx lhs = toeplitz_det(ons, n).value();
        CHECK(std::abs(lhs - rhs) <= 1e-8 * std::abs(lhs));
    }
}
