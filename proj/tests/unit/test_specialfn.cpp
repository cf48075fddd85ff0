#include <doctest.h>

#include "oracle_values.hpp"
#include "toeplab/errors.hpp"
#include "toeplab/specialfn.hpp"

#include <cmath>
#include <random>

using namespace toeplab;

namespace {

constexpr double kPi = MathConstants::pi;

// Same value modulo 2 pi i.
double log_distance(cplx a, cplx b) {
    const cplx d = a - b;
    return std::abs(cplx(d.real(), std::remainder(d.imag(), 2.0 * kPi)));
}

// log G(z + 1) by the large-argument expansion in powers of 1/z.
cplx barnes_asymptotic(cplx z) {
    const cplx lz = std::log(z);
    cplx s = 0.5 * z * z * lz - 0.75 * z * z + 0.5 * z * std::log(2.0 * kPi) - lz / 12.0 +
             (1.0 / 12.0 - std::log(MathConstants::glaisher_A));
    // B_{2k+2} / (4k(k+1) z^{2k})
    const double b[] = {-1.0 / 30.0, 1.0 / 42.0, -1.0 / 30.0, 5.0 / 66.0, -691.0 / 2730.0, 7.0 / 6.0};
    cplx zp = z * z;
    for (int k = 1; k <= 6; ++k) {
        s += b[k - 1] / (4.0 * k * (k + 1) * zp);
        zp *= z * z;
    }
    return s;
}

std::vector<cplx> strip_grid(int count) {
    std::mt19937 rng(12345);
    std::uniform_real_distribution<double> u(-10.0, 10.0);
    std::vector<cplx> z;
    while (static_cast<int>(z.size()) < count) {
        const cplx w(u(rng), u(rng));
        if (std::abs(w.imag()) < 0.05 && std::abs(w.real() - std::round(w.real())) < 0.05 && w.real() < 0.5)
            continue;
        z.push_back(w);
    }
    return z;
}

} // namespace

TEST_CASE("constants are mutually consistent") {
    CHECK_NOTHROW(check_constants());
    CHECK(std::abs(MathConstants::glaisher_A - std::exp(1.0 / 12.0 - MathConstants::zeta_prime_neg1)) < 1e-14);
    CHECK(MathConstants::glaisher_A == doctest::Approx(oracle::glaisher).epsilon(1e-15));
    CHECK(MathConstants::zeta_prime_neg1 == doctest::Approx(oracle::zeta_prime_m1).epsilon(1e-15));
}

TEST_CASE("log_gamma special values") {
    CHECK(std::abs(log_gamma(1.0)) < 1e-13);
    CHECK(std::abs(log_gamma(0.5) - 0.5 * std::log(kPi)) < 1e-13);
    CHECK(std::abs(log_gamma(cplx(0.3, 0.4)) - oracle::log_gamma_03_04) < 1e-13);
    CHECK(log_distance(log_gamma(cplx(-3.5, 2.0)), oracle::log_gamma_m35_2) < 1e-12);
    CHECK(std::abs(log_gamma(10.0) - std::log(362880.0)) < 1e-13);
}

TEST_CASE("log_gamma poles are rejected") {
    CHECK_THROWS_AS(log_gamma(0.0), InputError);
    CHECK_THROWS_AS(log_gamma(-3.0), InputError);
    CHECK(rgamma(-2.0) == cplx(0.0));
}

TEST_CASE("property: gamma recursion on a random strip grid") {
    for (const cplx z : strip_grid(100)) {
        const cplx ratio = std::exp(log_gamma(z + 1.0) - log_gamma(z));
        CHECK(std::abs(ratio - z) <= 1e-12 * std::abs(z));
    }
}

TEST_CASE("log_barnes_g special values") {
    CHECK(std::abs(log_barnes_g(1.0)) < 1e-12);
    CHECK(std::abs(log_barnes_g(4.0) - std::log(2.0)) < 1e-13);
    const double closed = std::log(std::pow(2.0, 1.0 / 24.0) * std::exp(0.125) * std::pow(kPi, -0.25) *
                                   std::pow(MathConstants::glaisher_A, -1.5));
    CHECK(std::abs(log_barnes_g(0.5).real() - closed) < 1e-12);
    CHECK(std::abs(log_barnes_g_half_closed() - closed) < 1e-14);
    const double pair = std::log(std::pow(2.0, 1.0 / 12.0) * std::exp(0.25) * std::pow(MathConstants::glaisher_A, -3.0));
    CHECK(std::abs((log_barnes_g(0.5) + log_barnes_g(1.5)).real() - pair) < 1e-12);
    CHECK(log_distance(log_barnes_g(cplx(0.7, 0.2)), oracle::log_barnes_g_07_02) < 1e-12);
    CHECK(log_distance(log_barnes_g(cplx(2.5, -1.3)), oracle::log_barnes_g_25_m13) < 1e-12);
    CHECK_THROWS_AS(log_barnes_g(-1.0), InputError);
}

TEST_CASE("property: Barnes recursion on a random strip grid") {
    for (const cplx z : strip_grid(100)) {
        const cplx d = log_barnes_g(z + 1.0) - log_barnes_g(z) - log_gamma(z);
        CHECK(log_distance(d, 0.0) < 1e-11 * std::max(1.0, std::abs(log_barnes_g(z))));
    }
}

TEST_CASE("property: large-argument expansion of log G") {
    for (double a : {0.0, 0.5, -0.5}) {
        const cplx z = 50.0 + a;
        CHECK(std::abs(log_barnes_g(z + 1.0) - barnes_asymptotic(z)) < 1e-6);
    }
}

TEST_CASE("bessel K") {
    CHECK(bessel_k0(1.0) == doctest::Approx(oracle::bessel_k0_1).epsilon(1e-13));
    CHECK(bessel_k0(7.0) == doctest::Approx(oracle::bessel_k0_7).epsilon(1e-13));
    CHECK(bessel_k1(2.0) == doctest::Approx(oracle::bessel_k1_2).epsilon(1e-13));
    const double lead = std::sqrt(kPi / 40.0) * std::exp(-20.0);
    CHECK(std::abs(bessel_k0(20.0) / lead - 1.0) < 0.05);
    CHECK(std::abs(bessel_k0(1e-6) - (-std::log(0.5e-6) - MathConstants::euler_gamma)) < 1e-4);
    CHECK_THROWS_AS(bessel_k0(0.0), InputError);
    double prev = bessel_k0(0.01);
    for (double x = 0.1; x < 30.0; x += 0.37) {
        const double v = bessel_k0(x);
        CHECK(v > 0.0);
        CHECK(v < prev);
        prev = v;
    }
}
