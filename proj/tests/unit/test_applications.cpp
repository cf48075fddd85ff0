#include <doctest.h>

#include "oracle_values.hpp"
#include "toeplab/applications.hpp"
#include "toeplab/errors.hpp"
#include "toeplab/exactdet.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

using namespace toeplab;

namespace {

constexpr double kPi = MathConstants::pi;

// O(N^2) dynamic programme, independent of patience sorting.
int lis_dp(const std::vector<int>& p) {
    std::vector<int> best(p.size(), 1);
    int top = 0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        for (std::size_t j = 0; j < i; ++j)
            if (p[j] < p[i]) best[i] = std::max(best[i], best[j] + 1);
        top = std::max(top, best[i]);
    }
    return top;
}

} // namespace

TEST_CASE("boson density") {
    const BosonDensityCurve c = boson_density(12, {kPi, 2.0, 1.0, 0.3, 0.05});
    REQUIRE(c.samples.size() == 5);
    CHECK(c.samples[0].r > 0.0);
    for (const auto& s : c.samples) {
        CHECK(s.r > 0.0);
        CHECK(std::abs(s.r) <= s.bound);
    }
    CHECK_THROWS_AS(boson_density(12, {0.01}), InputError);
    CHECK_THROWS_AS(boson_density(1, {1.0}), InputError);
    CHECK_THROWS_AS(boson_density(12, {4.0}), InputError);
}

TEST_CASE("two bosons: R_2 is the mean of the symbol") {
    for (double t : {0.5, 1.7, kPi}) {
        const CircleSymbol f = builtin("lenard", {{"t", t}});
        const double mean = quadrature_coeffs(f, 0, 0)[0].real();
        CHECK(boson_density(2, {t}).samples[0].r == doctest::Approx(mean).epsilon(1e-10));
    }
}

TEST_CASE("property: R_N is symmetric under t -> 2 pi - t") {
    for (double t : {0.4, 1.3, 2.9}) {
        const double a = toeplitz_det(builtin("lenard", {{"t", t}}), 9).value().real();
        const double b = toeplitz_det(builtin("lenard", {{"t", 2 * kPi - t}}), 9).value().real();
        CHECK(a == doctest::Approx(b).epsilon(1e-10));
    }
}

TEST_CASE("property: condensate estimates are positive and decrease in N") {
    double prev = 1e300;
    for (int N : {4, 8, 16, 32}) {
        const CondensateEstimate e = condensate_fraction(N);
        CHECK(e.value > 0.0);
        CHECK(e.value < prev);
        CHECK(e.error_bar < 0.1 * e.value);
        prev = e.value;
    }
    CHECK_THROWS_AS(condensate_fraction(3), InputError);
    CHECK(condensate_constant() == doctest::Approx(oracle::dyson_condensate).epsilon(1e-14));
}

TEST_CASE("LIS by patience sorting matches a direct programme") {
    std::vector<int> p(7);
    std::iota(p.begin(), p.end(), 1);
    do {
        CHECK(longest_increasing_subsequence(p) == lis_dp(p));
    } while (std::next_permutation(p.begin(), p.end()));
}

TEST_CASE("property: LIS distribution table") {
    const LisTable t = lis_table(7);
    long long fact = 1;
    for (int N = 1; N <= 7; ++N) {
        fact *= N;
        CHECK(t.at(N, N) == Rational(1));
        CHECK(t.at(N, 1) == Rational(1, fact));
        for (int n = 1; n < N; ++n) CHECK(t.at(N, n) <= t.at(N, n + 1));
    }
    // p_4(2) by direct count
    std::vector<int> p = {1, 2, 3, 4};
    int count = 0;
    do {
        if (lis_dp(p) <= 2) ++count;
    } while (std::next_permutation(p.begin(), p.end()));
    CHECK(t.at(4, 2) == Rational(count, 24));
    CHECK_THROWS_AS(lis_table(9), InputError);
}

TEST_CASE("Poissonized LIS identity") {
    const LisCheck c = lis_check(2, 1.0, 7);
    CHECK(c.tail_bound < 2e-5);
    CHECK(std::abs(c.lhs - c.rhs_truncated) <= c.tail_bound);
    // n >= N_max: every p is 1
    const LisCheck d = lis_check(7, 1.0, 7);
    double poisson = 0.0, term = std::exp(-1.0);
    for (int N = 0; N <= 7; ++N) {
        if (N > 0) term /= N;
        poisson += term;
    }
    CHECK(d.rhs_truncated == doctest::Approx(poisson).epsilon(1e-14));
    CHECK(std::abs(d.lhs - d.rhs_truncated) <= d.tail_bound);
    CHECK_THROWS_AS(lis_check(2, 5.0, 4), InputError);
}

TEST_CASE("property: identity residual within the tail bound") {
    for (double lam : {0.5, 1.0, 1.5}) {
        for (int n = 1; n <= 5; ++n) {
            const LisCheck c = lis_check(n, lam, 8);
            CHECK(std::abs(c.lhs - c.rhs_truncated) <= c.tail_bound);
        }
    }
}
