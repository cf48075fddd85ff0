#pragma once

#include <boost/rational.hpp>

#include <map>
#include <utility>
#include <vector>

namespace toeplab {

constexpr double kBosonTMin = 0.05;

struct BosonSample {
    double t = 0.0;
    double r = 0.0;      // R_N(t) = D_{N-1}(f_t)
    double bound = 0.0;  // (e N / sin(t/2))^{1/2}
};

struct BosonDensityCurve {
    int N = 0;
    std::vector<BosonSample> samples;
};

// R_N on the given t values in [kBosonTMin, pi].
BosonDensityCurve boson_density(int N, const std::vector<double>& t_grid);

struct CondensateEstimate {
    double value = 0.0;      // lambda_max / N
    double error_bar = 0.0;
};

// (1 / 2 pi N) int_{-pi}^{pi} R_N(t) dt. Near t = 0 the determinant is taken
// from the closed-form coefficients of f_t, which stay exact as the two
// singularities merge; the error bar is the difference between two panel orders.
CondensateEstimate condensate_fraction(int N);

// Dyson's constant (e / pi)^{1/2} 2^{-5/6} A^{-6} Gamma(1/4)^2.
double condensate_constant();

using Rational = boost::rational<long long>;

struct LisTable {
    int N_max = 0;
    std::map<std::pair<int, int>, Rational> p;  // (N, n) -> Prob(l_N <= n), n = 0..N
    Rational at(int N, int n) const;
};

// Length of the longest increasing subsequence (patience sorting).
int longest_increasing_subsequence(const std::vector<int>& perm);

// p_N(n) for N <= N_max from all N! permutations.
LisTable lis_table(int N_max);

struct LisCheck {
    double lhs = 0.0;
    double rhs_truncated = 0.0;
    double tail_bound = 0.0;
};

// e^{-lambda} D_n(e^{2 sqrt(lambda) cos theta}) against the Poisson mixture of p_N(n), N <= N_max.
LisCheck lis_check(int n, double lambda, int N_max);

} // namespace toeplab
