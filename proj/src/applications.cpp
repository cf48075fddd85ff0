#include "toeplab/applications.hpp"
#include "toeplab/errors.hpp"
#include "toeplab/exactdet.hpp"
#include "toeplab/quadrature.hpp"
#include "toeplab/symbols.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace toeplab {

namespace {

constexpr double kPi = MathConstants::pi;

double lenard_det(int N, double t) {
    const CircleSymbol s = builtin("lenard", {{"t", t}});
    const cplx v = toeplitz_det(s, N - 1).value();
    if (std::abs(v.imag()) > 1e-10 * std::max(1.0, std::abs(v)))
        throw NumericalError("boson density: determinant is not real at t = " + std::to_string(t));
    return v.real();
}

// int_0^pi R_N(t) dt with t = u^2, panels in u graded toward 0.
double half_integral(int N, int order) {
    const Rule& gl = gauss_legendre(order);
    const double umax = std::sqrt(kPi);
    double sum = 0.0, hi = umax;
    constexpr int levels = 12;
    for (int l = 0; l <= levels; ++l) {
        const double lo = l == levels ? 0.0 : 0.5 * hi;
        const double mid = 0.5 * (lo + hi), h = 0.5 * (hi - lo);
        for (std::size_t i = 0; i < gl.size(); ++i) {
            const double u = mid + h * gl.x[i];
            sum += h * gl.w[i] * 2.0 * u * lenard_det(N, u * u);
        }
        hi = lo;
    }
    return sum;
}

} // namespace

BosonDensityCurve boson_density(int N, const std::vector<double>& t_grid) {
    if (N < 2) throw InputError("boson_density: N must be at least 2");
    BosonDensityCurve c;
    c.N = N;
    for (double t : t_grid) {
        if (!(t > 0.0 && t <= kPi)) throw InputError("boson_density: t must lie in (0, pi]");
        if (t < kBosonTMin)
            throw InputError("boson_density: t below " + std::to_string(kBosonTMin) +
                             " (merging singularities are not resolved)");
        BosonSample s;
        s.t = t;
        s.r = lenard_det(N, t);
        s.bound = std::sqrt(std::exp(1.0) * N / std::sin(0.5 * t));
        c.samples.push_back(s);
    }
    return c;
}

CondensateEstimate condensate_fraction(int N) {
    if (N < 4) throw InputError("condensate_fraction: N must be at least 4");
    const double a = half_integral(N, 16), b = half_integral(N, 24);
    CondensateEstimate e;
    e.value = 2.0 * b / (2.0 * kPi * N);
    e.error_bar = 2.0 * std::abs(a - b) / (2.0 * kPi * N);
    if (e.error_bar > 0.1 * e.value) throw NumericalError("condensate_fraction: error bar exceeds 10% of the estimate");
    return e;
}

double condensate_constant() {
    const double g = std::tgamma(0.25);
    return std::sqrt(std::exp(1.0) / kPi) * std::pow(2.0, -5.0 / 6.0) * std::pow(MathConstants::glaisher_A, -6.0) * g * g;
}

// ---- longest increasing subsequences -----------------------------------------

Rational LisTable::at(int N, int n) const {
    if (N < 0 || N > N_max) throw InputError("lis table: N out of range");
    if (n >= N) return Rational(1);
    if (n < 0) return Rational(0);
    return p.at({N, n});
}

int longest_increasing_subsequence(const std::vector<int>& perm) {
    std::vector<int> piles;
    for (int v : perm) {
        auto it = std::lower_bound(piles.begin(), piles.end(), v);
        if (it == piles.end())
            piles.push_back(v);
        else
            *it = v;
    }
    return static_cast<int>(piles.size());
}

LisTable lis_table(int N_max) {
    if (N_max < 0 || N_max > 8) throw InputError("lis_table: N_max must lie in [0, 8]");
    LisTable t;
    t.N_max = N_max;
    long long fact = 1;
    for (int N = 0; N <= N_max; ++N) {
        if (N > 0) fact *= N;
        std::vector<long long> count(N + 1, 0);
        std::vector<int> perm(N);
        std::iota(perm.begin(), perm.end(), 1);
        do {
            ++count[longest_increasing_subsequence(perm)];
        } while (std::next_permutation(perm.begin(), perm.end()));
        long long cum = 0;
        for (int n = 0; n <= N; ++n) {
            cum += count[n];
            t.p[{N, n}] = Rational(cum, fact);
        }
    }
    return t;
}

LisCheck lis_check(int n, double lambda, int N_max) {
    if (n < 1) throw InputError("lis_check: n must be positive");
    if (!(lambda > 0.0)) throw InputError("lis_check: lambda must be positive");
    LisCheck r;
    // P(Poisson(lambda) > N_max)
    r.tail_bound = boost::math::gamma_p(N_max + 1.0, lambda);
    if (r.tail_bound >= 1e-3)
        throw InputError("lis_check: N_max too small, Poisson tail " + std::to_string(r.tail_bound) + " >= 1e-3");
    const LisTable table = lis_table(N_max);

    const CircleSymbol phi = builtin("exp_trig", {{"t", std::sqrt(lambda)}});
    const CoeffWindow c = quadrature_coeffs(phi, -(n - 1), n - 1);
    r.lhs = std::exp(-lambda) * toeplitz_det_from_coeffs(c, n).value().real();

    double term = std::exp(-lambda);
    for (int N = 0; N <= N_max; ++N) {
        if (N > 0) term *= lambda / N;
        r.rhs_truncated += term * boost::rational_cast<double>(table.at(N, n));
    }
    return r;
}

} // namespace toeplab
