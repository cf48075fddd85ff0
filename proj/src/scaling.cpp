#include "toeplab/scaling.hpp"
#include "toeplab/errors.hpp"
#include "toeplab/exactdet.hpp"
#include "toeplab/quadrature.hpp"
#include "toeplab/symbols.hpp"

#include <boost/math/constants/constants.hpp>
#include <boost/numeric/odeint.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

namespace toeplab {

namespace {

namespace odeint = boost::numeric::odeint;

constexpr double kPi = MathConstants::pi;
constexpr double kRelTol = 1e-11;
constexpr double kAbsTol = 1e-13;

template <std::size_t N>
using State = std::array<double, N>;

template <std::size_t N>
auto make_stepper(double abs_tol = kAbsTol) {
    return odeint::make_controlled(abs_tol, kRelTol, odeint::runge_kutta_cash_karp54<State<N>>());
}

// ---- Painleve III ----------------------------------------------------------
// u = log eta, s = log theta: u_ss = 2 e^{2s} sinh(2u). Integrated in tau = -s.
// State: u, u_s, and I = int theta ((1 - eta^2)^2 - eta'^2) / eta^2 dtheta from theta
// to kP3ThetaMax, whose integrand in s is 4 e^{2s} sinh(u)^2 - u_s^2.

struct P3Rhs {
    void operator()(const State<3>& y, State<3>& dy, double tau) const {
        const double e2s = std::exp(-2.0 * tau);
        const double sh = std::sinh(y[0]);
        dy[0] = -y[1];
        dy[1] = -2.0 * e2s * std::sinh(2.0 * y[0]);
        dy[2] = 4.0 * e2s * sh * sh - y[1] * y[1];
    }
};

void check_lambda(double lambda) {
    if (!(lambda > 0.0 && lambda <= 1.0 / kPi + 1e-15))
        throw InputError("painleve III: lambda must lie in (0, 1/pi]");
}

State<3> p3_start(double lambda) {
    const double t = kP3ThetaMax;
    const double eta = 1.0 - 2.0 * lambda * bessel_k0(2.0 * t);
    const double deta = 4.0 * lambda * bessel_k1(2.0 * t);
    return {std::log(eta), t * deta / eta, 0.0};
}

// int_{theta_max}^infty of the G integrand, with eta - 1 ~ -2 lambda K0(2 theta).
double p3_tail(double lambda) {
    const Rule& gl = gauss_legendre(64);
    double sum = 0.0;
    const double a = kP3ThetaMax, b = kP3ThetaMax + 20.0;
    for (std::size_t i = 0; i < gl.size(); ++i) {
        const double t = 0.5 * (a + b) + 0.5 * (b - a) * gl.x[i];
        const double k0 = bessel_k0(2.0 * t), k1 = bessel_k1(2.0 * t);
        sum += 0.5 * (b - a) * gl.w[i] * t * 16.0 * lambda * lambda * (k0 * k0 - k1 * k1);
    }
    return sum;
}

template <class Observer>
State<3> p3_integrate(double lambda, double theta_end, Observer obs) {
    check_lambda(lambda);
    if (!(theta_end > 0.0 && theta_end <= kP3ThetaMax))
        throw InputError("painleve III: theta must lie in (0, " + std::to_string(kP3ThetaMax) + "]");
    if (theta_end < 1e-9) throw InputError("painleve III: theta below the resolved range (1e-9)");
    State<3> y = p3_start(lambda);
    const double tau0 = -std::log(kP3ThetaMax), tau1 = -std::log(theta_end);
    if (tau1 == tau0) {
        obs(y, tau0);
        return y;
    }
    odeint::integrate_adaptive(make_stepper<3>(), P3Rhs{}, y, tau0, tau1, 1e-3, [&](const State<3>& s, double tau) {
        if (!std::isfinite(s[0]) || std::abs(s[0]) > 40.0)
            throw NumericalError("painleve III: eta left (0, infinity) near theta = " +
                                 std::to_string(std::exp(-tau)));
        obs(s, tau);
    });
    return y;
}

// ---- Painleve V sigma form ---------------------------------------------------
// Differentiating (x s'')^2 = (s - x s' + 2 s'^2)^2 - 4 s'^2 (s'^2 - 1/4) once and
// dividing by 2 s'' gives
//   x^2 s''' = P (4 s' - x) - 8 s'^3 + s' - x s'',   P = s - x s' + 2 s'^2.
// Integrated in tau = -log x. State: s, s', s'', J = int_x^{x_max} s(t) / t dt.

struct P5Rhs {
    void operator()(const State<4>& y, State<4>& dy, double tau) const {
        const double x = std::exp(-tau);
        const double s = y[0], d1 = y[1], d2 = y[2];
        const double p = s - x * d1 + 2.0 * d1 * d1;
        const double d3 = (p * (4.0 * d1 - x) - 8.0 * d1 * d1 * d1 + d1 - x * d2) / (x * x);
        dy[0] = -x * d1;
        dy[1] = -x * d2;
        dy[2] = -x * d3;
        dy[3] = s;
    }
};

// sigma ~ e^{-x} sum_m a_m x^{-m-1}, a_0 = -1/(2 pi), from the linearized equation;
// the nonlinear terms are O(e^{-2x}).
State<4> p5_start() {
    const double x = kP5XMax;
    constexpr int terms = 24;
    std::array<double, terms> a{};
    a[0] = -1.0 / (2.0 * kPi);
    for (int m = 1; m < terms; ++m) {
        const double k = m - 1;
        double r = (3.0 * k * k + 7.0 * k + 3.0) * a[m - 1];
        if (m >= 2) {
            const double j = m - 2;
            r += (j + 1.0) * (j + 1.0) * (j + 3.0) * a[m - 2];
        }
        a[m] = -r / (2.0 * m);
    }
    // sum of a_m x^{-m-1} and its first two derivatives, then times e^{-x}
    double f = 0.0, f1 = 0.0, f2 = 0.0;
    for (int m = 0; m < terms; ++m) {
        const double p = m + 1.0;
        const double xp = std::pow(x, -p);
        f += a[m] * xp;
        f1 += -p * a[m] * xp / x;
        f2 += p * (p + 1.0) * a[m] * xp / (x * x);
    }
    const double e = std::exp(-x);
    return {e * f, e * (f1 - f), e * (f2 - 2.0 * f1 + f), 0.0};
}

double p5_tail() {
    // int_{x_max}^infty sigma / x dx to leading order
    return -std::exp(-kP5XMax) / (2.0 * kPi * kP5XMax * kP5XMax);
}

template <class Observer>
State<4> p5_integrate(double x_end, Observer obs) {
    if (!(x_end > 0.0 && x_end <= kP5XMax))
        throw InputError("painleve V: x must lie in (0, " + std::to_string(kP5XMax) + "]");
    if (x_end < 1e-8) throw InputError("painleve V: x below the resolved range (1e-8)");
    State<4> y = p5_start();
    const double tau0 = -std::log(kP5XMax), tau1 = -std::log(x_end);
    if (tau1 == tau0) {
        obs(y, tau0);
        return y;
    }
    // sigma starts near 1e-20, so the error control is purely relative
    odeint::integrate_adaptive(make_stepper<4>(1e-40), P5Rhs{}, y, tau0, tau1, 1e-3, [&](const State<4>& s, double tau) {
        if (!std::isfinite(s[0]) || std::abs(s[0]) > 1e3)
            throw NumericalError("painleve V: pole encountered near x = " + std::to_string(std::exp(-tau)));
        obs(s, tau);
    });
    return y;
}

// ---- Nystrom -----------------------------------------------------------------

template <class K>
LogDet nystrom_logdet(const std::vector<xreal>& x, const std::vector<xreal>& w, K kernel) {
    const int m = static_cast<int>(x.size());
    std::vector<xreal> a(static_cast<std::size_t>(m) * m);
    for (int i = 0; i < m; ++i) {
        const xreal si = sqrt(w[i]);
        for (int j = 0; j < m; ++j) a[i * m + j] = (i == j ? xreal(1) : xreal(0)) - si * kernel(x[i], x[j]) * sqrt(w[j]);
    }
    return lu_logdet(std::move(a), m);
}

xreal sinc_over_pi(const xreal& d) {
    const xreal pi = boost::math::constants::pi<xreal>();
    if (abs(d) < xreal(1e-30)) return 1 / pi;
    return sin(d) / (pi * d);
}

FredholmGap sine_gap_once(double s, int nodes) {
    std::vector<xreal> gx, gw;
    gauss_legendre_t<xreal>(nodes, gx, gw);
    const xreal xs(s);
    std::vector<xreal> full_x(nodes), full_w(nodes), half_x(nodes), half_w(nodes);
    for (int i = 0; i < nodes; ++i) {
        full_x[i] = xs * gx[i];
        full_w[i] = xs * gw[i];
        half_x[i] = xs * (gx[i] + 1) / 2;
        half_w[i] = xs * gw[i] / 2;
    }
    FredholmGap g;
    g.s = s;
    g.nodes = nodes;
    g.p_s = nystrom_logdet(full_x, full_w, [](const xreal& a, const xreal& b) { return sinc_over_pi(a - b); });
    g.d_plus = nystrom_logdet(half_x, half_w, [](const xreal& a, const xreal& b) {
        return sinc_over_pi(a - b) + sinc_over_pi(a + b);
    });
    g.d_minus = nystrom_logdet(half_x, half_w, [](const xreal& a, const xreal& b) {
        return sinc_over_pi(a - b) - sinc_over_pi(a + b);
    });
    return g;
}

} // namespace

PainleveSolution p3_solve(double lambda, double theta_min) {
    PainleveSolution sol;
    sol.kind = PainleveKind::P3Eta;
    sol.parameter = lambda;
    sol.start_point = kP3ThetaMax;
    const double k0 = bessel_k0(2.0 * kP3ThetaMax);
    sol.start_tolerance = 4.0 * lambda * lambda * k0 * k0;
    p3_integrate(lambda, theta_min, [&](const State<3>& y, double tau) {
        const double t = std::exp(-tau), eta = std::exp(y[0]);
        sol.grid.push_back(t);
        sol.values.push_back(eta);
        sol.derivs.push_back(eta * y[1] / t);
    });
    std::reverse(sol.grid.begin(), sol.grid.end());
    std::reverse(sol.values.begin(), sol.values.end());
    std::reverse(sol.derivs.begin(), sol.derivs.end());
    return sol;
}

P3Scaling p3_scaling(double r, double lambda, ScalingSign sign) {
    if (!(r > 0.0 && r <= 2.0 * kP3ThetaMax))
        throw InputError("p3_scaling: need 0 < r <= " + std::to_string(2.0 * kP3ThetaMax));
    const State<3> y = p3_integrate(lambda, 0.5 * r, [](const State<3>&, double) {});
    P3Scaling out;
    out.eta_at_half_r = std::exp(y[0]);
    const double integral = y[2] + p3_tail(lambda);
    const double num = sign == ScalingSign::Plus ? 1.0 - out.eta_at_half_r : 1.0 + out.eta_at_half_r;
    out.G = num / (2.0 * std::sqrt(out.eta_at_half_r)) * std::exp(0.25 * integral);
    return out;
}

PainleveSolution p5_solve(double x_min) {
    PainleveSolution sol;
    sol.kind = PainleveKind::P5Sigma;
    sol.start_point = kP5XMax;
    sol.start_tolerance = std::exp(-kP5XMax) * 1e-12;  // truncated series term at x = 40
    p5_integrate(x_min, [&](const State<4>& y, double tau) {
        sol.grid.push_back(std::exp(-tau));
        sol.values.push_back(y[0]);
        sol.derivs.push_back(y[1]);
    });
    std::reverse(sol.grid.begin(), sol.grid.end());
    std::reverse(sol.values.begin(), sol.values.end());
    std::reverse(sol.derivs.begin(), sol.derivs.end());
    return sol;
}

double p5_sigma(double x) { return p5_integrate(x, [](const State<4>&, double) {})[0]; }

double g_minus_p5(double r) {
    if (!(r > 0.0)) throw InputError("g_minus_p5: r must be positive");
    if (2.0 * r >= kP5XMax) return std::exp(-p5_tail());
    const State<4> y = p5_integrate(2.0 * r, [](const State<4>&, double) {});
    return std::exp(-(y[3] + p5_tail()));
}

FredholmGap sine_gap(double s, int nodes) {
    if (!(s > 0.0)) throw InputError("sine_gap: s must be positive");
    if (nodes < 32) throw InputError("sine_gap: need at least 32 nodes");
    FredholmGap g = sine_gap_once(s, nodes);
    const FredholmGap fine = sine_gap_once(s, 2 * nodes);
    const double diff = std::abs(g.p_s.log_modulus - fine.p_s.log_modulus);
    if (diff > 1e-9)
        throw NumericalError("sine_gap: " + std::to_string(nodes) + " nodes are not enough (doubling changes log P_s by " +
                             std::to_string(diff) + ")");
    return g;
}

double widom_dyson_constant() { return std::log(2.0) / 12.0 + 3.0 * MathConstants::zeta_prime_neg1; }

DysonEstimate dyson_asymptote(const std::vector<double>& s_grid) {
    if (s_grid.size() < 2) throw InputError("dyson_asymptote: need at least two s values");
    for (std::size_t i = 1; i < s_grid.size(); ++i)
        if (!(s_grid[i] > s_grid[i - 1])) throw InputError("dyson_asymptote: s_grid must increase");
    if (!(s_grid.front() > 0.0)) throw InputError("dyson_asymptote: s values must be positive");
    if (s_grid.back() < 8.0) throw InputError("dyson_asymptote: grid too coarse, need max s >= 8");

    // Neville's scheme in h = 1/s, evaluated at h = 0.
    const std::size_t m = s_grid.size();
    std::vector<double> h(m), p(m);
    for (std::size_t i = 0; i < m; ++i) {
        const double s = s_grid[i];
        const int nodes = s <= 4.0 ? 48 : 96;
        const FredholmGap g = sine_gap(s, nodes);
        h[i] = 1.0 / s;
        p[i] = g.p_s.log_modulus + 0.5 * s * s + 0.25 * std::log(s);
    }
    for (std::size_t k = 1; k < m; ++k)
        for (std::size_t i = 0; i + k < m; ++i) p[i] = (h[i] * p[i + 1] - h[i + k] * p[i]) / (h[i] - h[i + k]);
    return {p[0], widom_dyson_constant()};
}

double widom_constant_estimate(double mu, int n, Precision prec) {
    if (!(mu > 0.0 && mu < kPi)) throw InputError("widom_constant_estimate: need 0 < mu < pi");
    if (n < 1) throw InputError("widom_constant_estimate: n must be positive");
    const CircleSymbol s = builtin("char_interval", {{"mu", mu}});
    const double dn = n;
    const LogDet d = toeplitz_det(s, n, prec);
    return d.log_modulus - dn * dn * std::log(std::cos(0.5 * mu)) + 0.25 * std::log(dn * std::sin(0.5 * mu));
}

} // namespace toeplab
