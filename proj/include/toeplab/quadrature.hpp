#pragma once

#include <cmath>
#include <limits>
#include <vector>

namespace toeplab {

struct Rule {
    std::vector<double> x;
    std::vector<double> w;
    std::size_t size() const { return x.size(); }
};

// Gauss-Legendre nodes and weights on [-1, 1], ascending. Cached, thread-safe.
const Rule& gauss_legendre(int m);

// Gauss-Legendre in an arbitrary floating type (Newton on the Legendre recurrence).
template <class T>
void gauss_legendre_t(int m, std::vector<T>& x, std::vector<T>& w) {
    using std::abs;
    using std::cos;
    x.assign(m, T(0));
    w.assign(m, T(0));
    const T pi = T(3.14159265358979323846264338327950288419716939937510582097494459);
    const T tol = T(64) * std::numeric_limits<T>::epsilon();
    for (int i = 0; i < (m + 1) / 2; ++i) {
        T z = cos(pi * (T(i) + T(0.75)) / (T(m) + T(0.5)));
        T dp = 0;
        for (int it = 0; it < 100; ++it) {
            T p0 = 1, p1 = z;
            for (int k = 2; k <= m; ++k) {
                T p2 = ((T(2 * k - 1)) * z * p1 - T(k - 1) * p0) / T(k);
                p0 = p1;
                p1 = p2;
            }
            if (m == 1) {
                p1 = z;
                p0 = 1;
            }
            dp = T(m) * (z * p1 - p0) / (z * z - T(1));
            T dz = p1 / dp;
            z -= dz;
            if (abs(dz) < tol) break;
        }
        {
            T p0 = 1, p1 = z;
            for (int k = 2; k <= m; ++k) {
                T p2 = ((T(2 * k - 1)) * z * p1 - T(k - 1) * p0) / T(k);
                p0 = p1;
                p1 = p2;
            }
            dp = (m == 1) ? T(1) : T(m) * (z * p1 - p0) / (z * z - T(1));
        }
        const T wi = T(2) / ((T(1) - z * z) * dp * dp);
        x[i] = -z;
        x[m - 1 - i] = z;
        w[i] = wi;
        w[m - 1 - i] = wi;
    }
}

// Nodes and weights on [0, 1] for the weight x^a (a > -1). Cached, thread-safe.
const Rule& gauss_jacobi_unit(int m, double a);

// An endpoint of a panel structure on the circle, with the algebraic exponent
// of the integrand there (|theta - theta_j|^exponent). `oscillatory` marks a
// complex exponent, which is handled by geometric grading.
struct Breakpoint {
    double theta = 0.0;
    double exponent = 0.0;
    bool oscillatory = false;
};

struct CircleRuleOptions {
    int order = 64;           // nodes per panel
    double max_panel = 0.75;  // radians
    int grading_levels = 48;  // only used for oscillatory endpoints
};

// Rule for (1/2pi) * integral over [0, 2pi). Without breakpoints this is the
// periodic trapezoid rule with order * ceil(2pi / max_panel) points.
Rule circle_rule(std::vector<Breakpoint> breaks, const CircleRuleOptions& opt);

// Rule on [a, b] with optional algebraic endpoint exponents.
void append_interval_rule(Rule& out, double a, double b, double ea, double eb, bool osc_a,
                          bool osc_b, const CircleRuleOptions& opt);

} // namespace toeplab
