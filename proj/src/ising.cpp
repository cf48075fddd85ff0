#include "toeplab/ising.hpp"
#include "toeplab/errors.hpp"
#include "toeplab/exactdet.hpp"
#include "toeplab/quadrature.hpp"

#include <cmath>

namespace toeplab {

namespace {

constexpr double kPi = MathConstants::pi;
constexpr double kRegimeTol = 1e-12;

double lgamma_real(double x) { return log_gamma(cplx(x)).real(); }

// GL panels on [a, b], geometrically refined toward a.
void graded_rule(double a, double b, int levels, int order, std::vector<double>& x, std::vector<double>& w) {
    const Rule& gl = gauss_legendre(order);
    double hi = b;
    for (int l = 0; l <= levels; ++l) {
        const double lo = (l == levels) ? a : a + 0.5 * (hi - a);
        const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
        for (std::size_t i = 0; i < gl.size(); ++i) {
            x.push_back(mid + half * gl.x[i]);
            w.push_back(half * gl.w[i]);
        }
        hi = lo;
    }
}

} // namespace

std::string regime_name(IsingRegime r) {
    switch (r) {
    case IsingRegime::Subcritical: return "subcritical";
    case IsingRegime::Critical: return "critical";
    case IsingRegime::Supercritical: return "supercritical";
    }
    return "?";
}

IsingParams ising_params(double chi1, double chi2) {
    if (!(chi1 > 0.0) || !(chi2 > 0.0) || !std::isfinite(chi1) || !std::isfinite(chi2))
        throw InputError("ising_params: couplings must be positive and finite");
    IsingParams p;
    p.chi1 = chi1;
    p.chi2 = chi2;
    p.z1 = std::tanh(chi1);
    p.z2 = std::tanh(chi2);
    p.z2_star = std::exp(-2.0 * chi2);  // (1 - z2) / (1 + z2)
    p.gamma1 = p.z1 * p.z2_star;
    p.gamma2 = p.z2_star / p.z1;
    const double s = std::sinh(2.0 * chi1) * std::sinh(2.0 * chi2);
    p.k_ons = 1.0 / s;
    if (std::abs(s - 1.0) <= kRegimeTol) {
        p.regime = IsingRegime::Critical;
        p.k_ons = 1.0;
        p.gamma2 = 1.0;
    } else {
        p.regime = s > 1.0 ? IsingRegime::Subcritical : IsingRegime::Supercritical;
    }
    if (std::abs(chi1 - chi2) <= 1e-14 * chi1) {
        const double c = std::cosh(2.0 * chi1);
        p.kappa = 2.0 * std::sinh(2.0 * chi1) / (c * c);
    }
    return p;
}

double onsager_integral(double kappa, FreeEnergyForm form) {
    if (!(kappa >= 0.0 && kappa <= 1.0)) throw InputError("onsager_integral: kappa must lie in [0, 1]");
    if (form == FreeEnergyForm::SingleIntegral) {
        // kink at pi/2 when kappa = 1
        const Rule& gl = gauss_legendre(64);
        double sum = 0.0;
        constexpr int panels = 8;
        for (int half = 0; half < 2; ++half) {
            const double a0 = half * kPi / 2.0;
            for (int p = 0; p < panels; ++p) {
                const double lo = a0 + p * kPi / (2.0 * panels), hi = lo + kPi / (2.0 * panels);
                const double mid = 0.5 * (lo + hi), h = 0.5 * (hi - lo);
                for (std::size_t i = 0; i < gl.size(); ++i) {
                    const double phi = mid + h * gl.x[i];
                    const double sn = std::sin(phi);
                    const double r = std::sqrt(std::max(0.0, 1.0 - kappa * kappa * sn * sn));
                    sum += h * gl.w[i] * std::log(0.5 * (1.0 + r));
                }
            }
        }
        return sum / (2.0 * kPi);
    }
    // Tensor rule graded toward the corner phi_1 = phi_2 = 0 where the log may vanish.
    std::vector<double> x, w;
    graded_rule(0.0, kPi, 44, 24, x, w);
    double sum = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double ci = std::cos(x[i]);
        double inner = 0.0;
        for (std::size_t j = 0; j < x.size(); ++j) {
            const double arg = 1.0 - 0.5 * kappa * (ci + std::cos(x[j]));
            if (arg <= 0.0) continue;
            inner += w[j] * std::log(arg);
        }
        sum += w[i] * inner;
    }
    return sum / (2.0 * kPi * kPi);
}

double free_energy(const IsingParams& p, FreeEnergyForm form) {
    if (!p.kappa) throw InputError("free_energy: the printed formula needs J_1 = J_2");
    return std::log(2.0 * std::cosh(2.0 * p.chi1)) + onsager_integral(*p.kappa, form);
}

CircleSymbol ising_symbol(const IsingParams& p, CorrelationKind kind) {
    if (kind == CorrelationKind::Diag) return builtin("diag", {{"k_ons", p.k_ons}});
    return builtin("onsager", {{"gamma1", p.gamma1}, {"gamma2", p.gamma2}});
}

double log_w_critical(int n) {
    if (n < 1) throw InputError("log_w_critical: n must be positive");
    double l = std::log(2.0 / kPi);
    for (int q = 1; q <= n - 1; ++q)
        l += 2.0 * lgamma_real(q + 1.0) - lgamma_real(q + 0.5) - lgamma_real(q + 1.5);
    return l;
}

double log_w_tilde_critical(int n) {
    if (n < 1) throw InputError("log_w_tilde_critical: n must be positive");
    double l = std::log(2.0 / (3.0 * kPi));
    for (int q = 1; q <= n - 1; ++q)
        l += 2.0 * lgamma_real(q + 1.0) - lgamma_real(q - 0.5) - lgamma_real(q + 2.5);
    return l;
}

CorrelationResult correlation(const IsingParams& p, CorrelationKind kind, int n, CorrelationRoute route,
                              Precision prec) {
    if (n < 1) throw InputError("correlation: n must be positive");
    CorrelationResult r;
    r.n = n;
    if (route == CorrelationRoute::GammaProduct) {
        if (kind != CorrelationKind::Diag || p.regime != IsingRegime::Critical)
            throw InputError("correlation: the gamma-product route is only available on the critical diagonal");
        r.route = route;
        r.value = std::exp(log_w_critical(n));
        return r;
    }
    // Above T_c the matrix is nearly singular and LU loses about |log D_n| digits.
    if (p.regime == IsingRegime::Supercritical) {
        const double lead = std::abs(wu_leading(p, kind, n));
        if (lead < 1e-26)
            throw NumericalError("correlation: value below the resolution of the extended backend");
        if (lead < 1e-8) prec = Precision::Extended;
    }
    const cplx v = toeplitz_det(ising_symbol(p, kind), n, prec).value();
    if (std::abs(v.imag()) > 1e-10) throw NumericalError("correlation: determinant is not real");
    r.value = v.real();
    return r;
}

double magnetization(const IsingParams& p) {
    if (p.k_ons >= 1.0) return 0.0;
    return std::pow(1.0 - p.k_ons * p.k_ons, 0.125);
}

double wu_leading(const IsingParams& p, CorrelationKind kind, int n) {
    if (n < 1) throw InputError("wu_leading: n must be positive");
    const double dn = n;
    const double A = MathConstants::glaisher_A;
    const double g1 = p.gamma1, g2 = p.gamma2;
    if (kind == CorrelationKind::Row) {
        switch (p.regime) {
        case IsingRegime::Subcritical:
            return std::pow(1.0 - p.k_ons * p.k_ons, 0.25) *
                   (1.0 + std::pow(g2, 2.0 * dn) / (2.0 * kPi * dn * dn * std::pow(1.0 / g2 - g2, 2.0)));
        case IsingRegime::Critical:
            return std::exp(0.25) * std::pow(2.0, 1.0 / 12.0) * std::pow(A, -3.0) * std::pow(dn, -0.25) *
                   std::pow((1.0 + g1) / (1.0 - g1), 0.25);
        case IsingRegime::Supercritical:
            return std::pow(kPi * dn, -0.5) * std::pow(g2, -dn) * std::pow(1.0 - g1 * g1, 0.25) *
                   std::pow(1.0 - 1.0 / (g2 * g2), -0.25) * std::pow(1.0 - g1 * g2, -0.5);
        }
    }
    const double k = p.k_ons;
    switch (p.regime) {
    case IsingRegime::Subcritical: return std::pow(1.0 - k * k, 0.25);
    case IsingRegime::Critical:
        return std::exp(0.25) * std::pow(A, -3.0) * std::pow(2.0, 1.0 / 12.0) * std::pow(dn, -0.25);
    case IsingRegime::Supercritical:
        return std::pow(k, -dn) / std::sqrt(kPi * dn) * std::pow(1.0 - 1.0 / (k * k), -0.25);
    }
    return 0.0;
}

} // namespace toeplab
