#include "toeplab/specialfn.hpp"
#include "toeplab/errors.hpp"

#include <boost/math/special_functions/bessel.hpp>

#include <array>
#include <cmath>
#include <string>

namespace toeplab {

namespace {

// B_2, B_4, ..., B_26
constexpr std::array<double, 13> kBernoulli = {
    1.0 / 6.0,         -1.0 / 30.0,          1.0 / 42.0,    -1.0 / 30.0,
    5.0 / 66.0,        -691.0 / 2730.0,      7.0 / 6.0,     -3617.0 / 510.0,
    43867.0 / 798.0,   -174611.0 / 330.0,    854513.0 / 138.0,
    -236364091.0 / 2730.0, 8553103.0 / 6.0};

bool is_nonpositive_integer(cplx z) {
    return z.imag() == 0.0 && z.real() <= 0.0 && std::floor(z.real()) == z.real();
}

// Negative real arguments sit on the branch cut; take the limit from above.
cplx upper_log(cplx w) {
    if (w.imag() == 0.0) w = cplx(w.real(), 0.0);
    return std::log(w);
}

cplx stirling(cplx w) {
    cplx s = (w - 0.5) * std::log(w) - w + 0.5 * MathConstants::log_2pi;
    const cplx winv = 1.0 / w;
    const cplx winv2 = winv * winv;
    cplx p = winv;
    for (int k = 1; k <= 12; ++k) {
        s += kBernoulli[k - 1] / (2.0 * k * (2.0 * k - 1.0)) * p;
        p *= winv2;
    }
    return s;
}

// log G(w + 1) for Re w >= 9.
cplx barnes_asymptotic(cplx w) {
    const cplx lw = std::log(w);
    const cplx w2 = w * w;
    cplx s = (0.5 * w2 - 1.0 / 12.0) * lw - 0.75 * w2 + 0.5 * w * MathConstants::log_2pi +
             MathConstants::zeta_prime_neg1;
    const cplx winv2 = 1.0 / w2;
    cplx p = winv2;
    for (int k = 1; k <= 12; ++k) {
        s += kBernoulli[k] / (4.0 * k * (k + 1.0)) * p;
        p *= winv2;
    }
    return s;
}

constexpr double kStirlingBand = 17.0;
constexpr double kBarnesBand = 10.0;

} // namespace

void check_constants() {
    const double a = std::exp(1.0 / 12.0 - MathConstants::zeta_prime_neg1);
    if (std::abs(a - MathConstants::glaisher_A) > 1e-14)
        throw NumericalError("Glaisher constant inconsistent with zeta'(-1)");
}

cplx log_gamma(cplx z) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
        throw InputError("log_gamma: non-finite argument");
    if (is_nonpositive_integer(z))
        throw InputError("log_gamma: pole of Gamma at " + std::to_string(z.real()));
    if (z.imag() == 0.0) z = cplx(z.real(), 0.0);
    if (z.real() >= kStirlingBand) return stirling(z);
    const int shift = static_cast<int>(std::ceil(kStirlingBand - z.real()));
    cplx acc = 0.0;
    for (int k = 0; k < shift; ++k) acc += upper_log(z + double(k));
    return stirling(z + double(shift)) - acc;
}

cplx rgamma(cplx z) {
    if (is_nonpositive_integer(z)) return 0.0;
    return std::exp(-log_gamma(z));
}

cplx log_barnes_g(cplx z) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
        throw InputError("log_barnes_g: non-finite argument");
    if (is_nonpositive_integer(z))
        throw InputError("log_barnes_g: zero of G at " + std::to_string(z.real()));
    if (z.imag() == 0.0) z = cplx(z.real(), 0.0);
    if (z.real() >= kBarnesBand) return barnes_asymptotic(z - 1.0);
    const int shift = static_cast<int>(std::ceil(kBarnesBand - z.real()));
    cplx acc = 0.0;
    for (int k = 0; k < shift; ++k) acc += log_gamma(z + double(k));
    return barnes_asymptotic(z + double(shift) - 1.0) - acc;
}

double bessel_k0(double x) {
    if (!(x > 0.0)) throw InputError("bessel_k0: argument must be positive");
    return boost::math::cyl_bessel_k(0, x);
}

double bessel_k1(double x) {
    if (!(x > 0.0)) throw InputError("bessel_k1: argument must be positive");
    return boost::math::cyl_bessel_k(1, x);
}

double log_barnes_g_half_closed() {
    return std::log(2.0) / 24.0 + 0.125 - 0.25 * std::log(MathConstants::pi) -
           1.5 * std::log(MathConstants::glaisher_A);
}

} // namespace toeplab
