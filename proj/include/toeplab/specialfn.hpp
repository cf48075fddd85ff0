#pragma once

#include <complex>

namespace toeplab {

using cplx = std::complex<double>;

struct MathConstants {
    static constexpr double pi = 3.141592653589793238462643383279502884;
    static constexpr double euler_gamma = 0.577215664901532860606512090082402431;
    static constexpr double zeta_prime_neg1 = -0.165421143700450929213919660242782;
    static constexpr double glaisher_A = 1.282427129100622636875342568869791727768;
    static constexpr double log_2pi = 1.837877066409345483560659472811235279723;
};

// Throws NumericalError if the stored A and zeta'(-1) disagree.
void check_constants();

// Principal branch of log Gamma. Throws InputError at 0, -1, -2, ...
cplx log_gamma(cplx z);

// exp(-log Gamma(z)), with exact zeros at the poles of Gamma.
cplx rgamma(cplx z);

// Principal branch of log G for the Barnes G function. Throws InputError at 0, -1, -2, ...
cplx log_barnes_g(cplx z);

// Modified Bessel function K_0 for x > 0.
double bessel_k0(double x);
double bessel_k1(double x);

// log G(1/2) from the closed form 2^{1/24} e^{1/8} pi^{-1/4} A^{-3/2}.
double log_barnes_g_half_closed();

} // namespace toeplab
