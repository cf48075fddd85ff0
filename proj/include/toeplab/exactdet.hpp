#pragma once

#include "toeplab/logdet.hpp"
#include "toeplab/symbols.hpp"

#include <functional>
#include <map>
#include <optional>
#include <vector>

namespace toeplab {

// D_n(phi) = det(phi_{j-k}), j, k = 0..n-1. n = 0 gives 1.
LogDet toeplitz_det(const CircleSymbol& s, int n, Precision prec = Precision::Double);

// Same, from an explicit coefficient window covering [-(n-1), n-1].
LogDet toeplitz_det_from_coeffs(const CoeffWindow& c, int n);

// Weight of the form e^{U(x)} prod_j |x - lambda_j|^{2 alpha_j} omega_j(x) on [-1, 1],
// with 1 = lambda_0 > lambda_1 > ... > lambda_{r+1} = -1 and beta_0 = beta_{r+1} = 0.
struct JumpWeight {
    std::vector<double> u;       // U(x) = sum_k u[k] x^k
    std::vector<double> lambda;  // r + 2 points, decreasing from 1 to -1
    std::vector<cplx> alpha;     // one per lambda
    std::vector<cplx> beta;      // one per lambda, ends must be 0
};

// A weight on [-1, 1]. `x_breaks` are interior or end points where the weight
// behaves like |x - x_b|^{x_exponents[b]}; the ends -1 and 1 may be listed.
struct HankelWeight {
    std::function<cplx(double)> w;
    std::vector<double> x_breaks;
    std::vector<double> x_exponents;
};

HankelWeight make_hankel_weight(const JumpWeight& jw);

// The even circle symbol f(e^{i theta}) = w(cos theta) |sin theta| in FH form.
CircleSymbol jump_weight_circle_symbol(const JumpWeight& jw);

// v(x) = f(e^{i theta(x)}) / sqrt(1 - x^2) for an even circle symbol f.
HankelWeight hankel_weight_from_even_symbol(const CircleSymbol& f);

// Moments int_{-1}^{1} x^m w(x) dx for m = 0..mmax.
std::vector<cplx> hankel_moments(const HankelWeight& w, int mmax);

enum class StructuredKind { Hankel, THPlus0, THMinus2, THPlus1, THMinus1 };

StructuredKind parse_structured_kind(const std::string& name);
std::string structured_kind_name(StructuredKind k);

LogDet hankel_det(const HankelWeight& w, int n);

// det(f_{j-k} + f_{j+k}), det(f_{j-k} - f_{j+k+2}), det(f_{j-k} +- f_{j+k+1}).
// Throws InputError when f is not even.
LogDet toeplitz_plus_hankel_det(StructuredKind kind, const CircleSymbol& f, int n);

struct VerblunskyData {
    std::vector<cplx> xi;     // xi_0 .. xi_{n-1}
    std::vector<double> chi;  // chi_0 .. chi_n
};

// Levinson-Szego recursion on the Toeplitz moments of a positive symbol.
VerblunskyData verblunsky(const CircleSymbol& s, int n);

struct OpucValues {
    int degree = 0;
    std::vector<cplx> points;
    std::vector<cplx> values;
    std::optional<std::vector<cplx>> complementary;
    double rcond = 1.0;
};

// Monic pi_q (and optionally the complementary pi-hat_q) from the moment system.
OpucValues opuc_at_points(const CircleSymbol& s, int degree, const std::vector<cplx>& points,
                          bool complementary);

struct HeineResult {
    cplx value;
    double error_estimate = 0.0;
};

// (1/n!) int prod |z_j - z_k|^2 prod phi(z_j) dtheta_j / 2pi, n <= 3.
HeineResult heine_oracle(const CircleSymbol& s, int n);

struct BorodinOkounkov {
    cplx value;
    cplx prefactor;      // e^{n (log phi)_0 + E(phi)}
    cplx fredholm;       // det(1 - Q_n H(b) H(c~) Q_n)
    double tail_bound = 0.0;
};

BorodinOkounkov bo_rhs(const CircleSymbol& s, int n, int truncation);

// Non-negative definiteness of the Caratheodory matrix built from c_0..c_n.
bool caratheodory_psd(const std::vector<cplx>& c);

} // namespace toeplab
