#pragma once

#include "toeplab/logdet.hpp"
#include "toeplab/quadrature.hpp"
#include "toeplab/specialfn.hpp"

#include <functional>
#include <map>
#include <string>
#include <vector>

namespace toeplab {

// Fourier coefficients c_k for k in [kmin, kmax].
struct CoeffWindow {
    int kmin = 0;
    std::vector<cplx> c;

    int kmax() const { return kmin + static_cast<int>(c.size()) - 1; }
    cplx operator[](int k) const { return c.at(static_cast<std::size_t>(k - kmin)); }
    cplx& operator[](int k) { return c.at(static_cast<std::size_t>(k - kmin)); }
};

// The smooth log-part V of a symbol, held as Fourier coefficients V_k on a
// window [-K, K], optionally with closed forms for values and coefficients.
class SmoothPart {
public:
    using ValueFn = std::function<cplx(double)>;
    using CoeffFn = std::function<cplx(int)>;

    SmoothPart() = default;
    static SmoothPart from_coeffs(const std::map<int, cplx>& coeffs);
    static SmoothPart closed_form(ValueFn value, CoeffFn coeff, int window);

    cplx value(double theta) const;
    cplx coeff(int k) const;
    int window() const { return window_; }
    bool is_zero() const;
    bool coeff_is_closed() const { return static_cast<bool>(coeff_); }

    // V + dv0 (only V_0 changes).
    SmoothPart shifted(cplx dv0) const;

private:
    std::vector<cplx> coeffs_;  // index k + window_
    int window_ = 0;
    ValueFn value_;
    CoeffFn coeff_;
    cplx v0_shift_ = 0.0;
};

struct FHSingularity {
    double theta = 0.0;  // in [0, 2pi)
    cplx alpha = 0.0;
    cplx beta = 0.0;
};

// prefactor * e^{V} * prod_j |z - z_j|^{2 alpha_j} z^{beta_j} g_{beta_j}(z) z_j^{-beta_j}.
// The factor z_j^{-beta_j} lives inside each singular factor; `prefactor` is an
// additional constant. Symbols that are not of this form (indicator functions)
// set `direct` and list their jump points in `direct_breaks`.
struct CircleSymbol {
    std::string name = "custom";
    SmoothPart smooth;
    std::vector<FHSingularity> singularities;
    cplx prefactor = 1.0;

    std::function<cplx(double)> direct;
    std::vector<double> direct_breaks;

    std::function<cplx(int)> closed_coeff;
    std::function<xcplx(int)> closed_coeff_ext;

    bool real_valued = false;

    bool is_direct() const { return static_cast<bool>(direct); }
    // Sorts singularities and checks Re alpha > -1/2 and theta in [0, 2pi).
    void validate();
};

using SymbolParams = std::map<std::string, cplx>;

// Known names: identity, const, exp_trig, cos_series, bernstein_szego, onsager,
// onsager_tilde, diag, char_interval, lenard, jacobi, bt, gap, pure_fh.
CircleSymbol builtin(const std::string& name, const SymbolParams& params);
std::vector<std::string> builtin_names();

// Parse the key=value symbol description format.
CircleSymbol parse_symbol_text(const std::string& text);
CircleSymbol load_symbol_file(const std::string& path);
cplx parse_complex(const std::string& text);

cplx evaluate(const CircleSymbol& s, double theta);

struct QuadratureOptions {
    int order = 64;
    double tolerance = 1e-11;
    int max_refinements = 5;
};

// phi_k (or (log phi)_k when of_log) for k in [kmin, kmax]. Closed forms are
// used when the symbol carries them.
CoeffWindow fourier_coeffs(const CircleSymbol& s, int kmin, int kmax, bool of_log = false);

// Quadrature only, never the closed form (used as an oracle in tests).
CoeffWindow quadrature_coeffs(const CircleSymbol& s, int kmin, int kmax,
                              const QuadratureOptions& opt = {});

// Generic panel/trapezoid Fourier quadrature of an arbitrary function.
CoeffWindow quadrature_coeffs(const std::function<cplx(double)>& f,
                              const std::vector<Breakpoint>& breaks, int kmin, int kmax,
                              const QuadratureOptions& opt = {});

std::vector<Breakpoint> symbol_breakpoints(const CircleSymbol& s);

struct FHRepresentation {
    CircleSymbol base;
    std::vector<int> shifts;  // one per singularity, summing to 0

    CircleSymbol as_symbol() const;
};

struct RepresentationSet {
    double seminorm = 0.0;
    double f_beta = 0.0;
    std::vector<FHRepresentation> members;
    bool degenerate = false;
};

// |||beta||| for the given betas (index 0 skipped when it is a trivial singularity at 0).
double beta_seminorm(const CircleSymbol& s);

RepresentationSet fh_representations(const CircleSymbol& s);

// sum_{k>=1} k V_k V_{-k}, truncated when the geometric tail estimate drops
// below 1e-13 of the partial sum. Throws NumericalError when terms do not decay.
cplx szego_e_sum(const SmoothPart& v);

// sum_{k>=1} V_k e^{ik theta} (positive) or sum_{k>=1} V_{-k} e^{-ik theta}, same tail rule.
cplx smooth_half_sum(const SmoothPart& v, double theta, bool positive);

// True when alpha +- beta is a negative integer within 1e-12.
bool is_degenerate_pair(cplx alpha, cplx beta);

} // namespace toeplab
