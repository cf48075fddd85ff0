#include "toeplab/exactdet.hpp"
#include "toeplab/errors.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

namespace toeplab {

namespace {

constexpr double kPi = MathConstants::pi;
constexpr double kTwoPi = 2.0 * MathConstants::pi;

bool all_real(const CoeffWindow& c) {
    return std::all_of(c.c.begin(), c.c.end(), [](cplx v) { return v.imag() == 0.0; });
}

template <class S, class Get>
std::vector<S> toeplitz_matrix(int n, Get get) {
    std::vector<S> a(static_cast<std::size_t>(n) * n);
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) a[j * n + k] = get(j - k);
    return a;
}

void check_n(int n) {
    if (n < 0) throw InputError("matrix size must be non-negative");
}

} // namespace

LogDet toeplitz_det_from_coeffs(const CoeffWindow& c, int n) {
    check_n(n);
    if (n == 0) return LogDet::one();
    if (c.kmin > -(n - 1) || c.kmax() < n - 1) throw InputError("coefficient window too small");
    if (all_real(c)) return lu_logdet(toeplitz_matrix<double>(n, [&](int k) { return c[k].real(); }), n);
    return lu_logdet(toeplitz_matrix<cplx>(n, [&](int k) { return c[k]; }), n);
}

LogDet toeplitz_det(const CircleSymbol& s, int n, Precision prec) {
    check_n(n);
    if (n == 0) return LogDet::one();
    if (prec == Precision::Double) return toeplitz_det_from_coeffs(fourier_coeffs(s, -(n - 1), n - 1), n);

    std::vector<xcplx> c(2 * n - 1);
    bool real = true;
    if (s.closed_coeff_ext) {
        const xcplx pf(xreal(s.prefactor.real()), xreal(s.prefactor.imag()));
        for (int k = -(n - 1); k <= n - 1; ++k) c[k + n - 1] = pf * s.closed_coeff_ext(k);
    } else {
        auto d = fourier_coeffs(s, -(n - 1), n - 1);
        for (int k = -(n - 1); k <= n - 1; ++k) c[k + n - 1] = xcplx(xreal(d[k].real()), xreal(d[k].imag()));
    }
    for (const auto& v : c)
        if (v.imag() != 0) real = false;
    if (real)
        return lu_logdet(toeplitz_matrix<xreal>(n, [&](int k) { return c[k + n - 1].real(); }), n);
    return lu_logdet(toeplitz_matrix<xcplx>(n, [&](int k) { return c[k + n - 1]; }), n);
}

// ---- Hankel and Toeplitz + Hankel ------------------------------------------

namespace {

double wrap_two_pi(double th) {
    double t = std::fmod(th, kTwoPi);
    return t < 0 ? t + kTwoPi : t;
}

// U(cos theta) as Fourier coefficients, for a polynomial U.
std::map<int, cplx> poly_cos_coeffs(const std::vector<double>& u) {
    std::map<int, cplx> out;
    for (std::size_t k = 0; k < u.size(); ++k) {
        if (u[k] == 0.0) continue;
        double binom = 1.0;
        const double scale = std::ldexp(u[k], -static_cast<int>(k));
        for (std::size_t m = 0; m <= k; ++m) {
            out[static_cast<int>(k) - 2 * static_cast<int>(m)] += scale * binom;
            binom = binom * double(k - m) / double(m + 1);
        }
    }
    return out;
}

double poly_eval(const std::vector<double>& u, double x) {
    double v = 0.0;
    for (std::size_t k = u.size(); k-- > 0;) v = v * x + u[k];
    return v;
}

void check_jump_weight(const JumpWeight& jw) {
    const std::size_t m = jw.lambda.size();
    if (m < 2 || jw.alpha.size() != m || jw.beta.size() != m)
        throw InputError("jump weight: need matching lambda/alpha/beta lists with at least two points");
    if (jw.lambda.front() != 1.0 || jw.lambda.back() != -1.0)
        throw InputError("jump weight: lambda must start at 1 and end at -1");
    for (std::size_t j = 1; j < m; ++j)
        if (!(jw.lambda[j] < jw.lambda[j - 1])) throw InputError("jump weight: lambda must decrease");
    if (jw.beta.front() != cplx(0.0) || jw.beta.back() != cplx(0.0))
        throw InputError("jump weight: end betas must be zero");
    for (std::size_t j = 0; j < m; ++j) {
        if (!(jw.alpha[j].real() > -0.5)) throw InputError("jump weight: need Re alpha > -1/2");
        if (!(std::abs(jw.beta[j].real()) <= 0.5)) throw InputError("jump weight: need |Re beta| <= 1/2");
    }
}

// Rule on theta in [0, pi] for int_0^pi g(theta) dtheta, where g has algebraic
// behaviour at the listed theta breakpoints.
Rule half_circle_rule(std::vector<Breakpoint> br, const CircleRuleOptions& opt) {
    br.push_back({0.0, 0.0, false});
    br.push_back({kPi, 0.0, false});
    std::sort(br.begin(), br.end(), [](const Breakpoint& a, const Breakpoint& b) { return a.theta < b.theta; });
    std::vector<Breakpoint> merged;
    for (const auto& b : br) {
        if (!merged.empty() && std::abs(merged.back().theta - b.theta) < 1e-14) {
            if (b.exponent != 0.0) merged.back().exponent = b.exponent;
        } else {
            merged.push_back(b);
        }
    }
    Rule r;
    for (std::size_t j = 0; j + 1 < merged.size(); ++j)
        append_interval_rule(r, merged[j].theta, merged[j + 1].theta, merged[j].exponent,
                             merged[j + 1].exponent, false, false, opt);
    return r;
}

std::vector<Breakpoint> theta_breaks(const HankelWeight& w) {
    std::vector<Breakpoint> br;
    bool has_lo = false, has_hi = false;
    for (std::size_t b = 0; b < w.x_breaks.size(); ++b) {
        const double x = w.x_breaks[b];
        const double e = w.x_exponents.at(b);
        if (x >= 1.0) {
            br.push_back({0.0, 2.0 * e + 1.0, false});
            has_hi = true;
        } else if (x <= -1.0) {
            br.push_back({kPi, 2.0 * e + 1.0, false});
            has_lo = true;
        } else {
            br.push_back({std::acos(x), e, false});
        }
    }
    if (!has_hi) br.push_back({0.0, 1.0, false});
    if (!has_lo) br.push_back({kPi, 1.0, false});
    return br;
}

// Integrals int_0^pi q_m(theta) w(cos theta) sin theta dtheta for the requested
// test functions, refined until two successive rules agree.
template <class Fill>
std::vector<cplx> theta_integrals(const HankelWeight& w, std::size_t count, Fill fill) {
    CircleRuleOptions opt;
    opt.order = 64;
    opt.max_panel = 0.5;
    const auto br = theta_breaks(w);
    auto run = [&](const CircleRuleOptions& o) {
        Rule r = half_circle_rule(br, o);
        std::vector<cplx> acc(count, 0.0);
        std::vector<double> q(count);
        for (std::size_t i = 0; i < r.size(); ++i) {
            const double th = r.x[i];
            const cplx g = w.w(std::cos(th)) * std::sin(th) * r.w[i];
            fill(th, q);
            for (std::size_t m = 0; m < count; ++m) acc[m] += g * q[m];
        }
        return acc;
    };
    auto prev = run(opt);
    for (int it = 0; it < 5; ++it) {
        opt.max_panel *= 0.5;
        auto next = run(opt);
        double diff = 0.0, scale = 0.0;
        for (std::size_t m = 0; m < count; ++m) {
            diff = std::max(diff, std::abs(next[m] - prev[m]));
            scale = std::max(scale, std::abs(next[m]));
        }
        if (!std::isfinite(diff)) throw NumericalError("moment quadrature produced non-finite values");
        if (diff <= 1e-12 * std::max(scale, 1e-300)) return next;
        prev = std::move(next);
    }
    throw NumericalError("moment quadrature did not converge");
}

} // namespace

HankelWeight make_hankel_weight(const JumpWeight& jw) {
    check_jump_weight(jw);
    HankelWeight hw;
    hw.w = [jw](double x) {
        cplx logw = poly_eval(jw.u, x);
        for (std::size_t j = 0; j < jw.lambda.size(); ++j) {
            const double d = std::abs(x - jw.lambda[j]);
            if (jw.alpha[j] != cplx(0.0)) {
                if (d == 0.0) return cplx(0.0);
                logw += 2.0 * jw.alpha[j] * std::log(d);
            }
            const cplx ib(0.0, kPi);
            logw += (x <= jw.lambda[j] ? 1.0 : -1.0) * ib * jw.beta[j];
        }
        return std::exp(logw);
    };
    for (std::size_t j = 0; j < jw.lambda.size(); ++j) {
        hw.x_breaks.push_back(jw.lambda[j]);
        hw.x_exponents.push_back(2.0 * jw.alpha[j].real());
    }
    return hw;
}

CircleSymbol jump_weight_circle_symbol(const JumpWeight& jw) {
    check_jump_weight(jw);
    const std::size_t last = jw.lambda.size() - 1;
    CircleSymbol s;
    s.name = "jump_weight";
    s.smooth = SmoothPart::from_coeffs(poly_cos_coeffs(jw.u));
    cplx asum = 0.0, phase = 0.0;
    for (std::size_t j = 0; j <= last; ++j) asum += jw.alpha[j];
    for (std::size_t j = 1; j < last; ++j) phase += jw.beta[j] * std::asin(jw.lambda[j]);
    s.prefactor = std::exp(-(2.0 * asum + 1.0) * std::log(2.0) + cplx(0.0, 2.0) * phase);
    s.singularities.push_back({0.0, 2.0 * jw.alpha[0] + 0.5, 0.0});
    s.singularities.push_back({kPi, 2.0 * jw.alpha[last] + 0.5, 0.0});
    for (std::size_t j = 1; j < last; ++j) {
        const double th = std::acos(jw.lambda[j]);
        s.singularities.push_back({th, jw.alpha[j], -jw.beta[j]});
        s.singularities.push_back({kTwoPi - th, jw.alpha[j], jw.beta[j]});
    }
    s.validate();
    return s;
}

HankelWeight hankel_weight_from_even_symbol(const CircleSymbol& f) {
    HankelWeight hw;
    hw.w = [f](double x) {
        const double th = std::acos(std::clamp(x, -1.0, 1.0));
        return evaluate(f, th) / std::sqrt((1.0 - x) * (1.0 + x));
    };
    double e_hi = -0.5, e_lo = -0.5;
    for (const auto& b : symbol_breakpoints(f)) {
        const double th = wrap_two_pi(b.theta);
        if (th == 0.0)
            e_hi += 0.5 * b.exponent;
        else if (std::abs(th - kPi) < 1e-14)
            e_lo += 0.5 * b.exponent;
        else if (th < kPi) {
            hw.x_breaks.push_back(std::cos(th));
            hw.x_exponents.push_back(b.exponent);
        }
    }
    hw.x_breaks.push_back(1.0);
    hw.x_exponents.push_back(e_hi);
    hw.x_breaks.push_back(-1.0);
    hw.x_exponents.push_back(e_lo);
    return hw;
}

std::vector<cplx> hankel_moments(const HankelWeight& w, int mmax) {
    if (mmax < 0) throw InputError("hankel_moments: mmax must be non-negative");
    return theta_integrals(w, static_cast<std::size_t>(mmax) + 1, [](double th, std::vector<double>& q) {
        const double x = std::cos(th);
        double p = 1.0;
        for (auto& v : q) {
            v = p;
            p *= x;
        }
    });
}

LogDet hankel_det(const HankelWeight& w, int n) {
    check_n(n);
    if (n == 0) return LogDet::one();
    // Gram matrix in the monic Chebyshev basis 2^{1-j} T_j has the same
    // determinant as the moment matrix and is far better conditioned.
    const std::size_t np = static_cast<std::size_t>(n) * n;
    auto g = theta_integrals(w, np, [n](double th, std::vector<double>& q) {
        std::vector<double> p(n);
        for (int j = 0; j < n; ++j) p[j] = j == 0 ? 1.0 : std::ldexp(std::cos(j * th), 1 - j);
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) q[j * n + k] = p[j] * p[k];
    });
    return lu_logdet(std::move(g), n);
}

StructuredKind parse_structured_kind(const std::string& name) {
    if (name == "hankel") return StructuredKind::Hankel;
    if (name == "th_plus_0") return StructuredKind::THPlus0;
    if (name == "th_minus_2") return StructuredKind::THMinus2;
    if (name == "th_plus_1") return StructuredKind::THPlus1;
    if (name == "th_minus_1") return StructuredKind::THMinus1;
    throw InputError("unknown structured determinant kind '" + name + "'");
}

std::string structured_kind_name(StructuredKind k) {
    switch (k) {
    case StructuredKind::Hankel: return "hankel";
    case StructuredKind::THPlus0: return "th_plus_0";
    case StructuredKind::THMinus2: return "th_minus_2";
    case StructuredKind::THPlus1: return "th_plus_1";
    case StructuredKind::THMinus1: return "th_minus_1";
    }
    return "?";
}

LogDet toeplitz_plus_hankel_det(StructuredKind kind, const CircleSymbol& f, int n) {
    check_n(n);
    if (kind == StructuredKind::Hankel) throw InputError("use hankel_det for the hankel kind");
    if (n == 0) return LogDet::one();
    const auto c = fourier_coeffs(f, -2 * n, 2 * n);
    double scale = 0.0, asym = 0.0;
    for (int k = 0; k <= 2 * n; ++k) {
        scale = std::max(scale, std::abs(c[k]));
        asym = std::max(asym, std::abs(c[k] - c[-k]));
    }
    if (asym > 1e-10 * std::max(scale, 1e-300)) throw InputError("Toeplitz+Hankel needs an even symbol");
    int shift = 0;
    double sign = 1.0;
    switch (kind) {
    case StructuredKind::THPlus0: shift = 0; sign = 1.0; break;
    case StructuredKind::THMinus2: shift = 2; sign = -1.0; break;
    case StructuredKind::THPlus1: shift = 1; sign = 1.0; break;
    case StructuredKind::THMinus1: shift = 1; sign = -1.0; break;
    default: break;
    }
    std::vector<cplx> a(static_cast<std::size_t>(n) * n);
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) a[j * n + k] = c[j - k] + sign * c[j + k + shift];
    return lu_logdet(std::move(a), n);
}

// ---- OPUC ----------------------------------------------------------------------

namespace {

void require_positive(const CircleSymbol& s, const char* who) {
    constexpr int kSamples = 2048;
    for (int i = 0; i < kSamples; ++i) {
        const double th = kTwoPi * (i + 0.5) / kSamples + 1.234567e-4;
        const cplx v = evaluate(s, th);
        if (!(v.real() > 0.0) || std::abs(v.imag()) > 1e-12 * std::abs(v))
            throw InputError(std::string(who) + ": symbol is not positive");
    }
}

} // namespace

VerblunskyData verblunsky(const CircleSymbol& s, int n) {
    if (n < 1) throw InputError("verblunsky: n must be positive");
    require_positive(s, "verblunsky");
    const auto c = fourier_coeffs(s, -n, n);
    VerblunskyData out;
    double norm = c[0].real();
    if (!(norm > 0.0)) throw NumericalError("verblunsky: non-positive mass");
    out.chi.push_back(1.0 / std::sqrt(norm));
    std::vector<cplx> a{1.0};
    for (int j = 0; j < n; ++j) {
        cplx inner = 0.0;
        for (int m = 0; m <= j; ++m) inner += a[m] * c[-(m + 1)];
        const cplx abar = inner / norm;
        const cplx alpha = std::conj(abar);
        if (!(std::abs(alpha) < 1.0 - 1e-14))
            throw NumericalError("verblunsky: breakdown at index " + std::to_string(j));
        out.xi.push_back(alpha);
        std::vector<cplx> next(j + 2, 0.0);
        for (int m = 0; m <= j + 1; ++m) {
            const cplx shifted = m >= 1 ? a[m - 1] : cplx(0.0);
            const cplx star = m <= j ? std::conj(a[j - m]) : cplx(0.0);
            next[m] = shifted - abar * star;
        }
        a = std::move(next);
        norm *= 1.0 - std::norm(alpha);
        out.chi.push_back(1.0 / std::sqrt(norm));
    }
    return out;
}

OpucValues opuc_at_points(const CircleSymbol& s, int degree, const std::vector<cplx>& points,
                          bool complementary) {
    if (degree < 0) throw InputError("opuc_at_points: degree must be non-negative");
    OpucValues out;
    out.degree = degree;
    out.points = points;
    const int q = degree;
    auto eval = [&](const std::vector<cplx>& coef) {
        std::vector<cplx> vals;
        for (cplx z : points) {
            cplx v = 1.0;
            for (int m = q - 1; m >= 0; --m) v = v * z + coef[m];
            vals.push_back(v);
        }
        return vals;
    };
    if (q == 0) {
        out.values.assign(points.size(), 1.0);
        if (complementary) out.complementary = out.values;
        return out;
    }
    const auto c = fourier_coeffs(s, -q, q);
    double scale = 0.0;
    for (const auto& v : c.c) scale = std::max(scale, std::abs(v));

    // sign = +1: sum_m a_m phi_{r-m} = -phi_{r-q}; sign = -1: sum_m b_m phi_{m-r} = -phi_{q-r}.
    auto solve = [&](int sign) {
        Eigen::MatrixXcd A(q, q);
        Eigen::VectorXcd rhs(q);
        for (int r = 0; r < q; ++r) {
            for (int m = 0; m < q; ++m) A(r, m) = c[sign * (r - m)];
            rhs(r) = -c[sign * (r - q)];
        }
        Eigen::FullPivLU<Eigen::MatrixXcd> lu(A);
        const double rc = lu.rcond();
        out.rcond = std::min(out.rcond, rc);
        if (!lu.isInvertible() || rc < 1e-14)
            throw NumericalError("opuc_at_points: singular Gram system at degree " + std::to_string(q) +
                                 " (rcond " + std::to_string(rc) + ")");
        Eigen::VectorXcd x = lu.solve(rhs);
        const double res = (A * x - rhs).cwiseAbs().maxCoeff();
        if (res > 1e-10 * std::max(scale, 1e-300) * std::max(1.0, x.cwiseAbs().sum()))
            throw NumericalError("opuc_at_points: moment system residual too large");
        return std::vector<cplx>(x.data(), x.data() + q);
    };
    out.values = eval(solve(+1));
    if (complementary) out.complementary = eval(solve(-1));
    return out;
}

// ---- Heine multiple integral ------------------------------------------------------

namespace {

cplx heine_with_rule(const CircleSymbol& s, int n, const Rule& r) {
    const std::size_t m = r.size();
    std::vector<cplx> fw(m), z(m);
    for (std::size_t i = 0; i < m; ++i) {
        fw[i] = evaluate(s, r.x[i]) * r.w[i];
        z[i] = std::polar(1.0, r.x[i]);
    }
    cplx total = 0.0;
    if (n == 1) {
        for (std::size_t i = 0; i < m; ++i) total += fw[i];
        return total;
    }
    if (n == 2) {
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < m; ++j) total += fw[i] * fw[j] * std::norm(z[i] - z[j]);
        return total / 2.0;
    }
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            const double dij = std::norm(z[i] - z[j]);
            if (dij == 0.0) continue;
            const cplx fij = fw[i] * fw[j] * dij;
            cplx inner = 0.0;
            for (std::size_t k = 0; k < m; ++k) inner += fw[k] * std::norm(z[i] - z[k]) * std::norm(z[j] - z[k]);
            total += fij * inner;
        }
    }
    return total / 6.0;
}

} // namespace

HeineResult heine_oracle(const CircleSymbol& s, int n) {
    if (n < 0) throw InputError("heine_oracle: n must be non-negative");
    if (n > 3) throw InputError("heine_oracle: n must be at most 3");
    if (n == 0) return {1.0, 0.0};
    const auto br = symbol_breakpoints(s);
    CircleRuleOptions coarse, fine;
    coarse.max_panel = fine.max_panel = kPi / 2.0;
    coarse.order = n == 3 ? 16 : 40;
    fine.order = n == 3 ? 24 : 64;
    const cplx a = heine_with_rule(s, n, circle_rule(br, coarse));
    const cplx b = heine_with_rule(s, n, circle_rule(br, fine));
    const double err = std::abs(a - b);
    if (!std::isfinite(err) || err > 1e-6 * std::max(std::abs(b), 1e-300))
        throw NumericalError("heine_oracle: quadrature did not converge");
    return {b, err};
}

// ---- Borodin-Okounkov ---------------------------------------------------------------

BorodinOkounkov bo_rhs(const CircleSymbol& s, int n, int truncation) {
    if (n < 1) throw InputError("bo_rhs: n must be positive");
    if (truncation < 1) throw InputError("bo_rhs: truncation must be positive");
    if (s.is_direct()) throw InputError("bo_rhs: needs a symbol of the form e^V");
    for (const auto& sg : s.singularities)
        if (sg.alpha != cplx(0.0) || sg.beta != cplx(0.0))
            throw InputError("bo_rhs: symbol has zeros or winding");

    const int span = n + 2 * truncation + 2;
    int M = 1024;
    while (M < 8 * span) M *= 2;
    const int half = M / 2;
    // log b = V_- - V_+ at the M grid points.
    std::vector<cplx> bvals(M), cvals(M);
    for (int i = 0; i < M; ++i) {
        const cplx step = std::polar(1.0, kTwoPi * i / M);
        cplx e = step, acc = 0.0;
        for (int k = 1; k < half; ++k) {
            acc += s.smooth.coeff(-k) / e - s.smooth.coeff(k) * e;
            e *= step;
        }
        bvals[i] = std::exp(acc);
        cvals[i] = 1.0 / bvals[i];
    }
    // b_k for k = 1..span, c_{-k} for k = 1..span.
    std::vector<cplx> bk(span + 1), ck(span + 1);
    for (int k = 1; k <= span; ++k) {
        cplx sb = 0.0, sc = 0.0;
        for (int i = 0; i < M; ++i) {
            const cplx e = std::polar(1.0, kTwoPi * double((long long)k * i % M) / M);
            sb += bvals[i] / e;
            sc += cvals[i] * e;
        }
        bk[k] = sb / double(M);
        ck[k] = sc / double(M);
    }

    const int T = truncation;
    std::vector<cplx> K(static_cast<std::size_t>(T) * T);
    for (int i = 0; i < T; ++i)
        for (int j = 0; j < T; ++j) {
            cplx acc = 0.0;
            for (int l = 0; l < T; ++l) acc += bk[n + i + l + 1] * ck[n + j + l + 1];
            K[i * T + j] = (i == j ? 1.0 : 0.0) - acc;
        }

    double bmax = 0.0, cmax = 0.0, btail = 0.0, ctail = 0.0;
    for (int k = 1; k <= span; ++k) {
        bmax = std::max(bmax, std::abs(bk[k]));
        cmax = std::max(cmax, std::abs(ck[k]));
    }
    for (int k = std::max(1, n + T - 9); k <= n + T; ++k) {
        btail = std::max(btail, std::abs(bk[k]));
        ctail = std::max(ctail, std::abs(ck[k]));
    }
    BorodinOkounkov out;
    out.tail_bound = T * (btail * cmax + ctail * bmax);
    if (out.tail_bound > 1e-10) throw InputError("bo_rhs: truncation too small for this symbol");

    out.fredholm = lu_logdet(std::move(K), T).value();
    const cplx log0 = s.smooth.coeff(0) + std::log(s.prefactor);
    out.prefactor = std::exp(double(n) * log0 + szego_e_sum(s.smooth));
    out.value = out.prefactor * out.fredholm;
    return out;
}

bool caratheodory_psd(const std::vector<cplx>& c) {
    if (c.empty()) return true;
    const int m = static_cast<int>(c.size());
    Eigen::MatrixXcd A(m, m);
    for (int j = 0; j < m; ++j)
        for (int k = 0; k < m; ++k) {
            if (j == k)
                A(j, k) = 2.0 * c[0].real();
            else if (k > j)
                A(j, k) = c[k - j];
            else
                A(j, k) = std::conj(c[j - k]);
        }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(A, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff() >= -1e-12;
}

} // namespace toeplab
