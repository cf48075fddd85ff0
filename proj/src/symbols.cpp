#include "toeplab/symbols.hpp"
#include "toeplab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <boost/math/constants/constants.hpp>

#include <fstream>
#include <limits>
#include <memory>
#include <mutex>
#include <numeric>
#include <set>
#include <sstream>

namespace toeplab {

namespace {

constexpr double kPi = MathConstants::pi;
constexpr double kTwoPi = 2.0 * MathConstants::pi;
const cplx kI(0.0, 1.0);

double reduce_angle(double theta) {
    double t = std::fmod(theta, kTwoPi);
    if (t < 0) t += kTwoPi;
    if (t >= kTwoPi) t = 0.0;
    return t;
}

cplx get_param(const SymbolParams& p, const std::string& key) {
    auto it = p.find(key);
    if (it == p.end()) throw InputError("missing symbol parameter '" + key + "'");
    return it->second;
}

double get_real(const SymbolParams& p, const std::string& key) {
    cplx v = get_param(p, key);
    if (v.imag() != 0.0) throw InputError("symbol parameter '" + key + "' must be real");
    return v.real();
}

double get_real_or(const SymbolParams& p, const std::string& key, double dflt) {
    return p.count(key) ? get_real(p, key) : dflt;
}

// Coefficients of |2 sin(theta/2)|^{2 alpha} e^{i beta (theta - pi)} on [0, 2pi).
cplx pure_fh_coeff(cplx alpha, cplx beta, int k) {
    const cplx a = 1.0 + alpha + beta - double(k);
    const cplx b = 1.0 + alpha - beta + double(k);
    auto pole = [](cplx z) {
        return z.imag() == 0.0 && z.real() <= 0.0 && std::floor(z.real()) == z.real();
    };
    if (pole(a) || pole(b)) return 0.0;
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    return sign * std::exp(log_gamma(1.0 + 2.0 * alpha) - log_gamma(a) - log_gamma(b));
}

// (1/2) [log(1 - a z) - log(1 - a / z)] for |a| < 1: coefficients -a^k/(2k), +a^k/(2k).
cplx half_log_ratio_coeff(double a, int k) {
    if (k == 0 || a == 0.0) return 0.0;
    const int m = std::abs(k);
    const double v = std::pow(a, m) / (2.0 * m);
    return k > 0 ? -v : v;
}

cplx half_log_ratio_value(double a, double theta) {
    const cplx z = std::polar(1.0, theta);
    return 0.5 * (std::log(1.0 - a * z) - std::log(1.0 - a / z));
}

CircleSymbol make_pure_fh(cplx alpha, cplx beta, double theta0) {
    CircleSymbol s;
    s.name = "pure_fh";
    s.singularities.push_back({theta0, alpha, beta});
    s.closed_coeff = [alpha, beta, theta0](int k) {
        return pure_fh_coeff(alpha, beta, k) * std::polar(1.0, -k * theta0);
    };
    s.real_valued = (beta == cplx(0.0) && alpha.imag() == 0.0);
    return s;
}

// Coefficients of sign * z^shift * S(z) * T(1/z) [* K], with S, T products of at
// most two binomial factors (1 - a z)^s and K the kernel (2/pi)/(2j+1) when
// `kernel` is set. Coefficients are real.
struct BinomialProduct {
    std::vector<std::pair<double, double>> plus, minus;  // (a, exponent)
    int shift = 0;
    double sign = 1.0;
    bool kernel = false;

    double rmax() const {
        double r = 0.0;
        for (const auto& f : plus) r = std::max(r, std::abs(f.first));
        for (const auto& f : minus) r = std::max(r, std::abs(f.first));
        return r;
    }
};

template <class T>
class BinomialCoeffs {
public:
    explicit BinomialCoeffs(const BinomialProduct& spec) : spec_(spec) {
        const double r = spec.rmax();
        const double eps = static_cast<double>(std::numeric_limits<T>::epsilon());
        terms_ = r == 0.0 ? 1 : static_cast<int>(std::ceil(std::log(eps * 1e-3) / std::log(r))) + 8;
        tminus_ = series(spec.minus, terms_ + 1);
    }

    int terms() const { return terms_; }

    T operator()(int k) {
        std::lock_guard<std::mutex> lock(mu_);
        const int base = k - spec_.shift;
        T sum = 0;
        if (!spec_.kernel) {
            const int l0 = std::max(0, -base);
            ensure_plus(base + terms_ + 1);
            for (int l = l0; l <= terms_; ++l) sum += splus_[base + l] * tminus_[l];
        } else {
            ensure_plus(terms_ + 1);
            for (int l = 0; l <= terms_; ++l) {
                T u = 0;
                for (int m = 0; m <= terms_; ++m) u += splus_[m] * kernel(base + l - m);
                sum += u * tminus_[l];
            }
        }
        return T(spec_.sign) * sum;
    }

private:
    static T kernel(int j) {
        const T pi = boost::math::constants::pi<T>();
        return T(2) / (pi * T(2 * j + 1));
    }

    // Taylor coefficients of (1 - a z)^s (1 - b z)^t from the first-order ODE they satisfy.
    static std::vector<T> series(const std::vector<std::pair<double, double>>& f, int count) {
        const T a = f.size() > 0 ? T(f[0].first) : T(0), s = f.size() > 0 ? T(f[0].second) : T(0);
        const T b = f.size() > 1 ? T(f[1].first) : T(0), t = f.size() > 1 ? T(f[1].second) : T(0);
        std::vector<T> c(std::max(count, 2));
        c[0] = 1;
        c[1] = -(s * a + t * b);
        for (int m = 1; m + 1 < count; ++m)
            c[m + 1] = ((a + b) * T(m) - s * a - t * b) * c[m] / T(m + 1) -
                       a * b * (T(m - 1) - s - t) * c[m - 1] / T(m + 1);
        return c;
    }

    void ensure_plus(int count) {
        if (static_cast<int>(splus_.size()) >= count) return;
        splus_ = series(spec_.plus, std::max(count, 2 * static_cast<int>(splus_.size())));
    }

    BinomialProduct spec_;
    int terms_ = 0;
    std::vector<T> tminus_, splus_;
    std::mutex mu_;
};

// Attaches exact coefficients when the series converge fast enough; otherwise
// the symbol keeps using quadrature.
void attach_series(CircleSymbol& s, const BinomialProduct& spec) {
    if (spec.rmax() > (spec.kernel ? 0.85 : 0.995)) return;
    auto d = std::make_shared<BinomialCoeffs<double>>(spec);
    auto x = std::make_shared<BinomialCoeffs<xreal>>(spec);
    s.closed_coeff = [d](int k) { return cplx((*d)(k), 0.0); };
    s.closed_coeff_ext = [x](int k) { return xcplx((*x)(k), xreal(0)); };
}

CircleSymbol make_onsager(double g1, double g2) {
    if (!(g1 >= 0.0 && g1 < 1.0) || !(g2 > 0.0))
        throw InputError("onsager: need 0 <= gamma1 < 1 and gamma2 > 0");
    CircleSymbol s;
    s.name = "onsager";
    const double tol = 1e-12;
    if (g2 < 1.0 - tol) {
        s.smooth = SmoothPart::closed_form(
            [g1, g2](double th) { return half_log_ratio_value(g1, th) - half_log_ratio_value(g2, th); },
            [g1, g2](int k) { return half_log_ratio_coeff(g1, k) - half_log_ratio_coeff(g2, k); },
            512);
        attach_series(s, {{{g1, 0.5}, {g2, -0.5}}, {{g1, -0.5}, {g2, 0.5}}, 0, 1.0, false});
    } else if (g2 <= 1.0 + tol) {
        s.smooth = SmoothPart::closed_form([g1](double th) { return half_log_ratio_value(g1, th); },
                                           [g1](int k) { return half_log_ratio_coeff(g1, k); }, 512);
        s.singularities.push_back({0.0, 0.0, -0.5});
        attach_series(s, {{{g1, 0.5}}, {{g1, -0.5}}, 0, 1.0, true});
    } else {
        const double q = 1.0 / g2;
        s.smooth = SmoothPart::closed_form(
            [g1, q](double th) { return half_log_ratio_value(g1, th) + half_log_ratio_value(q, th); },
            [g1, q](int k) { return half_log_ratio_coeff(g1, k) + half_log_ratio_coeff(q, k); }, 512);
        s.singularities.push_back({0.0, 0.0, -1.0});
        attach_series(s, {{{g1, 0.5}, {q, 0.5}}, {{g1, -0.5}, {q, -0.5}}, -1, -1.0, false});
    }
    return s;
}

CircleSymbol make_onsager_tilde(double g1, double g2) {
    if (!(g1 >= 0.0 && g1 < 1.0) || !(g2 > 1.0))
        throw InputError("onsager_tilde: need 0 <= gamma1 < 1 < gamma2");
    CircleSymbol s;
    s.name = "onsager_tilde";
    const double q = 1.0 / g2;
    s.smooth = SmoothPart::closed_form(
        [g1, q](double th) { return half_log_ratio_value(g1, th) + half_log_ratio_value(q, th); },
        [g1, q](int k) { return half_log_ratio_coeff(g1, k) + half_log_ratio_coeff(q, k); }, 512);
    attach_series(s, {{{g1, 0.5}, {q, 0.5}}, {{g1, -0.5}, {q, -0.5}}, 0, 1.0, false});
    return s;
}

CircleSymbol make_diag(double k) {
    if (!(k >= 0.0)) throw InputError("diag: k_ons must be non-negative");
    const double tol = 1e-12;
    if (std::abs(k - 1.0) <= tol) {
        CircleSymbol s = make_pure_fh(0.0, -0.5, 0.0);
        s.name = "diag";
        s.closed_coeff_ext = [](int m) {
            const xreal pi = boost::math::constants::pi<xreal>();
            return xcplx(xreal(2) / (pi * xreal(2 * m + 1)), xreal(0));
        };
        return s;
    }
    CircleSymbol s;
    s.name = "diag";
    if (k < 1.0) {
        // (1/2)[log(1 - k/z) - log(1 - k z)] = -(half_log_ratio with a = k)
        s.smooth = SmoothPart::closed_form([k](double th) { return -half_log_ratio_value(k, th); },
                                           [k](int m) { return -half_log_ratio_coeff(k, m); }, 512);
        attach_series(s, {{{k, -0.5}}, {{k, 0.5}}, 0, 1.0, false});
    } else {
        const double q = 1.0 / k;
        s.smooth = SmoothPart::closed_form([q](double th) { return half_log_ratio_value(q, th); },
                                           [q](int m) { return half_log_ratio_coeff(q, m); }, 512);
        s.singularities.push_back({0.0, 0.0, -1.0});
        attach_series(s, {{{q, 0.5}}, {{q, -0.5}}, -1, -1.0, false});
    }
    return s;
}

CircleSymbol make_char_interval(double mu) {
    if (!(mu > 0.0 && mu < kPi)) throw InputError("char_interval: need 0 < mu < pi");
    CircleSymbol s;
    s.name = "char_interval";
    s.direct = [mu](double th) { return (th >= mu && th < kTwoPi - mu) ? cplx(1.0) : cplx(0.0); };
    s.direct_breaks = {mu, kTwoPi - mu};
    s.closed_coeff = [mu](int k) -> cplx {
        if (k == 0) return 1.0 - mu / kPi;
        return -std::sin(k * mu) / (kPi * k);
    };
    s.closed_coeff_ext = [mu](int k) -> xcplx {
        const xreal pi = boost::multiprecision::default_ops::get_constant_pi<xreal::backend_type>();
        const xreal m = xreal(mu);
        if (k == 0) return xcplx(xreal(1) - m / pi, xreal(0));
        return xcplx(-boost::multiprecision::sin(xreal(k) * m) / (pi * xreal(k)), xreal(0));
    };
    s.real_valued = true;
    return s;
}

// 2 |cos theta - cos a|, the Lenard symbol with a = t/2.
cplx lenard_coeff(double a, int k) {
    k = std::abs(k);
    const double c = std::cos(a);
    auto S = [a](int m) { return m == 0 ? a : std::sin(m * a) / m; };
    const double J = 0.5 * (S(std::abs(k - 1)) + S(k + 1)) - c * S(k);
    const double M = (k == 1 ? 0.5 * kPi : 0.0) - (k == 0 ? c * kPi : 0.0);
    return (2.0 / kPi) * (2.0 * J - M);
}

CircleSymbol make_lenard(double t) {
    if (!(t > 0.0 && t < kTwoPi)) throw InputError("lenard: need 0 < t < 2pi");
    CircleSymbol s;
    s.name = "lenard";
    const double a = 0.5 * t;
    s.singularities.push_back({a, 0.5, 0.0});
    s.singularities.push_back({kTwoPi - a, 0.5, 0.0});
    if (a > kPi / 2.0 + 1e-15) std::swap(s.singularities[0].theta, s.singularities[1].theta);
    s.closed_coeff = [a](int k) { return lenard_coeff(a, k); };
    s.real_valued = true;
    return s;
}

CircleSymbol make_gap(double t1, double t2, double gamma) {
    if (!(t1 >= 0.0 && t1 < t2 && t2 < kTwoPi)) throw InputError("gap: need 0 <= theta1 < theta2 < 2pi");
    if (!(gamma >= 0.0)) throw InputError("gap: gamma must be non-negative");
    CircleSymbol s;
    s.name = "gap";
    const double high = std::exp(kTwoPi * gamma);
    s.direct = [t1, t2, high](double th) { return (th >= t1 && th < t2) ? cplx(high) : cplx(1.0); };
    s.direct_breaks = {t1, t2};
    s.closed_coeff = [t1, t2, high](int k) -> cplx {
        if (k == 0) return 1.0 + (high - 1.0) * (t2 - t1) / kTwoPi;
        const cplx num = std::polar(1.0, -k * t1) - std::polar(1.0, -k * t2);
        return (high - 1.0) * num / (kTwoPi * kI * double(k));
    };
    s.real_valued = true;
    return s;
}

CircleSymbol make_cos_series(const SymbolParams& p) {
    std::map<int, cplx> coeffs;
    int top = -1;
    for (int k = 0; k < 64; ++k) {
        const std::string key = "a" + std::to_string(k);
        if (!p.count(key)) continue;
        const double a = get_real(p, key);
        if (k == 0) {
            coeffs[0] += a;
        } else {
            coeffs[k] += 0.5 * a;
            coeffs[-k] += 0.5 * a;
        }
        top = std::max(top, k);
    }
    if (top < 0) throw InputError("cos_series: need at least one coefficient a0, a1, ...");
    CircleSymbol s;
    s.name = "cos_series";
    s.direct = [coeffs](double th) {
        cplx v = 0.0;
        for (const auto& [k, c] : coeffs) v += c * std::polar(1.0, k * th);
        return v;
    };
    s.closed_coeff = [coeffs](int k) -> cplx {
        auto it = coeffs.find(k);
        return it == coeffs.end() ? cplx(0.0) : it->second;
    };
    s.real_valued = true;
    return s;
}

} // namespace

// ---- SmoothPart -------------------------------------------------------------

SmoothPart SmoothPart::from_coeffs(const std::map<int, cplx>& coeffs) {
    SmoothPart s;
    int w = 0;
    for (const auto& kv : coeffs) w = std::max(w, std::abs(kv.first));
    s.window_ = w;
    s.coeffs_.assign(2 * w + 1, 0.0);
    for (const auto& [k, v] : coeffs) s.coeffs_[k + w] = v;
    return s;
}

SmoothPart SmoothPart::closed_form(ValueFn value, CoeffFn coeff, int window) {
    SmoothPart s;
    s.value_ = std::move(value);
    s.coeff_ = std::move(coeff);
    s.window_ = window;
    return s;
}

cplx SmoothPart::value(double theta) const {
    if (value_) return value_(theta) + v0_shift_;
    cplx v = v0_shift_;
    for (int k = -window_; k <= window_; ++k) {
        const cplx c = coeffs_.empty() ? cplx(0.0) : coeffs_[k + window_];
        if (c != cplx(0.0)) v += c * std::polar(1.0, k * theta);
    }
    return v;
}

cplx SmoothPart::coeff(int k) const {
    const cplx shift = (k == 0) ? v0_shift_ : cplx(0.0);
    if (coeff_) return coeff_(k) + shift;
    if (std::abs(k) <= window_ && !coeffs_.empty()) return coeffs_[k + window_] + shift;
    return shift;
}

bool SmoothPart::is_zero() const {
    if (value_ || coeff_) return false;
    if (v0_shift_ != cplx(0.0)) return false;
    return std::all_of(coeffs_.begin(), coeffs_.end(), [](cplx c) { return c == cplx(0.0); });
}

SmoothPart SmoothPart::shifted(cplx dv0) const {
    SmoothPart s = *this;
    s.v0_shift_ += dv0;
    return s;
}

// ---- CircleSymbol -----------------------------------------------------------

void CircleSymbol::validate() {
    for (auto& sg : singularities) {
        if (!(sg.theta >= 0.0 && sg.theta < kTwoPi))
            throw InputError("singularity angle must lie in [0, 2pi)");
        if (!(sg.alpha.real() > -0.5)) throw InputError("singularity needs Re alpha > -1/2");
    }
    std::sort(singularities.begin(), singularities.end(),
              [](const FHSingularity& a, const FHSingularity& b) { return a.theta < b.theta; });
    for (std::size_t j = 1; j < singularities.size(); ++j)
        if (!(singularities[j].theta > singularities[j - 1].theta))
            throw InputError("singularity angles must be distinct");
}

cplx evaluate(const CircleSymbol& s, double theta) {
    const double th = reduce_angle(theta);
    if (s.is_direct()) return s.prefactor * s.direct(th);
    cplx logv = s.smooth.value(th);
    cplx v = s.prefactor;
    for (const auto& sg : s.singularities) {
        const double u = th - sg.theta;
        const double d = std::abs(2.0 * std::sin(0.5 * u));
        const double psi = (th >= sg.theta) ? u - kPi : u + kPi;
        if (d == 0.0) {
            if (sg.alpha.real() < 0.0)
                throw InputError("evaluate: symbol is infinite at a singularity angle");
            if (sg.alpha != cplx(0.0)) return 0.0;
        } else if (sg.alpha != cplx(0.0)) {
            logv += 2.0 * sg.alpha * std::log(d);
        }
        logv += kI * sg.beta * psi;
    }
    return v * std::exp(logv);
}

std::vector<Breakpoint> symbol_breakpoints(const CircleSymbol& s) {
    std::vector<Breakpoint> br;
    if (s.is_direct()) {
        for (double t : s.direct_breaks) br.push_back({reduce_angle(t), 0.0, false});
        return br;
    }
    for (const auto& sg : s.singularities)
        br.push_back({sg.theta, 2.0 * sg.alpha.real(), sg.alpha.imag() != 0.0});
    return br;
}

namespace {

std::vector<cplx> integrate_window(const Rule& rule, const std::vector<cplx>& fv, int kmin, int kmax) {
    std::vector<cplx> acc(kmax - kmin + 1, 0.0);
    for (std::size_t i = 0; i < rule.size(); ++i) {
        const cplx fw = rule.w[i] * fv[i];
        if (fw == cplx(0.0)) continue;
        cplx e = std::polar(1.0, -kmin * rule.x[i]);
        const cplx step = std::polar(1.0, -rule.x[i]);
        for (int k = kmin; k <= kmax; ++k) {
            acc[k - kmin] += fw * e;
            e *= step;
        }
    }
    return acc;
}

} // namespace

CoeffWindow quadrature_coeffs(const std::function<cplx(double)>& f, const std::vector<Breakpoint>& breaks,
                              int kmin, int kmax, const QuadratureOptions& opt) {
    if (kmax < kmin) throw InputError("fourier window is empty");
    const int kabs = std::max({std::abs(kmin), std::abs(kmax), 1});
    CircleRuleOptions ro;
    ro.order = opt.order;
    ro.max_panel = std::min(0.75, 40.0 / kabs);
    auto run = [&](const CircleRuleOptions& o) {
        Rule r = circle_rule(breaks, o);
        std::vector<cplx> fv(r.size());
        for (std::size_t i = 0; i < r.size(); ++i) fv[i] = f(r.x[i]);
        return integrate_window(r, fv, kmin, kmax);
    };
    std::vector<cplx> prev = run(ro);
    for (int it = 0; it < opt.max_refinements; ++it) {
        ro.max_panel *= 0.5;
        std::vector<cplx> next = run(ro);
        double diff = 0.0, scale = 0.0;
        for (std::size_t i = 0; i < next.size(); ++i) {
            diff = std::max(diff, std::abs(next[i] - prev[i]));
            scale = std::max(scale, std::abs(next[i]));
        }
        if (!std::isfinite(diff)) throw NumericalError("fourier quadrature produced non-finite values");
        if (diff <= opt.tolerance * std::max(scale, 1e-300)) return CoeffWindow{kmin, std::move(next)};
        prev = std::move(next);
    }
    throw NumericalError("fourier quadrature did not converge");
}

CoeffWindow quadrature_coeffs(const CircleSymbol& s, int kmin, int kmax, const QuadratureOptions& opt) {
    return quadrature_coeffs([&s](double th) { return evaluate(s, th); }, symbol_breakpoints(s), kmin,
                             kmax, opt);
}

CoeffWindow fourier_coeffs(const CircleSymbol& s, int kmin, int kmax, bool of_log) {
    if (kmax < kmin) throw InputError("fourier window is empty");
    CoeffWindow out{kmin, std::vector<cplx>(kmax - kmin + 1)};
    if (of_log) {
        if (s.is_direct()) throw InputError("log coefficients need a nonvanishing symbol of exponential form");
        for (const auto& sg : s.singularities)
            if (sg.alpha != cplx(0.0) || sg.beta != cplx(0.0))
                throw InputError("log coefficients undefined: symbol has zeros or nonzero winding");
        for (int k = kmin; k <= kmax; ++k) out[k] = s.smooth.coeff(k);
        if (kmin <= 0 && kmax >= 0) out[0] += std::log(s.prefactor);
        return out;
    }
    if (s.closed_coeff) {
        for (int k = kmin; k <= kmax; ++k) out[k] = s.prefactor * s.closed_coeff(k);
        return out;
    }
    return quadrature_coeffs(s, kmin, kmax);
}

// ---- representations -------------------------------------------------------

bool is_degenerate_pair(cplx alpha, cplx beta) {
    for (cplx v : {alpha + beta, alpha - beta}) {
        if (std::abs(v.imag()) > 1e-12) continue;
        const double r = std::round(v.real());
        if (r <= -1.0 && std::abs(v.real() - r) <= 1e-12) return true;
    }
    return false;
}

CircleSymbol FHRepresentation::as_symbol() const {
    CircleSymbol s = base;
    double phase = 0.0;
    for (std::size_t j = 0; j < s.singularities.size(); ++j) {
        s.singularities[j].beta += double(shifts[j]);
        phase += shifts[j] * s.singularities[j].theta;
    }
    s.smooth = s.smooth.shifted(kI * phase);
    return s;
}

namespace {

// Indices that take part in the seminorm and in the shifts.
std::vector<std::size_t> active_indices(const CircleSymbol& s) {
    std::vector<std::size_t> idx;
    for (std::size_t j = 0; j < s.singularities.size(); ++j) {
        const auto& sg = s.singularities[j];
        if (j == 0 && sg.theta == 0.0 && sg.alpha == cplx(0.0) && sg.beta == cplx(0.0)) continue;
        idx.push_back(j);
    }
    return idx;
}

double spread(const std::vector<double>& v) {
    if (v.size() < 2) return 0.0;
    auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    return *hi - *lo;
}

// Part of sum (Re beta + n)^2 that depends on n.
double shift_cost(const std::vector<double>& re, const std::vector<int>& n) {
    double c = 0.0;
    for (std::size_t i = 0; i < re.size(); ++i) c += 2.0 * n[i] * re[i] + double(n[i]) * n[i];
    return c;
}

} // namespace

double beta_seminorm(const CircleSymbol& s) {
    std::vector<double> re;
    for (std::size_t j : active_indices(s)) re.push_back(s.singularities[j].beta.real());
    return spread(re);
}

RepresentationSet fh_representations(const CircleSymbol& s) {
    RepresentationSet out;
    const auto idx = active_indices(s);
    const std::size_t m = idx.size();
    std::vector<double> re(m);
    for (std::size_t i = 0; i < m; ++i) re[i] = s.singularities[idx[i]].beta.real();
    out.seminorm = spread(re);

    const double tol = 1e-12;
    auto values = [&](const std::vector<int>& n) {
        std::vector<double> v(m);
        for (std::size_t i = 0; i < m; ++i) v[i] = re[i] + n[i];
        return v;
    };

    // Lemma 9 reduction: move the largest down and the smallest up while the spread exceeds 1.
    std::vector<int> n(m, 0);
    for (int guard = 0; guard < 10000 && m >= 2; ++guard) {
        auto v = values(n);
        auto hi = std::max_element(v.begin(), v.end()) - v.begin();
        auto lo = std::min_element(v.begin(), v.end()) - v.begin();
        if (v[hi] - v[lo] <= 1.0 + tol) break;
        n[hi] -= 1;
        n[lo] += 1;
    }
    std::set<std::vector<int>> found{n};
    if (m >= 2 && std::abs(spread(values(n)) - 1.0) <= tol) {
        // Orbit of equal-cost configurations: raise one minimum, lower one maximum.
        std::vector<std::vector<int>> stack{n};
        while (!stack.empty()) {
            auto cur = stack.back();
            stack.pop_back();
            auto v = values(cur);
            const double vmin = *std::min_element(v.begin(), v.end());
            const double vmax = *std::max_element(v.begin(), v.end());
            for (std::size_t a = 0; a < m; ++a) {
                if (std::abs(v[a] - vmin) > tol) continue;
                for (std::size_t b = 0; b < m; ++b) {
                    if (a == b || std::abs(v[b] - vmax) > tol) continue;
                    auto nxt = cur;
                    nxt[a] += 1;
                    nxt[b] -= 1;
                    if (found.insert(nxt).second) stack.push_back(nxt);
                }
            }
        }
    }
    const double best_cost = shift_cost(re, n);

    // Brute-force check over shifts in [-3, 3] with zero sum.
    if (m >= 2 && m <= 7) {
        std::set<std::vector<int>> brute;
        double brute_best = 1e300;
        std::vector<int> cur(m, -3);
        while (true) {
            int sum = std::accumulate(cur.begin(), cur.end(), 0);
            if (sum == 0) {
                const double c = shift_cost(re, cur);
                if (c < brute_best - tol) {
                    brute_best = c;
                    brute.clear();
                }
                if (std::abs(c - brute_best) <= tol) brute.insert(cur);
            }
            std::size_t i = 0;
            while (i < m && cur[i] == 3) cur[i++] = -3;
            if (i == m) break;
            ++cur[i];
        }
        if (std::abs(brute_best - best_cost) > 1e-9)
            throw NumericalError("fh_representations: shift rule disagrees with brute-force minimum");
        bool inside = std::all_of(found.begin(), found.end(), [](const std::vector<int>& v) {
            return std::all_of(v.begin(), v.end(), [](int x) { return std::abs(x) <= 3; });
        });
        if (inside && brute != found)
            throw NumericalError("fh_representations: shift rule disagrees with brute-force member set");
    }

    double fb = 0.0;
    for (double r : re) fb += r * r;
    out.f_beta = fb + best_cost;
    for (const auto& sh : found) {
        FHRepresentation rep;
        rep.base = s;
        rep.shifts.assign(s.singularities.size(), 0);
        for (std::size_t i = 0; i < m; ++i) rep.shifts[idx[i]] = sh[i];
        for (std::size_t j = 0; j < s.singularities.size(); ++j) {
            const auto& sg = s.singularities[j];
            if (is_degenerate_pair(sg.alpha, sg.beta + double(rep.shifts[j]))) out.degenerate = true;
        }
        out.members.push_back(std::move(rep));
    }
    return out;
}

// ---- builtins and parsing ----------------------------------------------------

std::vector<std::string> builtin_names() {
    return {"identity", "const",  "exp_trig", "cos_series", "bernstein_szego", "onsager", "onsager_tilde",
            "diag",     "char_interval", "lenard", "jacobi", "bt", "gap", "pure_fh"};
}

CircleSymbol builtin(const std::string& name, const SymbolParams& p) {
    CircleSymbol s;
    if (name == "identity") {
        s.name = name;
        s.closed_coeff = [](int k) { return k == 0 ? cplx(1.0) : cplx(0.0); };
        s.real_valued = true;
    } else if (name == "const") {
        s.name = name;
        s.prefactor = get_param(p, "c");
        s.closed_coeff = [](int k) { return k == 0 ? cplx(1.0) : cplx(0.0); };
        s.real_valued = s.prefactor.imag() == 0.0;
    } else if (name == "exp_trig") {
        // V = t z + t / z, so phi = e^{2 t cos theta}
        const cplx t = get_param(p, "t");
        s.name = name;
        s.smooth = SmoothPart::closed_form([t](double th) { return 2.0 * t * std::cos(th); },
                                           [t](int k) { return std::abs(k) == 1 ? t : cplx(0.0); }, 1);
        s.real_valued = t.imag() == 0.0;
    } else if (name == "cos_series") {
        s = make_cos_series(p);
    } else if (name == "bernstein_szego") {
        const double a = get_real(p, "a");
        if (!(std::abs(a) < 1.0)) throw InputError("bernstein_szego: need |a| < 1");
        s.name = name;
        s.smooth = SmoothPart::closed_form(
            [a](double th) { return -2.0 * std::log(std::abs(1.0 - a * std::polar(1.0, th))); },
            [a](int k) { return k == 0 ? cplx(0.0) : cplx(std::pow(a, std::abs(k)) / std::abs(k)); }, 512);
        s.real_valued = true;
    } else if (name == "onsager") {
        s = make_onsager(get_real(p, "gamma1"), get_real(p, "gamma2"));
    } else if (name == "onsager_tilde") {
        s = make_onsager_tilde(get_real(p, "gamma1"), get_real(p, "gamma2"));
    } else if (name == "diag") {
        s = make_diag(get_real(p, "k_ons"));
    } else if (name == "char_interval") {
        s = make_char_interval(get_real(p, "mu"));
    } else if (name == "lenard") {
        s = make_lenard(get_real(p, "t"));
    } else if (name == "jacobi") {
        const double lam = get_real(p, "lambda");
        const double mu = get_real(p, "mu");
        s.name = name;
        s.singularities.push_back({0.5 * kPi, 0.5 * lam, 0.0});
        s.singularities.push_back({1.5 * kPi, 0.5 * mu, 0.0});
        s.real_valued = true;
    } else if (name == "bt") {
        s.name = name;
        s.singularities.push_back({0.0, 0.0, 0.5});
        s.singularities.push_back({kPi, 0.0, -0.5});
        s.closed_coeff = [](int k) -> cplx {
            if (k % 2 == 0) return 0.0;
            return -2.0 / (kPi * k);
        };
    } else if (name == "gap") {
        s = make_gap(get_real(p, "theta1"), get_real(p, "theta2"), get_real(p, "gamma"));
    } else if (name == "pure_fh") {
        s = make_pure_fh(get_param(p, "alpha"), p.count("beta") ? get_param(p, "beta") : cplx(0.0),
                         get_real_or(p, "theta", 0.0));
    } else {
        throw InputError("unknown builtin symbol '" + name + "'");
    }
    s.validate();
    return s;
}

cplx parse_complex(const std::string& text) {
    std::string t;
    for (char ch : text)
        if (!std::isspace(static_cast<unsigned char>(ch))) t += ch;
    if (t.empty()) throw InputError("empty complex literal");
    auto to_double = [&](const std::string& s) -> double {
        if (s.empty() || s == "+") return 1.0;
        if (s == "-") return -1.0;
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(s, &used);
        } catch (const std::exception&) {
            throw InputError("bad complex literal '" + text + "'");
        }
        if (used != s.size()) throw InputError("bad complex literal '" + text + "'");
        return v;
    };
    if (t.back() != 'i' && t.back() != 'j') return {to_double(t), 0.0};
    t.pop_back();
    std::size_t split = std::string::npos;
    for (std::size_t i = t.size(); i-- > 1;) {
        if ((t[i] == '+' || t[i] == '-') && t[i - 1] != 'e' && t[i - 1] != 'E') {
            split = i;
            break;
        }
    }
    if (split == std::string::npos) return {0.0, to_double(t)};
    return {to_double(t.substr(0, split)), to_double(t.substr(split))};
}

CircleSymbol parse_symbol_text(const std::string& text) {
    std::map<std::string, std::string> kv;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw InputError("symbol file line " + std::to_string(lineno) + ": expected key=value");
        auto trim = [](std::string s) {
            auto a = s.find_first_not_of(" \t\r");
            auto b = s.find_last_not_of(" \t\r");
            return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
        };
        kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    const std::string kind = kv.count("kind") ? kv["kind"] : "fh";
    if (kind == "builtin") {
        if (!kv.count("builtin")) throw InputError("symbol file: kind=builtin needs builtin=<name>");
        SymbolParams p;
        for (const auto& [k, v] : kv)
            if (k.rfind("param.", 0) == 0) p[k.substr(6)] = parse_complex(v);
        return builtin(kv["builtin"], p);
    }
    CircleSymbol s;
    s.name = kv.count("name") ? kv["name"] : "file";
    if (kv.count("prefactor")) s.prefactor = parse_complex(kv["prefactor"]);
    if (kind == "trig") {
        std::map<int, cplx> coeffs;
        for (const auto& [k, v] : kv)
            if (k.rfind("c.", 0) == 0) coeffs[std::stoi(k.substr(2))] = parse_complex(v);
        if (coeffs.empty()) throw InputError("symbol file: kind=trig needs c.k lines");
        s.direct = [coeffs](double th) {
            cplx v = 0.0;
            for (const auto& [k, c] : coeffs) v += c * std::polar(1.0, k * th);
            return v;
        };
        s.closed_coeff = [coeffs](int k) {
            auto it = coeffs.find(k);
            return it == coeffs.end() ? cplx(0.0) : it->second;
        };
        bool herm = true;
        for (const auto& [k, c] : coeffs) {
            auto it = coeffs.find(-k);
            cplx other = it == coeffs.end() ? cplx(0.0) : it->second;
            if (std::abs(other - std::conj(c)) > 0.0) herm = false;
        }
        s.real_valued = herm;
        return s;
    }
    if (kind != "fh") throw InputError("symbol file: unknown kind '" + kind + "'");
    std::map<int, cplx> v;
    std::map<int, FHSingularity> sing;
    std::map<int, int> seen;
    for (const auto& [k, val] : kv) {
        try {
            if (k.rfind("V.", 0) == 0) {
                v[std::stoi(k.substr(2))] = parse_complex(val);
            } else if (k.rfind("sing.", 0) == 0) {
                auto dot = k.find('.', 5);
                if (dot == std::string::npos) throw InputError("symbol file: bad key '" + k + "'");
                const int j = std::stoi(k.substr(5, dot - 5));
                const std::string field = k.substr(dot + 1);
                if (field == "theta")
                    sing[j].theta = parse_complex(val).real();
                else if (field == "alpha")
                    sing[j].alpha = parse_complex(val);
                else if (field == "beta")
                    sing[j].beta = parse_complex(val);
                else
                    throw InputError("symbol file: unknown singularity field '" + field + "'");
                seen[j] += 1;
            } else if (k != "kind" && k != "name" && k != "prefactor") {
                throw InputError("symbol file: unknown key '" + k + "'");
            }
        } catch (const std::invalid_argument&) {
            throw InputError("symbol file: bad key '" + k + "'");
        }
    }
    s.smooth = SmoothPart::from_coeffs(v);
    for (const auto& [j, sg] : sing) s.singularities.push_back(sg);
    s.validate();
    return s;
}

CircleSymbol load_symbol_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw InputError("cannot open symbol file '" + path + "'");
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_symbol_text(ss.str());
}

} // namespace toeplab

namespace toeplab {

namespace {

constexpr int kSeriesCap = 400000;

// Sums term(k) for k = 1, 2, ... with geometric tail extrapolation.
template <class Term>
cplx tail_sum(const SmoothPart& v, Term term, const char* what) {
    const bool finite = v.window() > 0 && !v.coeff_is_closed();
    const int cap = finite ? v.window() : kSeriesCap;
    cplx sum = 0.0;
    double prev = 0.0;
    int zeros = 0;
    for (int k = 1; k <= cap; ++k) {
        const cplx t = term(k);
        sum += t;
        const double a = std::abs(t);
        if (finite) continue;
        if (a == 0.0) {
            if (++zeros >= 16) return sum;
            continue;
        }
        zeros = 0;
        if (prev > 0.0 && k > 4) {
            const double r = a / prev;
            if (r < 1.0) {
                const double tail = a * r / (1.0 - r);
                if (tail < 1e-13 * std::max(std::abs(sum), 1e-300)) return sum;
            }
        }
        prev = a;
    }
    if (finite) return sum;
    throw NumericalError(std::string(what) + ": series did not converge");
}

} // namespace

cplx szego_e_sum(const SmoothPart& v) {
    if (v.window() == 0 && !v.coeff_is_closed()) return 0.0;
    return tail_sum(v, [&v](int k) { return double(k) * v.coeff(k) * v.coeff(-k); }, "E(phi)");
}

cplx smooth_half_sum(const SmoothPart& v, double theta, bool positive) {
    if (v.window() == 0 && !v.coeff_is_closed()) return 0.0;
    const int sgn = positive ? 1 : -1;
    return tail_sum(v, [&](int k) { return v.coeff(sgn * k) * std::polar(1.0, sgn * k * theta); },
                    "b(z)");
}

} // namespace toeplab
