#include "toeplab/asympt.hpp"
#include "toeplab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace toeplab {

namespace {

constexpr double kPi = MathConstants::pi;
const cplx kI(0.0, 1.0);

cplx g3(cplx alpha, cplx beta) {
    return log_barnes_g(1.0 + alpha + beta) + log_barnes_g(1.0 + alpha - beta) - log_barnes_g(1.0 + 2.0 * alpha);
}

bool trivial(const FHSingularity& sg) { return sg.alpha == cplx(0.0) && sg.beta == cplx(0.0); }

void require_fh(const CircleSymbol& s, const char* who) {
    if (s.is_direct()) throw InputError(std::string(who) + ": symbol has no Fisher-Hartwig form");
}

} // namespace

bool AsymptoticPrediction::fully_known() const {
    return std::all_of(terms.begin(), terms.end(),
                       [](const PredictionTerm& t) { return t.linear_known && t.constant_known; });
}

LogDet AsymptoticPrediction::at(int n) const {
    if (n < 1) throw InputError("prediction: n must be positive");
    if (!fully_known()) throw InputError("prediction has unknown constants and cannot be evaluated");
    if (terms.empty()) return LogDet::zero();
    const double dn = n;
    std::vector<cplx> logs;
    for (const auto& t : terms) logs.push_back(t.quad * dn * dn + t.a * dn + t.p * std::log(dn) + t.c);
    double top = -1e300;
    for (cplx l : logs) top = std::max(top, l.real());
    cplx sum = 0.0;
    double scale = 0.0;
    for (cplx l : logs) {
        const cplx e = std::exp(l - top);
        sum += e;
        scale += std::abs(e);
    }
    // terms of equal modulus cancelling to rounding level, e.g. Basor-Tracy at odd n
    if (std::abs(sum) <= 64.0 * std::numeric_limits<double>::epsilon() * scale) return LogDet::zero();
    return LogDet::from_log(std::log(sum) + top);
}

AsymptoticPrediction szego_fh_predict(const CircleSymbol& s) {
    require_fh(s, "szego_fh_predict");
    std::vector<FHSingularity> sg;
    for (const auto& x : s.singularities)
        if (!trivial(x)) sg.push_back(x);
    for (const auto& x : sg)
        if (is_degenerate_pair(x.alpha, x.beta))
            throw InputError("szego_fh_predict: degenerate singularity (alpha +- beta a negative integer)");

    PredictionTerm t;
    t.a = s.smooth.coeff(0) + std::log(s.prefactor);
    for (const auto& x : sg) t.p += x.alpha * x.alpha - x.beta * x.beta;

    cplx c = szego_e_sum(s.smooth);
    for (const auto& x : sg) {
        const cplx sp = smooth_half_sum(s.smooth, x.theta, true);
        const cplx sm = smooth_half_sum(s.smooth, x.theta, false);
        c += (-x.alpha + x.beta) * sp + (-x.alpha - x.beta) * sm;
        c += g3(x.alpha, x.beta);
    }
    for (std::size_t j = 0; j < sg.size(); ++j)
        for (std::size_t k = j + 1; k < sg.size(); ++k) {
            const double dist = std::abs(std::polar(1.0, sg[j].theta) - std::polar(1.0, sg[k].theta));
            c += 2.0 * (sg[j].beta * sg[k].beta - sg[j].alpha * sg[k].alpha) * std::log(dist);
            c += kI * (sg[k].theta - sg[j].theta - kPi) * (sg[j].alpha * sg[k].beta - sg[k].alpha * sg[j].beta);
        }
    t.c = c;
    AsymptoticPrediction out;
    out.terms.push_back(t);
    out.error_order = "relative O(n^{|||beta||| - 1})";
    return out;
}

cplx log_widom_constant(const CircleSymbol& s) {
    require_fh(s, "log_widom_constant");
    std::vector<FHSingularity> sg;
    for (const auto& x : s.singularities) {
        if (x.beta != cplx(0.0)) throw InputError("log_widom_constant: needs beta = 0");
        if (!trivial(x)) sg.push_back(x);
    }
    cplx c = szego_e_sum(s.smooth);
    for (std::size_t j = 0; j < sg.size(); ++j)
        for (std::size_t k = j + 1; k < sg.size(); ++k) {
            const double dist = std::abs(std::polar(1.0, sg[j].theta) - std::polar(1.0, sg[k].theta));
            c += -2.0 * sg[j].alpha * sg[k].alpha * std::log(dist);
        }
    for (const auto& x : sg) {
        const cplx vhat = s.smooth.value(x.theta) - s.smooth.coeff(0);
        c += -x.alpha * vhat;
        c += 2.0 * log_barnes_g(1.0 + x.alpha) - log_barnes_g(1.0 + 2.0 * x.alpha);
    }
    return c;
}

AsymptoticPrediction bt_predict(const CircleSymbol& s) {
    require_fh(s, "bt_predict");
    const auto reps = fh_representations(s);
    if (reps.degenerate) throw InputError("bt_predict: degenerate minimizing representation set");
    AsymptoticPrediction out;
    for (const auto& m : reps.members) {
        auto p = szego_fh_predict(m.as_symbol());
        out.terms.insert(out.terms.end(), p.terms.begin(), p.terms.end());
    }
    out.error_order = out.terms.size() > 1 ? "each term relative o(1)" : "relative O(n^{|||beta||| - 1})";
    return out;
}

LogDet bs_exact(cplx alpha, cplx beta, int n) {
    if (n < 0) throw InputError("bs_exact: n must be non-negative");
    if (!(alpha.real() > -0.5)) throw InputError("bs_exact: needs Re alpha > -1/2");
    if (is_degenerate_pair(alpha, beta)) throw InputError("bs_exact: alpha +- beta is a negative integer");
    if (n == 0) return LogDet::one();
    const double dn = n;
    const cplx l = g3(alpha, beta) + log_barnes_g(dn + 1.0) + log_barnes_g(dn + 1.0 + 2.0 * alpha) -
                   log_barnes_g(dn + 1.0 + alpha + beta) - log_barnes_g(dn + 1.0 + alpha - beta);
    return LogDet::from_log(l);
}

cplx selberg_value(int n, cplx alpha, cplx beta, cplx gamma) {
    if (n < 1) throw InputError("selberg_value: n must be positive");
    if (!(alpha.real() > -0.5)) throw InputError("selberg_value: needs Re alpha > -1/2");
    double bound = 1.0 / n;
    if (n > 1) bound = std::min(bound, (2.0 * alpha.real() + 1.0) / (n - 1));
    if (!(gamma.real() > -bound)) throw InputError("selberg_value: Re gamma outside the convergence range");
    cplx logv = 0.0;
    cplx sign = 1.0;
    for (int j = 0; j < n; ++j) {
        const double dj = j;
        logv += log_gamma(1.0 + 2.0 * alpha + dj * gamma) + log_gamma(1.0 + (dj + 1.0) * gamma) -
                log_gamma(1.0 + gamma);
        for (cplx z : {1.0 + alpha + beta + dj * gamma, 1.0 + alpha - beta + dj * gamma}) {
            const cplx r = rgamma(z);
            if (r == cplx(0.0)) return 0.0;
            sign *= r;
        }
    }
    return std::exp(logv) * sign;
}

AsymptoticPrediction hankel_th_predict(StructuredKind kind, const std::variant<JumpWeight, CircleSymbol>& input) {
    AsymptoticPrediction out;
    PredictionTerm t;
    t.linear_known = false;
    t.constant_known = false;
    if (kind == StructuredKind::Hankel) {
        const auto* jw = std::get_if<JumpWeight>(&input);
        if (!jw) throw InputError("hankel_th_predict: hankel kind needs a jump weight");
        make_hankel_weight(*jw);  // validates
        const std::size_t last = jw->lambda.size() - 1;
        for (std::size_t j = 1; j < last; ++j)
            if (std::abs(std::abs(jw->beta[j].real()) - 0.5) < 1e-12)
                throw InputError("hankel_th_predict: Re beta = 1/2 gives |||beta||| = 1; use bt_predict on the mapped symbol");
        t.quad = -std::log(2.0);
        t.p = -0.25 + 2.0 * (jw->alpha[0] * jw->alpha[0] + jw->alpha[last] * jw->alpha[last]);
        for (std::size_t j = 1; j < last; ++j) t.p += jw->alpha[j] * jw->alpha[j] - jw->beta[j] * jw->beta[j];
        out.error_order = "relative o(1); G_H and E_H unknown";
    } else if (kind == StructuredKind::THPlus0) {
        const auto* f = std::get_if<CircleSymbol>(&input);
        if (!f) throw InputError("hankel_th_predict: Toeplitz+Hankel kind needs an even circle symbol");
        require_fh(*f, "hankel_th_predict");
        cplx a0 = 0.0, ar = 0.0;
        for (const auto& x : f->singularities) {
            if (x.theta == 0.0) {
                if (x.beta != cplx(0.0)) throw InputError("hankel_th_predict: beta at z = 1 must vanish");
                a0 = x.alpha;
            } else if (std::abs(x.theta - kPi) < 1e-14) {
                if (x.beta != cplx(0.0)) throw InputError("hankel_th_predict: beta at z = -1 must vanish");
                ar = x.alpha;
            } else if (x.theta < kPi) {
                if (!(std::abs(x.beta.real()) < 0.5))
                    throw InputError("hankel_th_predict: needs |Re beta_j| < 1/2");
                t.p += x.alpha * x.alpha - x.beta * x.beta;
            }
        }
        t.p += 0.5 * (a0 * a0 + ar * ar - a0 - ar);
        out.error_order = "relative o(1); G_{T+H} and E_{T+H} unknown";
    } else {
        throw InputError("hankel_th_predict: exponent only available for hankel and th_plus_0");
    }
    out.terms.push_back(t);
    return out;
}

} // namespace toeplab
