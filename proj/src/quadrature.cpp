#include "toeplab/quadrature.hpp"
#include "toeplab/errors.hpp"
#include "toeplab/specialfn.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>

namespace toeplab {

namespace {

std::mutex g_cache_mutex;

bool is_integer(double e) { return std::abs(e - std::round(e)) < 1e-14; }

Rule compute_gauss_jacobi_unit(int m, double a) {
    // Jacobi weight (1-t)^0 (1+t)^a on [-1, 1], then t = 2x - 1.
    const double al = 0.0;
    const double be = a;
    const double ab = al + be;
    Eigen::VectorXd diag(m);
    Eigen::VectorXd sub(std::max(m - 1, 1));
    for (int n = 0; n < m; ++n) {
        if (n == 0)
            diag(n) = (be - al) / (ab + 2.0);
        else
            diag(n) = (be * be - al * al) / ((2.0 * n + ab) * (2.0 * n + ab + 2.0));
    }
    for (int n = 1; n < m; ++n) {
        const double num = 4.0 * n * (n + al) * (n + be) * (n + ab);
        const double den = (2.0 * n + ab) * (2.0 * n + ab) * (2.0 * n + ab + 1.0) * (2.0 * n + ab - 1.0);
        sub(n - 1) = std::sqrt(num / den);
    }
    const double mu0 = std::exp((ab + 1.0) * std::log(2.0) + std::lgamma(al + 1.0) +
                                std::lgamma(be + 1.0) - std::lgamma(ab + 2.0));
    Rule r;
    r.x.resize(m);
    r.w.resize(m);
    if (m == 1) {
        r.x[0] = 0.5 * (1.0 + diag(0));
        r.w[0] = mu0 / std::pow(2.0, a + 1.0);
        return r;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(diag, sub.head(m - 1), Eigen::ComputeEigenvectors);
    if (es.info() != Eigen::Success) throw NumericalError("Gauss-Jacobi eigensolve failed");
    const double scale = std::pow(2.0, a + 1.0);
    for (int i = 0; i < m; ++i) {
        const double t = es.eigenvalues()(i);
        const double v0 = es.eigenvectors()(0, i);
        r.x[i] = 0.5 * (1.0 + t);
        r.w[i] = mu0 * v0 * v0 / scale;
    }
    return r;
}

void append_gl(Rule& out, double a, double b, int order) {
    const Rule& gl = gauss_legendre(order);
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    for (std::size_t i = 0; i < gl.size(); ++i) {
        out.x.push_back(c + h * gl.x[i]);
        out.w.push_back(h * gl.w[i]);
    }
}

// Panel of width h with an algebraic singularity at c; dir = +1 means the
// panel is [c, c + h], dir = -1 means [c - h, c].
void append_end_panel(Rule& out, double c, double h, int dir, double e, bool osc,
                      const CircleRuleOptions& opt) {
    double inner = h;
    if (osc) {
        const double sigma = 0.5;
        double hi = h;
        for (int j = 0; j < opt.grading_levels; ++j) {
            const double lo = hi * sigma;
            if (dir > 0)
                append_gl(out, c + lo, c + hi, std::max(16, opt.order / 4));
            else
                append_gl(out, c - hi, c - lo, std::max(16, opt.order / 4));
            hi = lo;
        }
        inner = hi;
    }
    if (is_integer(e) && !osc) {
        if (dir > 0)
            append_gl(out, c, c + inner, opt.order);
        else
            append_gl(out, c - inner, c, opt.order);
        return;
    }
    const Rule& gj = gauss_jacobi_unit(opt.order, e);
    for (std::size_t i = 0; i < gj.size(); ++i) {
        const double u = inner * gj.x[i];
        out.x.push_back(c + dir * u);
        out.w.push_back(inner * gj.w[i] / std::pow(gj.x[i], e));
    }
}

} // namespace

const Rule& gauss_legendre(int m) {
    if (m < 1) throw InputError("gauss_legendre: order must be positive");
    static std::map<int, std::unique_ptr<Rule>> cache;
    std::lock_guard<std::mutex> lock(g_cache_mutex);
    auto it = cache.find(m);
    if (it != cache.end()) return *it->second;
    auto r = std::make_unique<Rule>();
    gauss_legendre_t<double>(m, r->x, r->w);
    return *cache.emplace(m, std::move(r)).first->second;
}

const Rule& gauss_jacobi_unit(int m, double a) {
    if (!(a > -1.0)) throw InputError("gauss_jacobi_unit: exponent must exceed -1");
    static std::map<std::pair<int, double>, std::unique_ptr<Rule>> cache;
    std::lock_guard<std::mutex> lock(g_cache_mutex);
    auto key = std::make_pair(m, a);
    auto it = cache.find(key);
    if (it != cache.end()) return *it->second;
    auto r = std::make_unique<Rule>(compute_gauss_jacobi_unit(m, a));
    return *cache.emplace(key, std::move(r)).first->second;
}

void append_interval_rule(Rule& out, double a, double b, double ea, double eb, bool osc_a,
                          bool osc_b, const CircleRuleOptions& opt) {
    const double len = b - a;
    if (!(len > 0)) return;
    const bool sing_a = osc_a || !is_integer(ea);
    const bool sing_b = osc_b || !is_integer(eb);
    int panels = static_cast<int>(std::ceil(len / opt.max_panel - 1e-12));
    if (panels < 1) panels = 1;
    if (sing_a && sing_b && panels < 2) panels = 2;
    const double h = len / panels;
    for (int p = 0; p < panels; ++p) {
        const double lo = a + p * h;
        const double hi = (p == panels - 1) ? b : lo + h;
        if (p == 0 && sing_a)
            append_end_panel(out, a, hi - lo, +1, ea, osc_a, opt);
        else if (p == panels - 1 && sing_b)
            append_end_panel(out, b, hi - lo, -1, eb, osc_b, opt);
        else
            append_gl(out, lo, hi, opt.order);
    }
}

Rule circle_rule(std::vector<Breakpoint> breaks, const CircleRuleOptions& opt) {
    constexpr double two_pi = 2.0 * MathConstants::pi;
    Rule out;
    for (auto& b : breaks) {
        b.theta = std::fmod(b.theta, two_pi);
        if (b.theta < 0) b.theta += two_pi;
    }
    std::sort(breaks.begin(), breaks.end(),
              [](const Breakpoint& l, const Breakpoint& r) { return l.theta < r.theta; });
    std::vector<Breakpoint> merged;
    for (const auto& b : breaks) {
        if (!merged.empty() && std::abs(merged.back().theta - b.theta) < 1e-14) {
            if (!is_integer(b.exponent)) merged.back().exponent = b.exponent;
            merged.back().oscillatory = merged.back().oscillatory || b.oscillatory;
        } else {
            merged.push_back(b);
        }
    }
    if (!merged.empty() && merged.size() > 1 &&
        std::abs(merged.back().theta - two_pi - merged.front().theta) < 1e-14) {
        merged.pop_back();
    }
    if (merged.empty()) {
        const int m = opt.order * static_cast<int>(std::ceil(two_pi / opt.max_panel));
        out.x.resize(m);
        out.w.assign(m, 1.0 / m);
        for (int k = 0; k < m; ++k) out.x[k] = two_pi * k / m;
        return out;
    }
    const std::size_t nb = merged.size();
    for (std::size_t j = 0; j < nb; ++j) {
        const Breakpoint& l = merged[j];
        const Breakpoint& r = merged[(j + 1) % nb];
        const double b = (j + 1 < nb) ? r.theta : r.theta + two_pi;
        append_interval_rule(out, l.theta, b, l.exponent, r.exponent, l.oscillatory,
                             r.oscillatory, opt);
    }
    for (auto& x : out.x) {
        x = std::fmod(x, two_pi);
        if (x < 0) x += two_pi;
    }
    for (auto& w : out.w) w /= two_pi;
    return out;
}

} // namespace toeplab
