#include "toeplab/eigen.hpp"
#include "toeplab/errors.hpp"

#include <Eigen/Dense>
#include <boost/math/tools/minima.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

namespace toeplab {

namespace {

constexpr double kPi = MathConstants::pi;
constexpr double kTwoPi = 2.0 * kPi;
constexpr int kGrid = 4096;

double wrap(double t) {
    t = std::fmod(t, kTwoPi);
    return t < 0 ? t + kTwoPi : t;
}

void check_real(const CircleSymbol& s) {
    for (int j = 0; j < 256; ++j) {
        const double th = kTwoPi * (j + 0.5) / 256.0;
        const cplx v = evaluate(s, th);
        if (std::abs(v.imag()) > 1e-12 * std::max(1.0, std::abs(v)))
            throw InputError("symbol is not real-valued");
    }
}

template <class F>
double bisect_increasing(F g, double lo, double hi, double tol) {
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        (g(mid) < 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

} // namespace

std::pair<double, double> symbol_range(const CircleSymbol& s) {
    const double h = kTwoPi / kGrid;
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    int jlo = -1, jhi = -1;
    for (int j = 0; j < kGrid; ++j) {
        double v;
        try {
            v = evaluate(s, j * h).real();
        } catch (const InputError&) {
            hi = std::numeric_limits<double>::infinity();  // a root singularity with Re alpha < 0
            continue;
        }
        if (v < lo) lo = v, jlo = j;
        if (v > hi) hi = v, jhi = j;
    }
    auto val = [&](double t) { return evaluate(s, wrap(t)).real(); };
    if (jlo >= 0) {
        const auto r = boost::math::tools::brent_find_minima(val, (jlo - 1) * h, (jlo + 1) * h, 50);
        lo = std::min(lo, r.second);
    }
    if (jhi >= 0 && std::isfinite(hi)) {
        const auto r = boost::math::tools::brent_find_minima([&](double t) { return -val(t); }, (jhi - 1) * h,
                                                             (jhi + 1) * h, 50);
        hi = std::max(hi, -r.second);
    }
    return {lo, hi};
}

SpectrumReport toeplitz_eigenvalues(const CircleSymbol& s, int n) {
    if (n < 1) throw InputError("toeplitz_eigenvalues: n must be positive");
    check_real(s);
    const auto c = fourier_coeffs(s, -(n - 1), n - 1);
    bool real = true;
    for (int k = -(n - 1); k <= n - 1; ++k) {
        if (c[k].imag() != 0.0) real = false;
        if (std::abs(c[k] - std::conj(c[-k])) > 1e-10 * std::max(1.0, std::abs(c[k])))
            throw InputError("toeplitz_eigenvalues: coefficients are not Hermitian");
    }
    SpectrumReport r;
    r.n = n;
    std::tie(r.L, r.M) = symbol_range(s);
    r.eigenvalues.resize(n);
    if (real) {
        Eigen::MatrixXd a(n, n);
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) a(j, k) = c[j - k].real();
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a, Eigen::EigenvaluesOnly);
        if (es.info() != Eigen::Success) throw NumericalError("toeplitz_eigenvalues: eigensolver failed");
        for (int j = 0; j < n; ++j) r.eigenvalues[j] = es.eigenvalues()(j);
    } else {
        Eigen::MatrixXcd a(n, n);
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) a(j, k) = c[j - k];
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(a, Eigen::EigenvaluesOnly);
        if (es.info() != Eigen::Success) throw NumericalError("toeplitz_eigenvalues: eigensolver failed");
        for (int j = 0; j < n; ++j) r.eigenvalues[j] = es.eigenvalues()(j);
    }
    std::sort(r.eigenvalues.begin(), r.eigenvalues.end());
    return r;
}

// ---- unimodal symbols ------------------------------------------------------

UnimodalSymbol::UnimodalSymbol(const CircleSymbol& s) : s_(s) {
    check_real(s_);
    const double h = kTwoPi / kGrid;
    std::vector<double> v(kGrid);
    for (int j = 0; j < kGrid; ++j) v[j] = evaluate(s_, j * h).real();
    const int jlo = static_cast<int>(std::min_element(v.begin(), v.end()) - v.begin());
    if (jlo != 0) {
        auto val = [&](double t) { return evaluate(s_, wrap(t)).real(); };
        shift_ = wrap(boost::math::tools::brent_find_minima(val, (jlo - 1) * h, (jlo + 1) * h, 50).first);
    }

    // One sign change of f', from + to -, over the grid.
    int changes = 0, last = 0, jmax = -1;
    for (int j = 1; j < kGrid; ++j) {
        const double d = df(j * h);
        const int sg = d > 1e-12 ? 1 : (d < -1e-12 ? -1 : 0);
        if (sg == 0) continue;
        if (last == 0 && sg < 0) throw InputError("symbol is not unimodal: f decreases right after its minimum");
        if (last != 0 && sg != last) {
            ++changes;
            jmax = j;
        }
        last = sg;
    }
    if (changes != 1) throw InputError("symbol is not unimodal");
    theta0_ = bisect_increasing([&](double t) { return -df(t); }, (jmax - 1) * h, jmax * h, 1e-15);
    lo_ = f(0.0);
    hi_ = f(theta0_);
    if (!(std::abs(d2f(0.0)) > 1e-8) || !(std::abs(d2f(theta0_)) > 1e-8))
        throw InputError("symbol is not unimodal: vanishing second derivative at an extremum");
}

double UnimodalSymbol::f(double theta) const { return evaluate(s_, wrap(theta + shift_)).real(); }

double UnimodalSymbol::df(double theta) const {
    const double h = 1e-3;
    return (f(theta - 2 * h) - 8 * f(theta - h) + 8 * f(theta + h) - f(theta + 2 * h)) / (12 * h);
}

double UnimodalSymbol::d2f(double theta) const {
    const double h = 1e-2;
    return (-f(theta - 2 * h) + 16 * f(theta - h) - 30 * f(theta) + 16 * f(theta + h) - f(theta + 2 * h)) /
           (12 * h * h);
}

std::pair<double, double> UnimodalSymbol::roots(double lambda) const {
    if (!(lambda >= lo_ && lambda <= hi_)) throw InputError("lambda outside the symbol range");
    const double t1 = bisect_increasing([&](double t) { return f(t) - lambda; }, 0.0, theta0_, 1e-15);
    const double t2 = bisect_increasing([&](double t) { return lambda - f(t); }, theta0_, kTwoPi, 1e-15);
    return {t1, t2};
}

double UnimodalSymbol::psi(double lambda) const {
    const auto [t1, t2] = roots(lambda);
    return 0.5 * (t1 - t2) + kPi;
}

double UnimodalSymbol::psi_derivative(double lambda) const {
    const auto [t1, t2] = roots(lambda);
    return 0.5 * (1.0 / df(t1) - 1.0 / df(t2));
}

double UnimodalSymbol::lambda_at(double x) const {
    if (!(x > 0.0 && x < 1.0)) throw InputError("x must lie in (0, 1)");
    return bisect_increasing([&](double l) { return psi(l) - kPi * x; }, lo_, hi_, 1e-12);
}

BulkPrediction bulk_prediction(const CircleSymbol& s, double x, int n) {
    if (n < 1) throw InputError("bulk_prediction: n must be positive");
    const UnimodalSymbol u(s);
    BulkPrediction b;
    b.x = x;
    b.lambda_x = u.lambda_at(x);
    b.psi_derivative = u.psi_derivative(b.lambda_x);
    b.spacing = kPi / (b.psi_derivative * (n + 1));
    return b;
}

// ---- two-level symbol ------------------------------------------------------

GapStats gap_spectrum_stats(double theta1, double theta2, double gamma, int n, double epsilon,
                            std::optional<int> q) {
    if (!(theta1 >= 0.0 && theta1 < theta2 && theta2 < kTwoPi))
        throw InputError("gap_spectrum_stats: need 0 <= theta1 < theta2 < 2pi");
    if (!(gamma >= 0.0)) throw InputError("gap_spectrum_stats: gamma must be non-negative");
    const double high = std::exp(kTwoPi * gamma);
    GapStats g;
    g.epsilon = epsilon < 0.0 ? 0.05 * (high - 1.0) : epsilon;
    const CircleSymbol s = builtin("gap", {{"theta1", theta1}, {"theta2", theta2}, {"gamma", gamma}});
    const auto spec = toeplitz_eigenvalues(s, n);
    for (double l : spec.eigenvalues)
        if (l > 1.0 + g.epsilon && l < high - g.epsilon) g.gap_eigenvalues.push_back(l);
    g.gap_count = static_cast<int>(g.gap_eigenvalues.size());
    if (q) {
        if (*q < 2) throw InputError("gap_spectrum_stats: q must be at least 2");
        const double p = (theta2 - theta1) * *q / kTwoPi;
        if (std::abs(p - std::round(p)) > 1e-9)
            throw InputError("gap_spectrum_stats: theta2 - theta1 is not 2 pi p / q");
        const auto other = toeplitz_eigenvalues(s, n + *q).eigenvalues;
        double worst = 0.0;
        for (double l : g.gap_eigenvalues) {
            auto it = std::lower_bound(other.begin(), other.end(), l);
            double best = std::numeric_limits<double>::infinity();
            if (it != other.end()) best = *it - l;
            if (it != other.begin()) best = std::min(best, l - *(it - 1));
            worst = std::max(worst, best);
        }
        g.pairing_distance = worst;
    }
    return g;
}

} // namespace toeplab
