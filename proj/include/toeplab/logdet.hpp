#pragma once

#include "toeplab/specialfn.hpp"

#include <boost/multiprecision/complex128.hpp>
#include <boost/multiprecision/float128.hpp>

#include <cmath>
#include <limits>
#include <utility>
#include <vector>

namespace toeplab {

enum class Precision { Double, Extended };

using xreal = boost::multiprecision::float128;
using xcplx = boost::multiprecision::complex128;

double wrap_phase(double phi);

// A determinant stored as exp(log_modulus + i phase), or exactly zero.
struct LogDet {
    double log_modulus = 0.0;
    double phase = 0.0;  // in (-pi, pi]
    bool exact_zero = false;

    static LogDet one() { return {}; }
    static LogDet zero() { return {0.0, 0.0, true}; }
    static LogDet from_log(cplx l);
    static LogDet from_value(cplx v);

    cplx value() const;
    cplx log() const;  // throws NumericalError when exact_zero
    double real_value() const { return value().real(); }

    LogDet operator*(const LogDet& o) const;
    LogDet operator/(const LogDet& o) const;
};

namespace detail {

template <class S>
struct ScalarOps;

template <>
struct ScalarOps<double> {
    using R = double;
    static R abs(double x) { return std::abs(x); }
    static double log_abs(double x) { return std::log(std::abs(x)); }
    static double arg(double x) { return x < 0 ? MathConstants::pi : 0.0; }
    static R eps() { return std::numeric_limits<double>::epsilon(); }
};

template <>
struct ScalarOps<cplx> {
    using R = double;
    static R abs(const cplx& x) { return std::abs(x); }
    static double log_abs(const cplx& x) { return std::log(std::abs(x)); }
    static double arg(const cplx& x) { return std::arg(x); }
    static R eps() { return std::numeric_limits<double>::epsilon(); }
};

template <>
struct ScalarOps<xreal> {
    using R = xreal;
    static R abs(const xreal& x) { return boost::multiprecision::abs(x); }
    static double log_abs(const xreal& x) {
        return static_cast<double>(boost::multiprecision::log(boost::multiprecision::abs(x)));
    }
    static double arg(const xreal& x) { return x < 0 ? MathConstants::pi : 0.0; }
    static R eps() { return std::numeric_limits<xreal>::epsilon(); }
};

template <>
struct ScalarOps<xcplx> {
    using R = xreal;
    static R abs(const xcplx& x) { return boost::multiprecision::abs(x); }
    static double log_abs(const xcplx& x) {
        return static_cast<double>(boost::multiprecision::log(boost::multiprecision::abs(x)));
    }
    static double arg(const xcplx& x) { return static_cast<double>(boost::multiprecision::arg(x)); }
    static R eps() { return std::numeric_limits<xreal>::epsilon(); }
};

} // namespace detail

// Determinant of the row-major n x n matrix `a` by LU with partial pivoting,
// accumulated in the log domain. `a` is consumed.
template <class S>
LogDet lu_logdet(std::vector<S> a, int n) {
    using Ops = detail::ScalarOps<S>;
    using R = typename Ops::R;
    if (n == 0) return LogDet::one();
    R norm = 0;
    for (int i = 0; i < n; ++i) {
        R row = 0;
        for (int j = 0; j < n; ++j) row += Ops::abs(a[i * n + j]);
        if (row > norm) norm = row;
    }
    if (norm == 0) return LogDet::zero();
    const R tol = R(n) * Ops::eps() * norm;
    double logmod = 0.0;
    double phase = 0.0;
    for (int k = 0; k < n; ++k) {
        int p = k;
        R best = Ops::abs(a[k * n + k]);
        for (int i = k + 1; i < n; ++i) {
            R v = Ops::abs(a[i * n + k]);
            if (v > best) {
                best = v;
                p = i;
            }
        }
        if (best <= tol) return LogDet::zero();
        if (p != k) {
            for (int j = 0; j < n; ++j) std::swap(a[k * n + j], a[p * n + j]);
            phase += MathConstants::pi;
        }
        const S piv = a[k * n + k];
        logmod += Ops::log_abs(piv);
        phase = wrap_phase(phase + Ops::arg(piv));
        for (int i = k + 1; i < n; ++i) {
            const S f = a[i * n + k] / piv;
            if (f == S(0)) continue;
            S* ri = &a[i * n];
            const S* rk = &a[k * n];
            for (int j = k + 1; j < n; ++j) ri[j] -= f * rk[j];
        }
    }
    return LogDet{logmod, wrap_phase(phase), false};
}

} // namespace toeplab
