#pragma once

#include "toeplab/symbols.hpp"

#include <optional>
#include <vector>

namespace toeplab {

struct SpectrumReport {
    int n = 0;
    std::vector<double> eigenvalues;  // ascending
    double L = 0.0, M = 0.0;          // inf and sup of the symbol
};

// Eigenvalues of the Hermitian Toeplitz matrix T_n(f) for a real symbol f.
SpectrumReport toeplitz_eigenvalues(const CircleSymbol& s, int n);

// inf and sup of a real symbol (grid plus local refinement).
std::pair<double, double> symbol_range(const CircleSymbol& s);

struct BulkPrediction {
    double x = 0.0;
    double lambda_x = 0.0;
    double spacing = 0.0;
    double psi_derivative = 0.0;
};

// Unimodal real symbol: the minimum sits at theta = 0 after a rotation, f' > 0 up
// to the maximum theta_0 and f' < 0 beyond, f'' != 0 at both extremes.
class UnimodalSymbol {
public:
    explicit UnimodalSymbol(const CircleSymbol& s);

    double L() const { return lo_; }
    double M() const { return hi_; }
    double theta0() const { return theta0_; }

    double f(double theta) const;    // rotated so the minimum is at 0
    double df(double theta) const;
    double d2f(double theta) const;

    // theta_1(lambda) in [0, theta_0] and theta_2(lambda) in [theta_0, 2pi].
    std::pair<double, double> roots(double lambda) const;
    double psi(double lambda) const;
    double psi_derivative(double lambda) const;
    // psi(lambda_x) = pi x, by bisection on [L, M].
    double lambda_at(double x) const;

private:
    CircleSymbol s_;
    double shift_ = 0.0;
    double lo_ = 0.0, hi_ = 0.0, theta0_ = 0.0;
};

BulkPrediction bulk_prediction(const CircleSymbol& s, double x, int n);

struct GapStats {
    int gap_count = 0;
    std::vector<double> gap_eigenvalues;
    std::optional<double> pairing_distance;  // only when q is given
    double epsilon = 0.0;
};

// Eigenvalues of T_n for the two-level symbol (1 outside [theta1, theta2), e^{2 pi gamma}
// inside) lying in (1 + eps, e^{2 pi gamma} - eps). A negative epsilon selects the
// default 0.05 (e^{2 pi gamma} - 1). With q, also the largest distance from a gap
// eigenvalue to the spectrum of T_{n+q}; theta2 - theta1 must then be 2 pi p / q.
GapStats gap_spectrum_stats(double theta1, double theta2, double gamma, int n, double epsilon = -1.0,
                            std::optional<int> q = std::nullopt);

} // namespace toeplab
