#pragma once

#include "toeplab/logdet.hpp"

#include <vector>

namespace toeplab {

enum class PainleveKind { P3Eta, P5Sigma };

struct PainleveSolution {
    PainleveKind kind = PainleveKind::P3Eta;
    double parameter = 0.0;       // lambda for the PIII family
    std::vector<double> grid;     // ascending
    std::vector<double> values;   // eta or sigma
    std::vector<double> derivs;   // eta' or sigma'
    double start_point = 0.0;
    double start_tolerance = 0.0;
};

constexpr double kP3ThetaMax = 12.0;
constexpr double kP5XMax = 40.0;

// eta(theta; lambda) with eta ~ 1 - 2 lambda K0(2 theta) at infinity, integrated
// inward from kP3ThetaMax down to theta_min. Recorded at the integrator steps.
PainleveSolution p3_solve(double lambda, double theta_min);

enum class ScalingSign { Plus, Minus };

struct P3Scaling {
    double eta_at_half_r = 0.0;
    double G = 0.0;
};

// G_+(r) (sign Plus) or G_-(r) from eta at r/2 and the tail integral.
P3Scaling p3_scaling(double r, double lambda, ScalingSign sign);

// sigma(x) for the Painleve V sigma-form solution with sigma(0+) = -1/4 and
// sigma ~ -e^{-x} / (2 pi x) at infinity.
double p5_sigma(double x);

// The sigma trajectory from kP5XMax down to x_min.
PainleveSolution p5_solve(double x_min);

// exp(-int_{2r}^infty sigma(x) / x dx).
double g_minus_p5(double r);

struct FredholmGap {
    double s = 0.0;
    int nodes = 0;
    LogDet p_s;
    LogDet d_plus;
    LogDet d_minus;
};

// det(I - K_s) for the sine kernel on (-s, s), and the two half-interval factors.
FredholmGap sine_gap(double s, int nodes = 64);

struct DysonEstimate {
    double a0_estimate = 0.0;
    double c0 = 0.0;
};

// (1/12) log 2 + 3 zeta'(-1).
double widom_dyson_constant();

// Polynomial extrapolation in 1/s of log P_s + s^2/2 + log(s)/4 to 1/s = 0.
DysonEstimate dyson_asymptote(const std::vector<double>& s_grid);

// log D_n(phi_mu) - n^2 log cos(mu/2) + log(n sin(mu/2)) / 4.
double widom_constant_estimate(double mu, int n, Precision prec = Precision::Extended);

} // namespace toeplab
