#pragma once

#include "toeplab/logdet.hpp"
#include "toeplab/symbols.hpp"

#include <optional>
#include <string>

namespace toeplab {

enum class IsingRegime { Subcritical, Critical, Supercritical };

struct IsingParams {
    double chi1 = 0.0, chi2 = 0.0;  // J_1 / k_B T, J_2 / k_B T
    double z1 = 0.0, z2 = 0.0, z2_star = 0.0;
    double gamma1 = 0.0, gamma2 = 0.0;
    double k_ons = 0.0;
    std::optional<double> kappa;  // only for chi1 == chi2
    IsingRegime regime = IsingRegime::Subcritical;
};

std::string regime_name(IsingRegime r);

IsingParams ising_params(double chi1, double chi2);

enum class FreeEnergyForm { DoubleIntegral, SingleIntegral };

// The integral term of -F / k_B T as a function of kappa in [0, 1].
double onsager_integral(double kappa, FreeEnergyForm form);

// -F / k_B T for J_1 = J_2.
double free_energy(const IsingParams& p, FreeEnergyForm form);

enum class CorrelationKind { Row, Diag };
enum class CorrelationRoute { Toeplitz, GammaProduct };

struct CorrelationResult {
    int n = 0;
    double value = 0.0;
    CorrelationRoute route = CorrelationRoute::Toeplitz;
};

CircleSymbol ising_symbol(const IsingParams& p, CorrelationKind kind);

// The Toeplitz route throughout, except that route GammaProduct is honoured for
// the diagonal at criticality.
CorrelationResult correlation(const IsingParams& p, CorrelationKind kind, int n,
                              CorrelationRoute route = CorrelationRoute::Toeplitz,
                              Precision prec = Precision::Double);

// (2/pi) prod_{q=1}^{n-1} Gamma(q+1)^2 / (Gamma(q+1/2) Gamma(q+3/2)), as a log.
double log_w_critical(int n);
// (2/(3pi)) prod_{q=1}^{n-1} Gamma(q+1)^2 / (Gamma(q-1/2) Gamma(q+5/2)), as a log.
double log_w_tilde_critical(int n);

double magnetization(const IsingParams& p);

// Leading asymptotic value of the row or diagonal correlation for the regime.
double wu_leading(const IsingParams& p, CorrelationKind kind, int n);

} // namespace toeplab
