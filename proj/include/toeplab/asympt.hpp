#pragma once

#include "toeplab/exactdet.hpp"
#include "toeplab/logdet.hpp"
#include "toeplab/symbols.hpp"

#include <string>
#include <variant>
#include <vector>

namespace toeplab {

// One term exp(q n^2 + a n + p log n + c). Unknown parts are flagged rather
// than guessed; an evaluation with an unknown part throws.
struct PredictionTerm {
    cplx quad = 0.0;
    cplx a = 0.0;
    cplx p = 0.0;
    cplx c = 0.0;
    bool linear_known = true;
    bool constant_known = true;
};

struct AsymptoticPrediction {
    std::vector<PredictionTerm> terms;
    std::string error_order;

    bool fully_known() const;
    // Sum of the terms at n, in the log domain.
    LogDet at(int n) const;
};

// FH asymptotics with Basor's constant for the representation as given.
AsymptoticPrediction szego_fh_predict(const CircleSymbol& s);

// Widom's constant for beta = 0 symbols, as a logarithm.
cplx log_widom_constant(const CircleSymbol& s);

// Sum over the minimizing representations.
AsymptoticPrediction bt_predict(const CircleSymbol& s);

// Exact D_n for a single pure FH singularity at z = 1.
LogDet bs_exact(cplx alpha, cplx beta, int n);

cplx selberg_value(int n, cplx alpha, cplx beta, cplx gamma);

// Exponent predictions for Hankel determinants of jump weights and for the
// th_plus_0 Toeplitz+Hankel determinant of an even symbol. Constants are unknown.
AsymptoticPrediction hankel_th_predict(StructuredKind kind, const std::variant<JumpWeight, CircleSymbol>& input);

} // namespace toeplab
