#include "toeplab/logdet.hpp"
#include "toeplab/errors.hpp"

namespace toeplab {

double wrap_phase(double phi) {
    constexpr double two_pi = 2.0 * MathConstants::pi;
    phi = std::fmod(phi, two_pi);
    if (phi <= -MathConstants::pi) phi += two_pi;
    if (phi > MathConstants::pi) phi -= two_pi;
    return phi;
}

LogDet LogDet::from_log(cplx l) { return LogDet{l.real(), wrap_phase(l.imag()), false}; }

LogDet LogDet::from_value(cplx v) {
    if (v == cplx(0.0)) return zero();
    return LogDet{std::log(std::abs(v)), std::arg(v), false};
}

cplx LogDet::value() const {
    if (exact_zero) return 0.0;
    return std::polar(std::exp(log_modulus), phase);
}

cplx LogDet::log() const {
    if (exact_zero) throw NumericalError("log of an exactly zero determinant");
    return {log_modulus, phase};
}

LogDet LogDet::operator*(const LogDet& o) const {
    if (exact_zero || o.exact_zero) return zero();
    return LogDet{log_modulus + o.log_modulus, wrap_phase(phase + o.phase), false};
}

LogDet LogDet::operator/(const LogDet& o) const {
    if (o.exact_zero) throw NumericalError("division by an exactly zero determinant");
    if (exact_zero) return zero();
    return LogDet{log_modulus - o.log_modulus, wrap_phase(phase - o.phase), false};
}

} // namespace toeplab
