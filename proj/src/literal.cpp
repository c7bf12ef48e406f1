#include "sinklab/literal.hpp"

#include "sinklab/errors.hpp"
#include "sinklab/green.hpp"

#include <cmath>

namespace sinklab {

namespace {

Complex checked_gap(const Spectral& sp, const ModelParams& params) {
    const Complex k = sp.p + sp.q;
    const Complex denom = k - params.omega();
    if (std::abs(denom) <= 1e-14 * std::abs(k))
        throw LiteralPoleError("literal form pole: p + q - omega = 0");
    return denom;
}

} // namespace

Complex literal_origin_amplitude(Complex s, const ModelParams& params, Complex sink_lap, double x0) {
    check_laplace_point(params, s);
    const Spectral sp = spectral(params, s);
    const Complex denom = checked_gap(sp, params);
    const Complex k = sp.p + sp.q;
    const double D = params.diffusion();
    return sink_lap / (D * denom) - params.omega() * std::exp(-k * std::abs(x0)) / (2.0 * D * denom * k);
}

Complex literal_p0_constant(Complex s, const ModelParams& params, double alpha0, double x0) {
    check_laplace_point(params, s);
    const Spectral sp = spectral(params, s);
    checked_gap(sp, params);
    const Complex k = sp.p + sp.q;
    const Complex denom = k - params.omega() - params.sigma() * alpha0;
    if (std::abs(denom) <= 1e-14 * std::abs(k))
        throw LiteralPoleError("literal constant-law pole: p + q - omega - alpha0 = 0");
    return std::exp(-k * std::abs(x0)) * (k - 2.0 * params.omega()) / (2.0 * k * denom);
}

Complex literal_linear_phase(Complex s, const ModelParams& params, double alpha) {
    if (alpha == 0.0)
        throw ValidationError("alpha", "phase is undefined for a zero ramp");
    const Spectral sp = spectral(params, s);
    const Complex p3 = sp.p * sp.p * sp.p;
    return -2.0 / (2.0 * alpha * p3) - params.diffusion() * sp.q * s / alpha;
}

Complex rederived_linear_phase(Complex s, const ModelParams& params, double alpha) {
    if (alpha == 0.0)
        throw ValidationError("alpha", "phase is undefined for a zero ramp");
    const Spectral sp = spectral(params, s);
    const double D = params.diffusion();
    const double q = sp.q;
    return 2.0 * D * D / (3.0 * alpha) * (sp.p * sp.p * sp.p - q * q * q) - D * q / alpha * s;
}

Complex literal_inverse_origin_rhs(Complex s, const ModelParams& params, double alpha, double x0,
                                   Complex u, Complex p0) {
    check_laplace_point(params, s);
    const Spectral sp = spectral(params, s);
    const double D = params.diffusion();
    const Complex two_dp = 2.0 * D * sp.p;
    return alpha * u / (D * sp.p) - params.omega() * (D + 2.0) * p0 / two_dp +
           std::exp(-(sp.p + sp.q) * std::abs(x0)) / two_dp;
}

} // namespace sinklab
