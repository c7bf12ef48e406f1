#include "sinklab/green.hpp"

#include "sinklab/errors.hpp"

#include <cmath>
#include <numbers>

namespace sinklab {

void check_laplace_point(const ModelParams& params, Complex s) {
    if (!std::isfinite(s.real()) || !std::isfinite(s.imag()))
        throw ValidationError("s", "Laplace variable must be finite");
    if (s == Complex(0.0, 0.0))
        throw ValidationError("s", "s = 0 is the equilibrium pole");
    const double cut = -params.diffusion() * params.q() * params.q();
    if (s.imag() == 0.0 && s.real() <= cut)
        throw ValidationError("s", "s lies on the branch cut s <= -D q^2");
}

Complex inverse_gap(const Spectral& sp, Complex s, const ModelParams& params) {
    return params.diffusion() * (sp.p + sp.q) / s;
}

Complex free_drift_green(double x, double x0, Complex s, const ModelParams& params) {
    check_laplace_point(params, s);
    const Spectral sp = spectral(params, s);
    const double d = x - x0;
    return std::exp(-sp.q * d - sp.p * std::abs(d)) / (2.0 * params.diffusion() * sp.p);
}

Complex exact_v_green(double x, double x0, Complex s, const ModelParams& params) {
    check_laplace_point(params, s);
    validate_source(x0);
    // fold onto x0 >= 0; for x0 = 0 fold onto x >= 0 too so that mirrored
    // arguments take the same arithmetic path
    if (x0 < 0.0 || (x0 == 0.0 && x < 0.0)) {
        x = -x;
        x0 = -x0;
    }
    const Spectral sp = spectral(params, s);
    const Complex p = sp.p;
    const double q = sp.q;
    const Complex g0 = 1.0 / (2.0 * params.diffusion() * p);
    const Complex gap_inv = inverse_gap(sp, s, params);
    const Complex p_minus_q = s / (params.diffusion() * (p + q));
    if (x >= 0.0) {
        const double d = x - x0;
        const Complex direct = std::exp(-q * d - p * std::abs(d));
        const Complex cusp = q * gap_inv * std::exp(-p_minus_q * x0 - (p + q) * x);
        return g0 * (direct + cusp);
    }
    return g0 * p * gap_inv * std::exp(-p_minus_q * x0 + (p + q) * x);
}

Complex origin_green(double x0, Complex s, const ModelParams& params) {
    check_laplace_point(params, s);
    validate_source(x0);
    const Spectral sp = spectral(params, s);
    const Complex p_minus_q = s / (params.diffusion() * (sp.p + sp.q));
    return std::exp(-p_minus_q * std::abs(x0)) * inverse_gap(sp, s, params) / (2.0 * params.diffusion());
}

Complex literal_green(double x, double x0, Complex s, const ModelParams& params) {
    check_laplace_point(params, s);
    validate_source(x0);
    const Spectral sp = spectral(params, s);
    const Complex k = sp.p + sp.q;
    const Complex denom = k - params.omega();
    if (std::abs(denom) <= 1e-14 * std::abs(k))
        throw LiteralPoleError("literal form pole: p + q - omega = 0");
    const double D = params.diffusion();
    const Complex a = -params.omega() * std::exp(-k * std::abs(x0)) / (2.0 * D * denom * k);
    return a * std::exp(-k * std::abs(x)) + std::exp(-k * std::abs(x - x0)) / (2.0 * D * k);
}

double origin_kernel(double tau, const ModelParams& params) {
    if (!(tau > 0.0))
        throw ValidationError("tau", "kernel is singular at tau <= 0");
    const double D = params.diffusion();
    const double q = params.q();
    return std::exp(-D * q * q * tau) / (2.0 * std::sqrt(std::numbers::pi * D * tau)) +
           0.5 * q * (1.0 + std::erf(q * std::sqrt(D * tau)));
}

} // namespace sinklab
