#include "sinklab/linear_ode.hpp"

#include "sinklab/errors.hpp"

#include <algorithm>
#include <cmath>

namespace sinklab {

namespace {

constexpr double kGamma = 2.0 - 1.4142135623730951; // 2 - sqrt(2)

struct PathCoefficients {
    const LinearCoefficients& raw;
    Complex from;
    Complex delta;

    // Coefficients with respect to the path parameter lambda in [0, 1].
    std::pair<Complex, Complex> operator()(double lambda) const {
        const auto [a, b] = raw(from + lambda * delta);
        if (!std::isfinite(a.real()) || !std::isfinite(a.imag()) || !std::isfinite(b.real()) ||
            !std::isfinite(b.imag()))
            throw NumericalError("non-finite ODE coefficient");
        return {delta * a, delta * b};
    }
};

Complex trbdf2_step(const PathCoefficients& coef, double lambda, Complex y, double h) {
    const auto [a0, b0] = coef(lambda);
    const auto [ag, bg] = coef(lambda + kGamma * h);
    const auto [a1, b1] = coef(lambda + h);
    const Complex yg = (y + 0.5 * kGamma * h * (a0 * y + b0 + bg)) / (1.0 - 0.5 * kGamma * h * ag);
    const double c1 = 1.0 / (kGamma * (2.0 - kGamma));
    const double c2 = (1.0 - kGamma) * (1.0 - kGamma) / (kGamma * (2.0 - kGamma));
    const double c3 = (1.0 - kGamma) / (2.0 - kGamma);
    return (c1 * yg - c2 * y + c3 * h * b1) / (1.0 - c3 * h * a1);
}

} // namespace

Complex integrate_linear_path(const LinearCoefficients& coefficients, Complex from, Complex to,
                              Complex y_start, double tol, int max_steps, LinearOdeStats* stats) {
    if (!(tol > 0.0))
        throw ValidationError("ode.tol", "must be > 0");
    const PathCoefficients coef{coefficients, from, to - from};
    if (from == to)
        return y_start;

    double lambda = 0.0;
    Complex y = y_start;
    double h = 1e-4;
    LinearOdeStats local;
    for (int iter = 0; iter < max_steps; ++iter) {
        if (lambda >= 1.0) {
            if (stats)
                *stats = local;
            return y;
        }
        h = std::min(h, 1.0 - lambda);
        const Complex full = trbdf2_step(coef, lambda, y, h);
        const Complex half = trbdf2_step(coef, lambda, y, 0.5 * h);
        const Complex two_halves = trbdf2_step(coef, lambda + 0.5 * h, half, 0.5 * h);
        const double err = std::abs(two_halves - full) / 3.0;
        const double scale = std::max({std::abs(two_halves), std::abs(y), 1e-300});
        const double allowed = tol * scale;
        if (!std::isfinite(err))
            throw NumericalError("non-finite ODE state");
        if (err <= allowed) {
            lambda = (h >= 1.0 - lambda) ? 1.0 : lambda + h;
            y = two_halves;
            ++local.accepted;
        } else {
            ++local.rejected;
        }
        const double factor = err == 0.0 ? 4.0 : 0.9 * std::cbrt(allowed / err);
        h *= std::clamp(factor, 0.2, 4.0);
        if (h < 1e-14)
            throw StepUnderflowError("ODE step size underflow along the Laplace path");
    }
    throw NumericalError("ODE integration exceeded max_steps");
}

} // namespace sinklab
