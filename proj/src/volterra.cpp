#include "sinklab/volterra.hpp"

#include "sinklab/errors.hpp"
#include "sinklab/green.hpp"
#include "sinklab/ilt.hpp"
#include "sinklab/parallel.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace sinklab {

namespace {

using boost::math::quadrature::gauss;

// K(v^2) * 2v, smooth in v = sqrt(tau).
double kernel_dv(double v, double D, double q)
{
    return std::exp(-D * q * q * v * v) / std::sqrt(std::numbers::pi * D) +
           q * (1.0 + std::erf(q * std::sqrt(D) * v)) * v;
}

double check_uniform(std::span<const double> t)
{
    if (t.size() < 2) throw ValidationError("t_grid", "need at least two points");
    if (t[0] != 0.0) throw ValidationError("t_grid", "grid must start at t = 0");
    double dt = t[1] - t[0];
    if (!(dt > 0.0)) throw ValidationError("t_grid", "grid must be increasing");
    for (std::size_t i = 1; i < t.size(); ++i) {
        double expected = static_cast<double>(i) * dt;
        if (std::abs(t[i] - expected) > 1e-9 * std::max(1.0, expected))
            throw ValidationError("t_grid", "grid must be uniform");
    }
    return dt;
}

VolterraResult solve(const ModelParams& params, const RateFn& rate, double x0,
                     std::span<const double> t_grid, int talbot_nodes,
                     std::vector<double> breakpoints)
{
    validate_source(x0);
    const double dt = check_uniform(t_grid);
    const int steps = static_cast<int>(t_grid.size()) - 1;
    const double sigma = params.sigma();
    const bool singular = x0 == 0.0;

    // Rate limits at each node from below (cell ending there) and above.
    std::vector<double> k_minus(t_grid.size()), k_plus(t_grid.size());
    for (std::size_t j = 0; j < t_grid.size(); ++j) {
        k_plus[j] = rate(t_grid[j]);
        k_minus[j] = j == 0 ? k_plus[j] : rate(t_grid[j] - 1e-9 * dt);
        if (!std::isfinite(k_plus[j]) || !std::isfinite(k_minus[j]))
            throw NumericalError("sink rate is not finite on the time grid at t = " +
                                 std::to_string(t_grid[j]));
    }

    // Free term.
    std::vector<double> f(t_grid.size(), 0.0);
    if (!singular) {
        LaplaceFn g = [&](Complex s) { return origin_green(x0, s, params); };
        parallel_for(static_cast<std::size_t>(steps), [&](std::size_t i) {
            f[i + 1] = talbot(g, t_grid[i + 1], talbot_nodes);
        });
    } else {
        // F1(t) = 2 sigma int_0^t K(t - t') k(t') K(t') dt'
        parallel_for(static_cast<std::size_t>(steps), [&](std::size_t i) {
            const double tn = t_grid[i + 1];
            boost::math::quadrature::tanh_sinh<double> integrator;
            std::vector<double> cuts{0.0};
            for (double b : breakpoints)
                if (b > 0.0 && b < tn) cuts.push_back(b);
            cuts.push_back(tn);
            double total = 0.0;
            for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
                const double a = cuts[c];
                const double b = cuts[c + 1];
                auto piece = [&](double x, double xc) {
                    double tau = xc > 0.0 ? xc : b - x;
                    tau += tn - b;
                    double tp = xc < 0.0 ? a - xc : x;
                    if (!(tau > 0.0) || !(tp > 0.0)) return 0.0;
                    // one-sided k at the piece ends
                    double k = rate(std::clamp(tp, a + 1e-12 * (b - a), b - 1e-12 * (b - a)));
                    return origin_kernel(tau, params) * k * origin_kernel(tp, params);
                };
                total += integrator.integrate(piece, a, b);
            }
            f[i + 1] = 2.0 * sigma * total;
        });
    }

    const KernelWeights w = kernel_weights(params, dt, steps);

    VolterraResult out;
    out.t.assign(t_grid.begin(), t_grid.end());
    std::vector<double> u(t_grid.size(), 0.0); // P, or Q = P - K when x0 = 0
    u[0] = singular ? 0.0 : f[0];

    for (int n = 1; n <= steps; ++n) {
        double known = 0.0;
        for (int j = 1; j <= n; ++j) {
            const int m = n - j + 1;
            known += w.left[m] * k_plus[j - 1] * u[j - 1];
            if (j < n) known += w.right[m] * k_minus[j] * u[j];
        }
        const double denom = 1.0 - 2.0 * sigma * w.right[1] * k_minus[n];
        if (!(std::abs(denom) > 1e-12))
            throw NumericalError("implicit Volterra step is singular; reduce dt");
        u[n] = (f[n] + 2.0 * sigma * known) / denom;
    }

    out.p0.resize(t_grid.size());
    for (std::size_t j = 0; j < t_grid.size(); ++j) {
        if (singular)
            out.p0[j] = j == 0 ? std::numeric_limits<double>::infinity()
                               : u[j] + origin_kernel(t_grid[j], params);
        else
            out.p0[j] = u[j];
    }
    return out;
}

} // namespace

std::vector<double> uniform_grid(double t_max, int steps)
{
    if (!(t_max > 0.0) || !std::isfinite(t_max)) throw ValidationError("t_max", "must be positive");
    if (steps < 1) throw ValidationError("steps", "must be at least 1");
    std::vector<double> t(static_cast<std::size_t>(steps) + 1);
    const double dt = t_max / steps;
    for (int i = 0; i <= steps; ++i) t[i] = i * dt;
    t.back() = t_max;
    return t;
}

KernelWeights kernel_weights(const ModelParams& params, double dt, int steps)
{
    const double D = params.diffusion();
    const double q = params.q();
    KernelWeights w;
    w.left.assign(static_cast<std::size_t>(steps) + 1, 0.0);
    w.right.assign(static_cast<std::size_t>(steps) + 1, 0.0);
    for (int m = 1; m <= steps; ++m) {
        const double lo = (m - 1) * dt;
        const double hi = m * dt;
        const double va = std::sqrt(lo);
        const double vb = std::sqrt(hi);
        w.left[m] = gauss<double, 16>::integrate(
            [&](double v) { return kernel_dv(v, D, q) * (v * v - lo) / dt; }, va, vb);
        w.right[m] = gauss<double, 16>::integrate(
            [&](double v) { return kernel_dv(v, D, q) * (hi - v * v) / dt; }, va, vb);
    }
    return w;
}

VolterraResult volterra_p0(const ModelParams& params, const RateFn& rate, double x0,
                           std::span<const double> t_grid, int talbot_nodes)
{
    return solve(params, rate, x0, t_grid, talbot_nodes, {});
}

VolterraResult volterra_p0(const ModelParams& params, const SinkSpec& sink, double x0,
                           std::span<const double> t_grid, int talbot_nodes)
{
    validate(sink);
    std::vector<double> breakpoints;
    if (const auto* inv = std::get_if<InverseTimeSink>(&sink)) breakpoints.push_back(inv->t_on);
    RateFn rate = [sink](double t) { return sink_strength(sink, t); };
    return solve(params, rate, x0, t_grid, talbot_nodes, std::move(breakpoints));
}

} // namespace sinklab
