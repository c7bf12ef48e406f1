#pragma once

#include "sinklab/model.hpp"
#include "sinklab/oracle.hpp"
#include "sinklab/volterra.hpp"

#include <cmath>
#include <random>
#include <vector>

namespace sinklab::testing {

// int_0^inf e^{-st} P(0,t) dt from the Volterra series; t_max picked so
// s t_max >= 25.
inline double volterra_laplace(const ModelParams& params, const SinkSpec& sink, double x0,
                               double s, double dt = 1e-3)
{
    const double t_max = std::ceil(25.0 / s);
    const int steps = static_cast<int>(std::lround(t_max / dt));
    const auto grid = uniform_grid(t_max, steps);
    const VolterraResult r = volterra_p0(params, sink, x0, grid);
    return numeric_laplace(r.p0, dt, s).value;
}

// Random points with Re s > 0, away from the branch point.
inline std::vector<Complex> random_laplace_points(std::size_t n, unsigned seed = 7)
{
    std::mt19937 gen(seed);
    std::uniform_real_distribution<double> re(0.05, 20.0), im(-30.0, 30.0);
    std::vector<Complex> out;
    for (std::size_t i = 0; i < n; ++i) out.emplace_back(re(gen), im(gen));
    return out;
}

inline double rel_diff(Complex a, Complex b)
{
    return std::abs(a - b) / std::max(std::abs(b), 1e-300);
}

} // namespace sinklab::testing
