#pragma once

#include "sinklab/model.hpp"

#include <functional>
#include <span>
#include <vector>

namespace sinklab {

using RateFn = std::function<double(double)>;

// Uniform grid 0, dt, ..., steps*dt.
std::vector<double> uniform_grid(double t_max, int steps);

struct VolterraResult {
    std::vector<double> t;
    std::vector<double> p0; // P(0, t); +inf at t = 0 when x0 = 0
};

// Product-integration weights for int_0^{t_n} K(t_n - t') y(t') dt' with y
// linear on each cell. left[m] and right[m] (m = 1..n) multiply the values at
// the earlier and later end of the cell whose far edge sits m cells back.
// The substitution tau = v^2 removes the 1/sqrt(tau) singularity of K.
struct KernelWeights {
    std::vector<double> left;
    std::vector<double> right;
};

KernelWeights kernel_weights(const ModelParams& params, double dt, int steps);

// Time-domain origin value from the second-kind Volterra equation
//   P(0,t) = G(0,t|x0) + 2 sigma int_0^t G(0,t-t'|0) k(t') P(0,t') dt'
// on a uniform grid starting at 0. The free term comes from a Talbot
// inversion of G(0,s|x0) for x0 != 0; for x0 = 0 the free term is singular
// and the equation is solved for Q = P - G(0,t|0) instead.
// Rate jumps are honoured when they sit on grid nodes: each cell uses the
// one-sided limits at its ends.
VolterraResult volterra_p0(const ModelParams& params, const RateFn& rate, double x0,
                           std::span<const double> t_grid, int talbot_nodes = 32);

VolterraResult volterra_p0(const ModelParams& params, const SinkSpec& sink, double x0,
                           std::span<const double> t_grid, int talbot_nodes = 32);

} // namespace sinklab
