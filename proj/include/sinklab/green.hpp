#pragma once

#include "sinklab/model.hpp"

namespace sinklab {

// Rejects non-finite s, s = 0 and points on the branch cut of p(s)
// (real s <= -D q^2). Everything else is an analytic continuation of the
// Re s > 0 transform, which contour inversion needs.
void check_laplace_point(const ModelParams& params, Complex s);

// Laplace-domain propagator of dP/dt = D P'' + omega D P' on the whole line
// (uniform drift omega*D toward -x):
//   exp(-q (x - x0) - p |x - x0|) / (2 D p).
Complex free_drift_green(double x, double x0, Complex s, const ModelParams& params);

// Sink-free propagator of the V potential U = omega |x|.
//
// For x0 >= 0 the solution is decaying on both sides and built from the
// modes exp(-(p+q)x), exp((p-q)x) on x > 0 and their mirrors on x < 0:
//
//   x >= 0: [exp(-q(x-x0) - p|x-x0|) + q/(p-q) exp(-(p-q)x0 - (p+q)x)] / (2Dp)
//   x <  0: p/(p-q) exp(-(p-q)x0 + (p+q)x) / (2Dp)
//
// which is continuous at 0 and x0, has derivative jump -1/D at x0 and
// satisfies [dG/dx]_0 + 2 omega G(0) = 0 at the cusp. x0 < 0 follows from
// the mirror symmetry G(x, x0) = G(-x, -x0).
Complex exact_v_green(double x, double x0, Complex s, const ModelParams& params);

// G(0, s | x0) = exp(-(p-q)|x0|) / (2 D (p-q)).
Complex origin_green(double x0, Complex s, const ModelParams& params);

// 1 / (p - q) evaluated as D (p + q) / s, free of cancellation near s = 0.
Complex inverse_gap(const Spectral& sp, Complex s, const ModelParams& params);

// Literal single-exponential closed form
//   a exp(-(p+q)|x|) + exp(-(p+q)|x-x0|) / (2 D (p+q)),
//   a = -omega exp(-(p+q)|x0|) / (2 D (p+q-omega)(p+q)),
// with every exponent taken decaying. It does not solve the V-potential
// equation on 0 < x < x0 when omega > 0 and is kept for comparison only.
// Throws LiteralPoleError when p + q - omega vanishes.
Complex literal_green(double x, double x0, Complex s, const ModelParams& params);

// Time-domain G(0, tau | 0) in closed form:
//   exp(-D q^2 tau) / (2 sqrt(pi D tau)) + (q/2) (1 + erf(q sqrt(D tau))).
double origin_kernel(double tau, const ModelParams& params);

} // namespace sinklab
