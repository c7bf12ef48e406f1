#pragma once

#include "sinklab/model.hpp"

namespace sinklab {

// Closed forms of the single-exponential ansatz as originally printed, with
// every exponent taken decaying. They disagree with the re-derived closure
// when omega > 0 and exist to quantify that gap. Each throws
// LiteralPoleError where p + q - omega vanishes.

// Homogeneous amplitude
//   a(s) = K / (D (p+q-omega)) - omega e^{-(p+q)|x0|} / (2 D (p+q-omega)(p+q)),
// K = L[k P(0,.)](s).
Complex literal_origin_amplitude(Complex s, const ModelParams& params, Complex sink_lap, double x0);

// Constant-law origin value
//   e^{-(p+q)|x0|} (p+q-2 omega) / (2 (p+q)(p+q-omega-sigma alpha0)).
Complex literal_p0_constant(Complex s, const ModelParams& params, double alpha0, double x0);

// Linear-law integrating-factor exponent as printed:
//   -2 / (2 alpha (q^2+s/D)^{3/2}) - D q s / alpha.
Complex literal_linear_phase(Complex s, const ModelParams& params, double alpha);

// Antiderivative of f'(s) = (D/alpha)(p - q), vanishing at s = 0:
//   (2 D^2 / (3 alpha)) (p^3 - q^3) - (D q / alpha) s.
Complex rederived_linear_phase(Complex s, const ModelParams& params, double alpha);

// Right-hand side of the printed inverse-time origin relation
//   alpha u / (D p) - omega (D + 2) P0 / (2 D p) + e^{-(p+q)|x0|} / (2 D p),
// which should reproduce P0 if the relation held.
Complex literal_inverse_origin_rhs(Complex s, const ModelParams& params, double alpha, double x0,
                                   Complex u, Complex p0);

} // namespace sinklab
