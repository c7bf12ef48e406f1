#pragma once

#include "sinklab/model.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace sinklab {

// Origin value of the sink-augmented field in the Laplace domain.
//
// Every sink law is closed through the same origin relation
//   P(0,s) = G(0,s|x0) + 2 sigma G(0,s|0) L[k P(0,.)](s),
// where G is the sink-free V-potential propagator. The homogeneous
// amplitude a(s) = P(0,s) - G(0,s|x0) multiplies exp(-(p+q)|x|) in the
// assembled field.
struct OriginResponse {
    Complex s;
    Complex p0;
    Complex sink_lap;     // L[k P(0,.)](s)
    Complex a_s;          // p0 - green_source
    Complex green_source; // G(0,s|x0)
    Complex green_origin; // G(0,s|0)
    double sigma = -1.0;
    std::uint64_t checksum = 0;

    // |p0 - G(0,s|x0) - 2 sigma G(0,s|0) sink_lap| / |p0|
    double closure_residual() const;
};

// Fingerprint of (s, params, x0) carried by OriginResponse.
std::uint64_t origin_checksum(Complex s, const ModelParams& params, double x0);

struct OdeOptions {
    // The backward integration starts at s + s_max_factor * max(|s|, D q^2 + 1).
    double s_max_factor = 1e3;
    double tol = 1e-10;
    int max_steps = 200000;
    bool operator==(const OdeOptions&) const = default;
};

struct SeriesOptions {
    int depth_max = 500;
    // Stop once the geometric tail estimate drops below tail_tol * |sum|.
    double tail_tol = 1e-15;
    // Sum exactly terms 0..fixed_depth instead of truncating adaptively.
    std::optional<int> fixed_depth;
    bool operator==(const SeriesOptions&) const = default;
};

struct ClosureOptions {
    OdeOptions ode;
    SeriesOptions series;
    bool operator==(const ClosureOptions&) const = default;
};

// Terms of P(0,s) = sum_n tau_n(s) for the exponential law, with
//   tau_n(s) = prod_{j<n} [2 sigma beta G(0, s+j alpha | 0)] * G(0, s+n alpha | x0).
struct SeriesState {
    std::vector<Complex> terms;
    std::vector<double> factors; // |2 sigma beta G(0, s+j alpha | 0)|
    int depth = 0;               // index of the last summed term
    double tail_bound = 0.0;
};

OriginResponse p0_none(Complex s, const ModelParams& params, double x0);

// P(0,s) = G(0,s|x0) / (1 - 2 sigma alpha0 G(0,s|0)). Throws ClosurePoleError
// when the denominator vanishes.
OriginResponse p0_constant(Complex s, const ModelParams& params, const ConstantSink& sink, double x0);

// k = alpha1 t: L[kP] = -alpha1 dP/ds, so the closure becomes the linear ODE
//   dP/ds = D (p - q) / (sigma alpha1) * (G(0,s|x0) - P),
// integrated from s_max back to s with P(s_max) = G(0,s_max|x0). The state
// is scaled by exp((p-q)|x0|) so that it varies on the scale of s itself.
// sigma * alpha1 > 0 (an unbounded gain) has no Laplace transform and is
// rejected.
OriginResponse p0_linear(Complex s, const ModelParams& params, const LinearSink& sink, double x0,
                         const OdeOptions& options = {});

// k = alpha / t: L[kP] = alpha u(s), u(s) = int_s^inf P(0,s') ds'. Solves
//   du/ds = -G(0,s|x0) - 2 sigma alpha G(0,s|0) u
// backward from u(s_max) = int_{s_max}^inf G(0,s'|x0) ds' and recovers P from
// the closure. The transform is of the ungated law; the activation time only
// matters to the time-domain oracles. Requires x0 != 0 (the source-at-sink
// integral diverges) and an absorbing sign.
OriginResponse p0_inverse(Complex s, const ModelParams& params, const InverseTimeSink& sink,
                          double x0, const OdeOptions& options = {});

// k = beta exp(-alpha t): L[kP] = beta P(0, s + alpha), giving the shift
// recursion P(0,s) = G(0,s|x0) + 2 sigma beta G(0,s|0) P(0,s+alpha), summed as
// a series. Throws SeriesDivergenceError when depth_max is exhausted.
OriginResponse p0_expdecay(Complex s, const ModelParams& params, const ExpDecaySink& sink,
                           double x0, const SeriesOptions& options = {},
                           SeriesState* state = nullptr);

OriginResponse solve_origin(Complex s, const ModelParams& params, const SinkSpec& sink, double x0,
                            const ClosureOptions& options = {});

// P(x,s) = G_V(x,s|x0) + a(s) exp(-(p+q)|x|); returns p0 exactly at x = 0.
// Throws ValidationError when `origin` was produced for a different
// (s, params, x0).
Complex assemble_field(double x, const OriginResponse& origin, const ModelParams& params, double x0);

} // namespace sinklab
