#pragma once

#include "sinklab/closure.hpp"
#include "sinklab/ilt.hpp"
#include "sinklab/model.hpp"

#include <mutex>
#include <span>
#include <string>
#include <vector>

namespace sinklab {

enum class CurveSource { analytic_ilt, crank_nicolson, monte_carlo, volterra };

std::string to_string(CurveSource source);

struct SurvivalCurve {
    std::vector<double> t;
    std::vector<double> survival;
    CurveSource source = CurveSource::analytic_ilt;
};

// int exp(-(p+q)|x|) dx = 2 / (p + q)
Complex decaying_mode_integral(const Spectral& sp);

// S(s) = 1/s + a(s) * 2/(p+q): the sink-free propagator keeps unit mass and
// only the homogeneous mode carries the sink.
Complex survival_transform(const OriginResponse& origin, const ModelParams& params);

// Time-domain values of the sink-augmented field by numerical inversion.
// All quantities at a given t share the same contour nodes, so asking for
// several x at once costs one closure solve per node.
class AnalyticSolution {
public:
    AnalyticSolution(ModelParams params, SinkSpec sink, double x0, IltConfig ilt = {},
                     ClosureOptions closure = {});

    CheckedInversion origin(double t) const;
    CheckedInversion survival(double t) const;
    std::vector<CheckedInversion> field(double t, std::span<const double> xs) const;

    // Contour shift applied for transforms with poles in Re s > 0.
    double talbot_shift() const noexcept { return shift_; }

    // Largest closure residual seen across all solves so far.
    double max_closure_residual() const;

    const ModelParams& params() const noexcept { return params_; }
    const SinkSpec& sink() const noexcept { return sink_; }
    double x0() const noexcept { return x0_; }
    const IltConfig& ilt() const noexcept { return ilt_; }

private:
    // Inverts each component of values(origin) at t.
    std::vector<CheckedInversion>
    invert(double t, const std::function<std::vector<Complex>(const OriginResponse&)>& values,
           std::size_t count) const;

    ModelParams params_;
    SinkSpec sink_;
    double x0_;
    IltConfig ilt_;
    ClosureOptions closure_;
    double shift_ = 0.0;
    mutable std::mutex residual_mutex_;
    mutable double max_residual_ = 0.0;
};

double survival_from_laplace(const ModelParams& params, const SinkSpec& sink, double x0, double t,
                             const IltConfig& ilt = {}, const ClosureOptions& closure = {});

// J(t) = 2 k(t) P(0,t) on the grid of the origin series.
std::vector<double> sink_flux(const SinkSpec& sink, std::span<const double> t,
                              std::span<const double> origin);

// k_eff = J / S; NaN where S <= 1e-6.
std::vector<double> effective_rate(std::span<const double> flux, std::span<const double> survival);

// Flux identity dS/dt = sigma J checked at interval midpoints:
//   max_n |(S_{n+1} - S_n) / dt - sigma (J_n + J_{n+1}) / 2| / max |J|,
// skipping the interval that starts at t = 0.
double flux_identity_residual(std::span<const double> t, std::span<const double> survival,
                              std::span<const double> flux, double sigma);

// Boltzmann profile (omega/2) exp(-omega |x|); omega = 0 is rejected.
double equilibrium_profile(const ModelParams& params, double x);

} // namespace sinklab
