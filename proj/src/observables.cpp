#include "sinklab/observables.hpp"

#include "sinklab/errors.hpp"
#include "sinklab/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace sinklab {

std::string to_string(CurveSource source)
{
    switch (source) {
    case CurveSource::analytic_ilt: return "analytic-ilt";
    case CurveSource::crank_nicolson: return "cn";
    case CurveSource::monte_carlo: return "mc";
    case CurveSource::volterra: return "volterra";
    }
    return "unknown";
}

Complex decaying_mode_integral(const Spectral& sp)
{
    return 2.0 / (sp.p + sp.q);
}

Complex survival_transform(const OriginResponse& origin, const ModelParams& params)
{
    const Spectral sp = spectral(params, origin.s);
    return 1.0 / origin.s + origin.a_s * decaying_mode_integral(sp);
}

AnalyticSolution::AnalyticSolution(ModelParams params, SinkSpec sink, double x0, IltConfig ilt,
                                   ClosureOptions closure)
    : params_(params), sink_(std::move(sink)), x0_(x0), ilt_(ilt), closure_(closure)
{
    validate(sink_);
    validate_source(x0_);
    ilt_.validate();
    // Constant sink with net gain: pole where p - q = sigma alpha0 / D.
    if (const auto* c = std::get_if<ConstantSink>(&sink_)) {
        const double g = params_.sigma() * c->alpha0 / params_.diffusion();
        if (g > 0.0) {
            const double p = params_.q() + g;
            shift_ = params_.diffusion() * (p * p - params_.q() * params_.q());
        }
    }
}

double AnalyticSolution::max_closure_residual() const
{
    std::lock_guard<std::mutex> lock(residual_mutex_);
    return max_residual_;
}

std::vector<CheckedInversion> AnalyticSolution::invert(
    double t, const std::function<std::vector<Complex>(const OriginResponse&)>& values,
    std::size_t count) const
{
    std::vector<IltRule> rules;
    if (ilt_.method != IltMethod::stehfest) rules.push_back(talbot_rule(t, ilt_.talbot_nodes, shift_));
    if (ilt_.method != IltMethod::talbot) rules.push_back(stehfest_rule(t, ilt_.stehfest_terms));

    // One closure solve per node, reused for every requested component.
    std::vector<std::pair<std::size_t, std::size_t>> jobs;
    for (std::size_t r = 0; r < rules.size(); ++r)
        for (std::size_t k = 0; k < rules[r].nodes.size(); ++k) jobs.emplace_back(r, k);

    std::vector<std::vector<std::vector<Complex>>> evals(rules.size());
    for (std::size_t r = 0; r < rules.size(); ++r) evals[r].resize(rules[r].nodes.size());

    std::vector<double> residuals(jobs.size(), 0.0);
    parallel_for(jobs.size(), [&](std::size_t j) {
        const auto [r, k] = jobs[j];
        const OriginResponse o = solve_origin(rules[r].nodes[k], params_, sink_, x0_, closure_);
        residuals[j] = o.closure_residual();
        std::vector<Complex> v = values(o);
        for (const Complex& z : v)
            if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
                throw NumericalError("transform is not finite at a quadrature node");
        evals[r][k] = std::move(v);
    });
    {
        std::lock_guard<std::mutex> lock(residual_mutex_);
        for (double r : residuals)
            if (std::isfinite(r)) max_residual_ = std::max(max_residual_, r);
    }

    std::vector<CheckedInversion> out(count);
    for (std::size_t c = 0; c < count; ++c) {
        std::vector<double> results;
        std::vector<double> magnitude;
        for (std::size_t r = 0; r < rules.size(); ++r) {
            double sum = 0.0, mag = 0.0;
            for (std::size_t k = 0; k < rules[r].nodes.size(); ++k) {
                const double term = (rules[r].weights[k] * evals[r][k][c]).real();
                sum += term;
                mag += std::abs(term);
            }
            results.push_back(sum);
            magnitude.push_back(mag);
        }
        CheckedInversion& ci = out[c];
        ci.value = results[0];
        const bool has_stehfest = ilt_.method != IltMethod::talbot;
        if (has_stehfest) {
            const double sum = results.back();
            const double cancel = sum != 0.0
                                      ? magnitude.back() * std::numeric_limits<double>::epsilon() /
                                            std::abs(sum)
                                      : std::numeric_limits<double>::infinity();
            ci.cancellation_warning = cancel > 1e-4;
        }
        if (ilt_.method == IltMethod::both) {
            ci.discrepancy = std::abs(results[0] - results[1]);
            ci.flagged = ci.discrepancy > ilt_.agreement_tol;
        }
    }
    return out;
}

CheckedInversion AnalyticSolution::origin(double t) const
{
    return invert(t, [](const OriginResponse& o) { return std::vector<Complex>{o.p0}; }, 1)[0];
}

CheckedInversion AnalyticSolution::survival(double t) const
{
    return invert(
        t, [this](const OriginResponse& o) { return std::vector<Complex>{survival_transform(o, params_)}; },
        1)[0];
}

std::vector<CheckedInversion> AnalyticSolution::field(double t, std::span<const double> xs) const
{
    for (double x : xs)
        if (!std::isfinite(x)) throw ValidationError("x", "must be finite");
    std::vector<double> pos(xs.begin(), xs.end());
    return invert(
        t,
        [this, &pos](const OriginResponse& o) {
            std::vector<Complex> v;
            v.reserve(pos.size());
            for (double x : pos) v.push_back(assemble_field(x, o, params_, x0_));
            return v;
        },
        pos.size());
}

double survival_from_laplace(const ModelParams& params, const SinkSpec& sink, double x0, double t,
                             const IltConfig& ilt, const ClosureOptions& closure)
{
    return AnalyticSolution(params, sink, x0, ilt, closure).survival(t).value;
}

std::vector<double> sink_flux(const SinkSpec& sink, std::span<const double> t,
                              std::span<const double> origin)
{
    if (t.size() != origin.size())
        throw ValidationError("origin", "series and time grid differ in length");
    std::vector<double> J(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) {
        const double k = sink_strength(sink, t[i]);
        J[i] = k == 0.0 ? 0.0 : 2.0 * k * origin[i];
    }
    return J;
}

std::vector<double> effective_rate(std::span<const double> flux, std::span<const double> survival)
{
    if (flux.size() != survival.size())
        throw ValidationError("survival", "flux and survival differ in length");
    std::vector<double> k(flux.size());
    for (std::size_t i = 0; i < flux.size(); ++i)
        k[i] = survival[i] > 1e-6 ? flux[i] / survival[i] : std::numeric_limits<double>::quiet_NaN();
    return k;
}

double flux_identity_residual(std::span<const double> t, std::span<const double> survival,
                              std::span<const double> flux, double sigma)
{
    if (t.size() != survival.size() || t.size() != flux.size())
        throw ValidationError("flux", "series lengths differ");
    if (t.size() < 3) throw ValidationError("t", "need at least three samples");
    double scale = 0.0;
    for (double j : flux) scale = std::max(scale, std::abs(j));
    if (scale == 0.0) return 0.0;
    double worst = 0.0;
    // The first interval holds the startup step and is skipped.
    for (std::size_t n = 1; n + 1 < t.size(); ++n) {
        const double dSdt = (survival[n + 1] - survival[n]) / (t[n + 1] - t[n]);
        worst = std::max(worst, std::abs(dSdt - 0.5 * sigma * (flux[n] + flux[n + 1])));
    }
    return worst / scale;
}

double equilibrium_profile(const ModelParams& params, double x)
{
    if (params.omega() == 0.0)
        throw ValidationError("omega", "no normalizable equilibrium for omega = 0");
    return 0.5 * params.omega() * std::exp(-params.omega() * std::abs(x));
}

} // namespace sinklab
