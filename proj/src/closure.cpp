#include "sinklab/closure.hpp"

#include "sinklab/errors.hpp"
#include "sinklab/green.hpp"
#include "sinklab/linear_ode.hpp"
#include "sinklab/special.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

namespace sinklab {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

OriginResponse make_response(Complex s, const ModelParams& params, double x0, Complex p0,
                             Complex sink_lap, Complex green_source, Complex green_origin) {
    OriginResponse r;
    r.s = s;
    r.p0 = p0;
    r.sink_lap = sink_lap;
    r.green_source = green_source;
    r.green_origin = green_origin;
    r.a_s = p0 - green_source;
    r.sigma = params.sigma();
    r.checksum = origin_checksum(s, params, x0);
    return r;
}

Complex backward_start(Complex s, const ModelParams& params, const OdeOptions& options) {
    if (!(options.s_max_factor > 0.0))
        throw ValidationError("ode.s_max_factor", "must be > 0");
    const double q = params.q();
    const double reach = std::max(std::abs(s), params.diffusion() * q * q + 1.0);
    return s + options.s_max_factor * reach;
}

// Partial sums of the exponential-law series. `fixed_depth` < 0 means adaptive.
Complex expdecay_sum(Complex s, const ModelParams& params, const ExpDecaySink& sink, double x0,
                     const SeriesOptions& options, int fixed_depth, SeriesState* state) {
    const double coupling = 2.0 * params.sigma() * sink.beta;
    SeriesState local;
    Complex prod = 1.0;
    Complex sum = origin_green(x0, s, params);
    local.terms.push_back(sum);
    double prev = std::abs(sum);
    const int limit = fixed_depth >= 0 ? fixed_depth : options.depth_max;
    bool converged = fixed_depth >= 0;
    int n = 1;
    for (; n <= limit; ++n) {
        const Complex shifted = s + static_cast<double>(n - 1) * sink.alpha_decay;
        const Complex factor = coupling * origin_green(0.0, shifted, params);
        local.factors.push_back(std::abs(factor));
        prod *= factor;
        const Complex term = prod * origin_green(x0, s + static_cast<double>(n) * sink.alpha_decay, params);
        local.terms.push_back(term);
        sum += term;
        const double mag = std::abs(term);
        const double ratio = prev > 0.0 ? mag / prev : 0.0;
        prev = mag;
        local.tail_bound = ratio < 1.0 ? mag * ratio / (1.0 - ratio) : mag;
        if (fixed_depth < 0 && ratio < 1.0 && local.tail_bound <= options.tail_tol * std::abs(sum)) {
            converged = true;
            break;
        }
    }
    local.depth = std::min(n, limit);
    if (!converged)
        throw SeriesDivergenceError("exponential-sink series did not converge within depth_max",
                                    local.factors);
    if (state)
        *state = std::move(local);
    return sum;
}

} // namespace

double OriginResponse::closure_residual() const {
    const Complex rhs = green_source + 2.0 * sigma * green_origin * sink_lap;
    const double scale = std::abs(p0);
    return scale > 0.0 ? std::abs(p0 - rhs) / scale : std::abs(p0 - rhs);
}

std::uint64_t origin_checksum(Complex s, const ModelParams& params, double x0) {
    std::uint64_t h = 1469598103934665603ULL;
    auto mix = [&h](double v) {
        const auto bits = std::bit_cast<std::uint64_t>(v);
        for (int i = 0; i < 8; ++i) {
            h ^= (bits >> (8 * i)) & 0xffULL;
            h *= 1099511628211ULL;
        }
    };
    mix(s.real());
    mix(s.imag());
    mix(params.diffusion());
    mix(params.omega());
    mix(params.sigma());
    mix(x0);
    return h;
}

OriginResponse p0_none(Complex s, const ModelParams& params, double x0) {
    const Complex g = origin_green(x0, s, params);
    const Complex h = origin_green(0.0, s, params);
    return make_response(s, params, x0, g, 0.0, g, h);
}

OriginResponse p0_constant(Complex s, const ModelParams& params, const ConstantSink& sink, double x0) {
    validate(SinkSpec{sink});
    const Complex g = origin_green(x0, s, params);
    const Complex h = origin_green(0.0, s, params);
    const Complex denom = 1.0 - 2.0 * params.sigma() * sink.alpha0 * h;
    if (std::abs(denom) < 1e-13)
        throw ClosurePoleError("constant-sink closure pole: 1 - 2 sigma alpha0 G(0,s|0) = 0");
    const Complex p0 = g / denom;
    return make_response(s, params, x0, p0, sink.alpha0 * p0, g, h);
}

OriginResponse p0_linear(Complex s, const ModelParams& params, const LinearSink& sink, double x0,
                         const OdeOptions& options) {
    validate(SinkSpec{sink});
    if (sink.alpha1 == 0.0)
        return p0_none(s, params, x0);
    const double sa = params.sigma() * sink.alpha1;
    if (sa > 0.0)
        throw ValidationError("alpha1", "sigma * alpha1 > 0 is an unbounded gain without a Laplace transform");

    const Complex g = origin_green(x0, s, params);
    const Complex h = origin_green(0.0, s, params);
    const double D = params.diffusion();
    const double ax0 = std::abs(x0);

    // w = P exp((p-q)|x0|) obeys w' = (-c + |x0| p') w + 1/(2 sigma alpha1)
    // with c = D (p-q) / (sigma alpha1).
    const LinearCoefficients coefficients = [&](Complex z) {
        const Spectral sp = spectral(params, z);
        const Complex gap = z / (D * (sp.p + sp.q));
        const Complex c = D * gap / sa;
        const Complex dp = 1.0 / (2.0 * D * sp.p);
        return std::pair<Complex, Complex>{-c + ax0 * dp, 1.0 / (2.0 * sa)};
    };
    const Complex s_end = backward_start(s, params, options);
    const Spectral sp_end = spectral(params, s_end);
    const Complex w_end = inverse_gap(sp_end, s_end, params) / (2.0 * D);
    const Complex w = integrate_linear_path(coefficients, s_end, s, w_end, options.tol, options.max_steps);

    const Spectral sp = spectral(params, s);
    const Complex gap = s / (D * (sp.p + sp.q));
    const Complex p0 = w * std::exp(-gap * ax0);
    const Complex dp0_ds = D * gap / sa * (g - p0);
    return make_response(s, params, x0, p0, -sink.alpha1 * dp0_ds, g, h);
}

OriginResponse p0_inverse(Complex s, const ModelParams& params, const InverseTimeSink& sink,
                          double x0, const OdeOptions& options) {
    validate(SinkSpec{sink});
    if (sink.alpha == 0.0)
        return p0_none(s, params, x0);
    if (x0 == 0.0)
        throw ValidationError("x0", "inverse-time law with the source on the sink diverges; use x0 != 0");
    if (params.sign() == SinkSign::gain)
        throw ValidationError("sigma", "inverse-time gain is not determined by its Laplace closure");

    const Complex g = origin_green(x0, s, params);
    const Complex h = origin_green(0.0, s, params);
    const double D = params.diffusion();
    const double q = params.q();
    const double ax0 = std::abs(x0);
    const double coupling = 2.0 * params.sigma() * sink.alpha;

    // w = u exp((p-q)|x0|) obeys w' = (|x0| p' - 2 sigma alpha G(0,s|0)) w - G(0,s|0) e^{(p-q)|x0|}
    // where G(0,s|0) e^{(p-q)|x0|} = G(0,s|x0) e^{(p-q)|x0|} = 1/(2D(p-q)).
    const LinearCoefficients coefficients = [&](Complex z) {
        const Spectral sp = spectral(params, z);
        const Complex hz = inverse_gap(sp, z, params) / (2.0 * D);
        const Complex dp = 1.0 / (2.0 * D * sp.p);
        return std::pair<Complex, Complex>{ax0 * dp - coupling * hz, -hz};
    };
    const Complex s_end = backward_start(s, params, options);
    const Complex v_end = spectral(params, s_end).p - q;
    // int_{s_end}^inf G(0,s'|x0) ds' = e^{-v x0}/x0 + q E1(v x0), v = p - q
    const Complex w_end = 1.0 / ax0 + q * scaled_exp_integral_e1(v_end * ax0);
    const Complex w = integrate_linear_path(coefficients, s_end, s, w_end, options.tol, options.max_steps);

    const Spectral sp = spectral(params, s);
    const Complex gap = s / (D * (sp.p + sp.q));
    const Complex u = w * std::exp(-gap * ax0);
    const Complex p0 = g + coupling * h * u;
    return make_response(s, params, x0, p0, sink.alpha * u, g, h);
}

OriginResponse p0_expdecay(Complex s, const ModelParams& params, const ExpDecaySink& sink,
                           double x0, const SeriesOptions& options, SeriesState* state) {
    validate(SinkSpec{sink});
    if (options.fixed_depth && *options.fixed_depth < 0)
        throw ValidationError("series.fixed_depth", "must be >= 0");
    if (options.depth_max < 1)
        throw ValidationError("series.depth_max", "must be >= 1");
    const Complex g = origin_green(x0, s, params);
    const Complex h = origin_green(0.0, s, params);
    const int fixed = options.fixed_depth.value_or(-1);
    const Complex p0 = expdecay_sum(s, params, sink, x0, options, fixed, state);

    Complex shifted = 0.0;
    if (sink.beta != 0.0 && fixed != 0)
        shifted = expdecay_sum(s + sink.alpha_decay, params, sink, x0, options,
                               fixed > 0 ? fixed - 1 : -1, nullptr);
    return make_response(s, params, x0, p0, sink.beta * shifted, g, h);
}

OriginResponse solve_origin(Complex s, const ModelParams& params, const SinkSpec& sink, double x0,
                            const ClosureOptions& options) {
    return std::visit(
        overloaded{
            [&](const NoSink&) { return p0_none(s, params, x0); },
            [&](const ConstantSink& c) { return p0_constant(s, params, c, x0); },
            [&](const LinearSink& l) { return p0_linear(s, params, l, x0, options.ode); },
            [&](const InverseTimeSink& i) { return p0_inverse(s, params, i, x0, options.ode); },
            [&](const ExpDecaySink& e) { return p0_expdecay(s, params, e, x0, options.series); },
        },
        sink);
}

Complex assemble_field(double x, const OriginResponse& origin, const ModelParams& params, double x0) {
    if (origin.checksum != origin_checksum(origin.s, params, x0))
        throw ValidationError("origin", "OriginResponse was computed for different (s, params, x0)");
    if (x == 0.0)
        return origin.p0;
    const Spectral sp = spectral(params, origin.s);
    return exact_v_green(x, x0, origin.s, params) + origin.a_s * std::exp(-(sp.p + sp.q) * std::abs(x));
}

} // namespace sinklab
