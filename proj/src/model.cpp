#include "sinklab/model.hpp"

#include "sinklab/errors.hpp"

#include <cmath>
#include <limits>
#include <type_traits>

namespace sinklab {

namespace {

void require_finite(const char* field, double value) {
    if (!std::isfinite(value))
        throw ValidationError(field, "must be finite");
}

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

} // namespace

ModelParams::ModelParams(double diffusion, double omega, SinkSign sign)
    : diffusion_(diffusion), omega_(omega), sign_(sign) {
    require_finite("D", diffusion);
    require_finite("omega", omega);
    if (!(diffusion > 0.0))
        throw ValidationError("D", "diffusion coefficient must be > 0");
    if (omega < 0.0)
        throw ValidationError("omega", "potential slope must be >= 0");
    if (sign != SinkSign::absorbing && sign != SinkSign::gain)
        throw ValidationError("sigma", "must be +1 or -1");
}

double ModelParams::relaxation_time() const noexcept {
    if (omega_ == 0.0)
        return std::numeric_limits<double>::infinity();
    return 1.0 / (diffusion_ * q() * q());
}

SinkSign parse_sink_sign(int sigma) {
    if (sigma == -1)
        return SinkSign::absorbing;
    if (sigma == 1)
        return SinkSign::gain;
    throw ValidationError("sigma", "must be +1 or -1");
}

void validate(const SinkSpec& sink) {
    std::visit(overloaded{
                   [](const NoSink&) {},
                   [](const ConstantSink& c) {
                       require_finite("alpha0", c.alpha0);
                       if (c.alpha0 < 0.0)
                           throw ValidationError("alpha0", "constant sink strength must be >= 0");
                   },
                   [](const LinearSink& l) { require_finite("alpha1", l.alpha1); },
                   [](const InverseTimeSink& i) {
                       require_finite("alpha", i.alpha);
                       require_finite("t_on", i.t_on);
                       if (i.alpha < 0.0)
                           throw ValidationError("alpha", "inverse-time sink strength must be >= 0");
                       if (!(i.t_on > 0.0))
                           throw ValidationError("t_on", "activation time must be > 0");
                   },
                   [](const ExpDecaySink& e) {
                       require_finite("beta", e.beta);
                       require_finite("alpha_decay", e.alpha_decay);
                       if (e.beta < 0.0)
                           throw ValidationError("beta", "exponential sink amplitude must be >= 0");
                       if (e.alpha_decay == 0.0)
                           throw ValidationError("alpha_decay",
                                                 "zero decay rate is the constant law; use law = constant");
                       if (e.alpha_decay < 0.0)
                           throw ValidationError("alpha_decay", "decay rate must be > 0");
                   },
               },
               sink);
}

std::string law_name(const SinkSpec& sink) {
    return std::visit(overloaded{
                          [](const NoSink&) { return std::string("none"); },
                          [](const ConstantSink&) { return std::string("constant"); },
                          [](const LinearSink&) { return std::string("linear"); },
                          [](const InverseTimeSink&) { return std::string("inverse"); },
                          [](const ExpDecaySink&) { return std::string("expdecay"); },
                      },
                      sink);
}

double sink_strength(const SinkSpec& sink, double t) {
    return std::visit(overloaded{
                          [](const NoSink&) { return 0.0; },
                          [](const ConstantSink& c) { return c.alpha0; },
                          [t](const LinearSink& l) { return l.alpha1 * t; },
                          [t](const InverseTimeSink& i) { return t >= i.t_on ? i.alpha / t : 0.0; },
                          [t](const ExpDecaySink& e) { return e.beta * std::exp(-e.alpha_decay * t); },
                      },
                      sink);
}

double default_activation_time(const ModelParams& params) {
    if (params.omega() == 0.0)
        return 1e-2;
    return 1e-2 / (params.diffusion() * params.omega() * params.omega());
}

bool is_inert(const SinkSpec& sink) {
    return std::visit(overloaded{
                          [](const NoSink&) { return true; },
                          [](const ConstantSink& c) { return c.alpha0 == 0.0; },
                          [](const LinearSink& l) { return l.alpha1 == 0.0; },
                          [](const InverseTimeSink& i) { return i.alpha == 0.0; },
                          [](const ExpDecaySink& e) { return e.beta == 0.0; },
                      },
                      sink);
}

Spectral spectral(const ModelParams& params, Complex s) {
    if (!std::isfinite(s.real()) || !std::isfinite(s.imag()))
        throw ValidationError("s", "Laplace variable must be finite");
    const double q = params.q();
    if (s == Complex(0.0, 0.0))
        return {q, Complex(q, 0.0)};
    return {q, std::sqrt(Complex(q * q, 0.0) + s / params.diffusion())};
}

void validate_source(double x0) {
    require_finite("x0", x0);
}

} // namespace sinklab
