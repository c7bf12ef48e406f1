#pragma once

#include <complex>
#include <string>
#include <variant>

namespace sinklab {

using Complex = std::complex<double>;

// Sign of the sink coupling 2*sigma*k(t)*delta(x)*P. Absorption is the
// physical case; `gain` keeps the literal "+2k(t)delta(x)P" coupling.
enum class SinkSign : int { absorbing = -1, gain = +1 };

// Diffusion coefficient D, slope omega of U(x) = omega*|x| and sink sign.
class ModelParams {
public:
    ModelParams(double diffusion, double omega, SinkSign sign = SinkSign::absorbing);

    double diffusion() const noexcept { return diffusion_; }
    double omega() const noexcept { return omega_; }
    // q = omega / 2
    double q() const noexcept { return 0.5 * omega_; }
    SinkSign sign() const noexcept { return sign_; }
    double sigma() const noexcept { return static_cast<double>(static_cast<int>(sign_)); }

    // Relaxation time 1/(D q^2); infinite when omega = 0.
    double relaxation_time() const noexcept;

    bool operator==(const ModelParams&) const = default;

private:
    double diffusion_;
    double omega_;
    SinkSign sign_;
};

SinkSign parse_sink_sign(int sigma);

// --- time-dependent sink laws -------------------------------------------

struct NoSink {
    bool operator==(const NoSink&) const = default;
};

// k(t) = alpha0
struct ConstantSink {
    double alpha0 = 0.0;
    bool operator==(const ConstantSink&) const = default;
};

// k(t) = alpha1 * t, either sign.
struct LinearSink {
    double alpha1 = 0.0;
    bool operator==(const LinearSink&) const = default;
};

// k(t) = alpha / t for t >= t_on, zero before.
struct InverseTimeSink {
    double alpha = 0.0;
    double t_on = 1e-2;
    bool operator==(const InverseTimeSink&) const = default;
};

// k(t) = beta * exp(-alpha_decay * t), alpha_decay > 0.
struct ExpDecaySink {
    double beta = 0.0;
    double alpha_decay = 1.0;
    bool operator==(const ExpDecaySink&) const = default;
};

using SinkSpec = std::variant<NoSink, ConstantSink, LinearSink, InverseTimeSink, ExpDecaySink>;

void validate(const SinkSpec& sink);

// Short law identifier: none, constant, linear, inverse, expdecay.
std::string law_name(const SinkSpec& sink);

// k(t) for the selected law; zero for NoSink and before t_on.
double sink_strength(const SinkSpec& sink, double t);

// Default activation time for the inverse-time law: 1e-2/(D omega^2),
// or 1e-2 when omega = 0.
double default_activation_time(const ModelParams& params);

// True when the law has zero strength and reduces to NoSink.
bool is_inert(const SinkSpec& sink);

// --- spectral variables ---------------------------------------------------

struct Spectral {
    double q;
    Complex p; // principal sqrt(q^2 + s/D)
};

Spectral spectral(const ModelParams& params, Complex s);

void validate_source(double x0);

} // namespace sinklab
