#include "sinklab/ilt.hpp"

#include "sinklab/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <mutex>
#include <numbers>

namespace sinklab {

namespace {

constexpr int kTalbotScaleCap = 25;

void require_positive_time(double t) {
    if (!(t > 0.0) || !std::isfinite(t))
        throw ValidationError("t", "inversion time must be finite and > 0");
}

Complex checked_eval(const LaplaceFn& transform, Complex s) {
    const Complex value = transform(s);
    if (!std::isfinite(value.real()) || !std::isfinite(value.imag()))
        throw NumericalError("transform is not finite at s = (" + std::to_string(s.real()) + ", " +
                             std::to_string(s.imag()) + ")");
    return value;
}

std::vector<double> compute_stehfest(int terms) {
    const int half = terms / 2;
    auto factorial = [](int n) {
        long double f = 1.0L;
        for (int i = 2; i <= n; ++i)
            f *= static_cast<long double>(i);
        return f;
    };
    std::vector<double> v(static_cast<std::size_t>(terms));
    for (int k = 1; k <= terms; ++k) {
        long double sum = 0.0L;
        for (int j = (k + 1) / 2; j <= std::min(k, half); ++j) {
            sum += std::pow(static_cast<long double>(j), half) * factorial(2 * j) /
                   (factorial(half - j) * factorial(j) * factorial(j - 1) * factorial(k - j) *
                    factorial(2 * j - k));
        }
        const long double sign = ((k + half) % 2 == 0) ? 1.0L : -1.0L;
        v[static_cast<std::size_t>(k - 1)] = static_cast<double>(sign * sum);
    }
    return v;
}

} // namespace

std::string to_string(IltMethod method) {
    switch (method) {
    case IltMethod::talbot: return "talbot";
    case IltMethod::stehfest: return "stehfest";
    case IltMethod::both: return "both";
    }
    return "both";
}

IltMethod parse_ilt_method(const std::string& name) {
    if (name == "talbot")
        return IltMethod::talbot;
    if (name == "stehfest")
        return IltMethod::stehfest;
    if (name == "both")
        return IltMethod::both;
    throw ValidationError("ilt.method", "expected talbot, stehfest or both, got '" + name + "'");
}

void IltConfig::validate() const {
    if (talbot_nodes < 8)
        throw ValidationError("ilt.talbot_nodes", "need at least 8 Talbot nodes");
    if (stehfest_terms % 2 != 0 || stehfest_terms < 4 || stehfest_terms > 20)
        throw ValidationError("ilt.stehfest_terms", "must be even and within [4, 20]");
    if (!(agreement_tol > 0.0))
        throw ValidationError("ilt.agreement_tol", "must be > 0");
}

IltRule talbot_rule(double t, int nodes, double shift) {
    require_positive_time(t);
    if (nodes < 8)
        throw ValidationError("talbot_nodes", "need at least 8 Talbot nodes");
    const double r = 0.4 * std::min(nodes, kTalbotScaleCap) / t;
    const double scale = r / nodes;
    const Complex shift_factor = std::exp(shift * t);

    IltRule rule;
    rule.nodes.reserve(static_cast<std::size_t>(nodes));
    rule.weights.reserve(static_cast<std::size_t>(nodes));
    rule.nodes.emplace_back(r + shift, 0.0);
    rule.weights.push_back(0.5 * scale * std::exp(r * t) * shift_factor);
    for (int k = 1; k < nodes; ++k) {
        const double theta = k * std::numbers::pi / nodes;
        const double cot = std::cos(theta) / std::sin(theta);
        const Complex s(r * theta * cot, r * theta);
        const double slope = theta + (theta * cot - 1.0) * cot;
        rule.nodes.push_back(s + shift);
        rule.weights.push_back(scale * std::exp(t * s) * Complex(1.0, slope) * shift_factor);
    }
    return rule;
}

const std::vector<double>& stehfest_coefficients(int terms) {
    if (terms % 2 != 0 || terms < 4 || terms > 20)
        throw ValidationError("stehfest_terms", "must be even and within [4, 20]");
    static std::array<std::vector<double>, 21> cache;
    static std::array<std::once_flag, 21> once;
    const auto idx = static_cast<std::size_t>(terms);
    std::call_once(once[idx], [&] { cache[idx] = compute_stehfest(terms); });
    return cache[idx];
}

IltRule stehfest_rule(double t, int terms) {
    require_positive_time(t);
    const auto& v = stehfest_coefficients(terms);
    const double a = std::numbers::ln2 / t;
    IltRule rule;
    for (int k = 1; k <= terms; ++k) {
        rule.nodes.emplace_back(k * a, 0.0);
        rule.weights.emplace_back(a * v[static_cast<std::size_t>(k - 1)], 0.0);
    }
    return rule;
}

double apply_rule(const IltRule& rule, std::span<const Complex> values) {
    if (values.size() != rule.nodes.size())
        throw ValidationError("values", "size does not match the quadrature rule");
    double sum = 0.0;
    for (std::size_t k = 0; k < values.size(); ++k)
        sum += (rule.weights[k] * values[k]).real();
    return sum;
}

double talbot(const LaplaceFn& transform, double t, int nodes, double shift) {
    const IltRule rule = talbot_rule(t, nodes, shift);
    std::vector<Complex> values;
    values.reserve(rule.nodes.size());
    for (const Complex s : rule.nodes)
        values.push_back(checked_eval(transform, s));
    return apply_rule(rule, values);
}

StehfestResult stehfest_detailed(const LaplaceFn& transform, double t, int terms) {
    const IltRule rule = stehfest_rule(t, terms);
    double sum = 0.0;
    double magnitude = 0.0;
    for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
        const double term = rule.weights[k].real() * checked_eval(transform, rule.nodes[k]).real();
        sum += term;
        magnitude += std::abs(term);
    }
    const double eps = std::numeric_limits<double>::epsilon();
    const double cancellation =
        sum != 0.0 ? magnitude * eps / std::abs(sum) : std::numeric_limits<double>::infinity();
    return {sum, cancellation, cancellation > 1e-4};
}

double stehfest(const LaplaceFn& transform, double t, int terms) {
    return stehfest_detailed(transform, t, terms).value;
}

CheckedInversion invert_checked(const LaplaceFn& transform, double t, const IltConfig& config,
                                double talbot_shift) {
    config.validate();
    CheckedInversion out;
    if (config.method == IltMethod::stehfest) {
        const StehfestResult st = stehfest_detailed(transform, t, config.stehfest_terms);
        out.value = st.value;
        out.cancellation_warning = st.cancellation_warning;
        return out;
    }
    out.value = talbot(transform, t, config.talbot_nodes, talbot_shift);
    if (config.method == IltMethod::both) {
        const StehfestResult st = stehfest_detailed(transform, t, config.stehfest_terms);
        out.discrepancy = std::abs(out.value - st.value);
        out.flagged = out.discrepancy > config.agreement_tol;
        out.cancellation_warning = st.cancellation_warning;
    }
    return out;
}

} // namespace sinklab
