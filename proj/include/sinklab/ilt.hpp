#pragma once

#include "sinklab/model.hpp"

#include <functional>
#include <span>
#include <string>
#include <vector>

namespace sinklab {

using LaplaceFn = std::function<Complex(Complex)>;

enum class IltMethod { talbot, stehfest, both };

std::string to_string(IltMethod method);
IltMethod parse_ilt_method(const std::string& name);

struct IltConfig {
    IltMethod method = IltMethod::both;
    int talbot_nodes = 32;
    int stehfest_terms = 14;
    double agreement_tol = 1e-6;

    void validate() const;
    bool operator==(const IltConfig&) const = default;
};

// Quadrature rule f(t) ~ Re sum_k weights[k] * F(nodes[k]).
struct IltRule {
    std::vector<Complex> nodes;
    std::vector<Complex> weights;
};

// Fixed-Talbot contour s(theta) = r theta (cot theta + i), theta_k = k pi / M,
// upper half only (F(conj s) = conj F(s) is assumed). The contour scale
// r t = 0.4 min(M, 25) stops growing past M = 25 so that the e^{rt}
// amplification of roundoff stays near 1e-12; beyond that, extra nodes only
// refine the quadrature. `shift` moves the contour right for transforms
// with singularities in Re s > 0.
IltRule talbot_rule(double t, int nodes, double shift = 0.0);

// Gaver-Stehfest: nodes k ln2 / t, k = 1..N, real weights.
IltRule stehfest_rule(double t, int terms);

// Combine precomputed F(nodes) with the rule weights.
double apply_rule(const IltRule& rule, std::span<const Complex> values);

double talbot(const LaplaceFn& transform, double t, int nodes = 32, double shift = 0.0);

struct StehfestResult {
    double value;
    // sum |V_k F_k| * eps / |sum V_k F_k|
    double cancellation;
    bool cancellation_warning; // cancellation > 1e-4
};

StehfestResult stehfest_detailed(const LaplaceFn& transform, double t, int terms = 14);
double stehfest(const LaplaceFn& transform, double t, int terms = 14);

// Stehfest coefficients V_1..V_N.
const std::vector<double>& stehfest_coefficients(int terms);

struct CheckedInversion {
    double value = 0.0;       // Talbot value unless method == stehfest
    double discrepancy = 0.0; // |talbot - stehfest| when both ran
    bool flagged = false;     // discrepancy > agreement_tol
    bool cancellation_warning = false;
};

CheckedInversion invert_checked(const LaplaceFn& transform, double t, const IltConfig& config,
                                double talbot_shift = 0.0);

} // namespace sinklab
