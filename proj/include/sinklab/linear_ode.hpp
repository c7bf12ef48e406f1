#pragma once

#include "sinklab/model.hpp"

#include <functional>
#include <utility>

namespace sinklab {

// Coefficients (A, B) of y' = A(s) y + B(s).
using LinearCoefficients = std::function<std::pair<Complex, Complex>(Complex)>;

struct LinearOdeStats {
    int accepted = 0;
    int rejected = 0;
};

// Integrates y' = A(s) y + B(s) along the straight path from `from` to `to`
// in the complex s plane, starting at y(from) = y_start.
//
// TR-BDF2 (L-stable) with step-doubling error control, so stiff decaying
// modes are damped without resolving them. Relative tolerance `tol` per step.
// Throws StepUnderflowError when the step collapses and NumericalError on
// non-finite coefficients or when max_steps is exhausted.
Complex integrate_linear_path(const LinearCoefficients& coefficients, Complex from, Complex to,
                              Complex y_start, double tol, int max_steps,
                              LinearOdeStats* stats = nullptr);

} // namespace sinklab
