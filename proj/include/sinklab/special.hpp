#pragma once

#include "sinklab/model.hpp"

namespace sinklab {

// e^z E1(z) for complex z off the negative real axis. Continued fraction
// for |z| >= 1, power series otherwise.
Complex scaled_exp_integral_e1(Complex z);

} // namespace sinklab
