#include "sinklab/special.hpp"

#include "sinklab/errors.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace sinklab {

Complex scaled_exp_integral_e1(Complex z) {
    if (z.imag() == 0.0 && z.real() <= 0.0)
        throw ValidationError("z", "E1 is singular on the non-positive real axis");
    constexpr int kMaxIter = 1000;
    const double eps = std::numeric_limits<double>::epsilon();
    if (std::abs(z) >= 1.0) {
        // Modified Lentz on E1(z) = e^{-z} / (z + 1 - 1/(z + 3 - 4/(z + 5 - ...)))
        const double tiny = 1e-300;
        Complex b = z + 1.0;
        Complex c = 1.0 / tiny;
        Complex d = 1.0 / b;
        Complex h = d;
        for (int i = 1; i <= kMaxIter; ++i) {
            const double an = -static_cast<double>(i) * i;
            b += 2.0;
            d = 1.0 / (an * d + b);
            c = b + an / c;
            const Complex del = c * d;
            h *= del;
            if (std::abs(del - 1.0) < eps)
                return h;
        }
        throw NumericalError("E1 continued fraction did not converge");
    }
    Complex sum = 0.0;
    Complex term = 1.0;
    for (int k = 1; k <= kMaxIter; ++k) {
        term *= -z / static_cast<double>(k);
        const Complex add = term / static_cast<double>(k);
        sum += add;
        if (std::abs(add) < eps * std::abs(sum))
            break;
    }
    return std::exp(z) * (-std::numbers::egamma - std::log(z) - sum);
}

} // namespace sinklab
