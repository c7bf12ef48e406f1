#include "doctest.h"

#include "sinklab/errors.hpp"
#include "sinklab/green.hpp"
#include "support.hpp"

#include <array>
#include <numbers>
#include <boost/math/quadrature/gauss_kronrod.hpp>

using namespace sinklab;
using testing::rel_diff;

namespace {

// Piecewise matching done numerically: modes e^{(p+q)x} on x < 0,
// e^{-(p+q)x} and e^{(p-q)x} on 0 < x < x0, e^{-(p+q)x} on x > x0, with
// continuity, the cusp [G'] + 2 omega G(0) = 0 and the jump [G'] = -1/D at x0.
// Only valid for x0 > 0.
Complex matched_green(double x, double x0, Complex s, const ModelParams& params)
{
    using Row = std::array<Complex, 5>;
    const double D = params.diffusion(), w = params.omega(), q = params.q();
    const Complex p = std::sqrt(q * q + s / D);
    const Complex k = p + q, m = p - q;
    const Complex ek = std::exp(-k * x0), em = std::exp(m * x0);
    // unknowns A, B, C, E
    std::array<Row, 4> M{{
        {1.0, -1.0, -1.0, 0.0, 0.0},
        {-k + 2.0 * w, -k, m, 0.0, 0.0},
        {0.0, ek, em, -ek, 0.0},
        {0.0, k * ek, -m * em, -k * ek, -1.0 / D},
    }};
    for (int c = 0; c < 4; ++c) {
        int piv = c;
        for (int r = c + 1; r < 4; ++r)
            if (std::abs(M[r][c]) > std::abs(M[piv][c])) piv = r;
        std::swap(M[c], M[piv]);
        for (int r = 0; r < 4; ++r) {
            if (r == c) continue;
            Complex f = M[r][c] / M[c][c];
            for (int j = c; j < 5; ++j) M[r][j] -= f * M[c][j];
        }
    }
    Complex A = M[0][4] / M[0][0], B = M[1][4] / M[1][1], C = M[2][4] / M[2][2],
            E = M[3][4] / M[3][3];
    if (x < 0.0) return A * std::exp(k * x);
    if (x < x0) return B * std::exp(-k * x) + C * std::exp(m * x);
    return E * std::exp(-k * x);
}

double real_integral(const std::function<double(double)>& f, double a, double b)
{
    return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 15, 1e-13);
}

} // namespace

TEST_SUITE("green") {

TEST_CASE("free drift green examples")
{
    const ModelParams free(1.0, 0.0);
    CHECK(std::abs(free_drift_green(0.3, 0.3, 1.0, free) - 0.5) < 1e-15);
    CHECK(std::abs(free_drift_green(2.5, 0.5, 1.0, free) - 0.5 * std::exp(-2.0)) < 1e-15);

    const ModelParams drift(1.3, 0.8);
    const double x0 = 0.4;
    auto re = [&](double x) { return free_drift_green(x, x0, 2.0, drift).real(); };
    double mass = real_integral(re, -INFINITY, x0) + real_integral(re, x0, INFINITY);
    CHECK(mass == doctest::Approx(0.5).epsilon(1e-10));
}

TEST_CASE("free drift green solves its ODE with the unit jump")
{
    const ModelParams params(0.9, 1.7);
    const double D = 0.9, c = 0.9 * 1.7, x0 = -0.2, h = 1e-4;
    const Complex s(1.5, 2.0);
    auto G = [&](double x) { return free_drift_green(x, x0, s, params); };
    for (double x : {-1.3, -0.6, 0.1, 0.9}) {
        Complex d2 = (G(x + h) - 2.0 * G(x) + G(x - h)) / (h * h);
        Complex d1 = (G(x + h) - G(x - h)) / (2.0 * h);
        CHECK(std::abs(-D * d2 - c * d1 + s * G(x)) < 1e-6);
    }
    Complex right = (G(x0 + h) - G(x0)) / h, left = (G(x0) - G(x0 - h)) / h;
    CHECK(std::abs((right - left) + 1.0 / D) < 1e-3);
}

TEST_CASE("exact green agrees with the numerically matched system")
{
    const ModelParams params(1.4, 0.9);
    for (Complex s : testing::random_laplace_points(40)) {
        for (double x0 : {0.3, 1.1}) {
            for (double x : {-2.0, -0.4, 0.0, 0.15, 0.3, 0.9, 1.1, 2.5}) {
                Complex ref = matched_green(x, x0, s, params);
                if (std::abs(ref) < 1e-250) continue;
                CHECK(rel_diff(exact_v_green(x, x0, s, params), ref) < 1e-10);
                // the mirror case comes from the same system
                CHECK(rel_diff(exact_v_green(-x, -x0, s, params), ref) < 1e-10);
            }
        }
    }
}

TEST_CASE("mirror symmetry is exact")
{
    const ModelParams params(0.6, 2.3);
    for (Complex s : testing::random_laplace_points(30, 11))
        for (double x : {-1.0, -0.2, 0.0, 0.4, 3.0})
            for (double x0 : {-0.7, 0.0, 0.5})
                CHECK(exact_v_green(x, x0, s, params) == exact_v_green(-x, -x0, s, params));
}

TEST_CASE("Schwarz reflection")
{
    const ModelParams params(1.0, 1.0);
    for (Complex s : testing::random_laplace_points(30, 13)) {
        Complex a = exact_v_green(0.3, 0.5, std::conj(s), params);
        Complex b = std::conj(exact_v_green(0.3, 0.5, s, params));
        CHECK(std::abs(a - b) <= 1e-14 * std::abs(b));
    }
}

TEST_CASE("omega = 0 reduces to free diffusion")
{
    const ModelParams params(2.0, 0.0);
    for (Complex s : testing::random_laplace_points(20, 3))
        for (double x : {-1.0, 0.0, 0.7})
            CHECK(rel_diff(exact_v_green(x, 0.4, s, params), free_drift_green(x, 0.4, s, params)) <
                  1e-13);
}

TEST_CASE("Laplace-domain mass is 1/s")
{
    const ModelParams params(1.0, 1.0);
    const double x0 = 0.5;
    auto re = [&](double x) { return exact_v_green(x, x0, 1.0, params).real(); };
    double mass = real_integral(re, -INFINITY, 0.0) + real_integral(re, 0.0, x0) +
                  real_integral(re, x0, INFINITY);
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("ODE residual, continuity and jumps")
{
    const ModelParams params(0.8, 1.5);
    const double D = 0.8, w = 1.5, x0 = 0.6, h = 1e-4;
    for (Complex s : {Complex(1.0, 0.0), Complex(0.5, 2.0), Complex(3.0, -1.0)}) {
        auto G = [&](double x) { return exact_v_green(x, x0, s, params); };
        for (double x : {-1.2, -0.3, 0.2, 0.45, 0.9, 2.0}) {
            double sg = x > 0.0 ? 1.0 : -1.0;
            Complex d2 = (G(x + h) - 2.0 * G(x) + G(x - h)) / (h * h);
            Complex d1 = (G(x + h) - G(x - h)) / (2.0 * h);
            CHECK(std::abs(D * d2 + w * D * sg * d1 - s * G(x)) < 1e-6);
        }
        const double e = 1e-7;
        CHECK(std::abs(G(e) - G(-e)) < 1e-6);
        CHECK(std::abs(G(x0 + e) - G(x0 - e)) < 1e-6);
        auto slope = [&](double a, double b) { return (G(b) - G(a)) / (b - a); };
        Complex cusp = slope(1e-6, 2e-6) - slope(-2e-6, -1e-6) + 2.0 * w * G(0.0);
        CHECK(std::abs(cusp) < 1e-4);
        Complex jump = slope(x0 + 1e-6, x0 + 2e-6) - slope(x0 - 2e-6, x0 - 1e-6);
        CHECK(std::abs(jump + 1.0 / D) < 1e-4);
    }
}

TEST_CASE("final value is the Boltzmann profile")
{
    const ModelParams params(1.0, 2.0);
    const double s = 1e-6;
    for (double x : {-1.0, 0.0, 0.3, 1.5})
        CHECK(std::abs(s * exact_v_green(x, 0.5, s, params).real() - std::exp(-2.0 * std::abs(x))) <
              1e-4);
}

TEST_CASE("origin green is the x = 0 slice")
{
    const ModelParams params(1.2, 0.7);
    for (Complex s : testing::random_laplace_points(20, 5))
        for (double x0 : {-0.8, 0.0, 0.25})
            CHECK(rel_diff(origin_green(x0, s, params), exact_v_green(0.0, x0, s, params)) < 1e-13);
}

TEST_CASE("bad Laplace points are rejected")
{
    const ModelParams params(1.0, 1.0);
    CHECK_THROWS_AS(exact_v_green(0.0, 0.5, 0.0, params), ValidationError);
    CHECK_THROWS_AS(exact_v_green(0.0, 0.5, -0.25, params), ValidationError);
    CHECK_THROWS_AS(exact_v_green(0.0, 0.5, Complex(INFINITY, 0.0), params), ValidationError);
    CHECK_THROWS_AS(free_drift_green(0.0, 0.5, Complex(NAN, 1.0), params), ValidationError);
}

TEST_CASE("literal green: omega = 0 matches, poles and asymptote")
{
    const ModelParams free(1.0, 0.0);
    for (Complex s : testing::random_laplace_points(10, 17))
        CHECK(rel_diff(literal_green(0.3, 1.0, s, free), exact_v_green(0.3, 1.0, s, free)) < 1e-13);

    const ModelParams v(1.0, 1.0);
    Complex lit = literal_green(0.3, 1.0, 1.0, v);
    CHECK(std::isfinite(lit.real()));
    CHECK(std::abs(lit - exact_v_green(0.3, 1.0, 1.0, v)) > 1e-3);

    // p + q - omega = p - q vanishes only at s = 0
    CHECK_THROWS_AS(literal_green(0.3, 1.0, 1e-30, v), LiteralPoleError);

    // for x past the source the |x - x0| mode dominates at large s
    double far = rel_diff(literal_green(1.2, 1.0, 1e3, v), free_drift_green(1.2, 1.0, 1e3, v));
    double near = rel_diff(literal_green(1.2, 1.0, 10.0, v), free_drift_green(1.2, 1.0, 10.0, v));
    CHECK(far < 2e-2);
    CHECK(far < near);
}

TEST_CASE("origin kernel is the inverse of G(0,s|0)")
{
    const ModelParams params(1.0, 1.0);
    // t = v^2 removes the 1/sqrt(t) singularity
    auto re = [&](double v) {
        return v == 0.0 ? 1.0 / std::sqrt(std::numbers::pi)
                        : 2.0 * v * origin_kernel(v * v, params) * std::exp(-2.0 * v * v);
    };
    double lap = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(re, 0.0, INFINITY, 20,
                                                                               1e-12);
    CHECK(lap == doctest::Approx(origin_green(0.0, 2.0, params).real()).epsilon(1e-8));
    CHECK_THROWS_AS(origin_kernel(0.0, params), ValidationError);
}

}
