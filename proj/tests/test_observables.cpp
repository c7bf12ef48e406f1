#include "doctest.h"

#include "sinklab/errors.hpp"
#include "sinklab/observables.hpp"
#include "sinklab/oracle.hpp"
#include "sinklab/volterra.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

using namespace sinklab;

TEST_SUITE("observables") {

TEST_CASE("survival without a sink")
{
    const ModelParams params(1.0, 1.0);
    for (double t : {0.01, 0.5, 3.0, 20.0})
        CHECK(std::abs(survival_from_laplace(params, NoSink{}, 0.5, t) - 1.0) < 1e-6);
}

TEST_CASE("decaying mode integral")
{
    CHECK(std::abs(decaying_mode_integral(spectral(ModelParams(1.0, 2.0), 3.0)) - 2.0 / 3.0) < 1e-15);
}

TEST_CASE("survival with a constant sink against the PDE oracle")
{
    const ModelParams params(1.0, 0.0);
    const ConstantSink sink{1.0};
    const double S = survival_from_laplace(params, sink, 0.0, 1.0);
    const auto cn = cn_solve(params, SinkSpec{sink}, 0.0, make_grid(params, 0.0, 1.0, 0.005, 1e-3));
    CHECK(std::abs(S - cn.survival.back()) < 1e-2);
}

TEST_CASE("survival curve invariants on the analytic route")
{
    const ModelParams params(1.0, 1.0);
    for (const SinkSpec& sink : std::vector<SinkSpec>{ConstantSink{0.5}, LinearSink{0.5},
                                                      InverseTimeSink{0.3, 0.01}, ExpDecaySink{0.5, 1.0}}) {
        AnalyticSolution a(params, sink, 0.5);
        double prev = 1.0;
        for (double t : {0.05, 0.1, 0.2, 0.5, 1.0, 2.0, 5.0, 10.0}) {
            const double S = a.survival(t).value;
            INFO(law_name(sink), " t=", t);
            CHECK(S >= 0.0);
            CHECK(S <= 1.0 + 1e-6);
            CHECK(S <= prev + 1e-6);
            prev = S;
        }
    }
}

TEST_CASE("sink flux")
{
    std::vector<double> t = {0.0, 0.5, 1.0}, p = {2.0, 1.0, 0.5};
    for (double J : sink_flux(NoSink{}, t, p)) CHECK(J == 0.0);
    auto J = sink_flux(ConstantSink{0.3}, t, p);
    CHECK(J[1] == doctest::Approx(0.6));
    CHECK_THROWS_AS(sink_flux(ConstantSink{0.3}, t, std::vector<double>{1.0}), ValidationError);

    // J = 2 alpha0 P(0,t) on the CN route, and dS/dt = -J
    const ModelParams params(1.0, 1.0);
    const ConstantSink sink{0.5};
    const auto cn = cn_solve(params, SinkSpec{sink}, 0.5, make_grid(params, 0.5, 3.0, 0.01, 1e-3));
    const auto flux = sink_flux(sink, cn.t, cn.origin);
    // the oracle's own flux averages P over the hat, which differs from the
    // node value by O(h) at the cusp
    const double jmax = *std::max_element(cn.flux.begin(), cn.flux.end());
    for (std::size_t n = 0; n < flux.size(); n += 100) CHECK(std::abs(flux[n] - cn.flux[n]) < 1e-2 * jmax);
    CHECK(flux_identity_residual(cn.t, cn.survival, cn.flux, -1.0) < 1e-3);

    const ExpDecaySink decay{0.5, 1.0};
    const auto ce = cn_solve(params, SinkSpec{decay}, 0.5, make_grid(params, 0.5, 10.0, 0.02, 2e-3));
    // J(t) <= 2 beta e^{-alpha t} max P(0, .)
    const double pmax = *std::max_element(ce.origin.begin() + 1, ce.origin.end());
    for (std::size_t n = 1000; n < ce.flux.size(); n += 500)
        CHECK(ce.flux[n] <= 2.0 * 0.5 * std::exp(-ce.t[n]) * pmax);
}

TEST_CASE("effective rate")
{
    const ModelParams params(1.0, 1.0);
    const auto cn = cn_solve(params, SinkSpec{ConstantSink{0.5}}, 0.5, make_grid(params, 0.5, 3.0, 0.02, 2e-3));
    const auto k = effective_rate(cn.flux, cn.survival);
    for (std::size_t n = 0; n < k.size(); ++n) {
        if (cn.survival[n] <= 1e-6) continue;
        CHECK(std::isfinite(k[n]));
        CHECK(k[n] >= 0.0);
    }
    auto tiny = effective_rate(std::vector<double>{1.0}, std::vector<double>{1e-7});
    CHECK(std::isnan(tiny[0]));
}

TEST_CASE("equilibrium profile")
{
    const ModelParams params(1.0, 2.0);
    CHECK(equilibrium_profile(params, 0.0) == 1.0);
    CHECK(equilibrium_profile(params, 1.0) == doctest::Approx(0.1353352832366127).epsilon(1e-14));
    auto f = [&](double x) { return equilibrium_profile(params, x); };
    double total = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, -INFINITY, INFINITY, 10, 1e-12);
    CHECK(total == doctest::Approx(1.0).epsilon(1e-10));
    CHECK_THROWS_AS(equilibrium_profile(ModelParams(1.0, 0.0), 0.0), ValidationError);
}

TEST_CASE("analytic equilibrium at late times")
{
    const ModelParams params(1.0, 2.0);
    AnalyticSolution a(params, NoSink{}, 0.5);
    // t >= 5 / (D q^2)
    std::vector<double> xs = {-2.0, -0.5, 0.0, 0.3, 1.0, 3.0};
    const auto f = a.field(5.0, xs);
    for (std::size_t i = 0; i < xs.size(); ++i)
        CHECK(std::abs(f[i].value - equilibrium_profile(params, xs[i])) < 1e-3);
}

TEST_CASE("analytic solution bookkeeping")
{
    const ModelParams params(1.0, 1.0);
    AnalyticSolution a(params, ConstantSink{0.5}, 0.5);
    a.origin(1.0);
    CHECK(a.max_closure_residual() < 1e-8);
    CHECK(a.talbot_shift() == 0.0);
    const ModelParams gain(1.0, 0.0, SinkSign::gain);
    AnalyticSolution g(gain, ConstantSink{0.5}, 0.0);
    CHECK(g.talbot_shift() > 0.0);
    // growth e^{alpha0^2 t / D} from the bound state; analytic via the shifted contour
    const double v = g.origin(1.0).value;
    const auto grid = uniform_grid(1.0, 2000);
    const auto vt = volterra_p0(gain, SinkSpec{ConstantSink{0.5}}, 0.0, grid);
    CHECK(std::abs(v - vt.p0.back()) < 1e-3);
}

TEST_CASE("source tags")
{
    CHECK(to_string(CurveSource::crank_nicolson) == "cn");
    CHECK(to_string(CurveSource::monte_carlo) == "mc");
}

}
