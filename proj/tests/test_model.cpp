#include "doctest.h"

#include "sinklab/errors.hpp"
#include "sinklab/model.hpp"
#include "support.hpp"

using namespace sinklab;

TEST_SUITE("model") {

TEST_CASE("spectral map examples")
{
    auto a = spectral(ModelParams(1.0, 2.0), 3.0);
    CHECK(a.q == 1.0);
    CHECK(std::abs(a.p - Complex(2.0)) < 1e-15);

    auto b = spectral(ModelParams(4.0, 0.0), 4.0);
    CHECK(b.q == 0.0);
    CHECK(std::abs(b.p - Complex(1.0)) < 1e-15);

    auto c = spectral(ModelParams(1.0, 2.0), 0.0);
    CHECK(c.p == Complex(1.0));
}

TEST_CASE("q is half of omega")
{
    for (double w : {0.0, 0.3, 1.0, 7.25}) CHECK(ModelParams(1.0, w).q() == w / 2.0);
}

TEST_CASE("branch invariants on random points")
{
    const ModelParams params(0.7, 1.3);
    for (Complex s : testing::random_laplace_points(200)) {
        auto sp = spectral(params, s);
        CHECK(sp.p.real() > 0.0);
        CHECK(std::norm(sp.p) >= sp.q * sp.q);
        CHECK(std::abs(sp.p * sp.p - sp.q * sp.q - s / 0.7) < 1e-12 * std::abs(sp.p * sp.p));
        auto cj = spectral(params, std::conj(s));
        CHECK(cj.p == std::conj(sp.p));
    }
}

TEST_CASE("parameter validation")
{
    CHECK_THROWS_AS(ModelParams(0.0, 1.0), ValidationError);
    CHECK_THROWS_AS(ModelParams(-1.0, 1.0), ValidationError);
    CHECK_THROWS_AS(ModelParams(1.0, -0.1), ValidationError);
    CHECK_THROWS_AS(ModelParams(NAN, 1.0), ValidationError);
    CHECK_THROWS_AS(parse_sink_sign(0), ValidationError);
    CHECK(parse_sink_sign(1) == SinkSign::gain);
    CHECK_THROWS_AS(spectral(ModelParams(1.0, 1.0), Complex(NAN, 0.0)), ValidationError);
    CHECK_THROWS_AS(validate_source(INFINITY), ValidationError);
}

TEST_CASE("sink strength per law")
{
    CHECK(sink_strength(ConstantSink{0.7}, 5.0) == 0.7);
    CHECK(sink_strength(NoSink{}, 3.0) == 0.0);
    CHECK(sink_strength(LinearSink{0.5}, 4.0) == 2.0);
    CHECK(sink_strength(InverseTimeSink{1.0, 0.1}, 0.05) == 0.0);
    CHECK(sink_strength(InverseTimeSink{1.0, 0.1}, 0.2) == doctest::Approx(5.0));
    CHECK(sink_strength(ExpDecaySink{2.0, 1.0}, 1.0) == doctest::Approx(2.0 * std::exp(-1.0)));
}

TEST_CASE("sink validation")
{
    CHECK_THROWS_AS(validate(ExpDecaySink{2.0, 0.0}), ValidationError);
    CHECK_THROWS_AS(validate(ConstantSink{-1.0}), ValidationError);
    CHECK_THROWS_AS(validate(InverseTimeSink{1.0, 0.0}), ValidationError);
    CHECK_THROWS_AS(validate(ExpDecaySink{-1.0, 1.0}), ValidationError);
    CHECK_NOTHROW(validate(LinearSink{-0.5}));
    CHECK(is_inert(ConstantSink{0.0}));
    CHECK(is_inert(NoSink{}));
    CHECK_FALSE(is_inert(LinearSink{0.1}));
}

TEST_CASE("inverse law is continuous after activation")
{
    InverseTimeSink k{0.3, 0.01};
    for (double t = 0.011; t < 5.0; t *= 1.5) {
        double a = sink_strength(k, t), b = sink_strength(k, t * (1.0 + 1e-9));
        CHECK(std::abs(a - b) < 1e-8 * a);
    }
}

TEST_CASE("default activation time")
{
    CHECK(default_activation_time(ModelParams(1.0, 0.0)) == doctest::Approx(1e-2));
    CHECK(default_activation_time(ModelParams(2.0, 1.0)) == doctest::Approx(1e-2 / 2.0));
}

}
