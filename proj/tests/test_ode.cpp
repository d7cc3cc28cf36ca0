#include "eqvidx/ode.hpp"

#include <doctest.h>

#include <cmath>

using namespace eqvidx;

namespace {

// y' = (y2, -y1): circular motion, exact solution (cos t, sin t)-rotations
struct Rotor {
    StateN<2> operator()(double, const StateN<2>& y) const { return StateN<2>(y[1], -y[0]); }
};

} // namespace

TEST_CASE("dopri5 integrates circular motion to tolerance") {
    Rotor f;
    Dopri5<2, Rotor>::Options opt;
    opt.rtol = 1e-12;
    opt.atol = 1e-14;
    Dopri5<2, Rotor> rk(f, 0.0, StateN<2>(1.0, 0.0), opt);
    DenseStep<2> st;
    while (rk.x() < 20.0) rk.step(st);
    const double tend = rk.x();
    CHECK(std::abs(rk.y()[0] - std::cos(tend)) < 1e-9);
    CHECK(std::abs(rk.y()[1] + std::sin(tend)) < 1e-9);
}

TEST_CASE("dense output is accurate inside a step") {
    Rotor f;
    Dopri5<2, Rotor>::Options opt;
    opt.rtol = 1e-10;
    opt.atol = 1e-12;
    opt.hmax = 0.2;
    Dopri5<2, Rotor> rk(f, 0.0, StateN<2>(1.0, 0.0), opt);
    DenseStep<2> st;
    for (int i = 0; i < 40; ++i) {
        rk.step(st);
        for (int k = 1; k < 8; ++k) {
            const double x = st.x0 + st.h * k / 8.0;
            const StateN<2> y = st.eval(x);
            CHECK(std::abs(y[0] - std::cos(x)) < 1e-9);
            CHECK(std::abs(y[1] + std::sin(x)) < 1e-9);
        }
    }
}

TEST_CASE("event bisection locates a zero crossing") {
    Rotor f;
    Dopri5<2, Rotor>::Options opt;
    opt.rtol = 1e-12;
    opt.hmax = 0.05;
    Dopri5<2, Rotor> rk(f, 0.0, StateN<2>(1.0, 0.0), opt);
    DenseStep<2> st;
    double located = -1;
    while (located < 0) {
        rk.step(st);
        const double a = st.eval(st.x0)[0], b = st.eval(st.x1())[0];
        if (a > 0 && b <= 0)
            located = bisect_event(st, [](const StateN<2>& y) { return y[0]; }, st.x0, st.x1());
    }
    CHECK(std::abs(located - kHalfPi) < 1e-11);
}

TEST_CASE("step-size underflow raises a singularity error") {
    // y' = 1/(1 - x) blows up at x = 1
    struct Blow {
        StateN<1> operator()(double x, const StateN<1>&) const {
            return StateN<1>(1.0 / (1.0 - x));
        }
    };
    Blow f;
    Dopri5<1, Blow>::Options opt;
    opt.rtol = 1e-10;
    Dopri5<1, Blow> rk(f, 0.0, StateN<1>(0.0), opt);
    DenseStep<1> st;
    CHECK_THROWS_AS(
        [&] {
            for (int i = 0; i < 100000000; ++i) rk.step(st);
        }(),
        SingularityError);
}
