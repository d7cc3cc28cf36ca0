#include "eqvidx/orbit_models.hpp"

#include <doctest.h>

#include <cmath>

using namespace eqvidx;

TEST_CASE("orbit volume matches the radius products") {
    const OrbitSpace sph = OrbitSpace::sphere4();
    const OrbitSpace bal = OrbitSpace::ball4();
    CHECK(orbit_volume(sph, {0.0, kPi / 4}) == doctest::Approx(2 * kPi * kPi).epsilon(1e-14));
    CHECK(orbit_volume(sph, {0.0, 0.0}) == 0.0);
    CHECK(orbit_volume(bal, {2.0, 3.0}) == doctest::Approx(kFourPiSq * 6.0).epsilon(1e-14));
    CHECK_THROWS_AS(orbit_volume(bal, {-0.5, 1.0}), std::domain_error);
}

TEST_CASE("sphere radii satisfy r1^2 + r2^2 + sin^2 s = 1 on a grid") {
    const OrbitSpace sph = OrbitSpace::sphere4();
    for (int i = 0; i <= 40; ++i)
        for (int j = 0; j <= 40; ++j) {
            const QuotientPoint p{-kHalfPi + kPi * i / 40.0, kHalfPi * j / 40.0};
            const double r1 = radius1(sph, p), r2 = radius2(sph, p);
            CHECK(r1 * r1 + r2 * r2 + std::sin(p.u1) * std::sin(p.u1) ==
                  doctest::Approx(1.0).epsilon(1e-15));
            CHECK(r1 >= 0.0);
            CHECK(r2 >= 0.0);
        }
}

TEST_CASE("orbit volume vanishes exactly on edges and poles") {
    const OrbitSpace sph = OrbitSpace::sphere4();
    for (int i = 0; i <= 20; ++i) {
        const double s = -kHalfPi + kPi * i / 20.0;
        CHECK(orbit_volume(sph, {s, 0.0}) == 0.0);
        CHECK(radius1(sph, {s, kHalfPi}) == doctest::Approx(0.0).epsilon(1e-16));
        const double a = kHalfPi * i / 20.0;
        CHECK(std::abs(orbit_volume(sph, {kHalfPi, a})) < 1e-15);
    }
    // interior is strictly positive
    for (int i = 1; i < 10; ++i)
        for (int j = 1; j < 10; ++j)
            CHECK(orbit_volume(sph, {-kHalfPi + kPi * i / 10.0, kHalfPi * j / 10.0}) > 0.0);
}

TEST_CASE("theta: range, midline zero, edge values, undefined points") {
    const OrbitSpace sph = OrbitSpace::sphere4();
    const OrbitSpace bal = OrbitSpace::ball4();
    for (double s : {-1.2, -0.3, 0.0, 0.7})
        CHECK(theta(sph, {s, kPi / 4}) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(theta(sph, {0.3, kHalfPi}) == doctest::Approx(kPi / 4));
    CHECK(theta(sph, {0.3, 0.0}) == doctest::Approx(-kPi / 4));
    CHECK(theta(bal, {1.0, 1.0}) == doctest::Approx(0.0));
    CHECK_THROWS_AS(theta(sph, {kHalfPi, 0.3}), std::domain_error);
    CHECK_THROWS_AS(theta(bal, {0.0, 0.0}), std::domain_error);
    for (int i = 0; i <= 30; ++i) {
        const double th = theta(sph, {0.2, kHalfPi * i / 30.0});
        CHECK(th >= -kPi / 4 - 1e-15);
        CHECK(th <= kPi / 4 + 1e-15);
    }
}

TEST_CASE("theta is constant along rays in the ball") {
    const OrbitSpace bal = OrbitSpace::ball4();
    for (double r1 : {0.3, 1.0, 2.5})
        for (double r2 : {0.1, 0.9, 4.0})
            for (double lam : {0.5, 2.0, 17.0})
                CHECK(theta(bal, {lam * r1, lam * r2}) ==
                      doctest::Approx(theta(bal, {r1, r2})).epsilon(1e-13));
}

TEST_CASE("theta increases with a (finite differences)") {
    const OrbitSpace sph = OrbitSpace::sphere4();
    const double h = 1e-6;
    for (double s : {-0.9, 0.0, 1.1})
        for (double a : {0.2, 0.8, 1.3}) {
            const double d = (theta(sph, {s, a + h}) - theta(sph, {s, a - h})) / (2 * h);
            CHECK(d > 0.0);
        }
}

TEST_CASE("metric length") {
    const OrbitSpace sph = OrbitSpace::sphere4();
    const OrbitSpace bal = OrbitSpace::ball4();
    CHECK(metric_len(sph, {0.0, 0.4}, Vec2(0, 1)) == doctest::Approx(1.0));
    CHECK(metric_len(sph, {kPi / 3, 0.4}, Vec2(0, 1)) == doctest::Approx(0.5));
    CHECK(metric_len(bal, {5.0, 2.0}, Vec2(3, 4)) == doctest::Approx(5.0));
}
