#include "eqvidx/jacobi_reduce.hpp"

#include "eqvidx/index_reports.hpp"

#include <doctest.h>

#include <cmath>

using namespace eqvidx;

namespace {

Config test_cfg() {
    Config c;
    c.no_cache = true;
    return c;
}

const ProfileCurve& hsiang_cached(int m) {
    static Config cfg = test_cfg();
    static CurveStore store(cfg);
    return store.hsiang(m);
}

} // namespace

TEST_CASE("equator reduction: q = 3, V = (2pi)^2 cos t sin t on [0, pi/2]") {
    const ProfileCurve& h1 = hsiang_cached(1);
    const ReducedOperator op = reduce_jacobi(h1);
    CHECK(op.t_hi == doctest::Approx(kHalfPi).epsilon(1e-9));
    CHECK(op.left.kind == BcKind::Natural);
    CHECK(op.right.kind == BcKind::Natural);
    for (int i = 0; i <= 20; ++i) {
        const double t = 0.03 + (kHalfPi - 0.06) * i / 20.0;
        CHECK(op.q(t) == doctest::Approx(3.0).epsilon(1e-9));
        CHECK(op.V(t) ==
              doctest::Approx(kFourPiSq * std::cos(t) * std::sin(t)).epsilon(1e-9));
    }
    CHECK((op.q_samples.array() - 3.0).abs().maxCoeff() < 1e-6);
}

TEST_CASE("second fundamental form on the football midline gives (0,-1,+1)") {
    const OrbitSpace sph = OrbitSpace::sphere4();
    StopSpec stop;
    stop.max_length = 0.6;
    stop.stop_at_edges = false;
    ProfileInit fb;
    fb.p = {0.3, kPi / 4};
    fb.tau = Vec2(-1.0, 0.0); // toward decreasing s, crossing s=0
    const ProfileCurve c = integrate_profile(sph, fb, stop);
    const SecondFundamental sf = second_fundamental(c, 0.3); // s = 0 there
    CHECK(sf.kappa == doctest::Approx(0.0).epsilon(1e-10));
    CHECK(sf.h1 == doctest::Approx(-1.0).epsilon(1e-10));
    CHECK(sf.h2 == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(sf.a_norm2() == doctest::Approx(2.0).epsilon(1e-10));
}

TEST_CASE("H2 carries constant |A|^2 = 3 (Clifford product)") {
    const ProfileCurve& h2 = hsiang_cached(2);
    const ReducedOperator op = reduce_jacobi(h2);
    CHECK(op.q_samples.minCoeff() == doctest::Approx(6.0).epsilon(1e-8));
    CHECK(op.q_samples.maxCoeff() == doctest::Approx(6.0).epsilon(1e-8));
}

TEST_CASE("equator is totally geodesic: vanishing second fundamental form") {
    const ProfileCurve& h1 = hsiang_cached(1);
    for (double f : {0.2, 0.5, 0.8}) {
        const SecondFundamental sf = second_fundamental(h1, f * h1.length());
        CHECK(std::abs(sf.kappa) < 1e-10);
        CHECK(std::abs(sf.h1) < 1e-10);
        CHECK(std::abs(sf.h2) < 1e-10);
    }
}

TEST_CASE("potential bounds: q >= 3 on sphere curves, q >= 0 on ball curves") {
    const ProfileCurve& h3 = hsiang_cached(3);
    CHECK(reduce_jacobi(h3).q_samples.minCoeff() >= 3.0 - 1e-9);
    const ProfileCurve a = solve_alencar(3);
    const ProfileCurve a2 = truncate_rescale(a, 2);
    CHECK(reduce_jacobi(a2, BcSpec{{}, Bc::dirichlet()}).q_samples.minCoeff() >= -1e-12);
}

TEST_CASE("minimality trace kappa + h1 + h2 vanishes along curves") {
    for (int m : {2, 3}) {
        const ProfileCurve& c = hsiang_cached(m);
        double worst = 0;
        for (int i = 0; i <= 50; ++i) {
            const double t = c.length() * i / 50.0;
            worst = std::max(worst, std::abs(second_fundamental(c, t).trace()));
        }
        CHECK(worst < 1e-11);
    }
}

TEST_CASE("known fields: values, signs and zero sets") {
    const ProfileCurve& h1 = hsiang_cached(1);
    auto nu5 = known_field(h1, FieldTag::Nu5);
    for (double t : {0.1, 0.5, 1.0, 1.5})
        CHECK(nu5(t) == doctest::Approx(1.0).epsilon(1e-9));

    const ProfileCurve& h3 = hsiang_cached(3);
    auto nu5_3 = known_field(h3, FieldTag::Nu5);
    CHECK(nu5_3(0.05 * h3.length()) > 0.0); // positive on the launch side
    const NodalData nd = find_markers(h3);
    CHECK(nd.zeros.size() == 2);

    const ProfileCurve a = solve_alencar(3);
    auto xnu = known_field(a, FieldTag::XDotNu);
    CHECK(xnu(1e-6) == doctest::Approx(1.0).epsilon(1e-5)); // position (1,0), normal e_rho1
    CHECK_THROWS_AS(known_field(a, FieldTag::Nu5), std::invalid_argument);
    CHECK_THROWS_AS(known_field(h1, FieldTag::XDotNu), std::invalid_argument);
}

TEST_CASE("closed-form field derivatives match finite differences") {
    const ProfileCurve& h3 = hsiang_cached(3);
    for (double f : {0.2, 0.45, 0.8}) {
        const double t = f * h3.length();
        const double fd = (h3.nu5(t + 1e-6) - h3.nu5(t - 1e-6)) / 2e-6;
        CHECK(h3.nu5_deriv(t) == doctest::Approx(fd).epsilon(1e-7));
    }
    const ProfileCurve a = solve_alencar(3);
    for (double f : {0.2, 0.45, 0.8}) {
        const double t = f * a.length();
        const double fd = (a.x_dot_nu(t + 1e-6) - a.x_dot_nu(t - 1e-6)) / 2e-6;
        CHECK(a.x_dot_nu_deriv(t) == doctest::Approx(fd).epsilon(1e-6));
    }
}

TEST_CASE("nu5 satisfies the discrete eigen-equation at -3 with second-order residual") {
    const ProfileCurve& h2 = hsiang_cached(2);
    const ReducedOperator op = reduce_jacobi(h2);
    const ResidualStudy rs =
        field_residual_study(op, known_field(h2, FieldTag::Nu5),
                             known_field_deriv(h2, FieldTag::Nu5), -3.0, 256, 8);
    CHECK(rs.min_residual < 1e-6);
    CHECK(rs.order > 1.9);
}

TEST_CASE("x.nu satisfies the discrete eigen-equation at 0, same convergence") {
    const ProfileCurve a = solve_alencar(4);
    for (int ell : {1, 2}) {
        const ProfileCurve al = truncate_rescale(a, ell);
        const ReducedOperator op = reduce_jacobi(al, BcSpec{{}, Bc::dirichlet()});
        const ResidualStudy rs =
            field_residual_study(op, known_field(al, FieldTag::XDotNu),
                                 known_field_deriv(al, FieldTag::XDotNu), 0.0, 512, 10);
        CHECK(rs.min_residual < 1e-6);
        CHECK(rs.order > 1.9);
    }
}

TEST_CASE("collapsed ends admit only the natural condition") {
    const ProfileCurve& h1 = hsiang_cached(1);
    CHECK_THROWS_AS(reduce_jacobi(h1, BcSpec{Bc::dirichlet(), {}}), std::invalid_argument);
    CHECK_THROWS_AS(reduce_jacobi(h1, BcSpec{{}, Bc::robin(1.0)}), std::invalid_argument);
    // free ends accept explicit conditions
    const ProfileCurve a = solve_alencar(2);
    const ProfileCurve a1 = truncate_rescale(a, 1);
    const ReducedOperator op = reduce_jacobi(a1, BcSpec{{}, Bc::robin(1.0)});
    CHECK(op.right.kind == BcKind::Robin);
    CHECK(op.right.robin_r == 1.0);
    CHECK(op.left.kind == BcKind::Natural);
}

TEST_CASE("A_ell scaling: Dirichlet counts below zero match between scalings") {
    const ProfileCurve a = solve_alencar(4);
    const ProfileCurve scaled = truncate_rescale(a, 3, true);
    const ProfileCurve raw = truncate_rescale(a, 3, false);
    const ReducedOperator op_s = reduce_jacobi(scaled, BcSpec{{}, Bc::dirichlet()});
    const ReducedOperator op_r = reduce_jacobi(raw, BcSpec{{}, Bc::dirichlet()});
    CountOptions co;
    co.n = 2048;
    co.gap = 1e-6;
    // lambda < 0 counts are scale invariant (eigenvalues scale by r_ell^2)
    CHECK(count_below(op_s, 0.0, true, co) == count_below(op_r, 0.0, true, co));
}
