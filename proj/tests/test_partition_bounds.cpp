#include "eqvidx/partition_bounds.hpp"

#include "eqvidx/index_reports.hpp"

#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

using namespace eqvidx;

namespace {

const auto one = [](double) { return 1.0; };

ReducedOperator demo_op() {
    return make_operator(0.0, kPi, one, [](double) { return 2.0; }, Bc::dirichlet(),
                         Bc::dirichlet(), "demo");
}

} // namespace

TEST_CASE("split: no cuts returns the operator itself in both internalizations") {
    const ReducedOperator op = demo_op();
    const SplitOps s = split(op, {});
    REQUIRE(s.dpieces.size() == 1);
    REQUIRE(s.npieces.size() == 1);
    CHECK(s.dpieces[0].t_lo == op.t_lo);
    CHECK(s.dpieces[0].t_hi == op.t_hi);
    CHECK(s.dpieces[0].left.kind == BcKind::Dirichlet);
    CHECK(s.npieces[0].right.kind == BcKind::Dirichlet); // outer ends keep op's conditions
}

TEST_CASE("split: cut conditions and error paths") {
    const ReducedOperator op = demo_op();
    const SplitOps s = split(op, {1.0, 2.0});
    REQUIRE(s.dpieces.size() == 3);
    CHECK(s.dpieces[0].right.kind == BcKind::Dirichlet);
    CHECK(s.npieces[0].right.kind == BcKind::Neumann);
    CHECK(s.npieces[1].left.kind == BcKind::Neumann);
    CHECK(s.npieces[2].right.kind == BcKind::Dirichlet); // outer end
    CHECK_THROWS_AS(split(op, {0.0}), std::domain_error);
    CHECK_THROWS_AS(split(op, {2.0, 1.0}), std::domain_error);
    CHECK_THROWS_AS(split(op, {1.0, 1.0}), std::domain_error);
}

TEST_CASE("closed-form partition example: 0 <= 1 <= 2 at threshold 0") {
    // [0,pi], V=1, q=2, Dirichlet ends, one cut at pi/2.
    // full spectrum k^2-2; D-pieces (2k)^2-2; N-pieces (2k-1)^2-2.
    const ReducedOperator op = demo_op();
    PartitionOptions po;
    po.n = 512;
    const PartitionReport pr = mr_bounds(op, {kHalfPi}, 0.0, po);
    CHECK(pr.full_strict == 1);
    CHECK(pr.full_nonstrict == 1);
    CHECK(pr.mr_lower == 0);
    CHECK(pr.mr_upper == 2);
    CHECK(pr.sandwich_ok);
    REQUIRE(pr.pieces.size() == 2);
    for (const PieceCounts& pc : pr.pieces) {
        CHECK(pc.d_strict == 0);
        CHECK(pc.d_nonstrict == 0);
        CHECK(pc.n_strict == 1);
        CHECK(pc.n_nonstrict == 1);
    }
    std::ostringstream os;
    CHECK(partition_demo(os));
}

TEST_CASE("randomized sandwich property holds without violations") {
    std::mt19937 rng(42u);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    int checked = 0;
    for (int inst = 0; inst < 60; ++inst) {
        const ReducedOperator op = random_sl_instance(3000 + inst);
        const double qmax = op.q_samples.maxCoeff();
        std::vector<double> cuts;
        const int nc = 1 + static_cast<int>(U(rng) * 3);
        for (int c = 0; c < nc; ++c)
            cuts.push_back(op.t_lo + (0.1 + 0.8 * U(rng)) * op.length());
        std::sort(cuts.begin(), cuts.end());
        bool ok = true;
        for (std::size_t c = 1; c < cuts.size(); ++c)
            ok = ok && cuts[c] - cuts[c - 1] > 0.04 * op.length();
        if (!ok) cuts.resize(1);
        PartitionOptions po;
        po.n = 256;
        for (int probe = 0; probe < 3; ++probe) {
            const double t = -qmax - 3.0 + (qmax + 13.0) * U(rng);
            const PartitionReport pr = mr_bounds(op, cuts, t, po);
            CHECK(pr.sandwich_ok);
            CHECK(pr.mr_lower <= pr.full_strict);
            CHECK(pr.full_nonstrict <= pr.mr_upper);
            ++checked;
        }
    }
    CHECK(checked == 180);
}

TEST_CASE("robin vs dirichlet counts: closed-form instance") {
    // V=1, q=0 on [0,1]: Robin(1) has exactly one negative eigenvalue,
    // Dirichlet has none at or below zero
    const ReducedOperator opd =
        make_operator(0.0, 1.0, one, [](double) { return 0.0; }, Bc::dirichlet(),
                      Bc::dirichlet(), "dir");
    const ReducedOperator opr =
        make_operator(0.0, 1.0, one, [](double) { return 0.0; }, Bc::robin(1.0), Bc::robin(1.0),
                      "rob");
    PartitionOptions po;
    po.n = 512;
    const CompareReport cr = robin_dirichlet_compare(opd, opr, {0.0}, po);
    REQUIRE(cr.items.size() == 1);
    CHECK(cr.items[0].robin_strict == 1);
    CHECK(cr.items[0].dirichlet_nonstrict == 0);
    CHECK(cr.ok);
}

TEST_CASE("robin vs dirichlet inequality holds for arbitrary-sign robin data") {
    std::mt19937 rng(11u);
    std::uniform_real_distribution<double> U(-2.0, 2.0);
    for (int inst = 0; inst < 12; ++inst) {
        const ReducedOperator base = random_sl_instance(7000 + inst);
        const double r_left = U(rng), r_right = U(rng);
        const ReducedOperator opd = make_operator(base.t_lo, base.t_hi, base.V, base.q,
                                                  Bc::dirichlet(), Bc::dirichlet(), "dir");
        const ReducedOperator opr = make_operator(base.t_lo, base.t_hi, base.V, base.q,
                                                  Bc::robin(r_left), Bc::robin(r_right), "rob");
        const double qmax = base.q_samples.maxCoeff();
        std::vector<double> grid;
        for (int k = 0; k < 25; ++k) grid.push_back(-qmax - 4.0 + k * (qmax + 14.0) / 24.0);
        PartitionOptions po;
        po.n = 384;
        const CompareReport cr = robin_dirichlet_compare(opd, opr, grid, po);
        CHECK(cr.ok);
    }
}

TEST_CASE("robin_dirichlet_compare rejects mismatched operators") {
    const ReducedOperator opd = demo_op();
    const ReducedOperator opr = make_operator(0.0, kPi, one, [](double) { return 2.5; },
                                              Bc::robin(1.0), Bc::robin(1.0), "other");
    CHECK_THROWS_AS(robin_dirichlet_compare(opd, opr, {0.0}), std::invalid_argument);
    const ReducedOperator opn = make_operator(0.0, kPi, one, [](double) { return 2.0; },
                                              Bc::neumann(), Bc::neumann(), "neu");
    CHECK_THROWS_AS(robin_dirichlet_compare(opd, opn, {0.0}), std::invalid_argument);
}

TEST_CASE("spectral counts match inertia counts on a generic threshold") {
    const ReducedOperator op = demo_op();
    SpectralCountOptions so;
    so.window = 0.8;
    so.n0 = 256;
    const SpectralCount sc = spectral_count(op, 0.5, so, 256);
    CountOptions co;
    co.n = 1024;
    CHECK(sc.strict == count_below(op, 0.5, true, co));
    CHECK(sc.nonstrict == count_below(op, 0.5, false, co));
}

TEST_CASE("H3 partition identities at threshold -3") {
    Config cfg;
    cfg.no_cache = true;
    CurveStore store(cfg);
    const ProfileCurve& h3 = store.hsiang(3);
    const ReducedOperator op = reduce_jacobi(h3);
    const NodalData nd = find_markers(h3);
    SpectralCountOptions so;
    so.n0 = 512;
    const PartitionReport rs = mr_bounds_spectral(op, nd.zeros, -3.0, so);
    CHECK(rs.mr_lower == 2);
    CHECK(rs.full_strict == 2);
    CHECK(rs.full_nonstrict == 3);
    CHECK(rs.sandwich_ok);
    const PartitionReport rt = mr_bounds_spectral(op, nd.criticals, -3.0, so);
    CHECK(rt.mr_upper == 3);
    CHECK(rt.sandwich_ok);
}
