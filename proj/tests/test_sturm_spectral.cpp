#include "eqvidx/sturm_spectral.hpp"

#include "eqvidx/index_reports.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace eqvidx;

namespace {

const auto one = [](double) { return 1.0; };
const auto zero = [](double) { return 0.0; };

ReducedOperator interval_op(double q0, Bc l, Bc r, double len = kPi) {
    return make_operator(0.0, len, one, [q0](double) { return q0; }, l, r, "interval");
}

} // namespace

TEST_CASE("Dirichlet interval spectrum k^2 with second-order mesh convergence") {
    const ReducedOperator op = interval_op(0.0, Bc::dirichlet(), Bc::dirichlet());
    EigOptions eo;
    eo.lo = 0.5;
    eo.hi = 20.0;
    eo.n0 = 64;
    eo.target_tol = 1e-9;
    const SpectralResult sr = eigenpairs(op, eo);
    REQUIRE(sr.eigenvalues.size() == 4);
    for (int k = 1; k <= 4; ++k)
        CHECK(sr.eigenvalues[k - 1] == doctest::Approx(k * k).epsilon(1e-8));

    // raw discrete eigenvalue errors contract by at least 3.5 per halving
    Mesh mesh;
    mesh.nodes = Vec::LinSpaced(65, 0.0, kPi);
    double prev_err = -1;
    for (int lev = 0; lev < 4; ++lev) {
        const AssembledOp A = assemble(op, mesh);
        const double err = std::abs(eig_by_index(A, 0, 0.5, 3.0) - 1.0);
        if (prev_err > 0) CHECK(prev_err / err > 3.5);
        prev_err = err;
        mesh = mesh.refined();
    }
}

TEST_CASE("Robin(1) on [0,1]: one negative eigenvalue at the transcendental root") {
    // oracle: k tanh(k/2) = 1, lambda = -k^2
    double a = 1.0, b = 2.0;
    for (int i = 0; i < 200; ++i) {
        const double m = 0.5 * (a + b);
        (m * std::tanh(0.5 * m) < 1.0 ? a : b) = m;
    }
    const double lam_exact = -0.25 * (a + b) * (a + b);

    const ReducedOperator op = interval_op(0.0, Bc::robin(1.0), Bc::robin(1.0), 1.0);
    EigOptions eo;
    eo.lo = -30.0;
    eo.hi = 0.0;
    eo.n0 = 128;
    eo.target_tol = 1e-9;
    const SpectralResult sr = eigenpairs(op, eo);
    REQUIRE(sr.eigenvalues.size() == 1);
    CHECK(sr.eigenvalues[0] == doctest::Approx(lam_exact).epsilon(1e-8));

    CountOptions co;
    co.n = 512;
    CHECK(count_below(op, 0.0, true, co) == 1);
}

TEST_CASE("count_below closed forms") {
    // spectrum k^2 - 2: one eigenvalue below zero
    const ReducedOperator op = interval_op(2.0, Bc::dirichlet(), Bc::dirichlet());
    CountOptions co;
    co.n = 512;
    CHECK(count_below(op, 0.0, true, co) == 1);
    CHECK(count_below(op, -5.0, true, co) == 0);
    CHECK(count_below(op, 10.0, true, co) == 3); // -1, 2, 7
}

TEST_CASE("natural ends with V(t)=t: constants lie in the form domain") {
    // Q(1) = -int q V dt; with q = 1, V = t on [0,1]: Q(1) = -1/2
    const ReducedOperator op =
        make_operator(0.0, 1.0, [](double t) { return t; }, one, Bc::natural(), Bc::natural(),
                      "weighted");
    const Mesh mesh = Mesh::build(op, 256);
    const AssembledOp A = assemble(op, mesh);
    Vec ones = Vec::Ones(A.unknowns());
    double Q = 0;
    Q += ones.dot(A.Sd.cwiseProduct(ones));
    for (int i = 0; i + 1 < A.unknowns(); ++i) Q += 2 * A.Se[i];
    CHECK(Q == doctest::Approx(-0.5).epsilon(1e-6));
}

TEST_CASE("equator invariant spectrum starts (-3, 5)") {
    Config cfg;
    cfg.no_cache = true;
    CurveStore store(cfg);
    const ReducedOperator op = reduce_jacobi(store.hsiang(1));
    EigOptions eo;
    eo.lo = -4.0;
    eo.hi = 6.5;
    eo.n0 = 512;
    eo.target_tol = 1e-8;
    const SpectralResult sr = eigenpairs(op, eo);
    REQUIRE(sr.eigenvalues.size() >= 2);
    CHECK(std::abs(sr.eigenvalues[0] + 3.0) < 1e-6);
    CHECK(std::abs(sr.eigenvalues[1] - 5.0) < 1e-6);
    // H1 is the totally geodesic case: counts below -3 vanish
    CountOptions co;
    co.n = 1024;
    CHECK(count_below(op, -3.0 - 1e-3, true, co) == 0);
}

TEST_CASE("inertia counts agree with explicitly computed eigenpairs") {
    std::mt19937 rng(7u);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    for (int inst = 0; inst < 12; ++inst) {
        const ReducedOperator op = random_sl_instance(500 + inst);
        EigOptions eo;
        const double qmax = op.q_samples.maxCoeff();
        eo.lo = -qmax - 4.0;
        eo.hi = 12.0;
        eo.n0 = 128;
        eo.target_tol = 1e-7;
        const SpectralResult sr = eigenpairs(op, eo);
        for (int probe = 0; probe < 3; ++probe) {
            const double t = eo.lo + (12.0 - eo.lo) * U(rng);
            int from_eigs = sr.first_index;
            for (double v : sr.eigenvalues)
                if (v < t) ++from_eigs;
            CountOptions co;
            co.n = sr.mesh_size;
            const int inertia = count_below(op, t, true, co);
            CHECK(std::abs(inertia - from_eigs) <= 0); // equality expected away from eigenvalues
        }
    }
}

TEST_CASE("eigenfunctions: weighted orthonormality and Courant nodal counts") {
    const ReducedOperator op = interval_op(0.0, Bc::dirichlet(), Bc::dirichlet());
    EigOptions eo;
    eo.lo = 0.5;
    eo.hi = 30.0;
    eo.n0 = 256;
    eo.target_tol = 1e-8;
    const SpectralResult sr = eigenpairs(op, eo);
    REQUIRE(sr.eigenvalues.size() == 5);
    // nodal domains of the k-th Dirichlet eigenfunction: k
    for (std::size_t k = 0; k < sr.nodal_counts.size(); ++k)
        CHECK(sr.nodal_counts[k] == static_cast<int>(k) + 1);

    // weighted Gram identity
    const AssembledOp A = assemble(op, Mesh::build(op, sr.mesh_size));
    for (std::size_t i = 0; i < sr.eigenvalues.size(); ++i) {
        const Vec ui = A.restrict_nodes(sr.eigenfunctions.col(i));
        for (std::size_t j = 0; j <= i; ++j) {
            const Vec uj = A.restrict_nodes(sr.eigenfunctions.col(j));
            Vec Mu = A.Md.cwiseProduct(uj);
            for (int r = 0; r + 1 < A.unknowns(); ++r) {
                Mu[r] += A.Me[r] * uj[r + 1];
                Mu[r + 1] += A.Me[r] * uj[r];
            }
            CHECK(std::abs(ui.dot(Mu) - (i == j ? 1.0 : 0.0)) < 1e-8);
        }
    }
}

TEST_CASE("boundary-condition monotonicity on randomized instances") {
    for (int inst = 0; inst < 10; ++inst) {
        ReducedOperator base = random_sl_instance(900 + inst);
        auto with_bc = [&](Bc l, Bc r) {
            return make_operator(base.t_lo, base.t_hi, base.V, base.q, l, r, "bc");
        };
        const ReducedOperator opd = with_bc(Bc::dirichlet(), Bc::dirichlet());
        const ReducedOperator opn = with_bc(Bc::neumann(), Bc::neumann());
        const ReducedOperator opr = with_bc(Bc::robin(0.7), Bc::robin(1.3));
        const Mesh mesh = Mesh::build(opd, 512);
        const AssembledOp Ad = assemble(opd, mesh);
        const AssembledOp An = assemble(opn, mesh);
        const AssembledOp Ar = assemble(opr, mesh);
        for (int k = 0; k < 5; ++k) {
            const double ld = eig_by_index(Ad, k, -50, 400);
            const double ln = eig_by_index(An, k, -50, 400);
            const double lr = eig_by_index(Ar, k, -50, 400);
            CHECK(ln <= ld + 1e-10);
            CHECK(lr <= ln + 1e-10);
        }
    }
}

TEST_CASE("nodal_domains counting and degenerate input") {
    Vec c = Vec::Ones(100);
    CHECK(nodal_domains(c) == 1);
    Vec s(201);
    for (int i = 0; i <= 200; ++i) s[i] = std::sin(3.0 * kPi * i / 200.0);
    CHECK(nodal_domains(s) == 3);
    Vec z = Vec::Zero(50);
    CHECK_THROWS(nodal_domains(z));
}

TEST_CASE("ambiguity is reported when a threshold sits on an eigenvalue") {
    const ReducedOperator op = interval_op(0.0, Bc::dirichlet(), Bc::dirichlet());
    CountOptions co;
    co.n = 4096;
    co.gap = 1e-3;
    co.require_unambiguous = true;
    CHECK_THROWS_AS(count_below(op, 1.0, true, co), AmbiguityError);
    co.gap = 1e-9;
    CHECK_NOTHROW(count_below(op, 0.5, true, co));
}

TEST_CASE("assemble rejects meshes with vanishing mass rows") {
    const ReducedOperator op =
        make_operator(0.0, 1.0, zero, one, Bc::dirichlet(), Bc::dirichlet(), "null-weight");
    Mesh mesh;
    mesh.nodes = Vec::LinSpaced(17, 0.0, 1.0);
    CHECK_THROWS(assemble(op, mesh));
}
