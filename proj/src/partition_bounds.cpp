#include "eqvidx/partition_bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace eqvidx {
namespace {

void check_cuts(const ReducedOperator& op, const std::vector<double>& cuts) {
    const double margin = 1e-12 * op.length();
    double last = op.t_lo;
    for (double c : cuts) {
        if (c <= op.t_lo + margin || c >= op.t_hi - margin)
            throw std::domain_error("split: cut at or beyond an endpoint");
        if (c <= last + margin)
            throw std::domain_error("split: cuts must be sorted and distinct");
        last = c;
    }
}

ReducedOperator make_piece(const ReducedOperator& op, double a, double b, Bc left, Bc right) {
    ReducedOperator p;
    p.t_lo = a;
    p.t_hi = b;
    p.V = op.V;
    p.q = op.q;
    p.left = left;
    p.right = right;
    p.provenance = op.provenance + "|piece";
    const int gn = 65;
    p.grid = Vec::LinSpaced(gn, a, b);
    p.V_samples.resize(gn);
    p.q_samples.resize(gn);
    for (int i = 0; i < gn; ++i) {
        p.V_samples[i] = p.V(p.grid[i]);
        p.q_samples[i] = p.q(p.grid[i]);
    }
    return p;
}

} // namespace

SplitOps split(const ReducedOperator& op, const std::vector<double>& cuts) {
    check_cuts(op, cuts);
    std::vector<double> bounds{op.t_lo};
    bounds.insert(bounds.end(), cuts.begin(), cuts.end());
    bounds.push_back(op.t_hi);

    SplitOps out;
    for (std::size_t i = 0; i + 1 < bounds.size(); ++i) {
        const bool first = i == 0, last = i + 2 == bounds.size();
        const Bc dl = first ? op.left : Bc::dirichlet();
        const Bc dr = last ? op.right : Bc::dirichlet();
        const Bc nl = first ? op.left : Bc::neumann();
        const Bc nr = last ? op.right : Bc::neumann();
        out.dpieces.push_back(make_piece(op, bounds[i], bounds[i + 1], dl, dr));
        out.npieces.push_back(make_piece(op, bounds[i], bounds[i + 1], nl, nr));
    }
    return out;
}

PartitionReport mr_bounds(const ReducedOperator& op, const std::vector<double>& cuts,
                          double t, const PartitionOptions& po) {
    const SplitOps ops = split(op, cuts);
    const std::size_t np = ops.dpieces.size();

    // nested meshes: the full mesh is the concatenation of the piece meshes
    std::vector<Mesh> piece_meshes(np);
    std::vector<double> full_nodes;
    for (std::size_t i = 0; i < np; ++i) {
        const ReducedOperator& p = ops.dpieces[i];
        const int ni = std::max(16, static_cast<int>(std::lround(po.n * p.length() / op.length())));
        piece_meshes[i] = Mesh::build(p, ni);
        const Vec& nd = piece_meshes[i].nodes;
        for (int k = i == 0 ? 0 : 1; k < nd.size(); ++k) full_nodes.push_back(nd[k]);
    }
    Mesh full;
    full.nodes = Eigen::Map<const Vec>(full_nodes.data(), full_nodes.size());

    PartitionReport rep;
    rep.threshold = t;
    rep.cuts = cuts;

    const AssembledOp Afull = assemble(op, full);
    rep.full_strict = count_below(Afull, t, true, po.gap);
    rep.full_nonstrict = count_below(Afull, t, false, po.gap);

    for (std::size_t i = 0; i < np; ++i) {
        const AssembledOp Ad = assemble(ops.dpieces[i], piece_meshes[i]);
        const AssembledOp An = assemble(ops.npieces[i], piece_meshes[i]);
        PieceCounts pc;
        pc.a = ops.dpieces[i].t_lo;
        pc.b = ops.dpieces[i].t_hi;
        pc.d_strict = count_below(Ad, t, true, po.gap);
        pc.d_nonstrict = count_below(Ad, t, false, po.gap);
        pc.n_strict = count_below(An, t, true, po.gap);
        pc.n_nonstrict = count_below(An, t, false, po.gap);
        rep.pieces.push_back(pc);
    }

    long d_nonstrict_sum = 0, n_strict_sum = 0;
    for (const PieceCounts& pc : rep.pieces) {
        d_nonstrict_sum += pc.d_nonstrict;
        n_strict_sum += pc.n_strict;
    }
    rep.mr_lower = 0;
    rep.mr_upper = std::numeric_limits<long>::max();
    for (const PieceCounts& pc : rep.pieces) {
        rep.mr_lower = std::max(rep.mr_lower, d_nonstrict_sum - pc.d_nonstrict + pc.d_strict);
        rep.mr_upper = std::min(rep.mr_upper, n_strict_sum - pc.n_strict + pc.n_nonstrict);
    }
    rep.sandwich_ok = rep.mr_lower <= rep.full_strict && rep.full_nonstrict <= rep.mr_upper;
    return rep;
}

SpectralCount spectral_count(const ReducedOperator& op, double t,
                             const SpectralCountOptions& so, int n0) {
    EigOptions eo;
    eo.lo = t - so.window;
    eo.hi = t + so.window;
    eo.n0 = n0;
    eo.target_tol = so.target_tol;
    eo.max_refine = 7;
    const SpectralResult sr = eigenpairs(op, eo);
    // the floor absorbs marker-location noise in cut positions, which shifts
    // piece eigenvalues at first order; structural gaps are O(1)
    const double eps = std::max(1e-7, 100.0 * std::max(sr.max_error, 1e-12));
    SpectralCount c;
    c.strict = c.nonstrict = sr.first_index;
    c.err = sr.max_error;
    for (double v : sr.eigenvalues) {
        if (v < t - eps) ++c.strict;
        if (v <= t + eps) ++c.nonstrict;
    }
    return c;
}

PartitionReport mr_bounds_spectral(const ReducedOperator& op, const std::vector<double>& cuts,
                                   double t, const SpectralCountOptions& so) {
    const SplitOps ops = split(op, cuts);
    PartitionReport rep;
    rep.threshold = t;
    rep.cuts = cuts;

    const SpectralCount full = spectral_count(op, t, so, so.n0);
    rep.full_strict = full.strict;
    rep.full_nonstrict = full.nonstrict;

    for (std::size_t i = 0; i < ops.dpieces.size(); ++i) {
        const int ni = std::max(
            64, static_cast<int>(std::lround(so.n0 * ops.dpieces[i].length() / op.length())));
        const SpectralCount d = spectral_count(ops.dpieces[i], t, so, ni);
        const SpectralCount nn = spectral_count(ops.npieces[i], t, so, ni);
        PieceCounts pc;
        pc.a = ops.dpieces[i].t_lo;
        pc.b = ops.dpieces[i].t_hi;
        pc.d_strict = d.strict;
        pc.d_nonstrict = d.nonstrict;
        pc.n_strict = nn.strict;
        pc.n_nonstrict = nn.nonstrict;
        rep.pieces.push_back(pc);
    }

    long d_nonstrict_sum = 0, n_strict_sum = 0;
    for (const PieceCounts& pc : rep.pieces) {
        d_nonstrict_sum += pc.d_nonstrict;
        n_strict_sum += pc.n_strict;
    }
    rep.mr_lower = 0;
    rep.mr_upper = std::numeric_limits<long>::max();
    for (const PieceCounts& pc : rep.pieces) {
        rep.mr_lower = std::max(rep.mr_lower, d_nonstrict_sum - pc.d_nonstrict + pc.d_strict);
        rep.mr_upper = std::min(rep.mr_upper, n_strict_sum - pc.n_strict + pc.n_nonstrict);
    }
    rep.sandwich_ok = rep.mr_lower <= rep.full_strict && rep.full_nonstrict <= rep.mr_upper;
    return rep;
}

CompareReport robin_dirichlet_compare(const ReducedOperator& op_dir,
                                      const ReducedOperator& op_rob,
                                      const std::vector<double>& lambda_grid,
                                      const PartitionOptions& po) {
    if (std::abs(op_dir.t_lo - op_rob.t_lo) > 1e-12 ||
        std::abs(op_dir.t_hi - op_rob.t_hi) > 1e-12 ||
        op_dir.grid.size() != op_rob.grid.size())
        throw std::invalid_argument("robin_dirichlet_compare: operator mismatch (grid)");
    for (int i = 0; i < op_dir.grid.size(); ++i) {
        const double sc = 1.0 + std::abs(op_dir.V_samples[i]) + std::abs(op_dir.q_samples[i]);
        if (std::abs(op_dir.V_samples[i] - op_rob.V_samples[i]) > 1e-9 * sc ||
            std::abs(op_dir.q_samples[i] - op_rob.q_samples[i]) > 1e-9 * sc)
            throw std::invalid_argument("robin_dirichlet_compare: operator mismatch (V/q)");
    }
    const auto check_pair = [](const Bc& d, const Bc& r) {
        const bool both_natural = d.kind == BcKind::Natural && r.kind == BcKind::Natural;
        const bool dir_vs_rob = d.kind == BcKind::Dirichlet && r.kind == BcKind::Robin;
        if (!both_natural && !dir_vs_rob)
            throw std::invalid_argument("robin_dirichlet_compare: boundary conditions must be "
                                        "Dirichlet vs Robin at every non-collapsed end");
    };
    check_pair(op_dir.left, op_rob.left);
    check_pair(op_dir.right, op_rob.right);

    const Mesh mesh = Mesh::build(op_dir, po.n);
    const AssembledOp Ad = assemble(op_dir, mesh);
    const AssembledOp Ar = assemble(op_rob, mesh);

    CompareReport rep;
    rep.ok = true;
    for (double lam : lambda_grid) {
        CompareItem it;
        it.lambda = lam;
        it.robin_strict = count_below(Ar, lam, true, po.gap);
        it.dirichlet_nonstrict = count_below(Ad, lam, false, po.gap);
        it.ok = it.robin_strict >= it.dirichlet_nonstrict;
        rep.ok = rep.ok && it.ok;
        rep.items.push_back(it);
    }
    return rep;
}

} // namespace eqvidx
