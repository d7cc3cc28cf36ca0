#include "eqvidx/sturm_spectral.hpp"

#include "eqvidx/tridiag.hpp"

#include <algorithm>
#include <cmath>

namespace eqvidx {
namespace {

constexpr double kGradeRatio = 1.05;

// Element sizes growing geometrically away from a natural end, capped at
// 4*len/n and floored at 1e-8*len; h0 is solved so the sizes sum to len.
std::vector<double> graded_sizes(double len, int n) {
    const double cap = 4.0 * len / n;
    const double floor_h = std::min(1e-8 * len, cap);
    const auto size_i = [&](double h0, int i) {
        return std::min(std::max(h0 * std::pow(kGradeRatio, i), floor_h), cap);
    };
    const auto total = [&](double h0) {
        double s = 0;
        for (int i = 0; i < n; ++i) s += size_i(h0, i);
        return s;
    };
    double lo = 1e-3 * floor_h, hi = cap;
    for (int it = 0; it < 200; ++it) {
        const double mid = std::sqrt(lo * hi);
        (total(mid) < len ? lo : hi) = mid;
    }
    const double h0 = std::sqrt(lo * hi);
    std::vector<double> sizes(n);
    double acc = 0;
    for (int i = 0; i < n; ++i) {
        sizes[i] = size_i(h0, i);
        acc += sizes[i];
    }
    for (double& s : sizes) s *= len / acc;
    return sizes;
}

void append_segment(std::vector<double>& nodes, double a, double b, int n,
                    bool natural_left, bool natural_right) {
    n = std::max(n, 8);
    const double len = b - a;
    std::vector<double> sizes;
    if (natural_left && natural_right) {
        const int nh = n / 2;
        std::vector<double> half = graded_sizes(len / 2, nh);
        sizes = half;
        std::vector<double> mirrored(half.rbegin(), half.rend());
        sizes.insert(sizes.end(), mirrored.begin(), mirrored.end());
    } else if (natural_left) {
        sizes = graded_sizes(len, n);
    } else if (natural_right) {
        sizes = graded_sizes(len, n);
        std::reverse(sizes.begin(), sizes.end());
    } else {
        sizes.assign(n, len / n);
    }
    double x = a;
    for (std::size_t i = 0; i + 1 < sizes.size(); ++i) {
        x += sizes[i];
        nodes.push_back(x);
    }
    nodes.push_back(b);
}

} // namespace

Mesh Mesh::build(const ReducedOperator& op, int n, const std::vector<double>& forced) {
    std::vector<double> cuts(forced);
    std::sort(cuts.begin(), cuts.end());
    for (double c : cuts)
        if (c <= op.t_lo || c >= op.t_hi)
            throw std::invalid_argument("Mesh::build: forced node outside the open interval");

    std::vector<double> bounds{op.t_lo};
    bounds.insert(bounds.end(), cuts.begin(), cuts.end());
    bounds.push_back(op.t_hi);

    const double L = op.length();
    std::vector<double> nodes{op.t_lo};
    for (std::size_t i = 0; i + 1 < bounds.size(); ++i) {
        const double a = bounds[i], b = bounds[i + 1];
        const int ni = std::max(8, static_cast<int>(std::lround(n * (b - a) / L)));
        const bool nat_l = i == 0 && op.left.kind == BcKind::Natural;
        const bool nat_r = i + 2 == bounds.size() && op.right.kind == BcKind::Natural;
        append_segment(nodes, a, b, ni, nat_l, nat_r);
    }
    Mesh m;
    m.nodes = Eigen::Map<const Vec>(nodes.data(), nodes.size());
    return m;
}

Mesh Mesh::refined() const {
    Mesh m;
    const int n = elems();
    m.nodes.resize(2 * n + 1);
    for (int i = 0; i < n; ++i) {
        m.nodes[2 * i] = nodes[i];
        m.nodes[2 * i + 1] = 0.5 * (nodes[i] + nodes[i + 1]);
    }
    m.nodes[2 * n] = nodes[n];
    return m;
}

Vec AssembledOp::expand(const Vec& u) const {
    const int nn = static_cast<int>(nodes.size());
    Vec w = Vec::Zero(nn);
    const int off = drop_left ? 1 : 0;
    for (int i = 0; i < u.size(); ++i) w[i + off] = u[i];
    return w;
}

Vec AssembledOp::restrict_nodes(const Vec& w) const {
    const int off = drop_left ? 1 : 0;
    return w.segment(off, unknowns());
}

AssembledOp assemble(const ReducedOperator& op, const Mesh& mesh) {
    const int ne = mesh.elems();
    if (ne < 2) throw std::invalid_argument("assemble: mesh too coarse");
    const int nn = ne + 1;
    Vec Sd = Vec::Zero(nn), Se = Vec::Zero(nn - 1);
    Vec Md = Vec::Zero(nn), Me = Vec::Zero(nn - 1);

    // two-point Gauss per element on V and q*V
    const double g = 0.5 / std::sqrt(3.0);
    for (int el = 0; el < ne; ++el) {
        const double a = mesh.nodes[el], b = mesh.nodes[el + 1];
        const double h = b - a, mid = 0.5 * (a + b);
        const double x1 = mid - g * h, x2 = mid + g * h;
        const double V1 = op.V(x1), V2 = op.V(x2);
        const double qV1 = op.q(x1) * V1, qV2 = op.q(x2) * V2;
        const double xi1 = (x1 - a) / h, xi2 = (x2 - a) / h;

        const double kst = 0.5 * (V1 + V2) / h; // int phi' phi' V over the element
        Sd[el] += kst;
        Sd[el + 1] += kst;
        Se[el] -= kst;

        const double w = 0.5 * h;
        const auto mass_ll = [&](double f1, double f2) {
            return w * (f1 * (1 - xi1) * (1 - xi1) + f2 * (1 - xi2) * (1 - xi2));
        };
        const auto mass_rr = [&](double f1, double f2) {
            return w * (f1 * xi1 * xi1 + f2 * xi2 * xi2);
        };
        const auto mass_lr = [&](double f1, double f2) {
            return w * (f1 * (1 - xi1) * xi1 + f2 * (1 - xi2) * xi2);
        };
        Md[el] += mass_ll(V1, V2);
        Md[el + 1] += mass_rr(V1, V2);
        Me[el] += mass_lr(V1, V2);
        Sd[el] -= mass_ll(qV1, qV2);
        Sd[el + 1] -= mass_rr(qV1, qV2);
        Se[el] -= mass_lr(qV1, qV2);
    }

    if (op.left.kind == BcKind::Robin) Sd[0] -= op.left.robin_r * op.V(op.t_lo);
    if (op.right.kind == BcKind::Robin) Sd[nn - 1] -= op.right.robin_r * op.V(op.t_hi);

    AssembledOp A;
    A.nodes = mesh.nodes;
    A.drop_left = op.left.kind == BcKind::Dirichlet;
    A.drop_right = op.right.kind == BcKind::Dirichlet;
    const int lo = A.drop_left ? 1 : 0;
    const int hi = nn - (A.drop_right ? 1 : 0);
    if (hi - lo < 2) throw std::invalid_argument("assemble: no interior unknowns");
    A.Sd = Sd.segment(lo, hi - lo);
    A.Md = Md.segment(lo, hi - lo);
    A.Se = Se.segment(lo, hi - lo - 1);
    A.Me = Me.segment(lo, hi - lo - 1);
    if (A.Md.minCoeff() <= 0)
        throw std::runtime_error("assemble: non-positive mass diagonal (weight underflow)");
    return A;
}

int count_below(const AssembledOp& A, double lambda) {
    return tri::inertia(A.Sd - lambda * A.Md, A.Se - lambda * A.Me);
}

int count_below(const AssembledOp& A, double lambda, bool strict, double gap,
                bool require_unambiguous) {
    const int c_lo = count_below(A, lambda - gap);
    const int c_hi = count_below(A, lambda + gap);
    if (require_unambiguous && c_lo != c_hi)
        throw AmbiguityError("count_below: eigenvalue within gap of the threshold "
                             "(refine the mesh)", lambda, gap);
    return strict ? c_lo : c_hi;
}

int count_below(const ReducedOperator& op, double lambda, bool strict, const CountOptions& co) {
    const AssembledOp A = assemble(op, Mesh::build(op, co.n));
    return count_below(A, lambda, strict, co.gap, co.require_unambiguous);
}

double eig_by_index(const AssembledOp& A, int k, double lo_hint, double hi_hint) {
    double lo = lo_hint, hi = hi_hint;
    double span = std::max(1.0, hi - lo);
    for (int it = 0; it < 80 && count_below(A, lo) > k; ++it, span *= 2) lo -= span;
    for (int it = 0; it < 80 && count_below(A, hi) <= k; ++it, span *= 2) hi += span;
    for (int it = 0; it < 50000; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        (count_below(A, mid) <= k ? lo : hi) = mid;
        if (hi - lo < 1e-14 * std::max(1.0, std::abs(mid))) break;
    }
    return 0.5 * (lo + hi);
}

namespace {

// inverse iteration for the eigenvector of the pencil at shift sigma
Vec inverse_iteration(const AssembledOp& A, double sigma, const std::vector<Vec>& against) {
    const int n = A.unknowns();
    Vec d = A.Sd - sigma * A.Md;
    Vec e = A.Se - sigma * A.Me;
    Vec x = Vec::Constant(n, 1.0 / std::sqrt(double(n)));
    for (int i = 0; i < n; ++i) x[i] *= 1.0 + 1e-3 * std::sin(7.0 * (i + 1));

    const auto mdot = [&](const Vec& a, const Vec& b) {
        double s = a.dot(A.Md.cwiseProduct(b).matrix());
        for (int i = 0; i + 1 < n; ++i) s += A.Me[i] * (a[i] * b[i + 1] + a[i + 1] * b[i]);
        return s;
    };
    const auto mapply = [&](const Vec& a) {
        Vec r = A.Md.cwiseProduct(a);
        for (int i = 0; i + 1 < n; ++i) {
            r[i] += A.Me[i] * a[i + 1];
            r[i + 1] += A.Me[i] * a[i];
        }
        return r;
    };

    for (int it = 0; it < 6; ++it) {
        Vec b = mapply(x);
        tri::solve(e, d, e, b);
        const double bmax = b.cwiseAbs().maxCoeff();
        if (!std::isfinite(bmax) || bmax == 0.0) {
            // the shift collided with a discrete eigenvalue; nudge and restart
            sigma += (std::abs(sigma) + 1.0) * 1e-9 * (it + 1);
            d = A.Sd - sigma * A.Md;
            e = A.Se - sigma * A.Me;
            for (int i = 0; i < n; ++i) x[i] = 1.0 + 1e-3 * std::sin(7.0 * (i + 1));
            continue;
        }
        b /= bmax;
        for (const Vec& v : against) b -= mdot(b, v) * v;
        const double nrm = std::sqrt(std::max(mdot(b, b), 1e-300));
        x = b / nrm;
    }
    // deterministic sign: largest-magnitude entry positive
    int imax = 0;
    for (int i = 1; i < n; ++i)
        if (std::abs(x[i]) > std::abs(x[imax])) imax = i;
    if (x[imax] < 0) x = -x;
    return x;
}

} // namespace

int SpectralResult::cluster_near(double value, double tol) const {
    for (std::size_t i = 0; i < clusters.size(); ++i)
        if (std::abs(clusters[i].value - value) <= tol) return static_cast<int>(i);
    return -1;
}

SpectralResult eigenpairs(const ReducedOperator& op, const EigOptions& eo) {
    // Mesh halving drives the truncation error down at second order, but
    // Sturm-sweep roundoff grows like eps/h^2; the loop therefore stops when
    // either the extrapolated values settle or the raw inter-mesh difference
    // stops contracting (noise floor), rolling back one level in that case.
    std::vector<AssembledOp> levels;
    Mesh mesh = Mesh::build(op, eo.n0, eo.forced_nodes);
    levels.push_back(assemble(op, mesh));
    const auto vals_at = [&](const AssembledOp& A, int klo, int khi) {
        std::vector<double> v;
        for (int k = klo; k < khi; ++k) v.push_back(eig_by_index(A, k, eo.lo, eo.hi));
        return v;
    };

    int used = 1;
    int klo = 0, khi = 0;
    std::vector<double> vals_f, vals_c, extrap_prev, extrap_cur;
    double rawdiff_prev = 1e300;
    for (int k = 1; k <= eo.max_refine; ++k) {
        mesh = mesh.refined();
        levels.push_back(assemble(op, mesh));
        klo = count_below(levels[k], eo.lo);
        khi = count_below(levels[k], eo.hi);
        vals_f = vals_at(levels[k], klo, khi);
        vals_c = vals_at(levels[k - 1], klo, khi);
        double rawdiff = 0;
        extrap_cur.clear();
        for (std::size_t i = 0; i < vals_f.size(); ++i) {
            rawdiff = std::max(rawdiff, std::abs(vals_f[i] - vals_c[i]));
            extrap_cur.push_back((4.0 * vals_f[i] - vals_c[i]) / 3.0);
        }
        used = k;
        if (k >= 2 && rawdiff > 0.6 * rawdiff_prev) {
            // noise floor: the previous pair is the cleanest
            used = k - 1;
            klo = count_below(levels[used], eo.lo);
            khi = count_below(levels[used], eo.hi);
            vals_f = vals_at(levels[used], klo, khi);
            vals_c = vals_at(levels[used - 1], klo, khi);
            extrap_cur.clear();
            for (std::size_t i = 0; i < vals_f.size(); ++i)
                extrap_cur.push_back((4.0 * vals_f[i] - vals_c[i]) / 3.0);
            extrap_prev.clear();
            break;
        }
        if (k >= 2) {
            double delta = 0;
            for (std::size_t i = 0; i < extrap_cur.size() && i < extrap_prev.size(); ++i)
                delta = std::max(delta, std::abs(extrap_cur[i] - extrap_prev[i]));
            if (delta <= eo.target_tol || vals_f.empty()) break;
        }
        rawdiff_prev = rawdiff;
        extrap_prev = extrap_cur;
    }
    const AssembledOp& Afine = levels[used];

    SpectralResult res;
    res.first_index = klo;
    res.mesh_size = static_cast<int>(Afine.nodes.size()) - 1;
    res.nodes = Afine.nodes;
    for (std::size_t i = 0; i < vals_f.size(); ++i) {
        res.eigenvalues.push_back(extrap_cur[i]);
        double err = std::abs(vals_f[i] - vals_c[i]) / 3.0;
        if (i < extrap_prev.size()) err = std::abs(extrap_cur[i] - extrap_prev[i]);
        err = std::max(err, 4e-15 * (1.0 + std::abs(extrap_cur[i])));
        res.errors.push_back(err);
        res.max_error = std::max(res.max_error, err);
    }

    // eigenvectors on the used mesh, M-orthonormal within clusters
    std::vector<Vec> vecs;
    for (std::size_t i = 0; i < vals_f.size(); ++i) {
        std::vector<Vec> against;
        for (std::size_t j = 0; j < i; ++j)
            if (std::abs(vals_f[j] - vals_f[i]) < 1e-6 * std::max(1.0, std::abs(vals_f[i])))
                against.push_back(vecs[j]);
        vecs.push_back(inverse_iteration(
            Afine, vals_f[i] + 1e-11 * std::max(1.0, std::abs(vals_f[i])), against));
    }
    res.eigenfunctions.resize(Afine.nodes.size(), static_cast<Eigen::Index>(vecs.size()));
    for (std::size_t i = 0; i < vecs.size(); ++i) {
        const Vec w = Afine.expand(vecs[i]);
        res.eigenfunctions.col(static_cast<Eigen::Index>(i)) = w;
        res.nodal_counts.push_back(nodal_domains(w));
    }

    // cluster merging
    for (std::size_t i = 0; i < res.eigenvalues.size();) {
        EigCluster c;
        c.value = res.eigenvalues[i];
        c.error = res.errors[i];
        c.multiplicity = 1;
        std::size_t j = i + 1;
        double sum = res.eigenvalues[i];
        while (j < res.eigenvalues.size()) {
            const double tol = std::max(1e-8, 10.0 * std::max(res.errors[j], res.errors[j - 1]));
            if (res.eigenvalues[j] - res.eigenvalues[j - 1] > tol) break;
            sum += res.eigenvalues[j];
            c.error = std::max(c.error, res.errors[j]);
            ++c.multiplicity;
            ++j;
        }
        c.value = sum / c.multiplicity;
        res.clusters.push_back(c);
        i = j;
    }
    return res;
}

int nodal_domains(const Vec& u) {
    const double thresh = 1e-7 * u.cwiseAbs().maxCoeff();
    if (!(thresh > 0))
        throw std::runtime_error("nodal_domains: degenerate (all-zero) function");
    int sign = 0, changes = 0;
    for (int i = 0; i < u.size(); ++i) {
        if (std::abs(u[i]) <= thresh) continue;
        const int s = u[i] > 0 ? 1 : -1;
        if (sign != 0 && s != sign) ++changes;
        sign = s;
    }
    if (sign == 0)
        throw std::runtime_error("nodal_domains: degenerate (below-threshold) function");
    return changes + 1;
}

} // namespace eqvidx
