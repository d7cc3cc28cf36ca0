#pragma once

#include "eqvidx/jacobi_reduce.hpp"

#include <vector>

namespace eqvidx {

/// 1D mesh with geometric grading (ratio 1.05) toward natural ends, where
/// the weight vanishes and eigenfunctions develop structure on small scales.
/// Forced interior nodes (partition cuts) are honored exactly.
struct Mesh {
    Vec nodes;

    int elems() const { return static_cast<int>(nodes.size()) - 1; }
    /// Halves every element; the refined family keeps second-order behavior.
    Mesh refined() const;

    static Mesh build(const ReducedOperator& op, int n, const std::vector<double>& forced = {});
};

/// P1 finite-element discretization of the form and of the weighted mass,
/// both symmetric tridiagonal; Dirichlet ends are eliminated.
struct AssembledOp {
    Vec Sd, Se; // stiffness: int(u'v'V) - int(q u v V) - Robin terms
    Vec Md, Me; // weighted mass
    Vec nodes;  // full mesh including Dirichlet boundary nodes
    bool drop_left = false, drop_right = false;

    int unknowns() const { return static_cast<int>(Sd.size()); }
    /// Expands a dof vector to all mesh nodes (zeros at Dirichlet ends).
    Vec expand(const Vec& u) const;
    /// Restriction of nodal values to dofs.
    Vec restrict_nodes(const Vec& w) const;
};

AssembledOp assemble(const ReducedOperator& op, const Mesh& mesh);

/// Eigenvalue count below lambda by Sylvester inertia of S - lambda M.
int count_below(const AssembledOp& A, double lambda);

struct CountOptions {
    int n = 1024;        // elements, when the mesh is built internally
    double gap = 1e-9;   // strictness offset
    bool require_unambiguous = false;
};

/// Strict counts evaluate the inertia at lambda - gap, non-strict at
/// lambda + gap.  When `require_unambiguous`, throws AmbiguityError if a
/// discrete eigenvalue lies within the gap.
int count_below(const ReducedOperator& op, double lambda, bool strict,
                const CountOptions& co = {});
int count_below(const AssembledOp& A, double lambda, bool strict, double gap,
                bool require_unambiguous = false);

/// k-th generalized eigenvalue (0-based, ascending) by inertia bisection.
double eig_by_index(const AssembledOp& A, int k, double lo_hint, double hi_hint);

struct EigCluster {
    double value = 0;
    int multiplicity = 1;
    double error = 0;
};

struct SpectralResult {
    std::vector<double> eigenvalues; // ascending, Richardson-extrapolated
    std::vector<double> errors;      // per-eigenvalue estimates
    std::vector<EigCluster> clusters;
    Eigen::MatrixXd eigenfunctions;  // columns on `nodes`, M-orthonormal
    Vec nodes;
    std::vector<int> nodal_counts;
    int mesh_size = 0;
    int first_index = 0;             // global index of eigenvalues[0]
    double max_error = 0;

    /// Cluster containing `value` within `tol`, or -1.
    int cluster_near(double value, double tol) const;
};

struct EigOptions {
    double lo = -1e9;
    double hi = 0;
    int n0 = 256;
    double target_tol = 1e-7;
    int max_refine = 8;
    std::vector<double> forced_nodes;
};

/// All eigenvalues in [lo, hi]: inertia bisection per index, meshes doubled
/// until the Richardson error estimate meets target_tol, eigenfunctions by
/// inverse iteration on the finest mesh.
SpectralResult eigenpairs(const ReducedOperator& op, const EigOptions& eo);

/// 1 + number of robust sign changes (threshold 1e-7 * max|u|).
int nodal_domains(const Vec& u);

} // namespace eqvidx
