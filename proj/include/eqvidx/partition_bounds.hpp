#pragma once

#include "eqvidx/sturm_spectral.hpp"

namespace eqvidx {

/// Sub-operators of one interval partition in the two internalizations:
/// cut points receive Dirichlet conditions in `dpieces` and Neumann
/// conditions in `npieces`; outer ends keep the parent conditions.
struct SplitOps {
    std::vector<ReducedOperator> dpieces;
    std::vector<ReducedOperator> npieces;
};

SplitOps split(const ReducedOperator& op, const std::vector<double>& cuts);

struct PieceCounts {
    double a = 0, b = 0;
    int d_strict = 0, d_nonstrict = 0;
    int n_strict = 0, n_nonstrict = 0;
};

struct PartitionReport {
    double threshold = 0;
    std::vector<double> cuts;
    std::vector<PieceCounts> pieces;
    long mr_lower = 0; // lower bound on the strict count of the full operator
    long mr_upper = 0; // upper bound on the non-strict count
    int full_strict = 0, full_nonstrict = 0;
    bool sandwich_ok = false;
};

struct PartitionOptions {
    int n = 1024;      // total elements distributed over the pieces
    double gap = 1e-9; // strictness offset
};

struct SpectralCountOptions {
    double window = 0.7;     // eigenvalues are resolved in [t-window, t+window]
    int n0 = 512;            // base elements for the full operator
    double target_tol = 1e-7;
};

struct SpectralCount {
    int strict = 0, nonstrict = 0;
    double err = 0;
};

/// Counts below/at a threshold from Richardson-extrapolated eigenvalues in a
/// window around it (inertia supplies the count below the window).  Robust
/// when the threshold coincides with an exact eigenvalue, where plain
/// inertia counting would need gap calibration against the mesh error.
SpectralCount spectral_count(const ReducedOperator& op, double t,
                             const SpectralCountOptions& so, int n0);

/// mr_bounds with all per-piece and full counts taken via spectral_count;
/// used for the threshold -3 (Hsiang) and 0 (free boundary) identities.
PartitionReport mr_bounds_spectral(const ReducedOperator& op, const std::vector<double>& cuts,
                                   double t, const SpectralCountOptions& so = {});

/// Eigenvalue-count bounds at threshold t from the partition at `cuts`:
/// lower bound maximized and upper bound minimized over the choice of the
/// distinguished piece.  Piece meshes are restrictions of the full mesh, so
/// the sandwich mr_lower <= full_strict and full_nonstrict <= mr_upper is
/// exact for the discrete problems as well.
PartitionReport mr_bounds(const ReducedOperator& op, const std::vector<double>& cuts,
                          double t, const PartitionOptions& po = {});

struct CompareItem {
    double lambda = 0;
    int robin_strict = 0;
    int dirichlet_nonstrict = 0;
    bool ok = false;
};

struct CompareReport {
    std::vector<CompareItem> items;
    bool ok = false;
};

/// Verifies count_rob(<lambda) >= count_dir(<=lambda) over a grid of
/// thresholds; the operators must share V, q and interval and differ only
/// in the boundary condition at non-collapsed ends (Dirichlet vs Robin).
CompareReport robin_dirichlet_compare(const ReducedOperator& op_dir,
                                      const ReducedOperator& op_rob,
                                      const std::vector<double>& lambda_grid,
                                      const PartitionOptions& po = {});

} // namespace eqvidx
