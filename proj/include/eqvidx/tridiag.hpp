#pragma once

#include "eqvidx/types.hpp"

namespace eqvidx::tri {

/// Number of negative pivots in the LDL^T factorization of the symmetric
/// tridiagonal matrix with diagonal d (size n) and off-diagonal e (size n-1):
/// by Sylvester's law of inertia, the number of eigenvalues below zero.
/// Zero pivots are nudged to keep the sweep defined.
template <class D1, class D2>
int inertia(const Eigen::MatrixBase<D1>& d, const Eigen::MatrixBase<D2>& e) {
    const Eigen::Index n = d.size();
    int neg = 0;
    double prev = 1.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        double piv = d[i];
        if (i > 0) {
            double dp = prev;
            if (std::abs(dp) < 1e-300) dp = dp < 0 ? -1e-300 : 1e-300;
            piv -= e[i - 1] * e[i - 1] / dp;
        }
        if (piv < 0) ++neg;
        prev = piv;
    }
    return neg;
}

/// Solves the tridiagonal system with bands (sub, diag, sup) by Gaussian
/// elimination with partial pivoting; b is overwritten with the solution.
inline void solve(Vec sub, Vec diag, Vec sup, Vec& b) {
    const Eigen::Index n = diag.size();
    Vec extra = Vec::Zero(n); // fill-in band created by row swaps
    for (Eigen::Index i = 0; i + 1 < n; ++i) {
        double pivot = diag[i], below = sub[i];
        if (std::abs(below) > std::abs(pivot)) {
            std::swap(diag[i], sub[i]);
            std::swap(sup[i], diag[i + 1]);
            if (i + 2 < n) std::swap(extra[i], sup[i + 1]);
            std::swap(b[i], b[i + 1]);
            pivot = diag[i];
        }
        if (std::abs(pivot) < 1e-300) pivot = diag[i] = pivot < 0 ? -1e-300 : 1e-300;
        const double m = sub[i] / pivot;
        diag[i + 1] -= m * sup[i];
        if (i + 2 < n) sup[i + 1] -= m * extra[i];
        b[i + 1] -= m * b[i];
    }
    for (Eigen::Index i = n - 1; i >= 0; --i) {
        double x = b[i];
        if (i + 1 < n) x -= sup[i] * b[i + 1];
        if (i + 2 < n) x -= extra[i] * b[i + 2];
        double piv = diag[i];
        if (std::abs(piv) < 1e-300) piv = piv < 0 ? -1e-300 : 1e-300;
        b[i] = x / piv;
    }
}

} // namespace eqvidx::tri
