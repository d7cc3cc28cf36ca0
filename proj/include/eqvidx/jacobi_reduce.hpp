#pragma once

#include "eqvidx/profile_solver.hpp"

#include <functional>
#include <memory>

namespace eqvidx {

enum class BcKind { Natural, Dirichlet, Neumann, Robin };

struct Bc {
    BcKind kind = BcKind::Natural;
    double robin_r = 0;

    static Bc natural() { return {BcKind::Natural, 0}; }
    static Bc dirichlet() { return {BcKind::Dirichlet, 0}; }
    static Bc neumann() { return {BcKind::Neumann, 0}; }
    static Bc robin(double r) { return {BcKind::Robin, r}; }
};

/// 1D weighted Sturm-Liouville datum for the quadratic form
///   Q(u) = int (|u'|^2 - q |u|^2) V dt  - r V u^2 at Robin ends,
/// with L^2 weight V.  Natural ends carry no boundary term; there the
/// weight vanishes (collapsed orbit).
struct ReducedOperator {
    double t_lo = 0, t_hi = 1;
    std::function<double(double)> V;
    std::function<double(double)> q;
    Bc left, right;
    std::string provenance;

    // inspection samples on a uniform grid
    Vec grid, V_samples, q_samples;

    double length() const { return t_hi - t_lo; }
};

/// Builds a synthetic operator (for tests and randomized instances).
ReducedOperator make_operator(double t_lo, double t_hi, std::function<double(double)> V,
                              std::function<double(double)> q, Bc left, Bc right,
                              std::string provenance = "synthetic", int grid_n = 256);

struct SecondFundamental {
    double kappa = 0, h1 = 0, h2 = 0;
    double a_norm2() const { return kappa * kappa + h1 * h1 + h2 * h2; }
    double trace() const { return kappa + h1 + h2; }
};

/// Principal curvatures of the invariant hypersurface at arclength t, taken
/// with respect to the curve's oriented normal: kappa along the profile and
/// h_i = -d_nu log(radius_i) along the two orbit circles.  At collapsed ends
/// the one-sided limit is returned.
SecondFundamental second_fundamental(const ProfileCurve& curve, double t);

struct BcSpec {
    std::optional<Bc> left;
    std::optional<Bc> right;
};

/// Reduces the Jacobi form of the hypersurface over `curve` to a weighted
/// 1D operator with q = |A|^2 + Ric(nu,nu).  Collapsed ends are forcibly
/// Natural; assigning any other condition there throws.
ReducedOperator reduce_jacobi(const ProfileCurve& curve, const BcSpec& spec = {},
                              int grid_n = 512);

enum class FieldTag { Nu5, XDotNu };

/// The analytically known Jacobi fields: nu^5 (Sphere4, eigenvalue -3) and
/// <x,nu> (Ball4, eigenvalue 0), as functions of arclength.
std::function<double(double)> known_field(const ProfileCurve& curve, FieldTag tag);

/// Arclength derivative of the known field (closed form along the curve).
std::function<double(double)> known_field_deriv(const ProfileCurve& curve, FieldTag tag);

} // namespace eqvidx
