#pragma once

#include "eqvidx/types.hpp"

namespace eqvidx {

/// The two fixed O(2)xO(2) orbit-space geometries.
///
/// Sphere4: S^4/G is the half-lune chart (s,a) in [-pi/2,pi/2] x [0,pi/2]
/// with quotient metric ds^2 + cos^2(s) da^2 and orbit radii
/// r1 = cos s cos a, r2 = cos s sin a.
/// Ball4: R^4/G is the closed first quadrant (rho1,rho2) with the flat
/// metric and radii rho1, rho2.
enum class Model { Sphere4, Ball4 };

/// Edge1 = {radius2 = 0}, Edge2 = {radius1 = 0}.
enum class EdgeId { Edge1, Edge2 };

struct QuotientPoint {
    double u1 = 0; // s (radians) or rho1
    double u2 = 0; // a (radians) or rho2
};

struct OrbitSpace {
    Model model = Model::Sphere4;

    static OrbitSpace sphere4() { return OrbitSpace{Model::Sphere4}; }
    static OrbitSpace ball4() { return OrbitSpace{Model::Ball4}; }

    /// Ric(nu,nu) of the ambient space: 3 on S^4, 0 on R^4.
    double ambient_ricci() const { return model == Model::Sphere4 ? 3.0 : 0.0; }
};

bool in_chart(const OrbitSpace& os, QuotientPoint p, double tol = 1e-12);

double radius1(const OrbitSpace& os, QuotientPoint p);
double radius2(const OrbitSpace& os, QuotientPoint p);

/// Diagonal quotient metric coefficients (g11, g22) at p.
Vec2 metric_diag(const OrbitSpace& os, QuotientPoint p);

/// Torus-orbit volume (2*pi)^2 * r1 * r2; zero exactly on edges and poles.
/// Throws std::domain_error outside the closed chart.
double orbit_volume(const OrbitSpace& os, QuotientPoint p);

/// Normalized signed distance to the football/cone within the orbit sphere,
/// arcsin(r2/sqrt(r1^2+r2^2)) - pi/4, with values in [-pi/4, pi/4].
/// Throws std::domain_error at poles (Sphere4) / the origin (Ball4).
double theta(const OrbitSpace& os, QuotientPoint p);

/// Quotient-metric length of a chart vector v at p.
double metric_len(const OrbitSpace& os, QuotientPoint p, Vec2 v);

/// True when p lies on the given edge (within tol on the collapsing radius).
bool on_edge(const OrbitSpace& os, QuotientPoint p, EdgeId edge, double tol = 1e-12);

} // namespace eqvidx
