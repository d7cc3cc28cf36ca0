#include "eqvidx/orbit_models.hpp"

#include <cmath>

namespace eqvidx {

bool in_chart(const OrbitSpace& os, QuotientPoint p, double tol) {
    if (os.model == Model::Sphere4)
        return std::abs(p.u1) <= kHalfPi + tol && p.u2 >= -tol && p.u2 <= kHalfPi + tol;
    return p.u1 >= -tol && p.u2 >= -tol;
}

double radius1(const OrbitSpace& os, QuotientPoint p) {
    if (os.model == Model::Sphere4) return std::cos(p.u1) * std::cos(p.u2);
    return p.u1;
}

double radius2(const OrbitSpace& os, QuotientPoint p) {
    if (os.model == Model::Sphere4) return std::cos(p.u1) * std::sin(p.u2);
    return p.u2;
}

Vec2 metric_diag(const OrbitSpace& os, QuotientPoint p) {
    if (os.model == Model::Sphere4) {
        const double c = std::cos(p.u1);
        return Vec2(1.0, c * c);
    }
    return Vec2(1.0, 1.0);
}

double orbit_volume(const OrbitSpace& os, QuotientPoint p) {
    if (!in_chart(os, p))
        throw std::domain_error("orbit_volume: point outside the chart");
    return kFourPiSq * radius1(os, p) * radius2(os, p);
}

double theta(const OrbitSpace& os, QuotientPoint p) {
    if (!in_chart(os, p))
        throw std::domain_error("theta: point outside the chart");
    const double r1 = radius1(os, p);
    const double r2 = radius2(os, p);
    const double rr = r1 * r1 + r2 * r2;
    if (rr <= 0.0 || (os.model == Model::Sphere4 && kHalfPi - std::abs(p.u1) < 1e-12))
        throw std::domain_error("theta: undefined at a pole/origin");
    double x = r2 / std::sqrt(rr);
    x = std::min(1.0, std::max(0.0, x));
    return std::asin(x) - 0.25 * kPi;
}

double metric_len(const OrbitSpace& os, QuotientPoint p, Vec2 v) {
    const Vec2 g = metric_diag(os, p);
    return std::sqrt(g[0] * v[0] * v[0] + g[1] * v[1] * v[1]);
}

bool on_edge(const OrbitSpace& os, QuotientPoint p, EdgeId edge, double tol) {
    const double r = edge == EdgeId::Edge1 ? radius2(os, p) : radius1(os, p);
    return std::abs(r) <= tol;
}

} // namespace eqvidx
