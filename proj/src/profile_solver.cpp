#include "eqvidx/profile_solver.hpp"

#include "eqvidx/ode.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

namespace eqvidx {
namespace {

using State4 = StateN<4>;

// The integrator runs in coordinates where the quotient metric is diagonal
// and the weighted-geodesic equation stays well scaled: Sphere4 uses the
// chart (s,a) itself; Ball4 uses log-polar (lambda,alpha) with the flat
// metric and weight W = V*|x|, so that steps remain uniform while |x| grows
// geometrically.  State y = (u1, u2, psi, t): psi is the tangent angle in
// the orthonormal frame of the working coordinates, t quotient arclength.
struct WorkingDyn {
    Model model;
    State4 operator()(double, const State4& y) const {
        State4 d;
        const double sp = std::sin(y[2]), cp = std::cos(y[2]);
        const double a = y[1];
        const double cot_minus_tan = std::cos(2 * a) / (std::sin(a) * std::cos(a));
        if (model == Model::Sphere4) {
            const double cs = std::cos(y[0]), ts = std::tan(y[0]);
            d[0] = cp;
            d[1] = sp / cs;
            d[2] = 3.0 * sp * ts + cp * cot_minus_tan / cs;
            d[3] = 1.0;
        } else {
            d[0] = cp;
            d[1] = sp;
            d[2] = -3.0 * sp + cp * cot_minus_tan;
            d[3] = std::exp(y[0]);
        }
        return d;
    }
};

double kappa_sphere(double s, double a, double psi) {
    return 2.0 * std::sin(psi) * std::tan(s) +
           std::cos(psi) * std::cos(2 * a) / (std::sin(a) * std::cos(a)) / std::cos(s);
}

double kappa_ball(const Vec2& u, double psi) {
    return -std::sin(psi) / u[0] + std::cos(psi) / u[1];
}

CurveSample sample_from_working(Model model, const State4& y) {
    CurveSample smp;
    smp.t = y[3];
    if (model == Model::Sphere4) {
        const double s = y[0], a = y[1], psi = y[2];
        smp.u = Vec2(s, a);
        smp.v = Vec2(std::cos(psi), std::sin(psi) / std::cos(s));
        smp.kappa = kappa_sphere(s, a, psi);
    } else {
        const double R = std::exp(y[0]), al = y[1];
        const double psi = al + y[2];
        smp.u = Vec2(R * std::cos(al), R * std::sin(al));
        smp.v = Vec2(std::cos(psi), std::sin(psi));
        smp.kappa = kappa_ball(smp.u, psi);
    }
    return smp;
}

// Local frame of one edge in working coordinates: xi is the transverse
// coordinate (0 on the edge, increasing inward), eta = u1 runs along the
// edge.  The orthogonally launched profile satisfies
// eta(xi) = eta0 + (c/2) xi^2 + O(xi^4).
struct EdgeLocal {
    Model model;
    EdgeId edge;
    double u2_edge;
    double inward;

    static EdgeLocal make(Model m, EdgeId e) {
        return EdgeLocal{m, e, e == EdgeId::Edge1 ? 0.0 : kHalfPi,
                         e == EdgeId::Edge1 ? 1.0 : -1.0};
    }
    double xi(double u2) const { return inward * (u2 - u2_edge); }
    double u2_of(double xi) const { return u2_edge + inward * xi; }
    double series_c(double eta) const {
        return model == Model::Sphere4 ? -0.75 * std::sin(2 * eta) : 1.5;
    }
    double sqrtG(double eta) const {
        return model == Model::Sphere4 ? std::cos(eta) : 1.0;
    }
    double tjac(double eta) const {
        return model == Model::Sphere4 ? 1.0 : std::exp(eta);
    }
};

// eta0 is the working u1 coordinate of the foot (log rho for Ball4).
State4 launch_working(Model model, EdgeId edge, double eta0, double delta) {
    const EdgeLocal e = EdgeLocal::make(model, edge);
    const double dl = delta / e.tjac(eta0);
    const double xi = dl / e.sqrtG(eta0);
    const double c = e.series_c(eta0);
    const double e1c = c * xi / e.sqrtG(eta0);
    const double e2c = e.inward * std::sqrt(std::max(0.0, 1.0 - e1c * e1c));
    State4 y;
    y[0] = eta0 + 0.5 * c * xi * xi;
    y[1] = e.u2_of(xi);
    y[2] = std::atan2(e2c, e1c);
    y[3] = delta;
    return y;
}

// Signed exit-angle defect at a state near an edge: the e1-component of the
// reversed tangent minus the value the orthogonal series solution through
// the same foot would have.  Vanishes exactly on profiles that extend
// smoothly through the collapsed orbit.
double defect_at(const EdgeLocal& e, const State4& y, double* eta_foot, double* xi_out) {
    const double xi = e.xi(y[1]);
    double foot = y[0] - 0.5 * e.series_c(y[0]) * xi * xi;
    const double c = e.series_c(foot);
    if (eta_foot) *eta_foot = foot;
    if (xi_out) *xi_out = xi;
    return -std::cos(y[2]) - c * xi / e.sqrtG(foot);
}

enum class StopKind { EdgeApproach, MaxLength, MaxCrossings, MaxCriticals, MaxRadius, Pole };

struct StatePoint {
    double ell;
    State4 y;
};

struct RawResult {
    StopKind stop = StopKind::MaxLength;
    EdgeId edge = EdgeId::Edge1;
    double defect = 0;
    double eta_foot = 0;
    double xi_stop = 0;
    int crossings = 0;
    int criticals = 0;
    State4 ystop = State4::Zero();
    double ell_stop = 0;
    std::vector<StatePoint> states; // accepted-step states when keep_states
};

constexpr double kPoleMargin = 0.02;
constexpr double kCoastLen = 0.15;

// Curve samples are taken at accepted integrator steps, where the state
// components are mutually consistent to the integration tolerance (dense
// output interpolates components independently and would break that).
// Evaluation between samples re-integrates the flow, so a smaller step
// strictly reduces the per-step consistency jumps.
constexpr double kSampleStep = 1e-3;

struct RawOptions {
    double rtol = 1e-12;
    bool keep_states = false;
    double max_working_length = 500;
    double hmax = 0.05;
};

RawResult integrate_raw(Model model, const State4& y0, double ell0,
                        const StopSpec& stop, const RawOptions& ro) {
    WorkingDyn dyn{model};
    typename Dopri5<4, WorkingDyn>::Options oo;
    oo.rtol = ro.rtol;
    oo.atol = 0.01 * ro.rtol;
    oo.hmax = ro.keep_states ? kSampleStep : ro.hmax;
    oo.hinit = 1e-6;
    Dopri5<4, WorkingDyn> rk(dyn, ell0, y0, oo);

    const EdgeLocal edges[2] = {EdgeLocal::make(model, EdgeId::Edge1),
                                EdgeLocal::make(model, EdgeId::Edge2)};
    bool armed[2] = {edges[0].xi(y0[1]) > stop.eps_near, edges[1].xi(y0[1]) > stop.eps_near};

    RawResult rr;
    if (ro.keep_states) rr.states.push_back({ell0, y0});
    bool coasting = false;
    double coast_end = 0;
    StopKind coast_kind = StopKind::MaxCrossings;

    auto finish = [&](StopKind kind, const State4& ys, double ell) {
        rr.stop = kind;
        rr.ystop = ys;
        rr.ell_stop = ell;
        while (!rr.states.empty() && rr.states.back().ell > ell - 1e-13)
            rr.states.pop_back();
        if (ro.keep_states) rr.states.push_back({ell, ys});
    };

    const int K = 8;
    DenseStep<4> st;
    while (true) {
        rk.step(st);
        if (ro.keep_states) rr.states.push_back({rk.x(), rk.y()});
        if (st.x1() - ell0 > ro.max_working_length)
            throw BudgetError("integrate_profile: stop condition not met within budget");

        double la = st.x0;
        State4 ya = st.eval(la);
        for (int k = 1; k <= K; ++k) {
            const double lb = st.x0 + st.h * k / K;
            const State4 yb = st.eval(lb);

            if (coasting) {
                if (lb >= coast_end) {
                    finish(coast_kind, st.eval(coast_end), coast_end);
                    return rr;
                }
                la = lb;
                ya = yb;
                continue;
            }

            // hard guards, located only to subsample resolution
            if (model == Model::Sphere4 && std::abs(yb[0]) > kHalfPi - kPoleMargin) {
                finish(StopKind::Pole, yb, lb);
                return rr;
            }
            if (model == Model::Ball4 && stop.max_radius > 0 &&
                yb[0] > std::log(stop.max_radius)) {
                finish(StopKind::MaxRadius, yb, lb);
                return rr;
            }
            if (yb[3] >= stop.max_length) {
                const double lhit = bisect_event(st, [&](const State4& y) {
                    return y[3] - stop.max_length; }, la, lb);
                finish(StopKind::MaxLength, st.eval(lhit), lhit);
                return rr;
            }

            // edge proximity stop: downward crossing of eps_stop
            for (int ei = 0; ei < 2; ++ei) {
                const double xa = edges[ei].xi(ya[1]), xb = edges[ei].xi(yb[1]);
                if (stop.stop_at_edges && armed[ei] && xa > stop.eps_stop && xb <= stop.eps_stop) {
                    const double lhit = bisect_event(st, [&](const State4& y) {
                        return edges[ei].xi(y[1]) - stop.eps_stop; }, la, lb);
                    const State4 yh = st.eval(lhit);
                    double foot = 0, xs = 0;
                    const double dfc = defect_at(edges[ei], yh, &foot, &xs);
                    if (model == Model::Sphere4 && std::abs(foot) > kHalfPi - 0.05) {
                        finish(StopKind::Pole, yh, lhit);
                        return rr;
                    }
                    finish(StopKind::EdgeApproach, yh, lhit);
                    rr.edge = edges[ei].edge;
                    rr.defect = dfc;
                    rr.eta_foot = foot;
                    rr.xi_stop = xs;
                    return rr;
                }
            }

            // theta crossing (u2 = pi/4)
            if ((ya[1] - 0.25 * kPi) * (yb[1] - 0.25 * kPi) < 0) {
                ++rr.crossings;
                if (stop.max_crossings >= 0 && rr.crossings >= stop.max_crossings) {
                    const double lhit = bisect_event(st, [](const State4& y) {
                        return y[1] - 0.25 * kPi; }, la, lb);
                    coasting = true;
                    coast_end = lhit + kCoastLen;
                    coast_kind = StopKind::MaxCrossings;
                }
            }

            // theta critical (sin psi = 0); near an armed edge this is a
            // turning point and classifies the trajectory there.
            if (!coasting && std::sin(ya[2]) * std::sin(yb[2]) < 0) {
                const double lhit = bisect_event(st, [](const State4& y) {
                    return std::sin(y[2]); }, la, lb);
                const State4 yh = st.eval(lhit);
                bool turned = false;
                for (int ei = 0; ei < 2 && !turned; ++ei) {
                    if (stop.stop_at_edges && armed[ei] && edges[ei].xi(yh[1]) < stop.eps_near) {
                        double foot = 0, xs = 0;
                        const double dfc = defect_at(edges[ei], yh, &foot, &xs);
                        if (model == Model::Sphere4 && std::abs(foot) > kHalfPi - 0.05) {
                            finish(StopKind::Pole, yh, lhit);
                            return rr;
                        }
                        finish(StopKind::EdgeApproach, yh, lhit);
                        rr.edge = edges[ei].edge;
                        rr.defect = dfc;
                        rr.eta_foot = foot;
                        rr.xi_stop = xs;
                        turned = true;
                    }
                }
                if (turned) return rr;
                ++rr.criticals;
                if (stop.max_theta_criticals >= 0 && rr.criticals >= stop.max_theta_criticals) {
                    coasting = true;
                    coast_end = lhit + kCoastLen;
                    coast_kind = StopKind::MaxCriticals;
                }
            }

            for (int ei = 0; ei < 2; ++ei)
                if (!armed[ei] && edges[ei].xi(yb[1]) > stop.eps_near) armed[ei] = true;
            la = lb;
            ya = yb;
        }
    }
}

CurveSample edge_sample(Model model, EdgeId edge, double foot, double t, bool outgoing) {
    // outgoing: tangent points away from the edge (left end); otherwise into it.
    CurveSample smp;
    smp.t = t;
    const double dir = (edge == EdgeId::Edge1 ? 1.0 : -1.0) * (outgoing ? 1.0 : -1.0);
    if (model == Model::Sphere4) {
        smp.u = Vec2(foot, edge == EdgeId::Edge1 ? 0.0 : kHalfPi);
        smp.v = Vec2(0.0, dir / std::cos(foot));
    } else {
        if (edge == EdgeId::Edge1) {
            smp.u = Vec2(foot, 0.0);
            smp.v = Vec2(0.0, outgoing ? 1.0 : -1.0);
        } else {
            smp.u = Vec2(0.0, foot);
            smp.v = Vec2(outgoing ? 1.0 : -1.0, 0.0);
        }
    }
    smp.kappa = 0; // extrapolated afterwards
    return smp;
}

double quad_extrapolate(double x, const double* xs, const double* ys) {
    double r = 0;
    for (int i = 0; i < 3; ++i) {
        double li = 1;
        for (int j = 0; j < 3; ++j)
            if (j != i) li *= (x - xs[j]) / (xs[i] - xs[j]);
        r += li * ys[i];
    }
    return r;
}

ProfileCurve build_curve(Model model, const RawResult& rr, double ell0,
                         CurveEnd left, double normal_sign, const std::string& provenance) {
    (void)ell0;
    std::vector<CurveSample> smps;
    smps.reserve(rr.states.size() + 2);
    for (const StatePoint& sp : rr.states) {
        CurveSample s = sample_from_working(model, sp.y);
        if (!smps.empty() && !(s.t > smps.back().t + 1e-14)) continue;
        smps.push_back(s);
    }

    CurveEnd right;
    if (left.kind != EndKind::Free) {
        const EdgeId le = left.kind == EndKind::Edge1 ? EdgeId::Edge1 : EdgeId::Edge2;
        smps.insert(smps.begin(), edge_sample(model, le, left.foot, 0.0, true));
    }
    const bool attach_far = rr.stop == StopKind::EdgeApproach && std::abs(rr.defect) < 1e-3;
    if (rr.stop == StopKind::EdgeApproach) {
        right.kind = rr.edge == EdgeId::Edge1 ? EndKind::Edge1 : EndKind::Edge2;
        right.foot = rr.eta_foot;
        if (model == Model::Ball4) right.foot = std::exp(rr.eta_foot);
        right.incidence = kHalfPi + std::asin(std::clamp(rr.defect, -1.0, 1.0));
        if (attach_far) {
            const EdgeLocal e = EdgeLocal::make(model, rr.edge);
            const double tEnd = rr.ystop[3] + e.tjac(rr.eta_foot) * e.sqrtG(rr.eta_foot) * rr.xi_stop;
            smps.push_back(edge_sample(model, rr.edge, right.foot, tEnd, false));
        }
    } else {
        right.kind = EndKind::Free;
        right.foot = 0;
        right.incidence = 0;
    }

    // one-sided quadratic extrapolation of kappa onto collapsed endpoints
    auto fix_end_kappa = [&](bool leftend) {
        const std::size_t nn = smps.size();
        if (nn < 5) return;
        double xs[3], ys[3];
        if (leftend) {
            for (int i = 0; i < 3; ++i) { xs[i] = smps[i + 1].t; ys[i] = smps[i + 1].kappa; }
            smps.front().kappa = quad_extrapolate(smps.front().t, xs, ys);
        } else {
            for (int i = 0; i < 3; ++i) { xs[i] = smps[nn - 2 - i].t; ys[i] = smps[nn - 2 - i].kappa; }
            smps.back().kappa = quad_extrapolate(smps.back().t, xs, ys);
        }
    };
    if (left.kind != EndKind::Free) fix_end_kappa(true);
    if (attach_far) fix_end_kappa(false);

    return ProfileCurve(model, std::move(smps), left, right, normal_sign, 1.0, provenance);
}

double theta_of_chart(Model model, const Vec2& u) {
    if (model == Model::Sphere4) return u[1] - 0.25 * kPi;
    return std::atan2(u[1], u[0]) - 0.25 * kPi;
}

// quintic Hermite segment evaluation with ODE-consistent accelerations
Vec2 accel_of(Model model, const Vec2& u, const Vec2& v, double kappa) {
    if (model == Model::Sphere4) {
        const double s = u[0], cs = std::cos(s), ts = std::tan(s);
        const double cpsi = v[0], spsi = v[1] * cs;
        const double dpsi = kappa + spsi * ts;
        return Vec2(-spsi * dpsi, (cpsi * dpsi + spsi * cpsi * ts) / cs);
    }
    return kappa * Vec2(-v[1], v[0]);
}

struct Quintic {
    Vec2 y0, c1, c2, c3, c4, c5;
    Vec2 eval(double tau) const {
        return y0 + tau * (c1 + tau * (c2 + tau * (c3 + tau * (c4 + tau * c5))));
    }
    Vec2 deriv(double tau) const {
        return c1 + tau * (2 * c2 + tau * (3 * c3 + tau * (4 * c4 + tau * 5 * c5)));
    }
};

Quintic make_quintic(const Vec2& y0, const Vec2& d0, const Vec2& a0,
                     const Vec2& y1, const Vec2& d1, const Vec2& a1, double h) {
    Quintic q;
    q.y0 = y0;
    q.c1 = d0;
    q.c2 = 0.5 * a0;
    const Vec2 A = y1 - y0 - d0 * h - 0.5 * a0 * h * h;
    const Vec2 B = d1 - d0 - a0 * h;
    const Vec2 C = a1 - a0;
    const double h2 = h * h, h3 = h2 * h;
    q.c3 = (10.0 * A - 4.0 * B * h + 0.5 * C * h2) / h3;
    q.c4 = (-15.0 * A + 7.0 * B * h - C * h2) / (h3 * h);
    q.c5 = (6.0 * A - 3.0 * B * h + 0.5 * C * h2) / (h3 * h2);
    return q;
}

// chart-coordinate dynamics (u1, u2, psi) parametrized by quotient arclength
Eigen::Vector3d chart_rhs(Model model, const Eigen::Vector3d& y) {
    const double psi = y[2];
    const double cp = std::cos(psi), sp = std::sin(psi);
    if (model == Model::Sphere4) {
        const double s = y[0], a = y[1];
        const double cs = std::cos(s), ts = std::tan(s);
        const double kappa = 2.0 * sp * ts + cp * std::cos(2 * a) / (std::sin(a) * std::cos(a)) / cs;
        return {cp, sp / cs, kappa + sp * ts};
    }
    return {cp, sp, -sp / y[0] + cp / y[1]};
}

double psi_of_sample(Model model, const CurveSample& s) {
    if (model == Model::Sphere4) return std::atan2(s.v[1] * std::cos(s.u[0]), s.v[0]);
    return std::atan2(s.v[1], s.v[0]);
}

double edge_guard(Model model, const Vec2& u) {
    if (model == Model::Sphere4) return std::min(u[1], kHalfPi - u[1]);
    return std::min(u[0], u[1]);
}

// integrates the chart flow from a sample by fixed RK4 substeps; the
// substep count resolves the 1/xi stiffness near collapsed orbits
Eigen::Vector3d flow_from_sample(Model model, const CurveSample& A, double dt) {
    Eigen::Vector3d y(A.u[0], A.u[1], psi_of_sample(model, A));
    if (dt <= 0) return y;
    const double guard = std::max(edge_guard(model, A.u), 1e-12);
    const int nsub =
        std::clamp(static_cast<int>(std::ceil(std::abs(dt) / (0.03 * guard))), 4, 512);
    const double h = dt / nsub;
    for (int k = 0; k < nsub; ++k) {
        const Eigen::Vector3d k1 = chart_rhs(model, y);
        const Eigen::Vector3d k2 = chart_rhs(model, y + 0.5 * h * k1);
        const Eigen::Vector3d k3 = chart_rhs(model, y + 0.5 * h * k2);
        const Eigen::Vector3d k4 = chart_rhs(model, y + h * k3);
        y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return y;
}

template <class F>
double bisect_scalar(F&& f, double a, double b) {
    double fa = f(a);
    for (int it = 0; it < 120 && b - a > 1e-14 * std::max(1.0, std::abs(b)); ++it) {
        const double m = 0.5 * (a + b);
        const double fm = f(m);
        if ((fa <= 0) == (fm <= 0)) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    return 0.5 * (a + b);
}

} // namespace

// ---------------------------------------------------------------------------
// ProfileCurve

ProfileCurve::ProfileCurve(Model model, std::vector<CurveSample> samples, CurveEnd left,
                           CurveEnd right, double normal_sign, double scale,
                           std::string provenance)
    : model_(model), samples_(std::move(samples)), left_(left), right_(right),
      normal_sign_(normal_sign), scale_(scale), provenance_(std::move(provenance)) {
    finalize();
}

const OrbitSpace& ProfileCurve::orbit_space() const {
    static const OrbitSpace sph = OrbitSpace::sphere4();
    static const OrbitSpace bal = OrbitSpace::ball4();
    return model_ == Model::Sphere4 ? sph : bal;
}

void ProfileCurve::finalize() {
    if (samples_.size() < 4)
        throw std::invalid_argument("ProfileCurve: too few samples");
    for (std::size_t i = 1; i < samples_.size(); ++i)
        if (!(samples_[i].t > samples_[i - 1].t))
            throw std::invalid_argument("ProfileCurve: samples not strictly increasing in t");
    length_ = samples_.back().t - samples_.front().t;

    crossings_.clear();
    theta_criticals_.clear();
    const auto theta_i = [&](std::size_t i) { return theta_of_chart(model_, samples_[i].u); };
    const auto dth_i = [&](std::size_t i) {
        const auto& s = samples_[i];
        if (model_ == Model::Sphere4) return s.v[1];
        const double rr = s.u.squaredNorm();
        return (s.u[0] * s.v[1] - s.u[1] * s.v[0]) / rr;
    };
    // the end-adjacent intervals are excluded: an endpoint that is itself a
    // marker (a truncation cut, a collapsed orbit) must not alias into a
    // spurious interior event
    for (std::size_t i = 1; i + 2 < samples_.size(); ++i) {
        if (theta_i(i) * theta_i(i + 1) < 0)
            crossings_.push_back(bisect_scalar(
                [&](double t) { return theta_at(t); }, samples_[i].t, samples_[i + 1].t));
        if (dth_i(i) * dth_i(i + 1) < 0)
            theta_criticals_.push_back(bisect_scalar(
                [&](double t) { return dtheta_dt(t); }, samples_[i].t, samples_[i + 1].t));
    }
}

CurveState ProfileCurve::eval(double t) const {
    const double t0 = samples_.front().t, t1 = samples_.back().t;
    if (t < t0 - 1e-9 * std::max(1.0, length_) || t > t1 + 1e-9 * std::max(1.0, length_))
        throw std::domain_error("ProfileCurve::eval: t outside [0, L]");
    t = std::clamp(t, t0, t1);
    const auto it = std::upper_bound(samples_.begin(), samples_.end(), t,
                                     [](double x, const CurveSample& s) { return x < s.t; });
    std::size_t i = static_cast<std::size_t>(std::distance(samples_.begin(), it));
    i = std::clamp<std::size_t>(i, 1, samples_.size() - 1) - 1;

    const CurveSample& A = samples_[i];
    const CurveSample& B = samples_[i + 1];
    CurveState st;
    st.t = t;

    // the intervals touching a collapsed-orbit endpoint use the quintic
    // (the chart flow is singular there); interior evaluation re-integrates
    // the flow from the left sample, which keeps the evaluated state
    // ODE-consistent to roundoff
    const bool end_left = i == 0 && left_.kind != EndKind::Free;
    const bool end_right = i + 2 == samples_.size() && right_.kind != EndKind::Free;
    if (end_left || end_right) {
        const double h = B.t - A.t;
        const Quintic q = make_quintic(A.u, A.v, accel_of(model_, A.u, A.v, A.kappa),
                                       B.u, B.v, accel_of(model_, B.u, B.v, B.kappa), h);
        const double tau = t - A.t;
        st.u = q.eval(tau);
        Vec2 v = q.deriv(tau);
        if (model_ == Model::Sphere4) {
            const double cs = std::cos(st.u[0]);
            v /= std::sqrt(v[0] * v[0] + cs * cs * v[1] * v[1]);
            st.psi = std::atan2(v[1] * cs, v[0]);
        } else {
            v.normalize();
            st.psi = std::atan2(v[1], v[0]);
        }
        st.v = v;
        const double edge_eps = 1e-12 * std::max(1.0, length_);
        if (t - t0 < edge_eps)
            st.kappa = A.kappa;
        else if (t1 - t < edge_eps)
            st.kappa = B.kappa;
        else
            st.kappa = model_ == Model::Sphere4 ? kappa_sphere(st.u[0], st.u[1], st.psi)
                                                : kappa_ball(st.u, st.psi);
        return st;
    }

    const Eigen::Vector3d y = flow_from_sample(model_, A, t - A.t);
    st.u = Vec2(y[0], y[1]);
    st.psi = y[2];
    if (model_ == Model::Sphere4)
        st.v = Vec2(std::cos(st.psi), std::sin(st.psi) / std::cos(y[0]));
    else
        st.v = Vec2(std::cos(st.psi), std::sin(st.psi));
    st.kappa = model_ == Model::Sphere4 ? kappa_sphere(y[0], y[1], st.psi)
                                        : kappa_ball(st.u, st.psi);
    return st;
}

double ProfileCurve::max_speed_residual() const {
    // consistency of the stored samples with the arclength-parametrized
    // flow: re-integrate every interior interval and compare endpoints
    double worst = 0;
    for (std::size_t i = 1; i + 2 < samples_.size(); ++i) {
        const CurveSample& A = samples_[i];
        const CurveSample& B = samples_[i + 1];
        const Eigen::Vector3d y = flow_from_sample(model_, A, B.t - A.t);
        const double dpsi = std::remainder(y[2] - psi_of_sample(model_, B), kTwoPi);
        worst = std::max({worst, std::abs(y[0] - B.u[0]), std::abs(y[1] - B.u[1]),
                          std::abs(dpsi)});
    }
    return worst;
}

double ProfileCurve::theta_at(double t) const { return theta_of_chart(model_, eval(t).u); }

double ProfileCurve::dtheta_dt(double t) const {
    const CurveState s = eval(t);
    if (model_ == Model::Sphere4) return s.v[1];
    return (s.u[0] * s.v[1] - s.u[1] * s.v[0]) / s.u.squaredNorm();
}

double ProfileCurve::nu5(double t) const {
    if (model_ != Model::Sphere4)
        throw std::invalid_argument("nu5: Sphere4 curves only");
    const CurveState s = eval(t);
    return normal_sign_ * (-std::sin(s.psi)) * std::cos(s.u[0]);
}

double ProfileCurve::nu5_deriv(double t) const {
    if (model_ != Model::Sphere4)
        throw std::invalid_argument("nu5_deriv: Sphere4 curves only");
    const CurveState s = eval(t);
    return -normal_sign_ * s.kappa * std::cos(s.psi) * std::cos(s.u[0]);
}

double ProfileCurve::x_dot_nu(double t) const {
    if (model_ != Model::Ball4)
        throw std::invalid_argument("x_dot_nu: Ball4 curves only");
    const CurveState s = eval(t);
    return normal_sign_ * (-s.u[0] * std::sin(s.psi) + s.u[1] * std::cos(s.psi));
}

double ProfileCurve::x_dot_nu_deriv(double t) const {
    if (model_ != Model::Ball4)
        throw std::invalid_argument("x_dot_nu_deriv: Ball4 curves only");
    const CurveState s = eval(t);
    return -normal_sign_ * s.kappa *
           (s.u[0] * std::cos(s.psi) + s.u[1] * std::sin(s.psi));
}

double ProfileCurve::radius(double t) const {
    if (model_ != Model::Ball4)
        throw std::invalid_argument("radius: Ball4 curves only");
    return eval(t).u.norm();
}

// ---------------------------------------------------------------------------
// public operations

LaunchState edge_launch(const OrbitSpace& os, EdgeId edge, double u0, double delta) {
    if (!(delta > 0) || delta > 1e-3)
        throw std::invalid_argument("edge_launch: delta must lie in (0, 1e-3]");
    double eta0 = u0;
    if (os.model == Model::Sphere4) {
        if (std::abs(u0) > kHalfPi - 1e-3)
            throw std::domain_error("edge_launch: launch point at a chart corner");
    } else {
        if (u0 < 1e-6)
            throw std::domain_error("edge_launch: launch point at the chart corner (origin)");
        eta0 = std::log(u0);
    }
    const State4 y = launch_working(os.model, edge, eta0, delta);
    const CurveSample smp = sample_from_working(os.model, y);
    return LaunchState{QuotientPoint{smp.u[0], smp.u[1]}, smp.v};
}

ProfileInit launch_init(const OrbitSpace& os, EdgeId edge, double u0, double delta) {
    const LaunchState ls = edge_launch(os, edge, u0, delta);
    ProfileInit init;
    init.p = ls.p;
    init.tau = ls.tau;
    init.t0 = delta;
    init.launch_edge = edge;
    init.launch_foot = u0;
    return init;
}

namespace {

State4 working_from_init(Model model, const ProfileInit& init) {
    State4 y;
    if (model == Model::Sphere4) {
        const double cs = std::cos(init.p.u1);
        const double len = std::sqrt(init.tau[0] * init.tau[0] +
                                     cs * cs * init.tau[1] * init.tau[1]);
        y[0] = init.p.u1;
        y[1] = init.p.u2;
        y[2] = std::atan2(init.tau[1] * cs / len, init.tau[0] / len);
    } else {
        const double R = std::hypot(init.p.u1, init.p.u2);
        const double al = std::atan2(init.p.u2, init.p.u1);
        const double psi = std::atan2(init.tau[1], init.tau[0]);
        y[0] = std::log(R);
        y[1] = al;
        y[2] = psi - al;
    }
    y[3] = init.t0;
    return y;
}

} // namespace

ProfileCurve integrate_profile(const OrbitSpace& os, const ProfileInit& init,
                               const StopSpec& stop, double rtol) {
    const State4 y0 = working_from_init(os.model, init);
    double ell0 = 0;
    if (os.model == Model::Sphere4) ell0 = init.t0;
    RawOptions ro;
    ro.rtol = rtol;
    ro.keep_states = true;
    RawResult rr = integrate_raw(os.model, y0, ell0, stop, ro);
    if (rr.stop == StopKind::Pole)
        throw SingularityError("integrate_profile: trajectory entered the pole "
                               "neighborhood, where the chart degenerates");

    CurveEnd left;
    if (init.launch_edge) {
        left.kind = *init.launch_edge == EdgeId::Edge1 ? EndKind::Edge1 : EndKind::Edge2;
        left.foot = init.launch_foot;
        left.incidence = kHalfPi;
    }
    return build_curve(os.model, rr, ell0, left, 1.0, "integrate_profile");
}

// ---------------------------------------------------------------------------
// Hsiang shooting

namespace {

struct Classified {
    StopKind stop;
    EdgeId edge = EdgeId::Edge1;
    int crossings = 0;
    double defect = 0;
    bool usable() const { return stop == StopKind::EdgeApproach; }
    bool same_cell(const Classified& o) const {
        return usable() && o.usable() && edge == o.edge && crossings == o.crossings;
    }
};

Classified classify_shot(double s0, int m, double rtol, const ShootOptions& opts,
                         bool fine_steps = false) {
    StopSpec stop;
    stop.max_length = 20.0 + 6.0 * m;
    stop.max_crossings = m + 3;
    RawOptions ro;
    ro.rtol = rtol;
    ro.max_working_length = stop.max_length + 5;
    if (fine_steps) ro.hmax = kSampleStep;
    Classified c;
    try {
        const State4 y0 = launch_working(Model::Sphere4, EdgeId::Edge1, s0, opts.launch_delta);
        const RawResult rr = integrate_raw(Model::Sphere4, y0, opts.launch_delta, stop, ro);
        c.stop = rr.stop;
        c.edge = rr.edge;
        c.crossings = rr.crossings;
        c.defect = rr.defect;
    } catch (const SingularityError&) {
        c.stop = StopKind::Pole;
    } catch (const BudgetError&) {
        c.stop = StopKind::MaxLength;
    }
    return c;
}

double bisect_shot(double a, double b, Classified ca, int m, double rtol,
                   const ShootOptions& opts, bool fine_steps = false) {
    for (int it = 0; it < 80 && b - a > 4e-16 * std::max(1.0, std::abs(a)); ++it) {
        const double mid = 0.5 * (a + b);
        const Classified cm = classify_shot(mid, m, rtol, opts, fine_steps);
        if (cm.same_cell(ca) && (cm.defect <= 0) == (ca.defect <= 0)) {
            a = mid;
            ca = cm;
        } else {
            b = mid;
        }
    }
    return 0.5 * (a + b);
}

} // namespace

HsiangShot shoot_hsiang(int m, const ShootOptions& opts) {
    if (m < 1) throw std::invalid_argument("shoot_hsiang: m must be >= 1");

    std::vector<double> candidates;
    std::string trace;
    int npts = opts.scan_points;
    for (int attempt = 0; attempt < 3 && candidates.empty(); ++attempt, npts *= 3) {
        const double lo = -kHalfPi + 0.01, hi = kHalfPi - 0.01;
        std::vector<double> grid(npts);
        std::vector<Classified> cls(npts);
        for (int i = 0; i < npts; ++i) {
            grid[i] = lo + (hi - lo) * i / (npts - 1);
            cls[i] = classify_shot(grid[i], m, opts.scan_tol, opts);
            if (attempt == 2) {
                char buf[128];
                std::snprintf(buf, sizeof buf, "s0=%.6f stop=%d edge=%d cross=%d defect=%.3e\n",
                              grid[i], static_cast<int>(cls[i].stop),
                              static_cast<int>(cls[i].edge), cls[i].crossings, cls[i].defect);
                trace += buf;
            }
        }
        for (int i = 0; i + 1 < npts; ++i) {
            if (!cls[i].same_cell(cls[i + 1])) continue;
            if (cls[i].crossings != m) continue;
            if ((cls[i].defect <= 0) == (cls[i + 1].defect <= 0)) continue;
            const double s0 = bisect_shot(grid[i], grid[i + 1], cls[i], m, opts.scan_tol, opts);
            candidates.push_back(s0);
        }
    }
    if (candidates.empty())
        throw NotFoundError("shoot_hsiang: no shooting bracket found for m=" + std::to_string(m),
                            trace);

    // dedupe mirror/duplicate solutions, canonical pick: smallest |s0|,
    // preferring the positive representative
    std::sort(candidates.begin(), candidates.end(), [](double x, double y) {
        if (std::abs(std::abs(x) - std::abs(y)) > 1e-7) return std::abs(x) < std::abs(y);
        return x > y;
    });
    std::vector<double> distinct;
    for (double c : candidates) {
        bool dup = false;
        for (double d : distinct)
            if (std::abs(std::abs(c) - std::abs(d)) < 1e-6) dup = true;
        if (!dup) distinct.push_back(c);
    }
    if (distinct.size() > 1)
        std::fprintf(stderr,
                     "shoot_hsiang: warning: %zu distinct launch positions give m=%d; "
                     "keeping s0=%.12f\n",
                     distinct.size(), m, distinct[0]);

    // refine the canonical candidate at a tenth of the target tolerance,
    // with the same step cap as the final dense solve so the kept
    // trajectory is consistent with the refined launch position
    const double fine_tol = 0.1 * opts.tol;
    double s0 = distinct[0];
    {
        double w = 1e-6;
        Classified ca, cb;
        double a = 0, b = 0;
        for (int grow = 0; grow < 6; ++grow, w *= 8) {
            a = s0 - w;
            b = s0 + w;
            ca = classify_shot(a, m, fine_tol, opts, true);
            cb = classify_shot(b, m, fine_tol, opts, true);
            if (ca.same_cell(cb) && (ca.defect <= 0) != (cb.defect <= 0)) break;
        }
        if (ca.same_cell(cb) && (ca.defect <= 0) != (cb.defect <= 0))
            s0 = bisect_shot(a, b, ca, m, fine_tol, opts, true);
    }

    // final integration with sample collection
    StopSpec stop;
    stop.max_length = 20.0 + 6.0 * m;
    stop.max_crossings = m + 3;
    RawOptions ro;
    ro.rtol = fine_tol;
    ro.keep_states = true;
    ro.max_working_length = stop.max_length + 5;
    const State4 y0 = launch_working(Model::Sphere4, EdgeId::Edge1, s0, opts.launch_delta);
    const RawResult rr = integrate_raw(Model::Sphere4, y0, opts.launch_delta, stop, ro);
    if (rr.stop != StopKind::EdgeApproach || std::abs(rr.defect) > opts.ortho_tol)
        throw std::runtime_error("shoot_hsiang: refined trajectory failed the orthogonality "
                                 "tolerance for m=" + std::to_string(m));

    CurveEnd left{EndKind::Edge1, s0, kHalfPi};
    char prov[64];
    std::snprintf(prov, sizeof prov, "hsiang m=%d", m);
    ProfileCurve curve = build_curve(Model::Sphere4, rr, opts.launch_delta, left, 1.0, prov);

    // fix the normal sign: nu5 > 0 on the launch-side nodal interval
    const double tprobe = std::min(0.25 * curve.length(), 0.5 * curve.length() / (2.0 * m));
    const double raw = curve.nu5(tprobe);
    ProfileCurve signed_curve(curve.model(), curve.samples(), curve.left(), curve.right(),
                              raw < 0 ? -1.0 : 1.0, 1.0, prov);

    const int ncross = static_cast<int>(signed_curve.crossings().size());
    if (ncross != m)
        throw std::runtime_error("shoot_hsiang: crossing count mismatch after refinement");
    const EndKind expect_far = m % 2 == 1 ? EndKind::Edge2 : EndKind::Edge1;
    if (signed_curve.right().kind != expect_far)
        throw std::runtime_error("shoot_hsiang: far-edge parity mismatch");

    HsiangShot shot{std::move(signed_curve), s0, rr.defect, distinct};
    return shot;
}

ProfileCurve solve_alencar(int max_criticals, const ShootOptions& opts) {
    if (max_criticals < 1)
        throw std::invalid_argument("solve_alencar: max_criticals must be >= 1");
    StopSpec stop;
    stop.max_length = 1e9;
    stop.max_theta_criticals = max_criticals;
    RawOptions ro;
    ro.rtol = 0.1 * opts.tol;
    ro.keep_states = true;
    ro.max_working_length = 8.0 + 3.0 * max_criticals;
    const State4 y0 = launch_working(Model::Ball4, EdgeId::Edge1, 0.0, opts.launch_delta);
    const RawResult rr = integrate_raw(Model::Ball4, y0, opts.launch_delta, stop, ro);
    if (rr.stop != StopKind::MaxCriticals)
        throw BudgetError("solve_alencar: budget exceeded before reaching max_criticals");

    CurveEnd left{EndKind::Edge1, 1.0, kHalfPi};
    char prov[64];
    std::snprintf(prov, sizeof prov, "alencar k=%d", max_criticals);
    ProfileCurve curve = build_curve(Model::Ball4, rr, opts.launch_delta, left, 1.0, prov);
    const double raw = curve.x_dot_nu(std::min(0.3, 0.2 * curve.length()));
    ProfileCurve signed_curve(curve.model(), curve.samples(), curve.left(), curve.right(),
                              raw < 0 ? -1.0 : 1.0, 1.0, prov);

    // |x| must be strictly increasing along the curve
    const auto& smp = signed_curve.samples();
    for (std::size_t i = 1; i < smp.size(); ++i)
        if (!(smp[i].u.norm() > smp[i - 1].u.norm()))
            throw std::runtime_error("solve_alencar: |x| failed to increase monotonically");
    return signed_curve;
}

namespace {

// Sign-walk zero finder, robust to values landing exactly on zero at the
// scan points (symmetric configurations do hit this).
template <class F>
std::vector<double> scan_zeros(F&& f, double a, double b, int K) {
    std::vector<double> xs(K + 1), fv(K + 1);
    double scale = 0;
    for (int k = 0; k <= K; ++k) {
        xs[k] = a + (b - a) * k / K;
        fv[k] = f(xs[k]);
        scale = std::max(scale, std::abs(fv[k]));
    }
    const double tiny = 1e-9 * scale;
    std::vector<double> out;
    int last_sign = 0;
    int last_k = 0;
    for (int k = 0; k <= K; ++k) {
        const int s = fv[k] > tiny ? 1 : fv[k] < -tiny ? -1 : 0;
        if (s == 0) continue;
        if (last_sign != 0 && s != last_sign) {
            if (fv[last_k] * fv[k] < 0)
                out.push_back(bisect_scalar(f, xs[last_k], xs[k]));
            else
                out.push_back(0.5 * (xs[last_k] + xs[k]));
        }
        last_sign = s;
        last_k = k;
    }
    return out;
}

} // namespace

NodalData find_markers(const ProfileCurve& curve) {
    if (curve.model() != Model::Sphere4)
        throw std::invalid_argument("find_markers: Sphere4 curves only");
    NodalData nd;
    nd.crossings = curve.crossings();

    const auto& smp = curve.samples();
    for (std::size_t i = 1; i + 2 < smp.size(); ++i) {
        const double a = curve.nu5(smp[i].t), b = curve.nu5(smp[i + 1].t);
        if (a == 0.0)
            nd.zeros.push_back(smp[i].t);
        else if (a * b < 0)
            nd.zeros.push_back(bisect_scalar([&](double t) { return curve.nu5(t); },
                                             smp[i].t, smp[i + 1].t));
    }

    // wide central differences: the zero-location truncation is O(hfd^2)
    // while evaluation noise enters as 1/hfd, so hfd ~ 1e-5 locates the
    // critical points to ~1e-10
    const double L = curve.length();
    const double hfd = 1e-5 * std::max(1.0, L);
    const auto dnu5 = [&](double t) {
        return (curve.nu5(t + hfd) - curve.nu5(t - hfd)) / (2 * hfd);
    };
    for (std::size_t i = 0; i + 1 < nd.zeros.size(); ++i) {
        const std::vector<double> found =
            scan_zeros(dnu5, nd.zeros[i] + 4 * hfd, nd.zeros[i + 1] - 4 * hfd, 64);
        if (found.size() != 1)
            throw std::runtime_error("find_markers: nu5 extremum count between zeros is not 1 "
                                     "(integration tolerance too loose?)");
        nd.criticals.push_back(found[0]);
    }

    // strict interlacing: c1 < s1 < c2 < ... < s_{m-1} < c_m and s_i < t_i < s_{i+1}
    if (nd.crossings.size() != nd.zeros.size() + 1 && !(nd.zeros.empty() && nd.crossings.size() <= 1))
        throw std::runtime_error("find_markers: crossing/zero count mismatch");
    for (std::size_t i = 0; i < nd.zeros.size(); ++i)
        if (!(nd.crossings[i] < nd.zeros[i] && nd.zeros[i] < nd.crossings[i + 1]))
            throw std::runtime_error("find_markers: interlacing violated");
    for (std::size_t i = 0; i < nd.criticals.size(); ++i)
        if (!(nd.zeros[i] < nd.criticals[i] && nd.criticals[i] < nd.zeros[i + 1]))
            throw std::runtime_error("find_markers: critical interlacing violated");
    return nd;
}

std::vector<double> marker_radii(const ProfileCurve& curve) {
    if (curve.model() != Model::Ball4)
        throw std::invalid_argument("marker_radii: Ball4 curves only");
    std::vector<double> r;
    for (double t : curve.theta_criticals()) r.push_back(curve.radius(t));
    for (std::size_t i = 1; i < r.size(); ++i)
        if (!(r[i] > r[i - 1]))
            throw std::runtime_error("marker_radii: radii not strictly increasing");
    return r;
}

ProfileCurve truncate_rescale(const ProfileCurve& curve, int ell, bool rescale) {
    if (curve.model() != Model::Ball4)
        throw std::invalid_argument("truncate_rescale: Ball4 curves only");
    const auto& crit = curve.theta_criticals();
    if (ell < 1 || static_cast<std::size_t>(ell) > crit.size())
        throw std::invalid_argument("truncate_rescale: curve has fewer theta-critical points "
                                    "than requested ell");
    const double tcut = crit[ell - 1];
    const CurveState cut = curve.eval(tcut);
    const double r = cut.u.norm();
    const double f = rescale ? 1.0 / r : 1.0;

    std::vector<CurveSample> smps;
    for (const CurveSample& s : curve.samples()) {
        if (s.t >= tcut - 1e-12 * curve.length()) break;
        smps.push_back(CurveSample{s.t * f, s.u * f, s.v, s.kappa / f});
    }
    // avoid a sliver interval before the cut sample: short intervals amplify
    // node-level data noise quadratically in the interpolant
    while (smps.size() > 4) {
        const double gap = smps.back().t - smps[smps.size() - 2].t;
        if (tcut * f - smps.back().t >= 0.5 * gap) break;
        smps.pop_back();
    }
    smps.push_back(CurveSample{tcut * f, cut.u * f, cut.v, cut.kappa / f});

    CurveEnd left = curve.left();
    left.foot *= f;
    CurveEnd right;
    right.kind = EndKind::Free;
    right.foot = tcut * f;
    // angle between the tangent and the radial direction, via the cross
    // product (the acos form is a roundoff floor near zero angle)
    const double cross = cut.u[0] * cut.v[1] - cut.u[1] * cut.v[0];
    right.incidence = std::asin(std::clamp(std::abs(cross) / r, 0.0, 1.0));

    char prov[96];
    std::snprintf(prov, sizeof prov, "fbms ell=%d r_ell=%.17g%s", ell, r,
                  rescale ? "" : " unscaled");
    return ProfileCurve(curve.model(), std::move(smps), left, right, curve.normal_sign(),
                        rescale ? 1.0 / r : 1.0, prov);
}

// ---------------------------------------------------------------------------
// CSV

void ProfileCurve::write_csv(const std::string& path, bool metadata) const {
    std::FILE* f = std::fopen(path.c_str(), "w");
    if (!f) throw std::runtime_error("write_csv: cannot open " + path);
    if (metadata) {
        const auto endname = [](const CurveEnd& e) {
            return e.kind == EndKind::Edge1 ? "edge1" : e.kind == EndKind::Edge2 ? "edge2" : "free";
        };
        std::fprintf(f, "# eqvidx-curve v1 model=%s normal_sign=%.17g scale=%.17g "
                        "left=%s:%.17g:%.17g right=%s:%.17g:%.17g provenance=%s\n",
                     model_ == Model::Sphere4 ? "sphere4" : "ball4", normal_sign_, scale_,
                     endname(left_), left_.foot, left_.incidence, endname(right_), right_.foot,
                     right_.incidence, provenance_.c_str());
    }
    std::fprintf(f, "t,u1,u2,tau1,tau2,kappa\n");
    for (const CurveSample& s : samples_)
        std::fprintf(f, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", s.t, s.u[0], s.u[1], s.v[0],
                     s.v[1], s.kappa);
    std::fclose(f);
}

ProfileCurve ProfileCurve::read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("read_csv: cannot open " + path);
    std::string line;
    if (!std::getline(in, line) || line.rfind("# eqvidx-curve v1 ", 0) != 0)
        throw std::runtime_error("read_csv: missing or unsupported curve metadata header");

    Model model = Model::Sphere4;
    double normal_sign = 1, scale = 1;
    CurveEnd left, right;
    std::string provenance;
    {
        std::istringstream ss(line.substr(std::strlen("# eqvidx-curve v1 ")));
        std::string tok;
        const auto parse_end = [](const std::string& v, CurveEnd& e) {
            std::string kind = v.substr(0, v.find(':'));
            e.kind = kind == "edge1" ? EndKind::Edge1 : kind == "edge2" ? EndKind::Edge2 : EndKind::Free;
            std::sscanf(v.c_str() + kind.size(), ":%lf:%lf", &e.foot, &e.incidence);
        };
        while (ss >> tok) {
            const auto eq = tok.find('=');
            if (eq == std::string::npos) continue;
            const std::string key = tok.substr(0, eq), val = tok.substr(eq + 1);
            if (key == "model") model = val == "ball4" ? Model::Ball4 : Model::Sphere4;
            else if (key == "normal_sign") normal_sign = std::stod(val);
            else if (key == "scale") scale = std::stod(val);
            else if (key == "left") parse_end(val, left);
            else if (key == "right") parse_end(val, right);
            else if (key == "provenance") {
                provenance = val;
                std::string rest;
                if (std::getline(ss, rest)) provenance += rest;
            }
        }
    }
    if (!std::getline(in, line) || line != "t,u1,u2,tau1,tau2,kappa")
        throw std::runtime_error("read_csv: bad column header");

    std::vector<CurveSample> smps;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        CurveSample s;
        if (std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf,%lf,%lf", &s.t, &s.u[0], &s.u[1],
                        &s.v[0], &s.v[1], &s.kappa) != 6)
            throw std::runtime_error("read_csv: bad sample row");
        smps.push_back(s);
    }
    return ProfileCurve(model, std::move(smps), left, right, normal_sign, scale, provenance);
}

} // namespace eqvidx
