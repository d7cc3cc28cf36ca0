#pragma once

#include "eqvidx/orbit_models.hpp"

#include <optional>
#include <string>
#include <vector>

namespace eqvidx {

/// One arclength sample of a profile curve: chart position, coordinate
/// velocity du/dt (unit speed in the quotient metric) and geodesic
/// curvature with respect to n = +pi/2 rotation of the tangent.
struct CurveSample {
    double t = 0;
    Vec2 u = Vec2::Zero();
    Vec2 v = Vec2::Zero();
    double kappa = 0;
};

struct CurveState {
    double t = 0;
    Vec2 u = Vec2::Zero();
    Vec2 v = Vec2::Zero();
    double psi = 0; // tangent angle in the orthonormal chart frame
    double kappa = 0;
};

enum class EndKind { Edge1, Edge2, Free };

struct CurveEnd {
    EndKind kind = EndKind::Free;
    double foot = 0;      // edge coordinate of the collapsed circle (edge ends)
    double incidence = 0; // angle with the edge; pi/2 means orthogonal
};

/// Arclength-sampled geodesic of the volume-weighted quotient metric.
/// Between samples the curve is evaluated by quintic Hermite interpolation
/// (positions, velocities and ODE-consistent accelerations at the nodes).
class ProfileCurve {
public:
    ProfileCurve() = default;
    ProfileCurve(Model model, std::vector<CurveSample> samples, CurveEnd left,
                 CurveEnd right, double normal_sign, double scale,
                 std::string provenance);

    Model model() const { return model_; }
    const OrbitSpace& orbit_space() const;
    double length() const { return length_; }
    const std::vector<CurveSample>& samples() const { return samples_; }
    const CurveEnd& left() const { return left_; }
    const CurveEnd& right() const { return right_; }
    double normal_sign() const { return normal_sign_; }
    /// 1/r_ell for truncated-rescaled curves, 1 otherwise.
    double scale() const { return scale_; }
    const std::string& provenance() const { return provenance_; }

    CurveState eval(double t) const;

    double theta_at(double t) const;
    double dtheta_dt(double t) const;
    /// Fifth normal component (Sphere4) with the curve's sign convention.
    double nu5(double t) const;
    /// d(nu5)/dt; the frame terms cancel, leaving -kappa cos(psi) cos(s).
    double nu5_deriv(double t) const;
    /// <x, nu> (Ball4) with the curve's sign convention.
    double x_dot_nu(double t) const;
    /// d<x,nu>/dt = -kappa <x, tau>.
    double x_dot_nu_deriv(double t) const;
    /// |x| (Ball4).
    double radius(double t) const;

    /// Arclengths of theta zero crossings / theta critical points,
    /// recomputed deterministically from the stored samples.
    const std::vector<double>& crossings() const { return crossings_; }
    const std::vector<double>& theta_criticals() const { return theta_criticals_; }

    bool left_collapsed() const { return left_.kind != EndKind::Free; }
    bool right_collapsed() const { return right_.kind != EndKind::Free; }

    /// Largest deviation of the raw interpolant speed from 1, probed at the
    /// midpoints of all sample intervals.
    double max_speed_residual() const;

    /// CSV export: header t,u1,u2,tau1,tau2,kappa. `metadata` adds the
    /// leading schema line used by cache files.
    void write_csv(const std::string& path, bool metadata) const;
    static ProfileCurve read_csv(const std::string& path);

private:
    void finalize();

    Model model_ = Model::Sphere4;
    std::vector<CurveSample> samples_;
    CurveEnd left_, right_;
    double normal_sign_ = 1;
    double scale_ = 1;
    std::string provenance_;
    double length_ = 0;
    std::vector<double> crossings_, theta_criticals_;
};

struct LaunchState {
    QuotientPoint p;
    Vec2 tau = Vec2::Zero(); // chart velocity, unit in the quotient metric
};

/// Second-order series initialization of the profile launched orthogonally
/// off an edge, evaluated at quotient arclength delta from the edge.
/// Preconditions: 0 < delta <= 1e-3, u0 strictly inside the edge.
LaunchState edge_launch(const OrbitSpace& os, EdgeId edge, double u0, double delta);

struct ProfileInit {
    QuotientPoint p;
    Vec2 tau = Vec2::Zero();
    double t0 = 0;
    std::optional<EdgeId> launch_edge; // set when produced by edge_launch
    double launch_foot = 0;
};

ProfileInit launch_init(const OrbitSpace& os, EdgeId edge, double u0, double delta);

struct StopSpec {
    double max_length = 50;       // quotient arclength budget (normal stop)
    int max_crossings = -1;       // stop after this many theta zeros
    int max_theta_criticals = -1; // stop after this many theta criticals
    bool stop_at_edges = true;
    double max_radius = -1;       // Ball4 only
    double eps_stop = 1e-4;       // transverse distance of the edge-approach stop
    double eps_near = 0.02;       // gate for near-edge turning events
};

ProfileCurve integrate_profile(const OrbitSpace& os, const ProfileInit& init,
                               const StopSpec& stop, double rtol = 1e-12);

struct ShootOptions {
    double tol = 1e-12;      // final integration tolerance
    double scan_tol = 1e-9;  // classification tolerance
    int scan_points = 200;
    double ortho_tol = 1e-8; // required endpoint orthogonality (radians)
    double launch_delta = 1e-4;
};

struct HsiangShot {
    ProfileCurve curve;
    double s0 = 0;     // launch coordinate on edge1
    double defect = 0; // residual exit-angle defect
    std::vector<double> candidates; // all launch coordinates found for this m
};

/// Shoots for Hsiang's H_m: scans launch positions on edge1, brackets sign
/// changes of the exit-angle defect at fixed crossing count, bisects, and
/// returns the solution with smallest |s0|.
HsiangShot shoot_hsiang(int m, const ShootOptions& opts = {});

/// Integrates the Alencar profile from the circular orbit at rho1 = 1 until
/// max_criticals theta-critical points have been located.
ProfileCurve solve_alencar(int max_criticals, const ShootOptions& opts = {});

struct NodalData {
    std::vector<double> crossings; // c_{m,j}, j = 1..m
    std::vector<double> zeros;     // s_{m,i}, i = 1..m-1 (nu5 zeros)
    std::vector<double> criticals; // t_{m,i}, i = 1..m-2 (dnu5/dt zeros)
};

/// Marker extraction for Sphere4 curves, with the interlacing check
/// c1 < s1 < c2 < ... and s_i < t_i < s_{i+1}.
NodalData find_markers(const ProfileCurve& curve);

/// |x| at the theta-critical points of a Ball4 curve (strictly increasing).
std::vector<double> marker_radii(const ProfileCurve& curve);

/// Truncates an Alencar curve at the ell-th theta-critical point and, when
/// `rescale`, maps it by 1/r_ell so the free end lies on the unit sphere.
ProfileCurve truncate_rescale(const ProfileCurve& curve, int ell, bool rescale = true);

} // namespace eqvidx
