#include "eqvidx/jacobi_reduce.hpp"

#include <cmath>

namespace eqvidx {
namespace {

SecondFundamental second_fundamental_interior(const ProfileCurve& curve, double t) {
    const CurveState st = curve.eval(t);
    const double ns = curve.normal_sign();
    const double sp = std::sin(st.psi), cp = std::cos(st.psi);
    SecondFundamental sf;
    sf.kappa = ns * st.kappa;
    if (curve.model() == Model::Sphere4) {
        const double s = st.u[0], a = st.u[1];
        const double ts = std::tan(s), cs = std::cos(s);
        sf.h1 = -ns * (sp * ts - cp * std::tan(a) / cs);
        sf.h2 = -ns * (sp * ts + cp / (std::tan(a) * cs));
    } else {
        sf.h1 = -ns * (-sp / st.u[0]);
        sf.h2 = -ns * (cp / st.u[1]);
    }
    return sf;
}

} // namespace

SecondFundamental second_fundamental(const ProfileCurve& curve, double t) {
    const double L = curve.length();
    const double eps = 1e-9 * std::max(1.0, L);
    const bool at_left = t - 0.0 < eps && curve.left_collapsed();
    const bool at_right = L - t < eps && curve.right_collapsed();
    if (!at_left && !at_right) return second_fundamental_interior(curve, t);

    // one-sided quadratic extrapolation of the continuous limit
    const double h = 1e-6 * std::max(1.0, L);
    const double base = at_left ? 0.0 : L;
    const double dir = at_left ? 1.0 : -1.0;
    double xs[3];
    SecondFundamental f[3];
    for (int i = 0; i < 3; ++i) {
        xs[i] = base + dir * h * (i + 1);
        f[i] = second_fundamental_interior(curve, xs[i]);
    }
    SecondFundamental out;
    for (int i = 0; i < 3; ++i) {
        double li = 1;
        for (int j = 0; j < 3; ++j)
            if (j != i) li *= (t - xs[j]) / (xs[i] - xs[j]);
        out.kappa += li * f[i].kappa;
        out.h1 += li * f[i].h1;
        out.h2 += li * f[i].h2;
    }
    return out;
}

ReducedOperator make_operator(double t_lo, double t_hi, std::function<double(double)> V,
                              std::function<double(double)> q, Bc left, Bc right,
                              std::string provenance, int grid_n) {
    ReducedOperator op;
    op.t_lo = t_lo;
    op.t_hi = t_hi;
    op.V = std::move(V);
    op.q = std::move(q);
    op.left = left;
    op.right = right;
    op.provenance = std::move(provenance);
    op.grid = Vec::LinSpaced(grid_n + 1, t_lo, t_hi);
    op.V_samples.resize(grid_n + 1);
    op.q_samples.resize(grid_n + 1);
    for (int i = 0; i <= grid_n; ++i) {
        op.V_samples[i] = op.V(op.grid[i]);
        op.q_samples[i] = op.q(op.grid[i]);
    }
    return op;
}

ReducedOperator reduce_jacobi(const ProfileCurve& curve, const BcSpec& spec, int grid_n) {
    const auto check_end = [](bool collapsed, const std::optional<Bc>& bc, const char* side) {
        if (collapsed && bc && bc->kind != BcKind::Natural)
            throw std::invalid_argument(std::string("reduce_jacobi: ") + side +
                                        " end is a collapsed orbit; only the natural "
                                        "condition is admissible there");
    };
    check_end(curve.left_collapsed(), spec.left, "left");
    check_end(curve.right_collapsed(), spec.right, "right");

    auto shared = std::make_shared<ProfileCurve>(curve);
    const OrbitSpace os = shared->orbit_space();
    const double ric = os.ambient_ricci();

    auto Vf = [shared, os](double t) {
        const CurveState st = shared->eval(t);
        return kFourPiSq * radius1(os, QuotientPoint{st.u[0], st.u[1]}) *
               radius2(os, QuotientPoint{st.u[0], st.u[1]});
    };
    auto qf = [shared, ric](double t) {
        return second_fundamental(*shared, t).a_norm2() + ric;
    };

    Bc left = curve.left_collapsed() ? Bc::natural() : spec.left.value_or(Bc::neumann());
    Bc right = curve.right_collapsed() ? Bc::natural() : spec.right.value_or(Bc::neumann());

    return make_operator(0.0, curve.length(), Vf, qf, left, right,
                         "reduced|" + curve.provenance(), grid_n);
}

std::function<double(double)> known_field(const ProfileCurve& curve, FieldTag tag) {
    if (tag == FieldTag::Nu5 && curve.model() != Model::Sphere4)
        throw std::invalid_argument("known_field: Nu5 requires a Sphere4 curve");
    if (tag == FieldTag::XDotNu && curve.model() != Model::Ball4)
        throw std::invalid_argument("known_field: XDotNu requires a Ball4 curve");
    auto shared = std::make_shared<ProfileCurve>(curve);
    if (tag == FieldTag::Nu5)
        return [shared](double t) { return shared->nu5(t); };
    return [shared](double t) { return shared->x_dot_nu(t); };
}

std::function<double(double)> known_field_deriv(const ProfileCurve& curve, FieldTag tag) {
    if (tag == FieldTag::Nu5 && curve.model() != Model::Sphere4)
        throw std::invalid_argument("known_field_deriv: Nu5 requires a Sphere4 curve");
    if (tag == FieldTag::XDotNu && curve.model() != Model::Ball4)
        throw std::invalid_argument("known_field_deriv: XDotNu requires a Ball4 curve");
    auto shared = std::make_shared<ProfileCurve>(curve);
    if (tag == FieldTag::Nu5)
        return [shared](double t) { return shared->nu5_deriv(t); };
    return [shared](double t) { return shared->x_dot_nu_deriv(t); };
}

} // namespace eqvidx
