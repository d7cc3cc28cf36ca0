#pragma once

#include "eqvidx/types.hpp"

#include <array>
#include <cmath>
#include <functional>

namespace eqvidx {

/// One accepted step of the Dormand-Prince 5(4) scheme together with the
/// coefficients of its fourth-order continuous extension.
template <int N>
struct DenseStep {
    double x0 = 0, h = 0;
    std::array<StateN<N>, 5> rcont{};

    double x1() const { return x0 + h; }

    StateN<N> eval(double x) const {
        const double th = (x - x0) / h;
        const double th1 = 1.0 - th;
        return rcont[0] +
               th * (rcont[1] + th1 * (rcont[2] + th * (rcont[3] + th1 * rcont[4])));
    }
};

/// Adaptive embedded Runge-Kutta (Dormand-Prince 5(4), FSAL) with dense
/// output.  The independent variable only increases.
template <int N, class Rhs>
class Dopri5 {
public:
    using State = StateN<N>;

    struct Options {
        double rtol = 1e-12;
        double atol = 1e-14;
        double hmax = 0.1;
        double hinit = 1e-6;
        long max_steps = 4000000;
    };

    Dopri5(Rhs f, double x0, const State& y0, Options opt)
        : f_(std::move(f)), opt_(opt), x_(x0), y_(y0) {
        k1_ = f_(x_, y_);
        h_ = std::min(opt_.hinit, opt_.hmax);
    }

    double x() const { return x_; }
    const State& y() const { return y_; }
    long steps_taken() const { return nstep_; }

    /// Advances by one accepted step and fills `out` with its dense data.
    void step(DenseStep<N>& out) {
        while (true) {
            if (++nstep_ > opt_.max_steps)
                throw BudgetError("ode: step budget exceeded");
            if (h_ < 1e-14 * std::max(1.0, std::abs(x_)))
                throw SingularityError("ode: step-size underflow at x=" + std::to_string(x_));
            h_ = std::min(h_, opt_.hmax);

            const double h = h_;
            const State k2 = f_(x_ + c2 * h, y_ + h * (a21 * k1_));
            const State k3 = f_(x_ + c3 * h, y_ + h * (a31 * k1_ + a32 * k2));
            const State k4 = f_(x_ + c4 * h, y_ + h * (a41 * k1_ + a42 * k2 + a43 * k3));
            const State k5 = f_(x_ + c5 * h, y_ + h * (a51 * k1_ + a52 * k2 + a53 * k3 + a54 * k4));
            const State k6 = f_(x_ + h, y_ + h * (a61 * k1_ + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
            const State y1 = y_ + h * (a71 * k1_ + a73 * k3 + a74 * k4 + a75 * k5 + a76 * k6);
            const State k7 = f_(x_ + h, y1);

            const State err_v = h * (e1 * k1_ + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
            double err = 0;
            for (int i = 0; i < N; ++i) {
                const double sk = opt_.atol + opt_.rtol * std::max(std::abs(y_[i]), std::abs(y1[i]));
                const double r = err_v[i] / sk;
                err += r * r;
            }
            err = std::sqrt(err / N);
            if (!std::isfinite(err)) err = 1e10;

            const double fac = std::clamp(0.9 * std::pow(std::max(err, 1e-30), -0.2),
                                          0.2, rejected_ ? 1.0 : 6.0);
            if (err <= 1.0) {
                out.x0 = x_;
                out.h = h;
                const State ydiff = y1 - y_;
                const State bspl = h * k1_ - ydiff;
                out.rcont[0] = y_;
                out.rcont[1] = ydiff;
                out.rcont[2] = bspl;
                out.rcont[3] = ydiff - h * k7 - bspl;
                out.rcont[4] = h * (d1 * k1_ + d3 * k3 + d4 * k4 + d5 * k5 + d6 * k6 + d7 * k7);

                x_ += h;
                y_ = y1;
                k1_ = k7; // FSAL
                h_ = h * fac;
                rejected_ = false;
                return;
            }
            rejected_ = true;
            h_ = h * fac;
        }
    }

private:
    // Dormand-Prince 5(4) tableau (Hairer-Norsett-Wanner).
    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                            a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                            a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    static constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192,
                            a75 = -2187.0 / 6784, a76 = 11.0 / 84;
    static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                            e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
    static constexpr double d1 = -12715105075.0 / 11282082432.0,
                            d3 = 87487479700.0 / 32700410799.0,
                            d4 = -10690763975.0 / 1880347072.0,
                            d5 = 701980252875.0 / 199316789632.0,
                            d6 = -1453857185.0 / 822651844.0,
                            d7 = 69997945.0 / 29380423.0;

    Rhs f_;
    Options opt_;
    double x_;
    State y_;
    State k1_;
    double h_ = 1e-6;
    bool rejected_ = false;
    long nstep_ = 0;
};

/// Locates a sign change of g on a dense-output step by bisection.
/// Requires g(step(a)) and g(step(b)) of opposite sign.
template <int N, class G>
double bisect_event(const DenseStep<N>& step, G&& g, double a, double b,
                    double xtol = 1e-13) {
    double ga = g(step.eval(a));
    for (int it = 0; it < 200 && b - a > xtol * std::max(1.0, std::abs(b)); ++it) {
        const double m = 0.5 * (a + b);
        const double gm = g(step.eval(m));
        if ((ga <= 0) == (gm <= 0)) {
            a = m;
            ga = gm;
        } else {
            b = m;
        }
    }
    return 0.5 * (a + b);
}

} // namespace eqvidx
