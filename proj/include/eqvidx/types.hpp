#pragma once

#include <Eigen/Core>
#include <stdexcept>
#include <string>

namespace eqvidx {

using Vec  = Eigen::VectorXd;
using Vec2 = Eigen::Vector2d;
template <int N>
using StateN = Eigen::Matrix<double, N, 1>;

inline constexpr double kPi     = 3.14159265358979323846;
inline constexpr double kTwoPi  = 2.0 * kPi;
inline constexpr double kHalfPi = 0.5 * kPi;
/// (2*pi)^2, the torus-orbit area per unit of both radii
inline constexpr double kFourPiSq = kTwoPi * kTwoPi;

/// A stop condition was not met within the step/length budget.
class BudgetError : public std::runtime_error {
public:
    explicit BudgetError(const std::string& what) : std::runtime_error(what) {}
};

/// Step-size underflow near a chart singularity (pole/origin).
class SingularityError : public std::runtime_error {
public:
    explicit SingularityError(const std::string& what) : std::runtime_error(what) {}
};

/// A threshold lies too close to a discrete eigenvalue to resolve
/// a strict/non-strict count at the current mesh accuracy.
class AmbiguityError : public std::runtime_error {
public:
    AmbiguityError(const std::string& what, double threshold, double gap)
        : std::runtime_error(what), threshold(threshold), gap(gap) {}
    double threshold;
    double gap;
};

/// Shooting scan failed to bracket a solution; carries the scan trace.
class NotFoundError : public std::runtime_error {
public:
    NotFoundError(const std::string& what, std::string trace)
        : std::runtime_error(what), trace(std::move(trace)) {}
    std::string trace;
};

} // namespace eqvidx
