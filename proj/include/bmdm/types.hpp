#pragma once

#include <complex>

#include <Eigen/Dense>

namespace bmdm {

using Real = double;
using Complex = std::complex<Real>;

using Vec3 = Eigen::Vector3d;
using RealVector = Eigen::VectorXd;
using ComplexVector = Eigen::VectorXcd;
using ComplexMatrix = Eigen::MatrixXcd;

// Propagation speed used throughout the radar geometry (radar convention).
inline constexpr Real kSpeedOfLight = 3.0e8;

inline constexpr Real kPi = 3.14159265358979323846;
inline constexpr Real kTwoPi = 2.0 * kPi;

}  // namespace bmdm
