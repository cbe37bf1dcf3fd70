#pragma once

#include <functional>
#include <vector>

#include "bmdm/scenario.hpp"
#include "bmdm/types.hpp"

namespace bmdm {

// Ground-truth vertical micro-deformation, one sample per frame at t = p*Tf.
// displacement[0] is the instantaneous deformation at t = 0 and need not be
// zero; estimators reference their output to frame 0 separately.
struct DeformationTruth {
  RealVector displacement;  // meters, length = frames
};

struct SphericalPose {
  Real theta_rad = 0.0;  // azimuth, atan2 convention
  Real phi_rad = 0.0;    // arccos(z / R0) convention
  Real range_m = 0.0;    // radial distance including the deformation
};

struct InterfererState {
  Vec3 position = Vec3::Zero();
  Real range_m = 0.0;
  Real radial_velocity_m_s = 0.0;
};

// f_B = pi / (2 W^2) * sqrt(xi I_B / rho_B)
Real fundamental_frequency(const BridgeParams& bridge);

// A0 sin(2 pi f_B t + phi_B)
Real free_deformation(Real t, const BridgeParams& bridge);

// Distance from an excitation source to the monitor point at time t.
using SourceDistanceFn = std::function<Real(const ExcitationSource&, Real)>;

// sum_e A_e exp(-|zeta| dL_e(t)) sin(2 pi f_e t + phi_e)
Real forced_deformation(Real t, const std::vector<ExcitationSource>& sources,
                        const SourceDistanceFn& distance, Real damping_per_m);

// Resolves static sources to their fixed offset and dynamic sources to the
// attached interferer's position at time t.
SourceDistanceFn make_source_distance(const ScenarioConfig& config);

DeformationTruth sample_deformation_truth(const ScenarioConfig& config);

// theta/phi from the undeformed monitor point, range including deformation.
SphericalPose to_spherical(const Vec3& monitor_point, Real deformation_m);

// Radial distance of the monitor point displaced vertically by deformation_m.
Real radial_range(const Vec3& monitor_point, Real deformation_m);

// Psi = cos(phi) cos(theta), Omega = sin(phi)
struct SpatialDirection {
  Real psi = 0.0;
  Real omega = 0.0;
};
SpatialDirection spatial_directions(Real theta_rad, Real phi_rad);

Vec3 interferer_position(const ScenarioConfig& config, int k, Real t);

InterfererState interferer_kinematics(const ScenarioConfig& config, int k, int frame);

}  // namespace bmdm
