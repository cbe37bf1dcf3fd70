#include "bmdm/bridge_dynamics.hpp"

#include <cmath>

#include "bmdm/errors.hpp"

namespace bmdm {

Real fundamental_frequency(const BridgeParams& bridge) {
  return kPi / (2.0 * bridge.span_m * bridge.span_m) *
         std::sqrt(bridge.youngs_modulus_pa * bridge.inertia_m4 / bridge.mass_per_length_kg_m);
}

Real free_deformation(Real t, const BridgeParams& bridge) {
  const Real fb = fundamental_frequency(bridge);
  return bridge.free_amplitude_m * std::sin(kTwoPi * fb * t + bridge.free_phase_rad);
}

Real forced_deformation(Real t, const std::vector<ExcitationSource>& sources,
                        const SourceDistanceFn& distance, Real damping_per_m) {
  const Real zeta = std::abs(damping_per_m);
  Real total = 0.0;
  for (const auto& s : sources) {
    const Real dl = distance(s, t);
    total += s.amplitude_m * std::exp(-zeta * dl) * std::sin(kTwoPi * s.frequency_hz * t + s.phase_rad);
  }
  return total;
}

SourceDistanceFn make_source_distance(const ScenarioConfig& config) {
  return [&config](const ExcitationSource& s, Real t) -> Real {
    if (s.position) return (*s.position - config.radio.monitor_point).norm();
    return (interferer_position(config, *s.interferer, t) - config.radio.monitor_point).norm();
  };
}

DeformationTruth sample_deformation_truth(const ScenarioConfig& config) {
  const int frames = config.radio.frames;
  const Real tf = config.radio.frame_duration_s;
  const auto distance = make_source_distance(config);

  DeformationTruth truth;
  truth.displacement.resize(frames);
  for (int p = 0; p < frames; ++p) {
    const Real t = p * tf;
    truth.displacement[p] = free_deformation(t, config.bridge) +
                            forced_deformation(t, config.sources, distance,
                                               config.bridge.damping_per_m);
  }
  return truth;
}

Real radial_range(const Vec3& monitor_point, Real deformation_m) {
  const Real x = monitor_point.x();
  const Real y = monitor_point.y();
  const Real z = monitor_point.z() + deformation_m;
  return std::sqrt(x * x + y * y + z * z);
}

SphericalPose to_spherical(const Vec3& monitor_point, Real deformation_m) {
  const Real r0 = monitor_point.norm();
  if (r0 == 0.0) throw DegenerateGeometry("monitor point at the base station origin");
  SphericalPose pose;
  pose.theta_rad = std::atan2(monitor_point.y(), monitor_point.x());
  pose.phi_rad = std::acos(monitor_point.z() / r0);
  pose.range_m = radial_range(monitor_point, deformation_m);
  return pose;
}

SpatialDirection spatial_directions(Real theta_rad, Real phi_rad) {
  return {std::cos(phi_rad) * std::cos(theta_rad), std::sin(phi_rad)};
}

Vec3 interferer_position(const ScenarioConfig& config, int k, Real t) {
  const auto& it = config.interferers.at(static_cast<size_t>(k));
  const Vec3 velocity = config.bridge.direction.normalized() * it.speed_m_s;
  return it.initial_position + velocity * t;
}

InterfererState interferer_kinematics(const ScenarioConfig& config, int k, int frame) {
  const auto& it = config.interferers.at(static_cast<size_t>(k));
  const Vec3 velocity = config.bridge.direction.normalized() * it.speed_m_s;
  InterfererState state;
  state.position = it.initial_position + velocity * (frame * config.radio.frame_duration_s);
  state.range_m = state.position.norm();
  if (state.range_m == 0.0) throw DegenerateGeometry("interferer at the base station origin");
  state.radial_velocity_m_s = velocity.dot(state.position / state.range_m);
  return state;
}

}  // namespace bmdm
