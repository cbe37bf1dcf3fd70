#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "bmdm/bridge_dynamics.hpp"
#include "bmdm/errors.hpp"
#include "bmdm/rng.hpp"
#include "bmdm/scenario.hpp"

using namespace bmdm;

namespace {

// Oracle for the fundamental frequency with the reference deck parameters,
// written out independently of the implementation.
double reference_fb() {
  return M_PI / (2.0 * 100.0 * 100.0) * std::sqrt(2.943e10 * 8.65 / 3.6e4);
}

BridgeParams reference_bridge() { return BridgeParams{}; }

}  // namespace

TEST_CASE("fundamental frequency of the reference deck is 0.42 Hz") {
  const Real fb = fundamental_frequency(reference_bridge());
  CHECK(std::abs(fb - 0.42) <= 0.005);
  CHECK(fb == doctest::Approx(reference_fb()).epsilon(1e-12));
}

TEST_CASE("fundamental frequency scaling laws") {
  BridgeParams b = reference_bridge();
  const Real base = fundamental_frequency(b);
  b.span_m *= 2.0;
  CHECK(fundamental_frequency(b) == doctest::Approx(base / 4.0));  // 1/W^2
  b = reference_bridge();
  b.youngs_modulus_pa *= 4.0;
  CHECK(fundamental_frequency(b) == doctest::Approx(base * 2.0));  // sqrt(xi I)
}

TEST_CASE("free deformation at characteristic instants") {
  BridgeParams b = reference_bridge();
  b.free_phase_rad = 0.0;
  CHECK(free_deformation(0.0, b) == 0.0);

  const Real fb = fundamental_frequency(b);
  CHECK(free_deformation(1.0 / (4.0 * fb), b) == doctest::Approx(b.free_amplitude_m));

  // one second in, against the independent frequency oracle
  const Real expected = 1.35e-3 * std::sin(2.0 * M_PI * reference_fb() * 1.0);
  CHECK(free_deformation(1.0, b) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("forced deformation: empty list, unit attenuation, fixed source") {
  const SourceDistanceFn zero_distance = [](const ExcitationSource&, Real) { return 0.0; };
  CHECK(forced_deformation(1.0, {}, zero_distance, 0.02) == 0.0);

  ExcitationSource s;
  s.amplitude_m = 2.5e-3;
  s.frequency_hz = 0.5;
  s.position = Vec3(180.0, 60.0, -25.0);
  CHECK(forced_deformation(1.0 / (4.0 * 0.5), {s}, zero_distance, 0.02) ==
        doctest::Approx(2.5e-3));

  // source 3 of the preset table sits at the monitor point: dL = 0
  ExcitationSource src3;
  src3.amplitude_m = 4.59e-3;
  src3.frequency_hz = 0.6;
  src3.position = Vec3(180.0, 60.0, -25.0);
  const Real expected = 4.59e-3 * std::sin(0.6 * M_PI);  // t = 0.5 s
  CHECK(forced_deformation(0.5, {src3}, zero_distance, 0.02) ==
        doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("forced deformation applies decay as a positive magnitude") {
  ExcitationSource s;
  s.amplitude_m = 1e-3;
  s.frequency_hz = 0.25;  // sin(pi/2) at t = 1
  s.position = Vec3(0, 0, 0);
  const SourceDistanceFn fifty_meters = [](const ExcitationSource&, Real) { return 50.0; };
  const Real expected = 1e-3 * std::exp(-0.02 * 50.0);
  CHECK(forced_deformation(1.0, {s}, fifty_meters, 0.02) == doctest::Approx(expected));
  // a sign slip on the coefficient must not turn decay into growth
  CHECK(forced_deformation(1.0, {s}, fifty_meters, -0.02) == doctest::Approx(expected));
}

TEST_CASE("deformation truth: zero amplitudes give a zero trace") {
  ScenarioConfig c = preset_condition(1);
  c.bridge.free_amplitude_m = 0.0;
  for (auto& s : c.sources) s.amplitude_m = 0.0;
  const DeformationTruth truth = sample_deformation_truth(c);
  CHECK(truth.displacement.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("deformation truth: condition I stays at centimeter scale") {
  ScenarioConfig c = preset_condition(1);
  const DeformationTruth truth = sample_deformation_truth(c);  // 15 s
  CHECK(truth.displacement.cwiseAbs().maxCoeff() < 0.05);
  CHECK(truth.displacement.cwiseAbs().maxCoeff() > 1e-4);
}

TEST_CASE("deformation truth: free term only matches the per-sample oracle") {
  ScenarioConfig c = preset_condition(1);
  c.sources.clear();
  c.radio.frames = 4;
  const DeformationTruth truth = sample_deformation_truth(c);
  for (int p = 0; p < 4; ++p) {
    CHECK(truth.displacement[p] ==
          doctest::Approx(free_deformation(p * 0.01, c.bridge)).epsilon(1e-14));
  }
}

TEST_CASE("deformation superposition over source sets") {
  ScenarioConfig base = preset_condition(1);
  base.radio.frames = 16;
  ScenarioConfig part_a = base;
  part_a.sources.assign(base.sources.begin(), base.sources.begin() + 2);
  ScenarioConfig part_b = base;
  part_b.sources.assign(base.sources.begin() + 2, base.sources.end());

  const auto whole = sample_deformation_truth(base);
  const auto a = sample_deformation_truth(part_a);
  const auto b = sample_deformation_truth(part_b);
  for (int p = 0; p < 16; ++p) {
    const Real shared_free = free_deformation(p * 0.01, base.bridge);
    CHECK(whole.displacement[p] ==
          doctest::Approx(a.displacement[p] + b.displacement[p] - shared_free).epsilon(1e-12));
  }
}

TEST_CASE("spherical transform of the monitor point") {
  const Vec3 monitor(180.0, 60.0, -25.0);
  const Real r0 = std::sqrt(180.0 * 180.0 + 60.0 * 60.0 + 25.0 * 25.0);
  const SphericalPose pose = to_spherical(monitor, 0.0);
  CHECK(pose.range_m == doctest::Approx(r0).epsilon(1e-15));
  CHECK(pose.theta_rad == doctest::Approx(std::atan2(60.0, 180.0)));
  CHECK(pose.phi_rad == doctest::Approx(std::acos(-25.0 / r0)));
}

TEST_CASE("spherical transform of a unit axis point") {
  const SphericalPose pose = to_spherical(Vec3(1.0, 0.0, 0.0), 0.0);
  CHECK(pose.theta_rad == doctest::Approx(0.0));
  CHECK(pose.phi_rad == doctest::Approx(M_PI / 2.0));
  CHECK(pose.range_m == doctest::Approx(1.0));
  CHECK_THROWS_AS(to_spherical(Vec3(0, 0, 0), 0.0), DegenerateGeometry);
}

TEST_CASE("one millimeter of deformation shortens the range by the projection") {
  const Vec3 monitor(180.0, 60.0, -25.0);
  const Real r0 = monitor.norm();
  const Real d = 1e-3;
  const Real exact = radial_range(monitor, d) - r0;
  const Real linearized = monitor.z() / r0 * d;
  CHECK(exact == doctest::Approx(-0.1306e-3).epsilon(1e-3));

  // Second-order term of sqrt(R0^2 + 2 z0 d + d^2): the linearization error
  // is d^2 (1 - (z0/R0)^2) / (2 R0), about 2.6e-9 m here.
  const Real curvature = d * d * (1.0 - (monitor.z() / r0) * (monitor.z() / r0)) / (2.0 * r0);
  CHECK(std::abs(exact - linearized - curvature) < 1e-12);
  CHECK(std::abs(exact - linearized) < 5e-9);
}

TEST_CASE("radial range is strictly decreasing in deformation for z0 < 0") {
  const Vec3 monitor(180.0, 60.0, -25.0);
  Real prev = radial_range(monitor, -0.02);
  for (Real d = -0.015; d <= 0.02; d += 0.005) {
    const Real r = radial_range(monitor, d);
    CHECK(r < prev);
    prev = r;
  }
}

TEST_CASE("spatial directions") {
  SpatialDirection d = spatial_directions(0.0, 0.0);
  CHECK(d.psi == doctest::Approx(1.0));
  CHECK(d.omega == doctest::Approx(0.0));

  d = spatial_directions(M_PI / 2.0, 0.7);
  CHECK(std::abs(d.psi) < 1e-15);

  const Vec3 monitor(180.0, 60.0, -25.0);
  const SphericalPose pose = to_spherical(monitor, 0.0);
  d = spatial_directions(pose.theta_rad, pose.phi_rad);
  // scalar oracle straight from the definitions
  const Real r0 = monitor.norm();
  const Real phi = std::acos(-25.0 / r0);
  const Real theta = std::atan2(60.0, 180.0);
  CHECK(d.psi == doctest::Approx(std::cos(phi) * std::cos(theta)).epsilon(1e-14));
  CHECK(d.omega == doctest::Approx(std::sin(phi)).epsilon(1e-14));
}

TEST_CASE("interferer kinematics: stationary and line-of-sight motion") {
  ScenarioConfig c = preset_condition(2);
  c.interferers[0].speed_m_s = 0.0;
  const Real r_fixed = c.interferers[0].initial_position.norm();
  for (int p : {0, 100, 400}) {
    const InterfererState st = interferer_kinematics(c, 0, p);
    CHECK(st.range_m == doctest::Approx(r_fixed));
    CHECK(st.radial_velocity_m_s == doctest::Approx(0.0));
  }

  // motion straight along the line of sight
  ScenarioConfig los = preset_condition(2);
  los.radio.monitor_point = Vec3(100.0, 0.0, 0.0);
  los.bridge.direction = Vec3(1.0, 0.0, 0.0);
  los.interferers[0].initial_position = Vec3(100.0, 0.0, 0.0);
  los.interferers[0].speed_m_s = 10.0;
  const InterfererState st = interferer_kinematics(los, 0, 100);  // t = 1 s
  CHECK(st.position == Vec3(110.0, 0.0, 0.0));
  CHECK(st.range_m == doctest::Approx(110.0));
  CHECK(st.radial_velocity_m_s == doctest::Approx(10.0));
}

TEST_CASE("interferer kinematics: condition II mid-run against a scalar oracle") {
  const ScenarioConfig c = preset_condition(2);
  const InterfererState st = interferer_kinematics(c, 0, 500);

  // scalar recomputation: position, distance, projected speed
  const Real t = 500 * 0.01;
  const Real x = c.interferers[0].initial_position.x() + 12.0 * t;
  const Real y = c.interferers[0].initial_position.y();
  const Real z = c.interferers[0].initial_position.z();
  const Real r = std::sqrt(x * x + y * y + z * z);
  const Real v_radial = 12.0 * x / r;  // velocity (12,0,0) dot unit position
  CHECK(st.range_m == doctest::Approx(r).epsilon(1e-14));
  CHECK(st.radial_velocity_m_s == doctest::Approx(v_radial).epsilon(1e-14));
}

TEST_CASE("radial speed never exceeds the deck speed; ranges move within bounds") {
  const ScenarioConfig c = preset_condition(3);
  for (size_t k = 0; k < c.interferers.size(); ++k) {
    const Real speed = std::abs(c.interferers[k].speed_m_s);
    Real prev_range = interferer_kinematics(c, static_cast<int>(k), 0).range_m;
    for (int p = 1; p < 200; ++p) {
      const InterfererState st = interferer_kinematics(c, static_cast<int>(k), p);
      CHECK(std::abs(st.radial_velocity_m_s) <= speed + 1e-12);
      CHECK(std::abs(st.range_m - prev_range) <= speed * 0.01 + 1e-12);
      prev_range = st.range_m;
    }
  }
}
