#include "bmdm/deformation_estimation.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "bmdm/errors.hpp"

namespace bmdm {

Real micro_frequency(const RadioParams& radio) {
  return -(2.0 * radio.carrier_hz + radio.subcarrier_spacing_hz * (radio.subcarriers - 1)) /
         kSpeedOfLight;
}

RealVector phase_series(const PhasorSeries& post_static) {
  const int frames = static_cast<int>(post_static.values.size());
  RealVector phases(frames);
  for (int p = 0; p < frames; ++p) {
    if (std::abs(post_static.values[p]) == 0.0) throw MissingFrame(p);
    phases[p] = std::arg(post_static.values[p]);
  }
  return phases;
}

Real predict_range(Real dr_p3, Real dr_p2, Real dr_p1) {
  return 3.0 * dr_p1 - 3.0 * dr_p2 + dr_p3;
}

Real unwrap_phase(Real phi, Real phi_hat) {
  const Real gamma = std::round((phi_hat - phi) / kTwoPi);
  return phi + kTwoPi * gamma;
}

Real invert_vertical(Real delta_r, Real r0, Real z0) {
  // Discriminant can dip below zero only when the measured radial change is
  // geometrically unreachable (noise-dominated estimates); clamp to the
  // closest-approach point instead of failing the whole trace.
  const Real disc = z0 * z0 + 2.0 * r0 * delta_r + delta_r * delta_r;
  const Real s = std::sqrt(std::max(0.0, disc));
  const Real root_plus = -z0 + s;
  const Real root_minus = -z0 - s;
  return std::abs(root_plus) <= std::abs(root_minus) ? root_plus : root_minus;
}

DeformationTrace estimate_trace(const PhasorSeries& post_static, const RadioParams& radio,
                                const Vec3& monitor_point) {
  const int frames = static_cast<int>(post_static.values.size());
  if (frames < 4) throw EmptyInput("estimation needs at least 4 frames");

  const RealVector phases = phase_series(post_static);
  const Real two_pi_f = kTwoPi * micro_frequency(radio);
  const Real r0 = monitor_point.norm();
  const Real z0 = monitor_point.z();

  DeformationTrace trace;
  trace.frame_duration_s = radio.frame_duration_s;
  trace.radial_change_m.resize(frames);
  trace.estimate_m.resize(frames);
  trace.wrapped_phase_rad = phases;
  trace.unwrapped_phase_rad.resize(frames);
  trace.wrap_index.resize(frames);

  trace.unwrapped_phase_rad[0] = phases[0];
  trace.radial_change_m[0] = 0.0;
  trace.estimate_m[0] = 0.0;
  trace.wrap_index[0] = 0;

  for (int p = 1; p < frames; ++p) {
    Real predicted;
    if (p < 3) {
      // Bootstrap: per-frame steps are assumed below a half wrap.
      predicted = trace.unwrapped_phase_rad[p - 1];
    } else {
      const Real dr_hat =
          predict_range(trace.radial_change_m[p - 3], trace.radial_change_m[p - 2],
                        trace.radial_change_m[p - 1]);
      predicted = trace.unwrapped_phase_rad[0] + two_pi_f * dr_hat;
    }
    const Real unwrapped = unwrap_phase(phases[p], predicted);
    trace.unwrapped_phase_rad[p] = unwrapped;
    trace.wrap_index[p] = static_cast<int>(std::lround((unwrapped - phases[p]) / kTwoPi));
    trace.radial_change_m[p] = (unwrapped - trace.unwrapped_phase_rad[0]) / two_pi_f;
    trace.estimate_m[p] = invert_vertical(trace.radial_change_m[p], r0, z0);
  }

  trace.wrap_corrections = 0;
  for (int p = 1; p < frames; ++p) {
    if (trace.wrap_index[p] != trace.wrap_index[p - 1]) ++trace.wrap_corrections;
  }
  return trace;
}

void DeformationTrace::to_csv(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write trace: " + path);
  out << "frame,t_seconds,truth_m,estimate_m,wrapped_phase_rad,unwrapped_phase_rad,"
         "wrap_corrections\n";
  char buf[256];
  const int frames = static_cast<int>(estimate_m.size());
  for (int p = 0; p < frames; ++p) {
    const Real truth = truth_m.size() == frames ? truth_m[p] : std::nan("");
    std::snprintf(buf, sizeof(buf), "%d,%.17g,%.17g,%.17g,%.17g,%.17g,%d\n", p,
                  p * frame_duration_s, truth, estimate_m[p], wrapped_phase_rad[p],
                  unwrapped_phase_rad[p], wrap_index[p]);
    out << buf;
  }
  if (!out) throw IoError("write failed: " + path);
}

}  // namespace bmdm
