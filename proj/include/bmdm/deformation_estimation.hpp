#pragma once

#include <string>

#include "bmdm/clutter_suppression.hpp"
#include "bmdm/scenario.hpp"
#include "bmdm/types.hpp"

namespace bmdm {

// Spatial frequency of the deformation phasor: f_micro = -(2 fc + df (M-1)) / c
// (1/meters, negative). One phase wrap corresponds to 1/|f_micro| of radial
// change.
Real micro_frequency(const RadioParams& radio);

// Wrapped per-frame phases arg(O_micro[p]) in (-pi, pi]. Throws MissingFrame
// on a zero-magnitude phasor.
RealVector phase_series(const PhasorSeries& post_static);

// Constant-acceleration prediction from three history values
// (order: p-3, p-2, p-1): 3 dr1 - 3 dr2 + dr3.
Real predict_range(Real dr_p3, Real dr_p2, Real dr_p1);

// phi + 2 pi round((phi_hat - phi) / 2 pi); gamma ties round half away
// from zero. |result - phi_hat| <= pi.
Real unwrap_phase(Real phi, Real phi_hat);

// Vertical deformation from radial change: exact inversion of
// R(dD)^2 = R0^2 + 2 z0 dD + dD^2, root nearest zero.
Real invert_vertical(Real delta_r, Real r0, Real z0);

struct DeformationTrace {
  RealVector radial_change_m;      // dR_p, frame 0 referenced
  RealVector estimate_m;           // vertical deformation estimate
  RealVector truth_m;              // frame-0-referenced truth (filled by caller)
  RealVector wrapped_phase_rad;
  RealVector unwrapped_phase_rad;
  Eigen::VectorXi wrap_index;      // gamma_p (multiples of 2 pi applied)
  int wrap_corrections = 0;        // number of gamma changes across frames
  Real frame_duration_s = 0.0;

  // frame,t_seconds,truth_m,estimate_m,wrapped_phase_rad,unwrapped_phase_rad,
  // wrap_corrections
  void to_csv(const std::string& path) const;
};

// Full estimation chain: wrapped phases, history-predicted unwrapping
// (first three frames by nearest continuation), radial change, vertical
// inversion. estimate_m[0] is 0 by construction.
DeformationTrace estimate_trace(const PhasorSeries& post_static, const RadioParams& radio,
                                const Vec3& monitor_point);

}  // namespace bmdm
