#pragma once

#include <vector>

#include "bmdm/echo_synthesis.hpp"
#include "bmdm/types.hpp"

namespace bmdm {

// Per-symbol range profiles: data[p](n, kappa) = (1/M) sum_m Y[p](n, m)
// exp(+j 2 pi m kappa / M).
struct RangeProfile {
  int frames = 0;
  int symbols = 0;
  int bins = 0;
  std::vector<ComplexMatrix> data;
};

// Normalized inverse transform of one frame's rows (radix-2 when the
// subcarrier count is a power of two, direct evaluation otherwise).
ComplexMatrix profile_frame(const ComplexMatrix& frame);

RangeProfile range_profile(const EchoTensor& tensor);

// Single range bin of the normalized inverse transform, evaluated directly.
// Same quantity as profile_frame(frame).col(bin) without the full transform.
ComplexVector feature_row_direct(const ComplexMatrix& frame, int bin);

// kappa = round(M df 2 R0 / c) mod M, round-half-to-even on ties.
// Throws AmbiguousRange when R0 is at or beyond the unambiguous range.
int micro_range_bin(Real r0_m, int subcarriers, Real spacing_hz);

inline Real range_bin_resolution(int subcarriers, Real spacing_hz) {
  return kSpeedOfLight / (2.0 * subcarriers * spacing_hz);
}

// Complex feature series at the monitored bin, one row per frame.
struct FeatureMatrix {
  ComplexMatrix values;  // frames x symbols
  int bin = 0;
  Real bin_resolution_m = 0.0;
};

FeatureMatrix extract_feature(const RangeProfile& profile, int bin, Real spacing_hz);

}  // namespace bmdm
