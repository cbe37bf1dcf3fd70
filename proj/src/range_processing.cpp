#include "bmdm/range_processing.hpp"

#include <cmath>
#include <stdexcept>

#include "bmdm/errors.hpp"
#include "bmdm/fft.hpp"

namespace bmdm {
namespace {

Real round_half_even(Real x) {
  // remainder(x, 1) subtracts the nearest integer with even ties.
  return x - std::remainder(x, 1.0);
}

}  // namespace

ComplexMatrix profile_frame(const ComplexMatrix& frame) {
  const int n_sym = static_cast<int>(frame.rows());
  const int m_count = static_cast<int>(frame.cols());
  ComplexMatrix out(n_sym, m_count);

  if (is_power_of_two(m_count)) {
    FftPlan plan(m_count, +1);
    ComplexVector row(m_count);
    for (int n = 0; n < n_sym; ++n) {
      row = frame.row(n).transpose();
      plan.apply(row);
      out.row(n) = row.transpose() / static_cast<Real>(m_count);
    }
  } else {
    for (int n = 0; n < n_sym; ++n) {
      out.row(n) =
          dft_direct(frame.row(n).transpose(), +1).transpose() / static_cast<Real>(m_count);
    }
  }
  return out;
}

RangeProfile range_profile(const EchoTensor& tensor) {
  RangeProfile profile;
  profile.frames = tensor.frames;
  profile.symbols = tensor.symbols;
  profile.bins = tensor.subcarriers;
  profile.data.reserve(tensor.data.size());
  for (const auto& frame : tensor.data) profile.data.push_back(profile_frame(frame));
  return profile;
}

ComplexVector feature_row_direct(const ComplexMatrix& frame, int bin) {
  const int n_sym = static_cast<int>(frame.rows());
  const int m_count = static_cast<int>(frame.cols());
  if (bin < 0 || bin >= m_count) throw std::out_of_range("range bin out of range");

  // Twiddles exp(j 2 pi m bin / M) via recurrence; one polar call per frame.
  const Complex step = std::polar(1.0, kTwoPi * static_cast<Real>(bin) / m_count);
  ComplexVector twiddle(m_count);
  Complex w(1.0, 0.0);
  for (int m = 0; m < m_count; ++m) {
    twiddle[m] = w;
    w *= step;
  }
  ComplexVector out(n_sym);
  for (int n = 0; n < n_sym; ++n) {
    out[n] = (frame.row(n).transpose().cwiseProduct(twiddle)).sum() / static_cast<Real>(m_count);
  }
  return out;
}

int micro_range_bin(Real r0_m, int subcarriers, Real spacing_hz) {
  const Real unambiguous = kSpeedOfLight / (2.0 * spacing_hz);
  if (r0_m >= unambiguous) {
    throw AmbiguousRange("range exceeds the unambiguous range c/(2 df)");
  }
  const Real exact = static_cast<Real>(subcarriers) * spacing_hz * 2.0 * r0_m / kSpeedOfLight;
  const long long rounded = static_cast<long long>(round_half_even(exact));
  return static_cast<int>(((rounded % subcarriers) + subcarriers) % subcarriers);
}

FeatureMatrix extract_feature(const RangeProfile& profile, int bin, Real spacing_hz) {
  if (bin < 0 || bin >= profile.bins) throw std::out_of_range("range bin out of range");
  FeatureMatrix feature;
  feature.bin = bin;
  feature.bin_resolution_m = range_bin_resolution(profile.bins, spacing_hz);
  feature.values.resize(profile.frames, profile.symbols);
  for (int p = 0; p < profile.frames; ++p) {
    feature.values.row(p) = profile.data[p].col(bin).transpose();
  }
  return feature;
}

}  // namespace bmdm
