#include "bmdm/clutter_suppression.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

#include "bmdm/errors.hpp"
#include "bmdm/fft.hpp"

namespace bmdm {
namespace {

constexpr Real kConditionLimit = 1e12;

Real wrap_pi(Real angle) {
  Real a = std::remainder(angle, kTwoPi);
  if (a <= -kPi) a += kTwoPi;
  return a;
}

}  // namespace

CircleFit fit_circle(const ComplexVector& points, int min_points, Real threshold_factor) {
  const int count = static_cast<int>(points.size());
  if (count < std::max(min_points, 3)) {
    throw DegenerateFit("circle fit needs at least " + std::to_string(std::max(min_points, 3)) +
                        " points");
  }

  // Rows [2x 2y 1] against |z|^2; unknowns (Re c, Im c, r^2 - |c|^2).
  Eigen::Matrix3d normal = Eigen::Matrix3d::Zero();
  Eigen::Vector3d rhs = Eigen::Vector3d::Zero();
  for (int i = 0; i < count; ++i) {
    const Real x = points[i].real();
    const Real y = points[i].imag();
    const Eigen::Vector3d row(2.0 * x, 2.0 * y, 1.0);
    normal.noalias() += row * row.transpose();
    rhs.noalias() += row * (x * x + y * y);
  }

  const Eigen::JacobiSVD<Eigen::Matrix3d> svd(normal, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Real smax = svd.singularValues()(0);
  const Real smin = svd.singularValues()(2);
  if (!(smin > 0.0) || smax / smin > kConditionLimit) {
    throw DegenerateFit("points are collinear within tolerance");
  }
  const Eigen::Vector3d solution = svd.solve(rhs);

  CircleFit fit;
  fit.center = Complex(solution(0), solution(1));
  fit.radius = std::sqrt(std::max(0.0, solution(2) + solution(0) * solution(0) +
                                           solution(1) * solution(1)));

  const Real threshold = threshold_factor * fit.radius;
  Real sq_sum = 0.0;
  int qualified = 0;
  for (int i = 0; i < count; ++i) {
    const Real e = std::abs(std::abs(points[i] - fit.center) - fit.radius);
    sq_sum += e * e;
    if (e <= threshold) ++qualified;
  }
  fit.rms_residual = std::sqrt(sq_sum / count);
  fit.qualified_fraction = static_cast<Real>(qualified) / count;
  return fit;
}

bool classify_circular(const ComplexVector& points, const CircleFit& fit, Real threshold_factor,
                       Real proportion) {
  const int count = static_cast<int>(points.size());
  if (count == 0) return false;
  const Real threshold = threshold_factor * fit.radius;
  int qualified = 0;
  for (int i = 0; i < count; ++i) {
    if (std::abs(std::abs(points[i] - fit.center) - fit.radius) <= threshold) ++qualified;
  }
  return static_cast<Real>(qualified) / count >= proportion;
}

Complex cf_sdir(const ComplexVector& frame_points, Real threshold_factor) {
  return fit_circle(frame_points, 3, threshold_factor).center;
}

Complex pm_mdis(const ComplexVector& frame_points) {
  if (frame_points.size() == 0) throw EmptyInput("phasor mean of an empty symbol row");
  return frame_points.mean();
}

IpmSelection ipm_symbol_count(const ComplexVector& long_row, const RadioParams& radio,
                              Real v_res_target) {
  const int n_avail = static_cast<int>(long_row.size());
  const Real v_unit = kSpeedOfLight / (2.0 * radio.carrier_hz * radio.symbol_duration_s);
  if (n_avail <= 0 || v_unit / n_avail >= v_res_target) {
    throw Error("too few symbols for the requested velocity resolution");
  }

  ComplexVector spectrum;
  if (is_power_of_two(n_avail)) {
    spectrum = long_row;
    FftPlan(n_avail, -1).apply(spectrum);
  } else {
    spectrum = dft_direct(long_row, -1);
  }
  RealVector magnitude = spectrum.cwiseAbs();

  std::vector<Real> sorted(magnitude.data(), magnitude.data() + n_avail);
  std::nth_element(sorted.begin(), sorted.begin() + n_avail / 2, sorted.end());
  const Real median = sorted[n_avail / 2];
  // The relative floor keeps transform roundoff on an otherwise flat
  // spectrum from registering as movers.
  const Real floor_level = std::max(4.0 * median, 1e-9 * magnitude.maxCoeff());

  IpmSelection selection;
  long long lcm_count = 1;
  bool capped = false;
  for (int b = 1; b < n_avail; ++b) {
    const Real mag = magnitude[b];
    if (mag < floor_level) continue;
    const Real left = magnitude[b - 1];
    const Real right = magnitude[(b + 1) % n_avail];
    if (mag < left || mag < right) continue;  // leakage shoulder, not a peak

    // Integer-bin velocity; bins past Nyquist are negative Dopplers.
    const Real cycles = (b <= n_avail / 2 ? static_cast<Real>(b) : static_cast<Real>(b - n_avail)) /
                        n_avail;
    const Real velocity = cycles * v_unit;
    selection.dopplers_per_symbol.push_back(cycles);
    selection.velocities_m_s.push_back(velocity);

    const long long period = std::llround(v_unit / std::abs(velocity));
    if (period <= 0) continue;
    lcm_count = std::lcm(lcm_count, period);
    if (lcm_count > n_avail) {
      capped = true;
      break;
    }
  }

  if (selection.velocities_m_s.empty()) {
    selection.status = IpmStatus::NoDopplerPeak;
    selection.symbol_count = n_avail;
  } else if (capped) {
    selection.status = IpmStatus::CapExceeded;
    selection.symbol_count = n_avail;
  } else {
    selection.status = IpmStatus::Ok;
    selection.symbol_count = static_cast<int>(lcm_count);
  }
  return selection;
}

const char* suppression_method_name(SuppressionMethod method) {
  switch (method) {
    case SuppressionMethod::CfSdir: return "CF-SDIR";
    case SuppressionMethod::PmMdis: return "PM-MDIS";
    case SuppressionMethod::Ipm: return "IPM";
  }
  return "?";
}

CpmResult cpm(const ComplexVector& frame_points, const ScenarioConfig& config) {
  CpmResult result;
  try {
    const CircleFit fit =
        fit_circle(frame_points, 3, config.cpm_threshold_factor);
    result.qualified_fraction = fit.qualified_fraction;
    if (classify_circular(frame_points, fit, config.cpm_threshold_factor,
                          config.cpm_circular_proportion)) {
      result.value = fit.center;
      result.method = SuppressionMethod::CfSdir;
      return result;
    }
  } catch (const DegenerateFit&) {
    // all points coincident or collinear: the mean is the right answer
  }

  // Multiple movers. With an extended symbol window configured, tune the
  // averaging span to the movers' rotation periods (1 m/s resolution
  // requirement); otherwise plain phasor mean.
  if (config.radio.ipm_extended_symbols > config.radio.sensing_symbols &&
      frame_points.size() >= config.radio.ipm_extended_symbols) {
    try {
      const IpmSelection sel = ipm_symbol_count(frame_points, config.radio, 1.0);
      result.value = frame_points.head(sel.symbol_count).mean();
      result.method = SuppressionMethod::Ipm;
      return result;
    } catch (const Error&) {
      // window too short for the resolution requirement
    }
  }
  result.value = pm_mdis(frame_points);
  result.method = SuppressionMethod::PmMdis;
  return result;
}

void SuppressionReport::to_csv(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write suppression report: " + path);
  out << "frame,method,qualified_fraction,center_re,center_im\n";
  char buf[128];
  for (size_t p = 0; p < method.size(); ++p) {
    std::snprintf(buf, sizeof(buf), "%zu,%s,%.17g,%.17g,%.17g\n", p,
                  suppression_method_name(method[p]), qualified_fraction[p], center[p].real(),
                  center[p].imag());
    out << buf;
  }
  if (!out) throw IoError("write failed: " + path);
}

PhasorSeries cf_msir(const PhasorSeries& post_dynamic) {
  const auto& values = post_dynamic.values;
  const int frames = static_cast<int>(values.size());
  if (frames < 3) throw DegenerateFit("static removal needs at least 3 frames");

  const CircleFit fit = fit_circle(values, 3);

  // Angular span of the deformation arc as seen from the fitted center,
  // measured against the mean direction so arcs short of a full turn are
  // not split by the branch cut.
  Complex mean_dir(0.0, 0.0);
  for (int p = 0; p < frames; ++p) {
    const Complex d = values[p] - fit.center;
    const Real mag = std::abs(d);
    if (mag > 0) mean_dir += d / mag;
  }
  const Real ref = std::abs(mean_dir) > 0 ? std::arg(mean_dir) : 0.0;
  Real lo = 0.0, hi = 0.0;
  for (int p = 0; p < frames; ++p) {
    const Real a = wrap_pi(std::arg(values[p] - fit.center) - ref);
    lo = std::min(lo, a);
    hi = std::max(hi, a);
  }
  if (hi - lo < kMsirMinArcRad) {
    throw DegenerateFit("deformation phase arc below 0.1 rad; fit unconditioned");
  }

  PhasorSeries out;
  out.values = values.array() - fit.center;
  out.stage = SeriesStage::PostStatic;
  out.static_center = fit.center;
  return out;
}

}  // namespace bmdm
