#pragma once

#include <string>
#include <vector>

#include "bmdm/scenario.hpp"
#include "bmdm/types.hpp"

namespace bmdm {

// Algebraic least-squares circle through complex points.
struct CircleFit {
  Complex center = Complex(0.0, 0.0);
  Real radius = 0.0;
  Real rms_residual = 0.0;
  // Share of points whose | |z - center| - radius | lies within
  // threshold_factor * radius.
  Real qualified_fraction = 0.0;
};

// Minimizes sum (|z_i - c|^2 - r^2)^2 over (Re c, Im c, r^2 - |c|^2), the
// linear formulation. Throws DegenerateFit when the points are collinear
// within tolerance (normal-matrix condition number above 1e12) or fewer
// than min_points are supplied.
CircleFit fit_circle(const ComplexVector& points, int min_points = 3,
                     Real threshold_factor = 0.2);

// True when the qualified fraction at threshold_factor * radius reaches
// `proportion` (defaults 0.2 / 0.9).
bool classify_circular(const ComplexVector& points, const CircleFit& fit,
                       Real threshold_factor, Real proportion);

// Single dynamic interference removal: a lone mover rotates around the
// micro+static constant over the symbol axis, so the fitted center is the
// clean phasor. Propagates DegenerateFit (e.g. no mover: zero radius).
Complex cf_sdir(const ComplexVector& frame_points, Real threshold_factor = 0.2);

// Phasor mean over the symbol axis; rotating mover phasors whose frequency
// times N is an integer cancel exactly.
Complex pm_mdis(const ComplexVector& frame_points);

enum class IpmStatus { Ok, NoDopplerPeak, CapExceeded };

struct IpmSelection {
  int symbol_count = 0;
  IpmStatus status = IpmStatus::Ok;
  std::vector<Real> velocities_m_s;      // signed, one per detected mover
  std::vector<Real> dopplers_per_symbol;  // cycles per symbol
};

// Estimates mover Dopplers from a symbol-axis DFT (integer-bin peaks above
// four times the median magnitude), converts each to its full-rotation
// symbol count, and returns the least common multiple capped at the row
// length. Requires enough symbols for a velocity resolution below
// v_res_target.
IpmSelection ipm_symbol_count(const ComplexVector& long_row, const RadioParams& radio,
                              Real v_res_target);

enum class SuppressionMethod { CfSdir, PmMdis, Ipm };

const char* suppression_method_name(SuppressionMethod method);

struct CpmResult {
  Complex value = Complex(0.0, 0.0);
  SuppressionMethod method = SuppressionMethod::PmMdis;
  Real qualified_fraction = 0.0;
};

// Fit first, then dispatch: circular distributions take the fitted center
// (CF-SDIR), everything else the phasor mean (PM-MDIS). Degenerate fits
// fall through to PM-MDIS.
CpmResult cpm(const ComplexVector& frame_points, const ScenarioConfig& config);

struct SuppressionReport {
  std::vector<SuppressionMethod> method;        // per frame
  std::vector<Real> qualified_fraction;         // per frame
  std::vector<Complex> center;                  // per frame output phasor
  std::vector<std::vector<Real>> ipm_dopplers;  // filled when IPM ran

  void to_csv(const std::string& path) const;
};

enum class SeriesStage { PostDynamic, PostStatic };

struct PhasorSeries {
  ComplexVector values;
  SeriesStage stage = SeriesStage::PostDynamic;
  Complex static_center = Complex(0.0, 0.0);  // meaningful post-static
};

// Static clutter removal across frames: the deformation phasor rotates about
// the static-clutter sum, so the fitted center is that sum. Throws
// DegenerateFit when the deformation phase arc spans less than 0.1 rad
// (too flat for a conditioned fit); callers may fall back to subtracting
// the temporal mean.
PhasorSeries cf_msir(const PhasorSeries& post_dynamic);

inline constexpr Real kMsirMinArcRad = 0.1;

}  // namespace bmdm
