#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "bmdm/deformation_estimation.hpp"
#include "bmdm/scenario.hpp"

namespace bmdm {

// Dynamic-clutter stage selection. Auto is the fit-first dispatcher; Off
// bypasses both symbol averaging and circle fitting (ablation baseline,
// first sensing symbol only).
enum class DynamicMode { Auto, ForceCfSdir, ForcePmMdis, Ipm, Off };

struct PipelineOptions {
  DynamicMode dynamic = DynamicMode::Auto;
  bool static_removal = true;
  Real ipm_velocity_resolution_m_s = 0.5;  // precondition target for IPM
};

struct TrialResult {
  DeformationTrace trace;
  SuppressionReport suppression;
  Real measured_snr_db = 0.0;
  std::uint64_t seed = 0;
};

// Full chain: truth -> echo -> range bin feature -> per-frame dynamic
// suppression -> static removal -> trace. Frames are streamed; noise is
// drawn from the stateless (seed, cell) generator so the result is
// bit-identical for a given (scenario, seed) regardless of schedule.
TrialResult run_trial(const ScenarioConfig& scenario, std::uint64_t seed,
                      const PipelineOptions& options = {});

// Root mean square of (estimate - truth) over all trials and frames.
Real rmse(const std::vector<TrialResult>& trials);

enum class SweepAxis { SnrDb, Subcarriers, Symbols, Interferers, BeamOffset };

const char* sweep_axis_name(SweepAxis axis);

struct SweepResult {
  SweepAxis axis = SweepAxis::SnrDb;
  std::vector<Real> values;
  std::vector<Real> rmse_m;
  int count = 0;
  Real wall_seconds = 0.0;
};

// For each axis value: clone the base scenario, apply the value, run
// `count` trials with seeds rng_seed xor trial-index, aggregate RMSE.
// Trials are distributed over the worker pool.
SweepResult sweep(const ScenarioConfig& base, SweepAxis axis, const std::vector<Real>& values,
                  int count, const PipelineOptions& options = {});

// One data row per axis point; wall time stays out of the file so identical
// invocations produce byte-identical output.
void export_csv(const SweepResult& result, const std::string& path);

// Applies one sweep-axis value to a scenario clone (exposed for tests).
ScenarioConfig apply_axis(const ScenarioConfig& base, SweepAxis axis, Real value);

// Worker pool: BMDM_WORKERS caps concurrency, defaulting to the hardware
// thread count.
int worker_count();
void parallel_for(int items, const std::function<void(int)>& fn);

}  // namespace bmdm
