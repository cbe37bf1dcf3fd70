#include "bmdm/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <limits>
#include <mutex>
#include <thread>

#include "bmdm/bridge_dynamics.hpp"
#include "bmdm/echo_synthesis.hpp"
#include "bmdm/errors.hpp"
#include "bmdm/range_processing.hpp"

namespace bmdm {
namespace {

DeformationTrace zero_trace(int frames, const RadioParams& radio) {
  DeformationTrace trace;
  trace.frame_duration_s = radio.frame_duration_s;
  trace.radial_change_m = RealVector::Zero(frames);
  trace.estimate_m = RealVector::Zero(frames);
  trace.wrapped_phase_rad = RealVector::Zero(frames);
  trace.unwrapped_phase_rad = RealVector::Zero(frames);
  trace.wrap_index = Eigen::VectorXi::Zero(frames);
  trace.wrap_corrections = 0;
  return trace;
}

}  // namespace

TrialResult run_trial(const ScenarioConfig& scenario, std::uint64_t seed,
                      const PipelineOptions& options) {
  const auto& radio = scenario.radio;
  const int frames = radio.frames;

  int symbol_count = radio.sensing_symbols;
  if (options.dynamic == DynamicMode::Ipm) {
    if (radio.ipm_extended_symbols <= radio.sensing_symbols) {
      throw Error("IPM mode needs radio.ipm_extended_symbols above the sensing budget");
    }
    symbol_count = radio.ipm_extended_symbols;
  } else if (options.dynamic == DynamicMode::Auto &&
             radio.ipm_extended_symbols > radio.sensing_symbols) {
    // extended window configured: the dispatcher may hand non-circular
    // frames to the tuned mean instead of the plain one
    symbol_count = radio.ipm_extended_symbols;
  }

  const DeformationTruth truth = sample_deformation_truth(scenario);
  const GainSet gains = beamforming_gains(scenario);
  const int kappa =
      micro_range_bin(radio.monitor_point.norm(), radio.subcarriers, radio.subcarrier_spacing_hz);

  // Pass 1: noiseless power over the whole tensor fixes the noise variance.
  const std::uint64_t cells = static_cast<std::uint64_t>(frames) * symbol_count *
                              static_cast<std::uint64_t>(radio.subcarriers);
  Real power_sum = 0.0;
  for (int p = 0; p < frames; ++p) {
    power_sum += synthesize_clean_frame(scenario, gains, truth, p, symbol_count)
                     .array()
                     .abs2()
                     .sum();
  }
  const Real signal_power = power_sum / static_cast<Real>(cells);
  const Real sigma2 = calibrate_noise(signal_power, scenario.snr_db);

  // Pass 2: stream frames through dynamic suppression.
  TrialResult result;
  result.seed = seed;
  result.suppression.method.resize(frames);
  result.suppression.qualified_fraction.assign(frames, 0.0);
  result.suppression.center.resize(frames);
  result.suppression.ipm_dopplers.resize(frames);

  PhasorSeries series;
  series.values.resize(frames);
  series.stage = SeriesStage::PostDynamic;

  Real noise_sum = 0.0;
  for (int p = 0; p < frames; ++p) {
    ComplexMatrix frame = synthesize_clean_frame(scenario, gains, truth, p, symbol_count);
    noise_sum += add_noise(frame, seed, p, sigma2);
    const ComplexVector row = feature_row_direct(frame, kappa);

    Complex value;
    SuppressionMethod method = SuppressionMethod::PmMdis;
    Real fraction = 0.0;
    switch (options.dynamic) {
      case DynamicMode::Auto: {
        const CpmResult r = cpm(row, scenario);
        value = r.value;
        method = r.method;
        fraction = r.qualified_fraction;
        break;
      }
      case DynamicMode::ForceCfSdir: {
        try {
          const CircleFit fit = fit_circle(row, 3, scenario.cpm_threshold_factor);
          value = fit.center;
          method = SuppressionMethod::CfSdir;
          fraction = fit.qualified_fraction;
        } catch (const DegenerateFit&) {
          value = pm_mdis(row);
        }
        break;
      }
      case DynamicMode::ForcePmMdis:
        value = pm_mdis(row);
        break;
      case DynamicMode::Ipm: {
        const IpmSelection sel =
            ipm_symbol_count(row, radio, options.ipm_velocity_resolution_m_s);
        value = row.head(sel.symbol_count).mean();
        method = SuppressionMethod::Ipm;
        result.suppression.ipm_dopplers[p] = sel.dopplers_per_symbol;
        break;
      }
      case DynamicMode::Off:
        value = row[0];
        break;
    }
    series.values[p] = value;
    result.suppression.method[p] = method;
    result.suppression.qualified_fraction[p] = fraction;
    result.suppression.center[p] = value;
  }

  result.measured_snr_db =
      sigma2 > 0.0
          ? 10.0 * std::log10(signal_power / (noise_sum / static_cast<Real>(cells)))
          : std::numeric_limits<Real>::infinity();

  // Static stage.
  PhasorSeries post_static;
  bool series_is_zero = false;
  if (options.static_removal) {
    try {
      post_static = cf_msir(series);
    } catch (const DegenerateFit&) {
      // Flat arc: subtract the temporal mean. An identically-zero residual
      // means no detectable motion, which is an all-zero trace, not an error.
      const Complex mean = series.values.mean();
      post_static.values = series.values.array() - mean;
      post_static.stage = SeriesStage::PostStatic;
      post_static.static_center = mean;
      series_is_zero = post_static.values.cwiseAbs().maxCoeff() == 0.0;
    }
  } else {
    post_static.values = series.values;
    post_static.stage = SeriesStage::PostStatic;
  }

  result.trace = series_is_zero ? zero_trace(frames, radio)
                                : estimate_trace(post_static, radio, radio.monitor_point);
  result.trace.truth_m = truth.displacement.array() - truth.displacement[0];
  return result;
}

Real rmse(const std::vector<TrialResult>& trials) {
  if (trials.empty()) throw EmptyInput("rmse over an empty trial set");
  const Eigen::Index frames = trials.front().trace.estimate_m.size();
  std::vector<Real> per_trial;
  per_trial.reserve(trials.size());
  for (const auto& trial : trials) {
    if (trial.trace.estimate_m.size() != frames || trial.trace.truth_m.size() != frames) {
      throw Error("trials have mismatched frame counts");
    }
    per_trial.push_back((trial.trace.estimate_m - trial.trace.truth_m).squaredNorm());
  }
  // Canonical reduction order: the aggregate is bit-identical under any
  // permutation of the trial set (and hence any worker schedule).
  std::sort(per_trial.begin(), per_trial.end());
  Real sq_sum = 0.0;
  for (const Real v : per_trial) sq_sum += v;
  return std::sqrt(sq_sum / (static_cast<Real>(trials.size()) * static_cast<Real>(frames)));
}

const char* sweep_axis_name(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::SnrDb: return "snr";
    case SweepAxis::Subcarriers: return "M";
    case SweepAxis::Symbols: return "N";
    case SweepAxis::Interferers: return "K";
    case SweepAxis::BeamOffset: return "offset";
  }
  return "?";
}

ScenarioConfig apply_axis(const ScenarioConfig& base, SweepAxis axis, Real value) {
  ScenarioConfig config = base;
  switch (axis) {
    case SweepAxis::SnrDb:
      config.snr_db = value;
      break;
    case SweepAxis::Subcarriers:
      config.radio.subcarriers = static_cast<int>(value);
      break;
    case SweepAxis::Symbols:
      config.radio.sensing_symbols = static_cast<int>(value);
      break;
    case SweepAxis::Interferers:
      if (value < 0) throw ValidationError("K", "must be non-negative");
      // Movers enter as echo clutter only: the K axis studies interference
      // robustness, not extra deck loading.
      randomize_interferers(config, static_cast<int>(value), 0.0, 50.0,
                            base.rng_seed ^ (0x9e37ULL + static_cast<std::uint64_t>(value)),
                            /*attach_excitations=*/false);
      break;
    case SweepAxis::BeamOffset:
      config.radio.beam_offset = value * config.bridge.direction;
      break;
  }
  validate(config);
  return config;
}

SweepResult sweep(const ScenarioConfig& base, SweepAxis axis, const std::vector<Real>& values,
                  int count, const PipelineOptions& options) {
  if (values.empty()) throw EmptyInput("sweep needs at least one axis value");
  if (count < 1) throw EmptyInput("sweep needs at least one trial per point");

  const auto start = std::chrono::steady_clock::now();

  std::vector<ScenarioConfig> configs;
  configs.reserve(values.size());
  for (const Real v : values) configs.push_back(apply_axis(base, axis, v));

  const int points = static_cast<int>(values.size());
  std::vector<std::vector<TrialResult>> trials(points);
  for (auto& t : trials) t.resize(count);

  parallel_for(points * count, [&](int item) {
    const int vi = item / count;
    const int ti = item % count;
    const std::uint64_t seed = configs[vi].rng_seed ^ static_cast<std::uint64_t>(ti);
    trials[vi][ti] = run_trial(configs[vi], seed, options);
  });

  SweepResult result;
  result.axis = axis;
  result.values = values;
  result.count = count;
  result.rmse_m.reserve(points);
  for (int vi = 0; vi < points; ++vi) result.rmse_m.push_back(rmse(trials[vi]));
  result.wall_seconds =
      std::chrono::duration<Real>(std::chrono::steady_clock::now() - start).count();
  return result;
}

void export_csv(const SweepResult& result, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write sweep csv: " + path);
  out << "axis,value,rmse_m,count\n";
  char buf[128];
  for (size_t i = 0; i < result.values.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%s,%.17g,%.17g,%d\n", sweep_axis_name(result.axis),
                  result.values[i], result.rmse_m[i], result.count);
    out << buf;
  }
  if (!out) throw IoError("write failed: " + path);
}

int worker_count() {
  if (const char* env = std::getenv("BMDM_WORKERS")) {
    const int n = std::atoi(env);
    if (n >= 1) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

void parallel_for(int items, const std::function<void(int)>& fn) {
  const int workers = std::min(worker_count(), items);
  if (workers <= 1) {
    for (int i = 0; i < items; ++i) fn(i);
    return;
  }

  std::atomic<int> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;

  auto body = [&] {
    for (int i = next.fetch_add(1); i < items; i = next.fetch_add(1)) {
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };

  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) pool.emplace_back(body);
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace bmdm
