// bmdm: scenario presets, single monitoring runs, and Monte Carlo sweeps
// for the OFDM echo bridge-deformation pipeline.

#include <cstdio>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "bmdm/bridge_dynamics.hpp"
#include "bmdm/echo_synthesis.hpp"
#include "bmdm/errors.hpp"
#include "bmdm/harness.hpp"
#include "bmdm/scenario.hpp"

namespace {

std::vector<double> parse_values(const std::string& text) {
  std::vector<double> out;
  std::string token;
  for (char c : text) {
    if (c == ',' || c == ' ') {
      if (!token.empty()) out.push_back(std::stod(token));
      token.clear();
    } else {
      token += c;
    }
  }
  if (!token.empty()) out.push_back(std::stod(token));
  return out;
}

bmdm::SweepAxis parse_axis(const std::string& name) {
  if (name == "snr") return bmdm::SweepAxis::SnrDb;
  if (name == "M") return bmdm::SweepAxis::Subcarriers;
  if (name == "N") return bmdm::SweepAxis::Symbols;
  if (name == "K") return bmdm::SweepAxis::Interferers;
  if (name == "offset") return bmdm::SweepAxis::BeamOffset;
  throw CLI::ValidationError("--axis", "expected one of snr|M|N|K|offset");
}

bmdm::DynamicMode parse_dynamic(const std::string& name) {
  if (name == "auto") return bmdm::DynamicMode::Auto;
  if (name == "cf-sdir") return bmdm::DynamicMode::ForceCfSdir;
  if (name == "pm-mdis") return bmdm::DynamicMode::ForcePmMdis;
  if (name == "ipm") return bmdm::DynamicMode::Ipm;
  if (name == "off") return bmdm::DynamicMode::Off;
  throw CLI::ValidationError("--dynamic", "expected auto|cf-sdir|pm-mdis|ipm|off");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"OFDM ISAC bridge micro-deformation monitoring simulator"};
  app.require_subcommand(1);

  // --- preset ---
  auto* preset = app.add_subcommand("preset", "write a builtin scenario to a file");
  int preset_condition_id = 1;
  std::uint64_t preset_seed = bmdm::kDefaultPresetSeed;
  std::string preset_out;
  preset->add_option("--condition", preset_condition_id, "experimental condition (1|2|3)")
      ->required()
      ->check(CLI::Range(1, 3));
  preset->add_option("--seed", preset_seed, "scenario randomization seed");
  preset->add_option("--out", preset_out, "output scenario file")->required();

  // --- run ---
  auto* run = app.add_subcommand("run", "run one monitoring trial");
  std::string run_scenario;
  std::uint64_t run_seed = 1;
  std::string run_out, run_report, run_dump;
  std::string run_dynamic = "auto";
  bool run_no_static = false;
  run->add_option("--scenario", run_scenario, "scenario file")->required();
  run->add_option("--seed", run_seed, "trial noise seed");
  run->add_option("--out", run_out, "deformation trace CSV");
  run->add_option("--report", run_report, "per-frame suppression report CSV");
  run->add_option("--dump-tensor", run_dump, "binary echo tensor dump");
  run->add_option("--dynamic", run_dynamic, "dynamic stage: auto|cf-sdir|pm-mdis|ipm|off");
  run->add_flag("--no-static-removal", run_no_static, "skip the static clutter stage");

  // --- sweep ---
  auto* sweep_cmd = app.add_subcommand("sweep", "Monte Carlo RMSE sweep over one axis");
  int sweep_condition_id = 0;
  std::string sweep_scenario;
  std::string sweep_axis = "snr";
  std::string sweep_values;
  int sweep_count = 20;
  int sweep_frames = 300;
  double sweep_snr = 0.0;
  std::uint64_t sweep_seed = 0;
  std::string sweep_out;
  std::string sweep_dynamic = "auto";
  bool sweep_no_static = false;
  sweep_cmd->add_option("--condition", sweep_condition_id, "builtin condition (1|2|3)")
      ->check(CLI::Range(1, 3));
  sweep_cmd->add_option("--scenario", sweep_scenario, "scenario file (overrides --condition)");
  sweep_cmd->add_option("--axis", sweep_axis, "snr|M|N|K|offset")->required();
  sweep_cmd->add_option("--values", sweep_values, "comma-separated axis values")->required();
  sweep_cmd->add_option("--count", sweep_count, "Monte Carlo trials per point");
  sweep_cmd->add_option("--frames", sweep_frames, "frames per trial (desk-scale default 300)");
  sweep_cmd->add_option("--snr", sweep_snr, "base SNR in dB for non-snr axes");
  auto* sweep_seed_opt = sweep_cmd->add_option("--seed", sweep_seed, "scenario seed override");
  sweep_cmd->add_option("--out", sweep_out, "output CSV")->required();
  sweep_cmd->add_option("--dynamic", sweep_dynamic, "dynamic stage: auto|cf-sdir|pm-mdis|ipm|off");
  sweep_cmd->add_flag("--no-static-removal", sweep_no_static, "skip the static clutter stage");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*preset) {
      const bmdm::ScenarioConfig config = bmdm::preset_condition(preset_condition_id, preset_seed);
      bmdm::save_scenario(config, preset_out);
      std::printf("wrote condition %d scenario to %s\n", preset_condition_id, preset_out.c_str());
      return 0;
    }

    if (*run) {
      bmdm::ScenarioConfig config = bmdm::load_scenario(run_scenario);
      bmdm::PipelineOptions options;
      options.dynamic = parse_dynamic(run_dynamic);
      options.static_removal = !run_no_static;

      if (!run_dump.empty()) {
        bmdm::ScenarioConfig dump_config = config;
        dump_config.rng_seed = run_seed;
        const auto truth = bmdm::sample_deformation_truth(dump_config);
        bmdm::write_tensor(bmdm::synthesize_echo(dump_config, truth), run_dump);
        std::printf("tensor dump: %s\n", run_dump.c_str());
      }

      const bmdm::TrialResult result = bmdm::run_trial(config, run_seed, options);
      const double err = std::sqrt((result.trace.estimate_m - result.trace.truth_m).squaredNorm() /
                                   static_cast<double>(result.trace.estimate_m.size()));
      std::printf("frames: %d  measured snr: %.2f dB  rmse: %.6g m  wrap corrections: %d\n",
                  static_cast<int>(result.trace.estimate_m.size()), result.measured_snr_db, err,
                  result.trace.wrap_corrections);
      if (!run_out.empty()) {
        result.trace.to_csv(run_out);
        std::printf("trace: %s\n", run_out.c_str());
      }
      if (!run_report.empty()) {
        result.suppression.to_csv(run_report);
        std::printf("suppression report: %s\n", run_report.c_str());
      }
      return 0;
    }

    if (*sweep_cmd) {
      bmdm::ScenarioConfig base;
      if (!sweep_scenario.empty()) {
        base = bmdm::load_scenario(sweep_scenario);
      } else if (sweep_condition_id >= 1) {
        base = bmdm::preset_condition(sweep_condition_id);
      } else {
        std::fprintf(stderr, "sweep needs --scenario or --condition\n");
        return 1;
      }
      base.radio.frames = sweep_frames;
      base.snr_db = sweep_snr;
      if (sweep_seed_opt->count() > 0) base.rng_seed = sweep_seed;
      bmdm::validate(base);

      bmdm::PipelineOptions options;
      options.dynamic = parse_dynamic(sweep_dynamic);
      options.static_removal = !sweep_no_static;

      const auto axis = parse_axis(sweep_axis);
      const auto values = parse_values(sweep_values);
      const bmdm::SweepResult result = bmdm::sweep(base, axis, values, sweep_count, options);

      for (size_t i = 0; i < result.values.size(); ++i) {
        std::printf("%s=%g  rmse=%.6g m  (count=%d)\n", bmdm::sweep_axis_name(axis),
                    result.values[i], result.rmse_m[i], result.count);
      }
      std::printf("wall time: %.1f s  workers: %d\n", result.wall_seconds, bmdm::worker_count());
      bmdm::export_csv(result, sweep_out);
      std::printf("csv: %s\n", sweep_out.c_str());
      return 0;
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
