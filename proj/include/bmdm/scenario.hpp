#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bmdm/types.hpp"

namespace bmdm {

// Excitation-coupling model of the monitored span. The damping coefficient
// is stored as a positive magnitude and always applied as decay exp(-zeta*dL).
struct BridgeParams {
  Real span_m = 100.0;
  Real youngs_modulus_pa = 2.943e10;
  Real inertia_m4 = 8.65;
  Real mass_per_length_kg_m = 3.6e4;
  Real damping_per_m = 0.02;
  Real free_amplitude_m = 1.35e-3;
  Real free_phase_rad = 0.0;
  Vec3 direction = Vec3(1.0, 0.0, 0.0);  // unit vector along the deck
};

// One sinusoidal excitation acting on the deck. Static sources sit at a
// fixed position; dynamic sources ride an interferer (vehicle) and their
// distance to the monitor point follows that interferer's motion.
struct ExcitationSource {
  Real amplitude_m = 0.0;
  Real frequency_hz = 1.0;
  Real phase_rad = 0.0;
  std::optional<Vec3> position;    // set for static sources
  std::optional<int> interferer;   // set for dynamic sources (index)

  bool is_static() const { return position.has_value(); }
};

// Moving scatterer on the deck (vehicle, pedestrian).
struct Interferer {
  Vec3 initial_position = Vec3::Zero();
  Real speed_m_s = 0.0;   // signed, along the bridge direction
  Complex gain = Complex(1.0, 0.0);  // echo fading factor, constant per frame
};

struct StaticClutter {
  Vec3 position = Vec3::Zero();
  Complex gain = Complex(1.0, 0.0);
};

struct RadioParams {
  Real carrier_hz = 26e9;
  Real subcarrier_spacing_hz = 480e3;
  int subcarriers = 1024;       // power of two
  int sensing_symbols = 42;     // per frame
  int frames = 1500;
  Real frame_duration_s = 10e-3;
  Real symbol_duration_s = 10e-6;
  int tx_array_x = 8;
  int tx_array_z = 8;
  int rx_array_x = 8;
  int rx_array_z = 8;
  Vec3 monitor_point = Vec3(180.0, 60.0, -25.0);
  Vec3 beam_offset = Vec3::Zero();  // zero for perfect alignment
  Complex micro_gain = Complex(1.0, 0.0);  // fading factor of the monitor path
  // Extra sensing symbols synthesized per frame when the improved
  // phasor-mean method is enabled (0 = regular symbol budget).
  int ipm_extended_symbols = 0;
};

struct ScenarioConfig {
  BridgeParams bridge;
  std::vector<ExcitationSource> sources;
  std::vector<Interferer> interferers;
  std::vector<StaticClutter> clutter;
  RadioParams radio;
  Real snr_db = 0.0;  // +inf for a noiseless run
  std::uint64_t rng_seed = 1;
  Real cpm_threshold_factor = 0.2;
  Real cpm_circular_proportion = 0.9;
};

// Throws ValidationError naming the offending field. Normalizes the bridge
// direction vector in place.
void validate(ScenarioConfig& config);

ScenarioConfig load_scenario(const std::string& path);
void save_scenario(const ScenarioConfig& config, const std::string& path);

inline constexpr std::uint64_t kDefaultPresetSeed = 0x42d15eedULL;

// The three experimental setups: I has no movers, II one at 12 m/s,
// III three at {30, 15, -12} m/s. Clutter positions, mover start points,
// gain phases, and dynamic excitation parameters are drawn from `seed`.
ScenarioConfig preset_condition(int id, std::uint64_t seed = kDefaultPresetSeed);

// Replaces the interferer set (and any excitation sources riding the old
// movers) with `count` movers drawn from `seed`: start points on the deck,
// speeds uniform in [speed_lo, speed_hi], fresh gain phases. The K sweep
// axis regenerates movers as echo clutter only (attach_excitations = false)
// so the interference study does not also re-load the deck.
void randomize_interferers(ScenarioConfig& config, int count, Real speed_lo, Real speed_hi,
                           std::uint64_t seed, bool attach_excitations = true);

}  // namespace bmdm
