#include "bmdm/scenario.hpp"

#include <cctype>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>

#include "bmdm/errors.hpp"
#include "bmdm/fft.hpp"
#include "bmdm/rng.hpp"

namespace bmdm {
namespace {

// Preset fading magnitudes. The echo model treats per-path gains as opaque
// fading products; these defaults keep the monitor path dominant over each
// clutter return while leaving the interference non-trivial.
constexpr Real kPresetInterfererGain = 0.65;
constexpr Real kPresetClutterGain = 0.9;

std::string trim(const std::string& s) {
  size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

Real parse_real(const std::string& text, const std::string& context) {
  const std::string t = trim(text);
  if (t == "inf" || t == "+inf") return std::numeric_limits<Real>::infinity();
  const char* begin = t.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (end == begin || *end != '\0') {
    throw ParseError("expected number for " + context + ", got '" + t + "'");
  }
  return v;
}

long long parse_integer(const std::string& text, const std::string& context) {
  const std::string t = trim(text);
  const char* begin = t.c_str();
  char* end = nullptr;
  const long long v = std::strtoll(begin, &end, 10);
  if (end == begin || *end != '\0') {
    throw ParseError("expected integer for " + context + ", got '" + t + "'");
  }
  return v;
}

std::uint64_t parse_u64(const std::string& text, const std::string& context) {
  const std::string t = trim(text);
  const char* begin = t.c_str();
  char* end = nullptr;
  const std::uint64_t v = std::strtoull(begin, &end, 10);
  if (end == begin || *end != '\0') {
    throw ParseError("expected unsigned integer for " + context + ", got '" + t + "'");
  }
  return v;
}

std::vector<Real> parse_reals(const std::string& text, size_t count, const std::string& context) {
  std::istringstream in(text);
  std::vector<Real> out;
  std::string tok;
  while (in >> tok) out.push_back(parse_real(tok, context));
  if (out.size() != count) {
    throw ParseError(context + ": expected " + std::to_string(count) + " values, got " +
                     std::to_string(out.size()));
  }
  return out;
}

Vec3 parse_vec3(const std::string& text, const std::string& context) {
  const auto v = parse_reals(text, 3, context);
  return Vec3(v[0], v[1], v[2]);
}

Complex parse_complex(const std::string& text, const std::string& context) {
  const auto v = parse_reals(text, 2, context);
  return Complex(v[0], v[1]);
}

std::string fmt_real(Real v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string fmt_vec3(const Vec3& v) {
  return fmt_real(v.x()) + " " + fmt_real(v.y()) + " " + fmt_real(v.z());
}

std::string fmt_complex(const Complex& v) {
  return fmt_real(v.real()) + " " + fmt_real(v.imag());
}

void require(bool ok, const std::string& field, const std::string& detail) {
  if (!ok) throw ValidationError(field, detail);
}

}  // namespace

void validate(ScenarioConfig& config) {
  auto& b = config.bridge;
  require(b.span_m > 0, "span_m", "must be positive");
  require(b.youngs_modulus_pa > 0, "youngs_modulus_pa", "must be positive");
  require(b.inertia_m4 > 0, "inertia_m4", "must be positive");
  require(b.mass_per_length_kg_m > 0, "mass_per_length_kg_m", "must be positive");
  require(std::isfinite(b.damping_per_m), "damping_per_m", "must be finite");
  b.damping_per_m = std::abs(b.damping_per_m);  // attenuation magnitude
  require(b.free_amplitude_m >= 0, "free_amplitude_m", "must be non-negative");
  const Real dir_norm = b.direction.norm();
  require(dir_norm > 0, "direction", "must be a nonzero vector");
  b.direction /= dir_norm;

  auto& r = config.radio;
  require(r.carrier_hz > 0, "carrier_hz", "must be positive");
  require(r.subcarrier_spacing_hz > 0, "subcarrier_spacing_hz", "must be positive");
  require(r.subcarriers >= 2 && is_power_of_two(r.subcarriers), "subcarriers",
          "must be a power of two >= 2");
  require(r.sensing_symbols >= 1, "sensing_symbols", "must be >= 1");
  require(r.frames >= 4, "frames", "must be >= 4 (unwrap bootstrap needs 3 history frames)");
  require(r.frame_duration_s > 0, "frame_duration_s", "must be positive");
  require(r.symbol_duration_s > 0, "symbol_duration_s", "must be positive");
  require(r.tx_array_x >= 1 && r.tx_array_z >= 1, "tx_array", "counts must be >= 1");
  require(r.rx_array_x >= 1 && r.rx_array_z >= 1, "rx_array", "counts must be >= 1");
  require(r.monitor_point.norm() > 0, "monitor_point", "must not be the base station origin");
  require(std::abs(r.micro_gain) > 0, "micro_gain", "must be nonzero");
  require(r.ipm_extended_symbols >= 0, "ipm_extended_symbols", "must be >= 0");

  for (size_t i = 0; i < config.sources.size(); ++i) {
    const auto& s = config.sources[i];
    const std::string field = "source[" + std::to_string(i) + "]";
    require(s.amplitude_m >= 0, field + ".amplitude_m", "must be non-negative");
    require(s.frequency_hz > 0, field + ".frequency_hz", "must be positive");
    require(s.position.has_value() != s.interferer.has_value(), field,
            "needs exactly one of position / interferer");
    if (s.interferer) {
      require(*s.interferer >= 0 &&
                  *s.interferer < static_cast<int>(config.interferers.size()),
              field + ".interferer", "index out of range");
    }
  }

  for (size_t k = 0; k < config.interferers.size(); ++k) {
    const auto& it = config.interferers[k];
    const std::string field = "interferer[" + std::to_string(k) + "]";
    const Vec3 rel = it.initial_position - r.monitor_point;
    const Real along = rel.dot(b.direction);
    const Real off_line = (rel - along * b.direction).norm();
    require(off_line <= 1e-6, field + ".position", "must lie on the bridge line");
    require(std::abs(along) <= b.span_m / 2 + 1e-9, field + ".position",
            "must lie within the bridge span");
  }

  for (size_t s = 0; s < config.clutter.size(); ++s) {
    const auto& c = config.clutter[s];
    const std::string field = "clutter[" + std::to_string(s) + "]";
    require(c.position.norm() > 0, field + ".position", "must not be the origin");
    require(c.position.y() >= 0, field + ".position",
            "must lie in the service half-space (azimuth 0..180 deg)");
  }

  require(std::isfinite(config.snr_db) || config.snr_db > 0, "snr_db",
          "must be finite or +inf");
  require(config.cpm_threshold_factor > 0 && config.cpm_threshold_factor < 1,
          "cpm_threshold_factor", "must be in (0, 1)");
  require(config.cpm_circular_proportion > 0 && config.cpm_circular_proportion <= 1,
          "cpm_circular_proportion", "must be in (0, 1]");
}

ScenarioConfig load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open scenario file: " + path);

  ScenarioConfig config;
  config.sources.clear();
  config.interferers.clear();
  config.clutter.clear();

  std::string section;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') {
        throw ParseError("line " + std::to_string(line_no) + ": malformed section header");
      }
      section = trim(line.substr(1, line.size() - 2));
      if (section == "source") {
        config.sources.emplace_back();
        config.sources.back().frequency_hz = 0;  // force explicit value
      } else if (section == "interferer") {
        config.interferers.emplace_back();
      } else if (section == "clutter") {
        config.clutter.emplace_back();
      } else if (section != "scenario" && section != "bridge" && section != "radio") {
        throw ParseError("line " + std::to_string(line_no) + ": unknown section [" + section +
                         "]");
      }
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ParseError("line " + std::to_string(line_no) + ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const std::string ctx = "[" + section + "] " + key;

    if (section == "scenario") {
      if (key == "snr_db") config.snr_db = parse_real(value, ctx);
      else if (key == "rng_seed") config.rng_seed = parse_u64(value, ctx);
      else if (key == "cpm_threshold_factor") config.cpm_threshold_factor = parse_real(value, ctx);
      else if (key == "cpm_circular_proportion")
        config.cpm_circular_proportion = parse_real(value, ctx);
      else throw ParseError("line " + std::to_string(line_no) + ": unknown key " + ctx);
    } else if (section == "bridge") {
      auto& b = config.bridge;
      if (key == "span_m") b.span_m = parse_real(value, ctx);
      else if (key == "youngs_modulus_pa") b.youngs_modulus_pa = parse_real(value, ctx);
      else if (key == "inertia_m4") b.inertia_m4 = parse_real(value, ctx);
      else if (key == "mass_per_length_kg_m") b.mass_per_length_kg_m = parse_real(value, ctx);
      else if (key == "damping_per_m") b.damping_per_m = parse_real(value, ctx);
      else if (key == "free_amplitude_m") b.free_amplitude_m = parse_real(value, ctx);
      else if (key == "free_phase_rad") b.free_phase_rad = parse_real(value, ctx);
      else if (key == "direction") b.direction = parse_vec3(value, ctx);
      else throw ParseError("line " + std::to_string(line_no) + ": unknown key " + ctx);
    } else if (section == "radio") {
      auto& r = config.radio;
      if (key == "carrier_hz") r.carrier_hz = parse_real(value, ctx);
      else if (key == "subcarrier_spacing_hz") r.subcarrier_spacing_hz = parse_real(value, ctx);
      else if (key == "subcarriers") r.subcarriers = static_cast<int>(parse_integer(value, ctx));
      else if (key == "sensing_symbols")
        r.sensing_symbols = static_cast<int>(parse_integer(value, ctx));
      else if (key == "frames") r.frames = static_cast<int>(parse_integer(value, ctx));
      else if (key == "frame_duration_s") r.frame_duration_s = parse_real(value, ctx);
      else if (key == "symbol_duration_s") r.symbol_duration_s = parse_real(value, ctx);
      else if (key == "tx_array") {
        const auto v = parse_reals(value, 2, ctx);
        r.tx_array_x = static_cast<int>(v[0]);
        r.tx_array_z = static_cast<int>(v[1]);
      } else if (key == "rx_array") {
        const auto v = parse_reals(value, 2, ctx);
        r.rx_array_x = static_cast<int>(v[0]);
        r.rx_array_z = static_cast<int>(v[1]);
      } else if (key == "monitor_point") r.monitor_point = parse_vec3(value, ctx);
      else if (key == "beam_offset") r.beam_offset = parse_vec3(value, ctx);
      else if (key == "micro_gain") r.micro_gain = parse_complex(value, ctx);
      else if (key == "ipm_extended_symbols")
        r.ipm_extended_symbols = static_cast<int>(parse_integer(value, ctx));
      else throw ParseError("line " + std::to_string(line_no) + ": unknown key " + ctx);
    } else if (section == "source") {
      if (config.sources.empty()) throw ParseError("key outside [source] section");
      auto& s = config.sources.back();
      if (key == "amplitude_m") s.amplitude_m = parse_real(value, ctx);
      else if (key == "frequency_hz") s.frequency_hz = parse_real(value, ctx);
      else if (key == "phase_rad") s.phase_rad = parse_real(value, ctx);
      else if (key == "position") s.position = parse_vec3(value, ctx);
      else if (key == "interferer") s.interferer = static_cast<int>(parse_integer(value, ctx));
      else throw ParseError("line " + std::to_string(line_no) + ": unknown key " + ctx);
    } else if (section == "interferer") {
      if (config.interferers.empty()) throw ParseError("key outside [interferer] section");
      auto& it = config.interferers.back();
      if (key == "position") it.initial_position = parse_vec3(value, ctx);
      else if (key == "speed_m_s") it.speed_m_s = parse_real(value, ctx);
      else if (key == "gain") it.gain = parse_complex(value, ctx);
      else throw ParseError("line " + std::to_string(line_no) + ": unknown key " + ctx);
    } else if (section == "clutter") {
      if (config.clutter.empty()) throw ParseError("key outside [clutter] section");
      auto& c = config.clutter.back();
      if (key == "position") c.position = parse_vec3(value, ctx);
      else if (key == "gain") c.gain = parse_complex(value, ctx);
      else throw ParseError("line " + std::to_string(line_no) + ": unknown key " + ctx);
    } else {
      throw ParseError("line " + std::to_string(line_no) + ": key before any section");
    }
  }

  validate(config);
  return config;
}

void save_scenario(const ScenarioConfig& config, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write scenario file: " + path);

  out << "[scenario]\n";
  out << "snr_db = " << fmt_real(config.snr_db) << "\n";
  out << "rng_seed = " << config.rng_seed << "\n";
  out << "cpm_threshold_factor = " << fmt_real(config.cpm_threshold_factor) << "\n";
  out << "cpm_circular_proportion = " << fmt_real(config.cpm_circular_proportion) << "\n\n";

  const auto& b = config.bridge;
  out << "[bridge]\n";
  out << "span_m = " << fmt_real(b.span_m) << "\n";
  out << "youngs_modulus_pa = " << fmt_real(b.youngs_modulus_pa) << "\n";
  out << "inertia_m4 = " << fmt_real(b.inertia_m4) << "\n";
  out << "mass_per_length_kg_m = " << fmt_real(b.mass_per_length_kg_m) << "\n";
  out << "damping_per_m = " << fmt_real(b.damping_per_m) << "\n";
  out << "free_amplitude_m = " << fmt_real(b.free_amplitude_m) << "\n";
  out << "free_phase_rad = " << fmt_real(b.free_phase_rad) << "\n";
  out << "direction = " << fmt_vec3(b.direction) << "\n\n";

  const auto& r = config.radio;
  out << "[radio]\n";
  out << "carrier_hz = " << fmt_real(r.carrier_hz) << "\n";
  out << "subcarrier_spacing_hz = " << fmt_real(r.subcarrier_spacing_hz) << "\n";
  out << "subcarriers = " << r.subcarriers << "\n";
  out << "sensing_symbols = " << r.sensing_symbols << "\n";
  out << "frames = " << r.frames << "\n";
  out << "frame_duration_s = " << fmt_real(r.frame_duration_s) << "\n";
  out << "symbol_duration_s = " << fmt_real(r.symbol_duration_s) << "\n";
  out << "tx_array = " << r.tx_array_x << " " << r.tx_array_z << "\n";
  out << "rx_array = " << r.rx_array_x << " " << r.rx_array_z << "\n";
  out << "monitor_point = " << fmt_vec3(r.monitor_point) << "\n";
  out << "beam_offset = " << fmt_vec3(r.beam_offset) << "\n";
  out << "micro_gain = " << fmt_complex(r.micro_gain) << "\n";
  out << "ipm_extended_symbols = " << r.ipm_extended_symbols << "\n";

  for (const auto& s : config.sources) {
    out << "\n[source]\n";
    out << "amplitude_m = " << fmt_real(s.amplitude_m) << "\n";
    out << "frequency_hz = " << fmt_real(s.frequency_hz) << "\n";
    out << "phase_rad = " << fmt_real(s.phase_rad) << "\n";
    if (s.position) out << "position = " << fmt_vec3(*s.position) << "\n";
    if (s.interferer) out << "interferer = " << *s.interferer << "\n";
  }
  for (const auto& it : config.interferers) {
    out << "\n[interferer]\n";
    out << "position = " << fmt_vec3(it.initial_position) << "\n";
    out << "speed_m_s = " << fmt_real(it.speed_m_s) << "\n";
    out << "gain = " << fmt_complex(it.gain) << "\n";
  }
  for (const auto& c : config.clutter) {
    out << "\n[clutter]\n";
    out << "position = " << fmt_vec3(c.position) << "\n";
    out << "gain = " << fmt_complex(c.gain) << "\n";
  }
  if (!out) throw IoError("write failed: " + path);
}

namespace {

// Draw order is part of the preset contract: clutter first, then one
// (position, gain phase, excitation amplitude, excitation frequency) block
// per mover.
void draw_clutter(ScenarioConfig& config, int count, SplitMix64& rng) {
  config.clutter.clear();
  for (int s = 0; s < count; ++s) {
    StaticClutter c;
    c.position = Vec3(rng.uniform(60.0, 280.0), rng.uniform(20.0, 110.0),
                      rng.uniform(-30.0, -2.0));
    c.gain = std::polar(kPresetClutterGain, rng.uniform(-kPi, kPi));
    config.clutter.push_back(c);
  }
}

void draw_interferers(ScenarioConfig& config, const std::vector<Real>& speeds,
                      bool random_speed, Real speed_lo, Real speed_hi, SplitMix64& rng,
                      bool attach_excitations) {
  // Drop previous movers together with the excitation sources riding them.
  std::erase_if(config.sources, [](const ExcitationSource& s) { return s.interferer.has_value(); });
  config.interferers.clear();

  const int count = static_cast<int>(speeds.size());
  const Vec3 monitor = config.radio.monitor_point;
  const Vec3 dir = config.bridge.direction.normalized();
  const Real half_span = config.bridge.span_m / 2;

  for (int k = 0; k < count; ++k) {
    Interferer it;
    it.initial_position = monitor + rng.uniform(-half_span, half_span) * dir;
    it.speed_m_s = random_speed ? rng.uniform(speed_lo, speed_hi) : speeds[k];
    it.gain = std::polar(kPresetInterfererGain, rng.uniform(-kPi, kPi));
    config.interferers.push_back(it);

    if (!attach_excitations) continue;
    // Each mover excites the deck as it drives (amplitude 10-50 mm,
    // frequency 0.2-5 Hz, zero initial phase).
    ExcitationSource e;
    e.amplitude_m = rng.uniform(0.010, 0.050);
    e.frequency_hz = rng.uniform(0.2, 5.0);
    e.phase_rad = 0.0;
    e.interferer = k;
    config.sources.push_back(e);
  }
}

}  // namespace

ScenarioConfig preset_condition(int id, std::uint64_t seed) {
  if (id < 1 || id > 3) throw ValidationError("condition", "must be 1, 2, or 3");

  ScenarioConfig config;
  config.rng_seed = seed;
  config.snr_db = 0.0;

  config.bridge = BridgeParams{};  // defaults carry the reference deck parameters

  config.radio = RadioParams{};
  config.radio.micro_gain = Complex(1.0, 0.0);

  // Five fixed excitation sources along the deck.
  const struct {
    Real amp_mm, freq_hz, x;
  } fixed[5] = {
      {5.15, 0.8, 145.0}, {3.72, 1.5, 165.0}, {4.59, 0.6, 180.0},
      {3.42, 1.1, 195.0}, {4.68, 1.3, 220.0},
  };
  config.sources.clear();
  for (const auto& f : fixed) {
    ExcitationSource s;
    s.amplitude_m = f.amp_mm * 1e-3;
    s.frequency_hz = f.freq_hz;
    s.phase_rad = 0.0;
    s.position = Vec3(f.x, 60.0, -25.0);
    config.sources.push_back(s);
  }

  SplitMix64 rng(mix64(seed) ^ static_cast<std::uint64_t>(id));
  draw_clutter(config, 8, rng);

  std::vector<Real> speeds;
  if (id == 2) speeds = {12.0};
  if (id == 3) speeds = {30.0, 15.0, -12.0};
  draw_interferers(config, speeds, /*random_speed=*/false, 0, 0, rng,
                   /*attach_excitations=*/true);

  validate(config);
  return config;
}

void randomize_interferers(ScenarioConfig& config, int count, Real speed_lo, Real speed_hi,
                           std::uint64_t seed, bool attach_excitations) {
  SplitMix64 rng(mix64(seed) ^ 0x4bULL);
  std::vector<Real> placeholder(count, 0.0);
  draw_interferers(config, placeholder, /*random_speed=*/true, speed_lo, speed_hi, rng,
                   attach_excitations);
  validate(config);
}

}  // namespace bmdm
