#include "bmdm/echo_synthesis.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>

#include "bmdm/errors.hpp"
#include "bmdm/rng.hpp"

namespace bmdm {
namespace {

// G exp(-j 4 pi f_m R / c) over m = 0..M-1 with f_m = fc + m df, evaluated
// as a geometric recurrence (one polar pair per path instead of M).
ComplexVector path_row(Complex gain, Real range_m, Real carrier_hz, Real spacing_hz, int m_count) {
  const Real base_phase = -4.0 * kPi * carrier_hz * range_m / kSpeedOfLight;
  const Real step_phase = -4.0 * kPi * spacing_hz * range_m / kSpeedOfLight;
  const Complex step = std::polar(1.0, step_phase);
  ComplexVector row(m_count);
  Complex value = gain * std::polar(1.0, base_phase);
  for (int m = 0; m < m_count; ++m) {
    row[m] = value;
    value *= step;
  }
  return row;
}

std::uint64_t cell_index(int p, int n, int m, int symbols, int subcarriers) {
  return (static_cast<std::uint64_t>(p) * symbols + n) * subcarriers + m;
}

}  // namespace

ComplexVector steering_vector(Real psi, Real omega, int nx, int nz, Real carrier_hz) {
  // d = lambda/2 makes the per-element phase increment pi*psi / pi*omega;
  // the carrier cancels out of exp(j 2 pi fc d psi / c) and is kept in the
  // signature only to mirror the physical definition.
  (void)carrier_hz;
  ComplexVector out(static_cast<Eigen::Index>(nx) * nz);
  for (int ix = 0; ix < nx; ++ix) {
    for (int iz = 0; iz < nz; ++iz) {
      out[static_cast<Eigen::Index>(ix) * nz + iz] =
          std::polar(1.0, kPi * (ix * psi + iz * omega));
    }
  }
  return out;
}

GainSet beamforming_gains(const ScenarioConfig& config) {
  const auto& r = config.radio;

  const SphericalPose truth_pose = to_spherical(r.monitor_point, 0.0);
  const SpatialDirection truth_dir = spatial_directions(truth_pose.theta_rad, truth_pose.phi_rad);

  const Vec3 aim_point = r.monitor_point + r.beam_offset;
  const SphericalPose aim_pose = to_spherical(aim_point, 0.0);
  const SpatialDirection aim_dir = spatial_directions(aim_pose.theta_rad, aim_pose.phi_rad);

  const ComplexVector rx_true =
      steering_vector(truth_dir.psi, truth_dir.omega, r.rx_array_x, r.rx_array_z, r.carrier_hz);
  const ComplexVector rx_aim =
      steering_vector(aim_dir.psi, aim_dir.omega, r.rx_array_x, r.rx_array_z, r.carrier_hz);
  const ComplexVector tx_true =
      steering_vector(truth_dir.psi, truth_dir.omega, r.tx_array_x, r.tx_array_z, r.carrier_hz);
  const ComplexVector tx_aim =
      steering_vector(aim_dir.psi, aim_dir.omega, r.tx_array_x, r.tx_array_z, r.carrier_hz);

  const Real n_rx = static_cast<Real>(rx_true.size());
  const Real n_tx = static_cast<Real>(tx_true.size());

  // w = a_rx(aim)/sqrt(Nr), transmit weight sqrt(rho Pt / Nh) a_tx(aim) with
  // rho Pt normalized to 1; absolute power only moves the SNR calibration.
  const Complex rx_factor = rx_aim.dot(rx_true) / std::sqrt(n_rx);  // w^H a_rx(true)
  const Complex tx_factor =
      (tx_true.transpose() * tx_aim.conjugate()).value() / std::sqrt(n_tx);

  const Complex array_factor = rx_factor * tx_factor;

  GainSet gains;
  gains.micro = r.micro_gain * array_factor;
  gains.interferer.reserve(config.interferers.size());
  for (const auto& it : config.interferers) gains.interferer.push_back(it.gain * array_factor);
  gains.clutter.reserve(config.clutter.size());
  for (const auto& c : config.clutter) gains.clutter.push_back(c.gain * array_factor);
  return gains;
}

ComplexMatrix synthesize_clean_frame(const ScenarioConfig& config, const GainSet& gains,
                                     const DeformationTruth& truth, int p, int symbol_count) {
  const auto& r = config.radio;
  const int n_sym = symbol_count > 0 ? symbol_count : r.sensing_symbols;
  const int m_count = r.subcarriers;

  const Real range_micro = radial_range(r.monitor_point, truth.displacement[p]);

  // Static-in-frame part: the monitor path plus all static clutter returns.
  ComplexVector shared = path_row(gains.micro, range_micro, r.carrier_hz,
                                  r.subcarrier_spacing_hz, m_count);
  for (size_t s = 0; s < config.clutter.size(); ++s) {
    shared += path_row(gains.clutter[s], config.clutter[s].position.norm(), r.carrier_hz,
                       r.subcarrier_spacing_hz, m_count);
  }

  const int k_count = static_cast<int>(config.interferers.size());
  std::vector<ComplexVector> mover_rows;
  std::vector<Complex> mover_rotation;
  mover_rows.reserve(k_count);
  mover_rotation.reserve(k_count);
  for (int k = 0; k < k_count; ++k) {
    const InterfererState st = interferer_kinematics(config, k, p);
    mover_rows.push_back(path_row(gains.interferer[k], st.range_m, r.carrier_hz,
                                  r.subcarrier_spacing_hz, m_count));
    // Within-frame Doppler rotation per symbol; range held at the frame value.
    mover_rotation.push_back(std::polar(
        1.0, 4.0 * kPi * r.carrier_hz * st.radial_velocity_m_s * r.symbol_duration_s /
                 kSpeedOfLight));
  }

  ComplexMatrix frame(n_sym, m_count);
  std::vector<Complex> rotation(k_count, Complex(1.0, 0.0));
  for (int n = 0; n < n_sym; ++n) {
    frame.row(n) = shared.transpose();
    for (int k = 0; k < k_count; ++k) {
      frame.row(n) += rotation[k] * mover_rows[k].transpose();
      rotation[k] *= mover_rotation[k];
    }
  }
  return frame;
}

Real add_noise(ComplexMatrix& frame, std::uint64_t seed, int p, Real sigma2) {
  if (sigma2 <= 0.0) return 0.0;
  const int n_sym = static_cast<int>(frame.rows());
  const int m_count = static_cast<int>(frame.cols());
  const Real scale = std::sqrt(sigma2);
  Real realized = 0.0;
  for (int n = 0; n < n_sym; ++n) {
    for (int m = 0; m < m_count; ++m) {
      const Complex noise =
          scale * unit_complex_gaussian(seed, cell_index(p, n, m, n_sym, m_count));
      realized += std::norm(noise);
      frame(n, m) += noise;
    }
  }
  return realized;
}

Real calibrate_noise(Real mean_signal_power, Real snr_db) {
  if (mean_signal_power <= 0.0) throw ZeroSignal("noiseless tensor has zero mean power");
  return mean_signal_power / std::pow(10.0, snr_db / 10.0);
}

Real calibrate_noise(const EchoTensor& noiseless, Real snr_db) {
  if (noiseless.data.empty()) throw ZeroSignal("empty tensor");
  Real power = 0.0;
  std::uint64_t cells = 0;
  for (const auto& frame : noiseless.data) {
    power += frame.array().abs2().sum();
    cells += static_cast<std::uint64_t>(frame.size());
  }
  if (cells == 0) throw ZeroSignal("empty tensor");
  return calibrate_noise(power / static_cast<Real>(cells), snr_db);
}

EchoTensor synthesize_echo(const ScenarioConfig& config, const DeformationTruth& truth) {
  const auto& r = config.radio;
  const GainSet gains = beamforming_gains(config);

  EchoTensor tensor;
  tensor.frames = r.frames;
  tensor.symbols = r.sensing_symbols;
  tensor.subcarriers = r.subcarriers;
  tensor.data.reserve(r.frames);

  Real power = 0.0;
  for (int p = 0; p < r.frames; ++p) {
    tensor.data.push_back(synthesize_clean_frame(config, gains, truth, p));
    power += tensor.data.back().array().abs2().sum();
  }
  const std::uint64_t cells = static_cast<std::uint64_t>(r.frames) * r.sensing_symbols *
                              static_cast<std::uint64_t>(r.subcarriers);
  tensor.signal_power = power / static_cast<Real>(cells);
  tensor.sigma2 = calibrate_noise(tensor.signal_power, config.snr_db);

  for (int p = 0; p < r.frames; ++p) {
    add_noise(tensor.data[p], config.rng_seed, p, tensor.sigma2);
  }
  return tensor;
}

namespace {

struct DumpHeader {
  char magic[4];
  std::uint32_t version;
  std::uint32_t frames;
  std::uint32_t symbols;
  std::uint32_t subcarriers;
  std::uint32_t reserved;
  double sigma2;
};
static_assert(sizeof(DumpHeader) == 32, "tensor dump header must be 32 bytes");

}  // namespace

void write_tensor(const EchoTensor& tensor, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write tensor file: " + path);

  DumpHeader header{};
  std::memcpy(header.magic, "BMDM", 4);
  header.version = 1;
  header.frames = static_cast<std::uint32_t>(tensor.frames);
  header.symbols = static_cast<std::uint32_t>(tensor.symbols);
  header.subcarriers = static_cast<std::uint32_t>(tensor.subcarriers);
  header.reserved = 0;
  header.sigma2 = tensor.sigma2;
  out.write(reinterpret_cast<const char*>(&header), sizeof(header));

  std::vector<float> row(static_cast<size_t>(tensor.subcarriers) * 2);
  for (const auto& frame : tensor.data) {
    for (int n = 0; n < frame.rows(); ++n) {
      for (int m = 0; m < frame.cols(); ++m) {
        row[2 * m] = static_cast<float>(frame(n, m).real());
        row[2 * m + 1] = static_cast<float>(frame(n, m).imag());
      }
      out.write(reinterpret_cast<const char*>(row.data()),
                static_cast<std::streamsize>(row.size() * sizeof(float)));
    }
  }
  if (!out) throw IoError("write failed: " + path);
}

EchoTensor read_tensor(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open tensor file: " + path);

  DumpHeader header{};
  in.read(reinterpret_cast<char*>(&header), sizeof(header));
  if (!in || std::memcmp(header.magic, "BMDM", 4) != 0 || header.version != 1) {
    throw IoError("not a tensor dump: " + path);
  }

  EchoTensor tensor;
  tensor.frames = static_cast<int>(header.frames);
  tensor.symbols = static_cast<int>(header.symbols);
  tensor.subcarriers = static_cast<int>(header.subcarriers);
  tensor.sigma2 = header.sigma2;
  tensor.data.resize(tensor.frames);

  std::vector<float> row(static_cast<size_t>(tensor.subcarriers) * 2);
  for (int p = 0; p < tensor.frames; ++p) {
    tensor.data[p].resize(tensor.symbols, tensor.subcarriers);
    for (int n = 0; n < tensor.symbols; ++n) {
      in.read(reinterpret_cast<char*>(row.data()),
              static_cast<std::streamsize>(row.size() * sizeof(float)));
      if (!in) throw IoError("truncated tensor file: " + path);
      for (int m = 0; m < tensor.subcarriers; ++m) {
        tensor.data[p](n, m) = Complex(row[2 * m], row[2 * m + 1]);
      }
    }
  }
  return tensor;
}

}  // namespace bmdm
