#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bmdm/bridge_dynamics.hpp"
#include "bmdm/scenario.hpp"
#include "bmdm/types.hpp"

namespace bmdm {

// Planar-array steering vector a^x(psi) kron a^z(omega) at half-wavelength
// spacing: entry (ix*nz + iz) = exp(j pi (ix*psi + iz*omega)).
ComplexVector steering_vector(Real psi, Real omega, int nx, int nz, Real carrier_hz);

// Per-path echo gains after transmit/receive beamforming toward the aim
// point (monitor point plus beam offset). With zero offset the array factor
// is sqrt(Nr * Nh); a misaligned beam shrinks every path by the same
// steering-mismatch product.
struct GainSet {
  Complex micro = Complex(0.0, 0.0);
  std::vector<Complex> interferer;  // constant across frames
  std::vector<Complex> clutter;
};

GainSet beamforming_gains(const ScenarioConfig& config);

// Compensated frequency-domain echoes. data[p] is symbols x subcarriers.
struct EchoTensor {
  int frames = 0;
  int symbols = 0;
  int subcarriers = 0;
  std::vector<ComplexMatrix> data;
  Real signal_power = 0.0;  // mean |noiseless cell|^2
  Real sigma2 = 0.0;        // calibrated noise variance per cell
};

// Deterministic (noiseless) frame p. symbol_count <= 0 means the scenario's
// sensing-symbol budget; larger values synthesize extra symbols for the
// extended phasor-mean method.
ComplexMatrix synthesize_clean_frame(const ScenarioConfig& config, const GainSet& gains,
                                     const DeformationTruth& truth, int p,
                                     int symbol_count = 0);

// Adds circular complex Gaussian noise of variance sigma2 per cell, drawn
// from the stateless (seed, cell index) stream so any frame can be generated
// independently. Returns the realized noise power sum over the frame.
Real add_noise(ComplexMatrix& frame, std::uint64_t seed, int p, Real sigma2);

// sigma^2 = mean |noiseless Y|^2 / 10^(snr_db/10)
Real calibrate_noise(Real mean_signal_power, Real snr_db);
Real calibrate_noise(const EchoTensor& noiseless, Real snr_db);

EchoTensor synthesize_echo(const ScenarioConfig& config, const DeformationTruth& truth);

// Binary dump for cross-implementation comparison: 32-byte header
// ("BMDM", u32 version, u32 P, u32 N, u32 M, u32 reserved, f64 sigma2),
// then complex64 cells in (frame, symbol, subcarrier) order, little-endian.
void write_tensor(const EchoTensor& tensor, const std::string& path);
EchoTensor read_tensor(const std::string& path);

}  // namespace bmdm
