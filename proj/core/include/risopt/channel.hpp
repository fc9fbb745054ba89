// Rician fading channel generator for the RIS-assisted uplink: geometric LOS
// steering vectors, Gaussian local-scattering correlation on the RIS side, and
// distance-based path loss. All randomness comes from an explicit Rng, so a
// (dims, params, seed) triple reproduces the same Scenario bit for bit.
#pragma once

#include <complex>
#include <cstdint>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

#include "risopt/rng.hpp"

namespace risopt {

inline constexpr double kPi = std::numbers::pi;

// Array/grid sizes of one system instance.
struct SystemDimensions {
  int bs_antennas = 10;    // M, BS ULA size
  int ris_horizontal = 8;  // N_h
  int ris_vertical = 8;    // N_v
  int users = 6;           // K
  int phase_bits = 1;      // q

  int ris_elements() const { return ris_horizontal * ris_vertical; }

  // throws config_error when any count < 1
  void validate() const;
};

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

// Propagation constants. Angles are radians, spacings are in wavelengths,
// distances in meters, powers in dBm.
struct ChannelParams {
  double kappa_bs_ris = 5.0;                    // Rician factor of the BS-RIS link
  double kappa_ue_ris = 5.0;                    // Rician factor of the UE-RIS links
  double bs_ris_distance_m = 20.0;              // d_H
  Interval ue_distance_m{20.0, 40.0};           // d_{g,k} ~ U[lo, hi]
  double bs_aoa = kPi / 6;                      // arrival angle at the BS ULA
  double ris_aod_azimuth = -kPi / 3;            // departure azimuth at the RIS
  double ris_aod_elevation = kPi / 6;           // departure elevation at the RIS
  Interval ue_aoa_azimuth{-kPi / 3, kPi / 3};   // per-UE arrival azimuth interval
  Interval ue_aoa_elevation{-kPi / 6, 0.0};     // per-UE arrival elevation interval
  double ris_spacing = 0.25;                    // RIS element spacing, lambda/4
  double bs_spacing = 0.5;                      // BS antenna spacing, lambda/2
  double scattering_asd = 15.0 * kPi / 180.0;   // angular stddev of local scattering
  double noise_power_dbm = -160.0;              // sigma^2
  std::vector<double> tx_power_dbm{20.0};       // p_k; size 1 broadcasts to all UEs

  // per-UE transmit power lookup honoring the broadcast rule
  double tx_power_for(int ue_index) const {
    return tx_power_dbm.size() == 1 ? tx_power_dbm.front()
                                    : tx_power_dbm.at(static_cast<std::size_t>(ue_index));
  }

  void validate(const SystemDimensions& dims) const;
};

// One channel realization, everything already converted to linear units.
struct Scenario {
  Eigen::MatrixXcd bs_ris;                  // H, M x N
  std::vector<Eigen::VectorXcd> ue_ris;     // g_k, length N each
  std::vector<Eigen::MatrixXcd> cascaded;   // G_k = H diag(g_k), M x N
  Eigen::VectorXd tx_power_w;               // p_k [W]
  double noise_power_w = 0.0;               // sigma^2 [W]

  int users() const { return static_cast<int>(ue_ris.size()); }
  int bs_antennas() const { return static_cast<int>(bs_ris.rows()); }
  int ris_elements() const { return static_cast<int>(bs_ris.cols()); }
};

double dbm_to_watt(double dbm);

// beta = -37.5 - 22 log10(d / 1 m)  [dB]; throws std::domain_error for d <= 0.
double pathloss_db(double distance_m);
double pathloss_linear(double distance_m);

// ULA steering vector, entry m = exp(j 2*pi*spacing*m*sin(angle)), m = 0..count-1.
Eigen::VectorXcd ula_response(double angle, int count, double spacing);

// UPA steering vector over an n_h x n_v grid, horizontal index fastest:
// entry (h, v) = exp(j 2*pi*spacing*(h sin(az) cos(el) + v sin(el))).
Eigen::VectorXcd upa_response(double azimuth, double elevation, int n_h, int n_v,
                              double spacing);

// Gaussian local-scattering spatial correlation around a nominal azimuth:
//   C(m, n) = exp(j 2*pi*s*(m-n) sin(phi)) * exp(-asd^2/2 * (2*pi*s*(m-n) cos(phi))^2).
// Hermitian with unit diagonal; eigenvalues below -1e-10 raise numeric_error.
Eigen::MatrixXcd local_scattering_correlation(double nominal_azimuth, double asd,
                                              int count, double spacing);

// Hermitian PSD square root via eigendecomposition; negative eigenvalues are
// clipped to zero before the square root.
Eigen::MatrixXcd hermitian_sqrt(const Eigen::MatrixXcd& matrix);

// H = sqrt(beta_H) (sqrt(kappa/(kappa+1)) H_LOS + sqrt(1/(kappa+1)) W C^{1/2})
// with rank-one H_LOS = r_BS(bs_aoa) r_RIS(aod_az, aod_el)^T and i.i.d. CN(0,1)
// entries in W. The correlation C sits on the RIS side only.
Eigen::MatrixXcd sample_ris_bs_channel(const SystemDimensions& dims,
                                       const ChannelParams& params, Rng& rng);

// g_k with distance and arrival angles drawn uniformly from the configured
// intervals (draw order: distance, azimuth, elevation, then the NLOS vector).
Eigen::VectorXcd sample_ue_ris_channel(const SystemDimensions& dims,
                                       const ChannelParams& params, int ue_index,
                                       Rng& rng);

// Composes the two samplers, converts dBm to watts, and builds the cascaded
// matrices G_k = H diag(g_k).
Scenario sample_scenario(const SystemDimensions& dims, const ChannelParams& params,
                         Rng& rng);

// FNV-1a over the raw bits of H and every g_k; used by the harness to assert
// that paired runs consumed identical channels.
std::uint64_t scenario_hash(const Scenario& scenario);

}  // namespace risopt
