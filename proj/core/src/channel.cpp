#include "risopt/channel.hpp"

#include <cmath>
#include <cstring>
#include <stdexcept>

#include "risopt/errors.hpp"

namespace risopt {

void SystemDimensions::validate() const {
  if (bs_antennas < 1 || ris_horizontal < 1 || ris_vertical < 1 || users < 1 ||
      phase_bits < 1) {
    throw config_error("SystemDimensions: all counts must be >= 1");
  }
}

void ChannelParams::validate(const SystemDimensions& dims) const {
  if (kappa_bs_ris < 0.0 || kappa_ue_ris < 0.0)
    throw config_error("ChannelParams: Rician factors must be >= 0");
  if (bs_ris_distance_m <= 0.0)
    throw config_error("ChannelParams: bs_ris_distance_m must be > 0");
  if (ue_distance_m.lo <= 0.0 || ue_distance_m.hi < ue_distance_m.lo)
    throw config_error("ChannelParams: ue_distance_m interval invalid");
  if (ris_spacing <= 0.0 || bs_spacing <= 0.0)
    throw config_error("ChannelParams: element spacings must be > 0");
  if (scattering_asd <= 0.0)
    throw config_error("ChannelParams: scattering_asd must be > 0");
  if (tx_power_dbm.empty())
    throw config_error("ChannelParams: tx_power_dbm must not be empty");
  if (tx_power_dbm.size() != 1 &&
      tx_power_dbm.size() != static_cast<std::size_t>(dims.users)) {
    throw config_error("ChannelParams: tx_power_dbm must have 1 or K entries");
  }
}

double dbm_to_watt(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

double pathloss_db(double distance_m) {
  if (distance_m <= 0.0) throw std::domain_error("pathloss_db: distance must be > 0");
  return -37.5 - 22.0 * std::log10(distance_m);
}

double pathloss_linear(double distance_m) {
  return std::pow(10.0, pathloss_db(distance_m) / 10.0);
}

Eigen::VectorXcd ula_response(double angle, int count, double spacing) {
  if (count < 1) throw std::invalid_argument("ula_response: count must be >= 1");
  Eigen::VectorXcd r(count);
  const double step = 2.0 * kPi * spacing * std::sin(angle);
  for (int m = 0; m < count; ++m) r(m) = std::polar(1.0, step * m);
  return r;
}

Eigen::VectorXcd upa_response(double azimuth, double elevation, int n_h, int n_v,
                              double spacing) {
  if (n_h < 1 || n_v < 1)
    throw std::invalid_argument("upa_response: grid sizes must be >= 1");
  Eigen::VectorXcd r(static_cast<Eigen::Index>(n_h) * n_v);
  const double horizontal = 2.0 * kPi * spacing * std::sin(azimuth) * std::cos(elevation);
  const double vertical = 2.0 * kPi * spacing * std::sin(elevation);
  for (int v = 0; v < n_v; ++v)
    for (int h = 0; h < n_h; ++h)
      r(static_cast<Eigen::Index>(v) * n_h + h) = std::polar(1.0, h * horizontal + v * vertical);
  return r;
}

Eigen::MatrixXcd local_scattering_correlation(double nominal_azimuth, double asd,
                                              int count, double spacing) {
  if (count < 1)
    throw std::invalid_argument("local_scattering_correlation: count must be >= 1");
  if (asd <= 0.0)
    throw std::invalid_argument("local_scattering_correlation: asd must be > 0");

  const double mean_arg = 2.0 * kPi * spacing * std::sin(nominal_azimuth);
  const double spread_arg = 2.0 * kPi * spacing * std::cos(nominal_azimuth);
  Eigen::MatrixXcd corr(count, count);
  for (int m = 0; m < count; ++m) {
    corr(m, m) = 1.0;
    for (int n = 0; n < m; ++n) {
      const double delta = static_cast<double>(m - n);
      const double damping =
          std::exp(-0.5 * asd * asd * (spread_arg * delta) * (spread_arg * delta));
      const std::complex<double> value = std::polar(damping, mean_arg * delta);
      corr(m, n) = value;
      corr(n, m) = std::conj(value);
    }
  }

  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(corr,
                                                            Eigen::EigenvaluesOnly);
  if (eig.eigenvalues().minCoeff() < -1e-10)
    throw numeric_error("local_scattering_correlation: matrix not PSD");
  return corr;
}

Eigen::MatrixXcd hermitian_sqrt(const Eigen::MatrixXcd& matrix) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(matrix);
  Eigen::VectorXd clipped = eig.eigenvalues().cwiseMax(0.0);
  return eig.eigenvectors() * clipped.cwiseSqrt().asDiagonal() *
         eig.eigenvectors().adjoint();
}

namespace {

// i.i.d. CN(0,1) matrix filled row-major so the draw order is pinned down.
Eigen::MatrixXcd complex_gaussian(int rows, int cols, Rng& rng) {
  Eigen::MatrixXcd w(rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) w(r, c) = rng.complex_normal();
  return w;
}

}  // namespace

Eigen::MatrixXcd sample_ris_bs_channel(const SystemDimensions& dims,
                                       const ChannelParams& params, Rng& rng) {
  dims.validate();
  params.validate(dims);
  const int m = dims.bs_antennas;
  const int n = dims.ris_elements();

  const Eigen::VectorXcd bs = ula_response(params.bs_aoa, m, params.bs_spacing);
  const Eigen::VectorXcd ris =
      upa_response(params.ris_aod_azimuth, params.ris_aod_elevation,
                   dims.ris_horizontal, dims.ris_vertical, params.ris_spacing);
  const Eigen::MatrixXcd los = bs * ris.transpose();

  // scattering sits around the RIS, azimuth domain only
  const Eigen::MatrixXcd corr_sqrt = hermitian_sqrt(local_scattering_correlation(
      params.ris_aod_azimuth, params.scattering_asd, n, params.ris_spacing));
  const Eigen::MatrixXcd nlos = complex_gaussian(m, n, rng) * corr_sqrt;

  const double kappa = params.kappa_bs_ris;
  const double beta = pathloss_linear(params.bs_ris_distance_m);
  return std::sqrt(beta) * (std::sqrt(kappa / (kappa + 1.0)) * los +
                            std::sqrt(1.0 / (kappa + 1.0)) * nlos);
}

Eigen::VectorXcd sample_ue_ris_channel(const SystemDimensions& dims,
                                       const ChannelParams& params, int ue_index,
                                       Rng& rng) {
  dims.validate();
  params.validate(dims);
  if (ue_index < 0 || ue_index >= dims.users)
    throw std::invalid_argument("sample_ue_ris_channel: ue_index out of range");
  const int n = dims.ris_elements();

  const double distance = rng.uniform(params.ue_distance_m.lo, params.ue_distance_m.hi);
  const double azimuth = rng.uniform(params.ue_aoa_azimuth.lo, params.ue_aoa_azimuth.hi);
  const double elevation =
      rng.uniform(params.ue_aoa_elevation.lo, params.ue_aoa_elevation.hi);

  const Eigen::VectorXcd los = upa_response(azimuth, elevation, dims.ris_horizontal,
                                            dims.ris_vertical, params.ris_spacing);
  const Eigen::MatrixXcd corr_sqrt = hermitian_sqrt(local_scattering_correlation(
      azimuth, params.scattering_asd, n, params.ris_spacing));
  const Eigen::VectorXcd nlos = corr_sqrt * complex_gaussian(n, 1, rng);

  const double kappa = params.kappa_ue_ris;
  const double beta = pathloss_linear(distance);
  return std::sqrt(beta) * (std::sqrt(kappa / (kappa + 1.0)) * los +
                            std::sqrt(1.0 / (kappa + 1.0)) * nlos);
}

Scenario sample_scenario(const SystemDimensions& dims, const ChannelParams& params,
                         Rng& rng) {
  Scenario scenario;
  scenario.bs_ris = sample_ris_bs_channel(dims, params, rng);
  scenario.ue_ris.reserve(static_cast<std::size_t>(dims.users));
  scenario.cascaded.reserve(static_cast<std::size_t>(dims.users));
  scenario.tx_power_w.resize(dims.users);
  for (int k = 0; k < dims.users; ++k) {
    scenario.ue_ris.push_back(sample_ue_ris_channel(dims, params, k, rng));
    scenario.cascaded.push_back(scenario.bs_ris * scenario.ue_ris.back().asDiagonal());
    scenario.tx_power_w(k) = dbm_to_watt(params.tx_power_for(k));
  }
  scenario.noise_power_w = dbm_to_watt(params.noise_power_dbm);
  return scenario;
}

namespace {

void hash_bytes(std::uint64_t& h, const void* data, std::size_t size) {
  const auto* bytes = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < size; ++i) {
    h ^= bytes[i];
    h *= 0x100000001B3ULL;
  }
}

}  // namespace

std::uint64_t scenario_hash(const Scenario& scenario) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  hash_bytes(h, scenario.bs_ris.data(),
             sizeof(std::complex<double>) * static_cast<std::size_t>(scenario.bs_ris.size()));
  for (const auto& g : scenario.ue_ris)
    hash_bytes(h, g.data(), sizeof(std::complex<double>) * static_cast<std::size_t>(g.size()));
  return h;
}

}  // namespace risopt
