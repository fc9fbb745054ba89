#include "risopt/wmmse.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "risopt/errors.hpp"

namespace risopt {

namespace {

// effective per-UE channels h_i = G_i theta, one column per UE
Eigen::MatrixXcd effective_channels(const RisConfiguration& config,
                                    const Scenario& scenario) {
  if (config.theta.size() != scenario.ris_elements())
    throw std::invalid_argument("effective_channels: theta/scenario dimension mismatch");
  Eigen::MatrixXcd channels(scenario.bs_antennas(), scenario.users());
  for (int i = 0; i < scenario.users(); ++i)
    channels.col(i) = scenario.cascaded[static_cast<std::size_t>(i)] * config.theta;
  return channels;
}

void check_user_index(int k, const Scenario& scenario) {
  if (k < 0 || k >= scenario.users())
    throw std::invalid_argument("UE index out of range");
}

}  // namespace

double sinr(int k, const ReceiverBank& receivers, const RisConfiguration& config,
            const Scenario& scenario) {
  check_user_index(k, scenario);
  const Eigen::MatrixXcd channels = effective_channels(config, scenario);
  const Eigen::VectorXcd a_k = receivers.a.col(k);

  double interference = 0.0;
  for (int i = 0; i < scenario.users(); ++i) {
    if (i == k) continue;
    interference += scenario.tx_power_w(i) * std::norm(a_k.dot(channels.col(i)));
  }
  const double signal = scenario.tx_power_w(k) * std::norm(a_k.dot(channels.col(k)));
  const double noise = scenario.noise_power_w * a_k.squaredNorm();
  const double denominator = interference + noise;
  if (denominator <= 0.0) return 0.0;  // all-zero receiver
  return signal / denominator;
}

double sum_rate(const ReceiverBank& receivers, const RisConfiguration& config,
                const Scenario& scenario) {
  double rate = 0.0;
  for (int k = 0; k < scenario.users(); ++k)
    rate += std::log2(1.0 + sinr(k, receivers, config, scenario));
  return rate;
}

double mse(int k, const Eigen::VectorXcd& receiver, const RisConfiguration& config,
           const Scenario& scenario) {
  check_user_index(k, scenario);
  const Eigen::MatrixXcd channels = effective_channels(config, scenario);

  double received_power = 0.0;
  for (int i = 0; i < scenario.users(); ++i)
    received_power += scenario.tx_power_w(i) * std::norm(receiver.dot(channels.col(i)));
  const double desired =
      2.0 * std::sqrt(scenario.tx_power_w(k)) * receiver.dot(channels.col(k)).real();
  return received_power - desired + scenario.noise_power_w * receiver.squaredNorm() + 1.0;
}

Eigen::VectorXcd simulate_received_signal(const RisConfiguration& config,
                                          const Scenario& scenario,
                                          const Eigen::VectorXcd& symbols,
                                          const Eigen::VectorXcd& noise) {
  if (symbols.size() != scenario.users() || noise.size() != scenario.bs_antennas())
    throw std::invalid_argument("simulate_received_signal: dimension mismatch");
  const Eigen::MatrixXcd channels = effective_channels(config, scenario);
  Eigen::VectorXcd received = noise;
  for (int i = 0; i < scenario.users(); ++i)
    received += channels.col(i) * (std::sqrt(scenario.tx_power_w(i)) * symbols(i));
  return received;
}

ReceiverBank mmse_receiver(const RisConfiguration& config, const Scenario& scenario) {
  if (scenario.noise_power_w <= 0.0)
    throw std::invalid_argument("mmse_receiver: noise power must be > 0");
  const int m = scenario.bs_antennas();
  const Eigen::MatrixXcd channels = effective_channels(config, scenario);

  Eigen::MatrixXcd covariance =
      scenario.noise_power_w * Eigen::MatrixXcd::Identity(m, m);
  for (int i = 0; i < scenario.users(); ++i)
    covariance.noalias() +=
        scenario.tx_power_w(i) * (channels.col(i) * channels.col(i).adjoint());

  const Eigen::LLT<Eigen::MatrixXcd> llt(covariance);
  if (llt.info() != Eigen::Success)
    throw numeric_error("mmse_receiver: covariance factorization failed");

  ReceiverBank receivers;
  receivers.a.resize(m, scenario.users());
  for (int k = 0; k < scenario.users(); ++k)
    receivers.a.col(k) =
        std::sqrt(scenario.tx_power_w(k)) * llt.solve(channels.col(k));
  return receivers;
}

Eigen::VectorXd optimal_weights(const Eigen::VectorXd& mses) {
  for (Eigen::Index k = 0; k < mses.size(); ++k) {
    if (!(mses(k) > 0.0))
      throw numeric_error("optimal_weights: non-positive MSE");
  }
  return mses.cwiseInverse();
}

QuadraticForm assemble_quadratic(const ReceiverBank& receivers,
                                 const Eigen::VectorXd& weights,
                                 const Scenario& scenario) {
  const int n = scenario.ris_elements();
  const int users = scenario.users();
  if (receivers.users() != users || weights.size() != users)
    throw std::invalid_argument("assemble_quadratic: dimension mismatch");
  for (int k = 0; k < users; ++k) {
    if (!(weights(k) > 0.0))
      throw std::invalid_argument("assemble_quadratic: weights must be positive");
  }

  QuadraticForm form;
  form.B = Eigen::MatrixXcd::Zero(n, n);
  form.b = Eigen::VectorXcd::Zero(n);
  Eigen::VectorXcd projected(n);
  for (int i = 0; i < users; ++i) {
    const Eigen::MatrixXcd& channel = scenario.cascaded[static_cast<std::size_t>(i)];
    for (int k = 0; k < users; ++k) {
      projected.noalias() = channel.adjoint() * receivers.a.col(k);
      form.B.noalias() += (weights(k) * scenario.tx_power_w(i)) *
                          (projected * projected.adjoint());
      if (i == k)
        form.b.noalias() +=
            (weights(k) * std::sqrt(scenario.tx_power_w(k))) * projected;
    }
  }
  return form;
}

double wmmse_objective(const Eigen::VectorXd& weights, const Eigen::VectorXd& mses) {
  if (weights.size() != mses.size())
    throw std::invalid_argument("wmmse_objective: dimension mismatch");
  double value = 0.0;
  for (Eigen::Index k = 0; k < weights.size(); ++k)
    value += weights(k) * mses(k) - std::log(weights(k));
  return value;
}

BcdTrace bcd_optimize(const Scenario& scenario, const BcdOptions& options) {
  if (options.epsilon <= 0.0)
    throw std::invalid_argument("bcd_optimize: epsilon must be > 0");
  if (options.max_iters < 1)
    throw std::invalid_argument("bcd_optimize: max_iters must be >= 1");

  const PhaseAlphabet alphabet = build_alphabet(options.phase_bits);
  const int n = scenario.ris_elements();
  const int users = scenario.users();

  // theta^(0): every element picks a random phase from the alphabet
  Rng rng(options.seed);
  std::vector<int> initial(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) initial[static_cast<std::size_t>(i)] = rng.uniform_int(alphabet.size());
  RisConfiguration config;
  config.indices = initial;
  config.theta.resize(n);
  for (int i = 0; i < n; ++i)
    config.theta(i) = alphabet.points[static_cast<std::size_t>(initial[static_cast<std::size_t>(i)])];

  BcdTrace trace;
  double previous_f = std::numeric_limits<double>::quiet_NaN();
  for (int iteration = 1; iteration <= options.max_iters; ++iteration) {
    WmmseState state;
    state.receivers = mmse_receiver(config, scenario);

    Eigen::VectorXd interim_mses(users);
    for (int k = 0; k < users; ++k)
      interim_mses(k) = mse(k, state.receivers.a.col(k), config, scenario);
    state.weights = optimal_weights(interim_mses);

    const QuadraticForm form = assemble_quadratic(state.receivers, state.weights, scenario);
    if (options.solver == PhaseSolver::sesd) {
      const CholeskyFactor factor = factorize(form, options.gsd_alpha);
      state.config = sesd_solve(form, factor, alphabet);
    } else {
      state.config = nearest_point_quantize(continuous_relaxation(form), alphabet, &form);
    }
    config = state.config;

    state.mses.resize(users);
    for (int k = 0; k < users; ++k)
      state.mses(k) = mse(k, state.receivers.a.col(k), config, scenario);
    state.objective_f = wmmse_objective(state.weights, state.mses);
    state.sum_rate = sum_rate(state.receivers, config, scenario);

    const double delta = iteration == 1
                             ? std::numeric_limits<double>::infinity()
                             : std::abs(state.objective_f - previous_f);
    previous_f = state.objective_f;
    trace.iterations.push_back(std::move(state));
    trace.deltas.push_back(delta);
    if (delta <= options.epsilon) {
      trace.converged = true;
      break;
    }
  }
  return trace;
}

}  // namespace risopt
