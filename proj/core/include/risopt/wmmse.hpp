// Sum-rate maximization by block coordinate descent on the weighted-MMSE
// surrogate: closed-form MMSE receivers, closed-form weights 1/E_k, and an
// exact discrete phase solve per iteration. With the sphere-decoder phase
// update every block is optimally solved, so the surrogate objective
// f = sum_k w_k E_k - ln w_k is non-increasing and the loop reaches a
// stationary point.
#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "risopt/channel.hpp"
#include "risopt/ils.hpp"

namespace risopt {

// BS receive beamformers, one column per UE. MMSE receivers are not
// normalized; entries just have to be finite.
struct ReceiverBank {
  Eigen::MatrixXcd a;  // M x K

  int users() const { return static_cast<int>(a.cols()); }
};

enum class PhaseSolver { sesd, nearest };

struct BcdOptions {
  double epsilon = 1e-3;               // absolute |f(l) - f(l-1)| threshold
  int max_iters = 200;
  PhaseSolver solver = PhaseSolver::sesd;
  int phase_bits = 1;                  // q
  double gsd_alpha = 1.0;              // regularization for rank-deficient B
  std::uint64_t seed = 0;              // drives the random initial configuration
};

// Snapshot of one BCD iteration: receivers a^(l), weights w^(l), the MSEs
// evaluated at the updated phases, the phase configuration theta^(l), and the
// resulting surrogate objective and sum rate.
struct WmmseState {
  ReceiverBank receivers;
  Eigen::VectorXd weights;
  Eigen::VectorXd mses;
  RisConfiguration config;
  double objective_f = 0.0;
  double sum_rate = 0.0;
};

struct BcdTrace {
  std::vector<WmmseState> iterations;
  std::vector<double> deltas;  // |f(l) - f(l-1)|; the first entry is +inf
  bool converged = false;

  int iteration_count() const { return static_cast<int>(iterations.size()); }
};

// gamma_k = p_k |a_k^H G_k theta|^2 / (sum_{i != k} p_i |a_k^H G_i theta|^2
//           + sigma^2 ||a_k||^2); returns 0 for an all-zero receiver.
double sinr(int k, const ReceiverBank& receivers, const RisConfiguration& config,
            const Scenario& scenario);

// sum_k log2(1 + gamma_k)  [bit/s/Hz]
double sum_rate(const ReceiverBank& receivers, const RisConfiguration& config,
                const Scenario& scenario);

// E_k = sum_i p_i |a_k^H G_i theta|^2 - 2 sqrt(p_k) Re(a_k^H G_k theta)
//       + sigma^2 ||a_k||^2 + 1
double mse(int k, const Eigen::VectorXcd& receiver, const RisConfiguration& config,
           const Scenario& scenario);

// y = sum_i G_i theta sqrt(p_i) s_i + noise, for sampling-based checks of the
// closed-form MSE.
Eigen::VectorXcd simulate_received_signal(const RisConfiguration& config,
                                          const Scenario& scenario,
                                          const Eigen::VectorXcd& symbols,
                                          const Eigen::VectorXcd& noise);

// a_k = sqrt(p_k) (sum_i p_i G_i theta theta^H G_i^H + sigma^2 I)^{-1} G_k theta,
// obtained from one Cholesky solve shared by all K right-hand sides.
ReceiverBank mmse_receiver(const RisConfiguration& config, const Scenario& scenario);

// w_k = 1/E_k; throws numeric_error when some E_k <= 0 (an upstream bug).
Eigen::VectorXd optimal_weights(const Eigen::VectorXd& mses);

// B = sum_k w_k sum_i p_i G_i^H a_k a_k^H G_i,  b = sum_k w_k sqrt(p_k) G_k^H a_k
QuadraticForm assemble_quadratic(const ReceiverBank& receivers,
                                 const Eigen::VectorXd& weights,
                                 const Scenario& scenario);

// f = sum_k w_k E_k - ln w_k (the 1/ln2 prefactor is dropped; it rescales f
// without moving the minimizer)
double wmmse_objective(const Eigen::VectorXd& weights, const Eigen::VectorXd& mses);

// Alternates receivers, weights and phases from a random initial configuration
// until |f(l) - f(l-1)| <= epsilon or max_iters; records every iteration.
// Non-convergence is reported through the flag, not an exception.
BcdTrace bcd_optimize(const Scenario& scenario, const BcdOptions& options);

}  // namespace risopt
