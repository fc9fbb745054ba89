// Exact discrete phase-shift solver: the quadratic sub-problem
//   minimize  theta^H B theta - theta^H b - b^H theta,  theta_n in e^{jD},
// is rewritten as an integer least-squares problem ||c - R theta||^2 through a
// Cholesky factorization of B (regularized by alpha*I when B is rank
// deficient, which only shifts the objective by the constant alpha*N) and
// solved to global optimality with Schnorr-Euchner sphere decoding. A
// brute-force enumerator serves as correctness oracle, and the conventional
// continuous-relaxation + nearest-point quantization baseline is provided for
// comparison.
#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace risopt {

// The discrete phase set D = { m*pi/2^(q-1) : m = 0..2^q-1 } and its
// unit-modulus points e^{jD}. Points on the axes are exact.
struct PhaseAlphabet {
  int bits = 0;                               // q
  std::vector<double> phases;                 // ascending, 2^q entries
  std::vector<std::complex<double>> points;   // e^{j phases[m]}

  int size() const { return static_cast<int>(phases.size()); }
};

// 1 <= bits <= 8; throws config_error otherwise.
PhaseAlphabet build_alphabet(int bits);

// Hermitian PSD matrix B and vector b of the phase sub-problem.
struct QuadraticForm {
  Eigen::MatrixXcd B;
  Eigen::VectorXcd b;

  int size() const { return static_cast<int>(b.size()); }

  // Hermitian within 1e-10 entrywise and consistent dimensions.
  void validate() const;
};

// Re(theta^H B theta - theta^H b - b^H theta); asserts the imaginary part is
// negligible (|Im| < 1e-10 relative to the matrix scale).
double quadratic_objective(const QuadraticForm& form, const Eigen::VectorXcd& theta);

// Upper-triangular factor with R^H R = B + alpha_used*I and target c = R^-H b.
// For unit-modulus theta,
//   theta^H B theta - theta^H b - b^H theta = ||c - R theta||^2 + constant_offset,
// so the sphere-decoder metric and the original objective order feasible
// points identically.
struct CholeskyFactor {
  Eigen::MatrixXcd R;
  Eigen::VectorXcd c;
  double alpha_used = 0.0;      // 0 when B itself was factored
  double constant_offset = 0.0; // -||c||^2 - alpha_used*N
};

// Attempts a plain Cholesky of B first; when the smallest pivot falls below
// 1e-10 * trace(B)/N the matrix is treated as rank deficient and B + alpha*I
// is factored instead. alpha must be > 0 to cover that case.
CholeskyFactor factorize(const QuadraticForm& form, double alpha = 1.0);

// A discrete RIS configuration: alphabet indices, the induced unit-modulus
// vector, and the objective of the (un-regularized) form at that point.
// objective is NaN when the producing call had no form to evaluate.
struct RisConfiguration {
  std::vector<int> indices;
  Eigen::VectorXcd theta;
  double objective = std::numeric_limits<double>::quiet_NaN();
};

// Search-tree counters, exposed for benchmarking.
struct SearchStats {
  std::uint64_t nodes = 0;   // child evaluations
  std::uint64_t leaves = 0;  // completed leaves (incumbent updates)
};

// Schnorr-Euchner sphere decoder: depth-first search from layer N down to 1,
// siblings visited in ascending metric order, initial radius +inf, radius
// shrunk to each incumbent, branches with partial metric >= radius pruned.
// Returns the global minimizer of ||c - R theta||^2 over the alphabet grid;
// the objective field is evaluated against `form` (the un-regularized B, b).
RisConfiguration sesd_solve(const QuadraticForm& form, const CholeskyFactor& factor,
                            const PhaseAlphabet& alphabet, SearchStats* stats = nullptr);

// Exhaustive oracle. Guarded to |alphabet|^N <= 2^20 (capacity_error above);
// ties resolve to the lexicographically smallest index vector.
RisConfiguration brute_force_solve(const QuadraticForm& form,
                                   const PhaseAlphabet& alphabet);

// Unconstrained minimizer B^+ b of the relaxed problem, via eigendecomposition
// with singular values below 1e-10 * (largest) treated as zero.
Eigen::VectorXcd continuous_relaxation(const QuadraticForm& form);

// Per-entry projection of arg(theta_hat) onto the nearest alphabet point
// (chord distance); zero entries count as arg = 0; ties take the smallest
// alphabet index. When `form` is given the objective field is filled in.
RisConfiguration nearest_point_quantize(const Eigen::VectorXcd& theta_hat,
                                        const PhaseAlphabet& alphabet,
                                        const QuadraticForm* form = nullptr);

}  // namespace risopt
