#include "risopt/ils.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "risopt/errors.hpp"

namespace risopt {

namespace {

constexpr double kPi = std::numbers::pi;

// e^{j 2*pi*m/points_per_turn} with exact values on the axes: the angle is
// folded into [0, pi/2) per quadrant so cos/sin never see a multiple of pi/2.
std::complex<double> unit_circle_point(int m, int points_per_turn) {
  const int num = 4 * (m % points_per_turn);
  const int quadrant = num / points_per_turn;
  const int rem = num % points_per_turn;
  const double phi = (kPi / 2.0) * static_cast<double>(rem) / points_per_turn;
  const double c = std::cos(phi);
  const double s = std::sin(phi);
  switch (quadrant) {
    case 0: return {c, s};
    case 1: return {-s, c};
    case 2: return {-c, -s};
    default: return {s, -c};
  }
}

}  // namespace

PhaseAlphabet build_alphabet(int bits) {
  if (bits < 1 || bits > 8)
    throw config_error("build_alphabet: bits must be in [1, 8]");
  const int count = 1 << bits;
  PhaseAlphabet alphabet;
  alphabet.bits = bits;
  alphabet.phases.resize(static_cast<std::size_t>(count));
  alphabet.points.resize(static_cast<std::size_t>(count));
  const double step = kPi / static_cast<double>(1 << (bits - 1));
  for (int m = 0; m < count; ++m) {
    alphabet.phases[static_cast<std::size_t>(m)] = step * m;
    alphabet.points[static_cast<std::size_t>(m)] = unit_circle_point(m, count);
  }
  return alphabet;
}

void QuadraticForm::validate() const {
  if (B.rows() != B.cols() || B.rows() != b.size())
    throw std::invalid_argument("QuadraticForm: dimension mismatch");
  const double scale = std::max(1.0, B.cwiseAbs().maxCoeff());
  if (((B - B.adjoint()).cwiseAbs().maxCoeff()) > 1e-10 * scale)
    throw std::invalid_argument("QuadraticForm: B is not Hermitian");
}

double quadratic_objective(const QuadraticForm& form, const Eigen::VectorXcd& theta) {
  const int n = form.size();
  if (theta.size() != n)
    throw std::invalid_argument("quadratic_objective: dimension mismatch");

  // theta^H B theta, column-major traversal, no temporaries
  std::complex<double> quad = 0.0;
  for (int col = 0; col < n; ++col) {
    std::complex<double> acc = 0.0;
    for (int row = 0; row < n; ++row) acc += std::conj(theta(row)) * form.B(row, col);
    quad += acc * theta(col);
  }
  const std::complex<double> cross = theta.dot(form.b);  // theta^H b
  const std::complex<double> value = quad - cross - std::conj(cross);

  const double scale = std::max(1.0, std::abs(quad) + 2.0 * std::abs(cross));
  if (std::abs(value.imag()) > 1e-10 * scale)
    throw numeric_error("quadratic_objective: non-real value, B is not Hermitian");
  return value.real();
}

CholeskyFactor factorize(const QuadraticForm& form, double alpha) {
  form.validate();
  if (alpha < 0.0) throw std::invalid_argument("factorize: alpha must be >= 0");
  const int n = form.size();

  CholeskyFactor factor;
  Eigen::LLT<Eigen::MatrixXcd> llt(form.B);
  // scale-invariant rank test: smallest pivot vs 1e-10 * trace(B)/N
  const double pivot_floor = 1e-10 * form.B.real().trace() / n;
  const bool plain_ok = llt.info() == Eigen::Success &&
                        llt.matrixLLT().diagonal().real().minCoeff() > 0.0 &&
                        llt.matrixLLT().diagonal().cwiseAbs2().minCoeff() > pivot_floor;
  if (plain_ok) {
    factor.alpha_used = 0.0;
  } else {
    if (alpha <= 0.0)
      throw numeric_error("factorize: B is rank deficient and alpha == 0");
    llt.compute(form.B + alpha * Eigen::MatrixXcd::Identity(n, n));
    if (llt.info() != Eigen::Success)
      throw numeric_error("factorize: Cholesky failed after regularization");
    factor.alpha_used = alpha;
  }

  factor.R = llt.matrixU();
  factor.R.diagonal() = factor.R.diagonal().real().cast<std::complex<double>>();
  factor.c = llt.matrixL().solve(form.b);  // R^H c = b
  factor.constant_offset = -factor.c.squaredNorm() - factor.alpha_used * n;
  return factor;
}

namespace {

RisConfiguration make_configuration(std::vector<int> indices,
                                    const PhaseAlphabet& alphabet,
                                    const QuadraticForm* form) {
  RisConfiguration config;
  config.theta.resize(static_cast<Eigen::Index>(indices.size()));
  for (std::size_t i = 0; i < indices.size(); ++i)
    config.theta(static_cast<Eigen::Index>(i)) =
        alphabet.points[static_cast<std::size_t>(indices[i])];
  config.indices = std::move(indices);
  if (form != nullptr) config.objective = quadratic_objective(*form, config.theta);
  return config;
}

}  // namespace

RisConfiguration sesd_solve(const QuadraticForm& form, const CholeskyFactor& factor,
                            const PhaseAlphabet& alphabet, SearchStats* stats) {
  const int n = form.size();
  const int width = alphabet.size();
  if (width == 0) throw std::invalid_argument("sesd_solve: empty alphabet");
  if (factor.R.rows() != n || factor.c.size() != n)
    throw std::invalid_argument("sesd_solve: factor/form dimension mismatch");
  for (int i = 0; i < n; ++i) {
    if (!(factor.R(i, i).real() > 0.0))
      throw std::invalid_argument("sesd_solve: factor diagonal must be positive");
  }

  // row-major copy so per-layer residual updates stream along rows
  const Eigen::Matrix<std::complex<double>, Eigen::Dynamic, Eigen::Dynamic,
                      Eigen::RowMajor>
      upper = factor.R;

  std::vector<std::complex<double>> theta(static_cast<std::size_t>(n));
  std::vector<int> chosen(static_cast<std::size_t>(n), 0);
  std::vector<double> child_metric(static_cast<std::size_t>(n) * width);
  std::vector<int> child_order(static_cast<std::size_t>(n) * width);
  std::vector<int> position(static_cast<std::size_t>(n), 0);
  std::vector<double> accumulated(static_cast<std::size_t>(n), 0.0);

  SearchStats local;
  double radius = std::numeric_limits<double>::infinity();
  std::vector<int> best;

  // computes the layer residual and sorts the children by metric (zig-zag
  // order generalized to an arbitrary unit-modulus alphabet)
  const auto enter_layer = [&](int layer) {
    std::complex<double> center = factor.c(layer);
    for (int j = layer + 1; j < n; ++j)
      center -= upper(layer, j) * theta[static_cast<std::size_t>(j)];
    double* metric = &child_metric[static_cast<std::size_t>(layer) * width];
    int* order = &child_order[static_cast<std::size_t>(layer) * width];
    for (int d = 0; d < width; ++d) {
      metric[d] = std::norm(center - upper(layer, layer) *
                                         alphabet.points[static_cast<std::size_t>(d)]);
      order[d] = d;
    }
    std::stable_sort(order, order + width,
                     [metric](int a, int b) { return metric[a] < metric[b]; });
    position[static_cast<std::size_t>(layer)] = 0;
  };

  int layer = n - 1;
  accumulated[static_cast<std::size_t>(layer)] = 0.0;
  enter_layer(layer);
  while (true) {
    if (position[static_cast<std::size_t>(layer)] == width) {
      // level exhausted; back up
      ++layer;
      if (layer == n) break;
      continue;
    }
    const double* metric = &child_metric[static_cast<std::size_t>(layer) * width];
    const int* order = &child_order[static_cast<std::size_t>(layer) * width];
    const int child = order[position[static_cast<std::size_t>(layer)]++];
    const double partial = accumulated[static_cast<std::size_t>(layer)] + metric[child];
    ++local.nodes;
    if (partial >= radius) {
      // siblings are sorted, so the rest of this level is outside the sphere too
      position[static_cast<std::size_t>(layer)] = width;
      continue;
    }
    theta[static_cast<std::size_t>(layer)] = alphabet.points[static_cast<std::size_t>(child)];
    chosen[static_cast<std::size_t>(layer)] = child;
    if (layer == 0) {
      radius = partial;  // new incumbent; partial < radius is guaranteed here
      best = chosen;
      ++local.leaves;
      continue;
    }
    accumulated[static_cast<std::size_t>(layer - 1)] = partial;
    --layer;
    enter_layer(layer);
  }

  if (stats != nullptr) *stats = local;
  return make_configuration(std::move(best), alphabet, &form);
}

RisConfiguration brute_force_solve(const QuadraticForm& form,
                                   const PhaseAlphabet& alphabet) {
  const int n = form.size();
  const int width = alphabet.size();
  if (width == 0) throw std::invalid_argument("brute_force_solve: empty alphabet");
  if (static_cast<long long>(n) * alphabet.bits > 20)
    throw capacity_error("brute_force_solve: |alphabet|^N exceeds 2^20");

  std::vector<int> indices(static_cast<std::size_t>(n), 0);
  Eigen::VectorXcd theta =
      Eigen::VectorXcd::Constant(n, alphabet.points.front());

  std::vector<int> best_indices = indices;
  double best_objective = quadratic_objective(form, theta);

  // odometer with the last entry fastest: lexicographic order, so the first
  // minimum found is the lexicographically smallest tie
  while (true) {
    int pos = n - 1;
    while (pos >= 0 && indices[static_cast<std::size_t>(pos)] == width - 1) {
      indices[static_cast<std::size_t>(pos)] = 0;
      theta(pos) = alphabet.points.front();
      --pos;
    }
    if (pos < 0) break;
    ++indices[static_cast<std::size_t>(pos)];
    theta(pos) = alphabet.points[static_cast<std::size_t>(indices[static_cast<std::size_t>(pos)])];

    const double objective = quadratic_objective(form, theta);
    if (objective < best_objective) {
      best_objective = objective;
      best_indices = indices;
    }
  }

  RisConfiguration config = make_configuration(std::move(best_indices), alphabet, nullptr);
  config.objective = best_objective;
  return config;
}

Eigen::VectorXcd continuous_relaxation(const QuadraticForm& form) {
  form.validate();
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(form.B);
  const Eigen::VectorXd& values = eig.eigenvalues();
  const double largest = values.maxCoeff();
  Eigen::VectorXcd result = Eigen::VectorXcd::Zero(form.size());
  if (largest <= 0.0) return result;
  const double cutoff = 1e-10 * largest;
  for (int i = 0; i < values.size(); ++i) {
    if (values(i) <= cutoff) continue;
    const Eigen::VectorXcd v = eig.eigenvectors().col(i);
    result += v * (v.dot(form.b) / values(i));
  }
  return result;
}

RisConfiguration nearest_point_quantize(const Eigen::VectorXcd& theta_hat,
                                        const PhaseAlphabet& alphabet,
                                        const QuadraticForm* form) {
  if (alphabet.size() == 0)
    throw std::invalid_argument("nearest_point_quantize: empty alphabet");
  const Eigen::Index n = theta_hat.size();
  std::vector<int> indices(static_cast<std::size_t>(n), 0);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double magnitude = std::abs(theta_hat(i));
    const std::complex<double> unit =
        magnitude > 0.0 ? theta_hat(i) / magnitude : std::complex<double>(1.0, 0.0);
    int best = 0;
    double best_distance = std::norm(unit - alphabet.points.front());
    for (int d = 1; d < alphabet.size(); ++d) {
      const double distance = std::norm(unit - alphabet.points[static_cast<std::size_t>(d)]);
      if (distance < best_distance) {
        best_distance = distance;
        best = d;
      }
    }
    indices[static_cast<std::size_t>(i)] = best;
  }
  return make_configuration(std::move(indices), alphabet, form);
}

}  // namespace risopt
