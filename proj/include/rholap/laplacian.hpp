#pragma once

#include "rholap/eigensolver.hpp"
#include "rholap/mmspace.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <span>
#include <vector>

namespace rholap {

/// Normalizing function phi. PerBall is phi(x) = rho^2 mu(B_rho(x)), which
/// gives the plain rho-Laplacian; Constant and Custom give weighted variants.
struct Normalization {
  enum class Kind { PerBall, Constant, Custom };

  Kind kind = Kind::PerBall;
  double constant = 0.0;
  std::vector<double> custom;

  static Normalization per_ball() { return {}; }
  static Normalization constant_value(double phi) { return {Kind::Constant, phi, {}}; }
  static Normalization custom_values(std::vector<double> phi) { return {Kind::Custom, 0.0, std::move(phi)}; }
};

/// Volume of the unit ball in R^dim.
double unit_ball_volume(int dim);

/// nu_n rho^(n+2) / (2n + 4): the constant normalization that makes the
/// weighted operator comparable with the Beltrami-Laplacian on an n-manifold.
double constant_normalization(int dim, double rho);

/// Per-point phi values for a normalization choice.
std::vector<double> normalizing_values(const MMSpace& space, double rho, const Normalization& norm);

/// The assembled rho-Laplacian
///   (Delta u)(x) = phi(x)^-1 * sum_{d(x,y) < rho} w_y (u(x) - u(y)),
/// self-adjoint for <u, v>_M = sum_x M(x) u(x) v(x) with M = phi * w.
class RhoOperator {
 public:
  static RhoOperator assemble(const MMSpace& space, double rho, const Normalization& norm = {});

  Index size() const { return phi_.size(); }
  double rho() const { return rho_; }
  const Normalization& normalization() const { return norm_; }

  std::span<const double> phi() const { return phi_; }
  std::span<const double> weights() const { return weights_; }
  std::span<const double> ball_mass() const { return ball_mass_; }
  std::span<const double> mass_diag() const { return mass_; }
  /// Points y with d(x, y) < rho, x included.
  std::span<const Index> neighbors(Index x) const;

  std::vector<double> apply(std::span<const double> u) const;
  double inner(std::span<const double> u, std::span<const double> v) const;

  /// M^(1/2) Delta M^(-1/2): symmetric, same spectrum.
  SparseRowMatrix symmetrized() const;
  Eigen::MatrixXd symmetrized_dense() const;

  /// Upper end of the spectral range, 2 sup_x (mu(B_rho(x)) / phi(x)).
  double spectral_upper_bound() const;

 private:
  double rho_ = 0.0;
  Normalization norm_;
  std::vector<double> weights_;
  std::vector<double> phi_;
  std::vector<double> ball_mass_;
  std::vector<double> mass_;
  std::vector<std::size_t> row_start_;
  std::vector<Index> cols_;
};

enum class SolverKind { Auto, Dense, Iterative };

struct SpectrumOptions {
  SolverKind solver = SolverKind::Auto;  ///< Auto: dense up to 600 points
  double tol = 1e-10;
  std::size_t block_size = 4;
  std::uint64_t seed = 0x5eedULL;
  bool want_vectors = false;
  double cluster_rel_gap = 1e-6;
};

/// The k smallest eigenvalues of a rho-Laplacian, ascending.
struct Spectrum {
  double rho = 0.0;
  std::vector<double> eigenvalues;
  std::size_t count_requested = 0;
  std::vector<bool> below_threshold;  ///< lambda < rho^-2
  SolverKind solver = SolverKind::Dense;
  std::vector<double> residuals;
  /// Cluster sizes, in order; numerically repeated eigenvalues share one.
  std::vector<std::size_t> multiplicities;
  /// M-orthonormal eigenvectors of Delta (columns), when requested.
  Eigen::MatrixXd eigenvectors;
  std::size_t iterations = 0;
};

Spectrum low_spectrum(const RhoOperator& op, std::size_t k, const SpectrumOptions& opts = {});

/// Groups ascending values whose gap is <= rel_gap * max(|a|, |b|, floor).
std::vector<std::size_t> cluster_sizes(std::span<const double> ascending, double rel_gap, double floor);

/// D(u) = 1/2 sum_{d(x,y) < rho} w_x w_y (u(x) - u(y))^2. Independent of phi.
double dirichlet_form(const MMSpace& space, double rho, std::span<const double> u);
/// Bilinear form of dirichlet_form.
double dirichlet_pairing(const MMSpace& space, double rho, std::span<const double> u, std::span<const double> v);

/// sum_x phi(x) w_x u(x)^2.
double weighted_norm_sq(const MMSpace& space, double rho, std::span<const double> u,
                        const Normalization& norm = {});

/// Largest Rayleigh quotient D(u)/||u||^2 over span(basis): by min-max an
/// upper bound on lambda_k with k = basis size. Throws InputError if the
/// basis is linearly dependent.
double rayleigh_minmax_bound(const MMSpace& space, double rho, const std::vector<std::vector<double>>& basis,
                             const Normalization& norm = {});

/// u_i(x) = max(1 - d(x, x_i)/r, 0) for each center. Requires centers
/// pairwise >= 3r apart and r >= rho.
std::vector<std::vector<double>> tent_functions(const MMSpace& space, const SeparatedSet& centers, double r,
                                                double rho);

}  // namespace rholap
