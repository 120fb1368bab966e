#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <cstdint>
#include <stdexcept>

namespace rholap {

using SparseRowMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

/// Lowest eigenpairs of a real symmetric matrix, ascending.
struct EigenPairs {
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;    ///< unit columns; empty unless requested
  Eigen::VectorXd residuals;  ///< ||S v - lambda v|| per pair
  std::size_t iterations = 0;
  bool converged = true;
};

struct LanczosOptions {
  double tol = 1e-10;          ///< residual bound relative to the spectral scale
  std::size_t block_size = 4;  ///< must be >= the largest multiplicity wanted
  std::size_t max_steps = 0;   ///< block steps; 0 selects 10 k + 200
  std::uint64_t seed = 0x5eedULL;
  bool want_vectors = false;
};

/// Thrown when block Lanczos exhausts its step budget. Carries the Ritz
/// pairs reached so far.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, EigenPairs partial)
      : std::runtime_error(what), partial_(std::move(partial)) {}
  const EigenPairs& partial() const { return partial_; }

 private:
  EigenPairs partial_;
};

EigenPairs dense_smallest(const Eigen::MatrixXd& s, std::size_t k, bool want_vectors = false);

/// Block Lanczos with full reorthogonalization for the k smallest
/// eigenvalues. Multiplicities up to block_size are resolved.
EigenPairs lanczos_smallest(const SparseRowMatrix& s, std::size_t k, const LanczosOptions& opts = {});

}  // namespace rholap
