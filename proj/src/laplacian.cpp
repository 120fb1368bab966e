#include "rholap/laplacian.hpp"

#include "rholap/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace rholap {

double unit_ball_volume(int dim) {
  if (dim < 0) throw InputError("dimension must be >= 0");
  const double n = dim;
  return std::pow(std::numbers::pi, n / 2.0) / std::tgamma(n / 2.0 + 1.0);
}

double constant_normalization(int dim, double rho) {
  if (!(rho > 0)) throw InputError("rho must be positive");
  return unit_ball_volume(dim) * std::pow(rho, dim + 2) / (2.0 * dim + 4.0);
}

std::vector<double> normalizing_values(const MMSpace& space, double rho, const Normalization& norm) {
  if (!(rho > 0)) throw InputError("rho must be positive");
  const Index n = space.size();
  switch (norm.kind) {
    case Normalization::Kind::PerBall: {
      std::vector<double> phi(n);
      for (Index x = 0; x < n; ++x) phi[x] = rho * rho * ball_mass(space, x, rho);
      return phi;
    }
    case Normalization::Kind::Constant:
      if (!(norm.constant > 0) || !std::isfinite(norm.constant))
        throw InputError("constant normalization must be positive");
      return std::vector<double>(n, norm.constant);
    case Normalization::Kind::Custom:
      if (norm.custom.size() != n) throw InputError("custom normalization has wrong length");
      for (double v : norm.custom)
        if (!(v > 0) || !std::isfinite(v)) throw InputError("normalizing function must be positive");
      return norm.custom;
  }
  return {};
}

RhoOperator RhoOperator::assemble(const MMSpace& space, double rho, const Normalization& norm) {
  if (!(rho > 0) || !std::isfinite(rho)) throw InputError("rho must be positive");
  RhoOperator op;
  op.rho_ = rho;
  op.norm_ = norm;
  const Index n = space.size();
  op.weights_.assign(space.weights().begin(), space.weights().end());
  op.ball_mass_.assign(n, 0.0);
  op.row_start_.assign(n + 1, 0);
  for (Index x = 0; x < n; ++x) {
    for (Index y = 0; y < n; ++y) {
      if (space.dist(x, y) < rho) {
        op.cols_.push_back(y);
        op.ball_mass_[x] += op.weights_[y];
      }
    }
    op.row_start_[x + 1] = op.cols_.size();
  }
  if (norm.kind == Normalization::Kind::PerBall) {
    op.phi_.resize(n);
    for (Index x = 0; x < n; ++x) op.phi_[x] = rho * rho * op.ball_mass_[x];
  } else {
    op.phi_ = normalizing_values(space, rho, norm);
  }
  op.mass_.resize(n);
  for (Index x = 0; x < n; ++x) op.mass_[x] = op.phi_[x] * op.weights_[x];
  return op;
}

std::span<const Index> RhoOperator::neighbors(Index x) const {
  return {cols_.data() + row_start_[x], row_start_[x + 1] - row_start_[x]};
}

std::vector<double> RhoOperator::apply(std::span<const double> u) const {
  if (u.size() != size()) throw InputError("function has wrong length");
  std::vector<double> out(size());
  for (Index x = 0; x < size(); ++x) {
    double acc = 0.0;
    for (Index y : neighbors(x)) acc += weights_[y] * (u[x] - u[y]);
    out[x] = acc / phi_[x];
  }
  return out;
}

double RhoOperator::inner(std::span<const double> u, std::span<const double> v) const {
  if (u.size() != size() || v.size() != size()) throw InputError("function has wrong length");
  double s = 0.0;
  for (Index x = 0; x < size(); ++x) s += mass_[x] * u[x] * v[x];
  return s;
}

SparseRowMatrix RhoOperator::symmetrized() const {
  const Index n = size();
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(cols_.size());
  for (Index x = 0; x < n; ++x) {
    double diag = (ball_mass_[x] - weights_[x]) / phi_[x];
    for (Index y : neighbors(x)) {
      if (y == x) continue;
      // Zero-distance twins also land here; they are distinct points.
      double v = -std::sqrt(weights_[x] * weights_[y] / (phi_[x] * phi_[y]));
      trip.emplace_back(static_cast<int>(x), static_cast<int>(y), v);
    }
    trip.emplace_back(static_cast<int>(x), static_cast<int>(x), diag);
  }
  SparseRowMatrix s(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  s.setFromTriplets(trip.begin(), trip.end());
  return s;
}

Eigen::MatrixXd RhoOperator::symmetrized_dense() const { return Eigen::MatrixXd(symmetrized()); }

double RhoOperator::spectral_upper_bound() const {
  double sup = 0.0;
  for (Index x = 0; x < size(); ++x) sup = std::max(sup, ball_mass_[x] / phi_[x]);
  return 2.0 * sup;
}

std::vector<std::size_t> cluster_sizes(std::span<const double> ascending, double rel_gap, double floor) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < ascending.size(); ++i) {
    if (i > 0) {
      const double a = ascending[i - 1], b = ascending[i];
      const double scale = std::max({std::abs(a), std::abs(b), floor});
      if (b - a <= rel_gap * scale) {
        out.back()++;
        continue;
      }
    }
    out.push_back(1);
  }
  return out;
}

Spectrum low_spectrum(const RhoOperator& op, std::size_t k, const SpectrumOptions& opts) {
  const Index n = op.size();
  if (k < 1 || k > n) throw InputError("requested eigenvalue count must be in [1, n]");
  SolverKind solver = opts.solver;
  if (solver == SolverKind::Auto) solver = n <= 600 ? SolverKind::Dense : SolverKind::Iterative;

  EigenPairs pairs;
  if (solver == SolverKind::Dense) {
    pairs = dense_smallest(op.symmetrized_dense(), k, opts.want_vectors);
  } else {
    LanczosOptions lo;
    lo.tol = opts.tol;
    lo.block_size = opts.block_size;
    lo.seed = opts.seed;
    lo.want_vectors = opts.want_vectors;
    pairs = lanczos_smallest(op.symmetrized(), k, lo);
  }

  Spectrum sp;
  sp.rho = op.rho();
  sp.count_requested = k;
  sp.solver = solver;
  sp.iterations = pairs.iterations;
  const double threshold = 1.0 / (op.rho() * op.rho());
  for (Eigen::Index i = 0; i < pairs.values.size(); ++i) {
    sp.eigenvalues.push_back(pairs.values(i));
    sp.residuals.push_back(pairs.residuals(i));
    sp.below_threshold.push_back(pairs.values(i) < threshold);
  }
  sp.multiplicities = cluster_sizes(sp.eigenvalues, opts.cluster_rel_gap, 1e-4 * threshold);
  if (opts.want_vectors) {
    sp.eigenvectors = pairs.vectors;
    for (Index x = 0; x < n; ++x) sp.eigenvectors.row(static_cast<Eigen::Index>(x)) /= std::sqrt(op.mass_diag()[x]);
  }
  return sp;
}

double dirichlet_pairing(const MMSpace& space, double rho, std::span<const double> u, std::span<const double> v) {
  const Index n = space.size();
  if (u.size() != n || v.size() != n) throw InputError("function has wrong length");
  if (!(rho > 0)) throw InputError("rho must be positive");
  double s = 0.0;
  for (Index x = 0; x < n; ++x)
    for (Index y = 0; y < x; ++y)
      if (space.dist(x, y) < rho) s += space.weight(x) * space.weight(y) * (u[x] - u[y]) * (v[x] - v[y]);
  // Each unordered pair appears twice in the double integral; the 1/2 cancels.
  return s;
}

double dirichlet_form(const MMSpace& space, double rho, std::span<const double> u) {
  return dirichlet_pairing(space, rho, u, u);
}

double weighted_norm_sq(const MMSpace& space, double rho, std::span<const double> u, const Normalization& norm) {
  if (u.size() != space.size()) throw InputError("function has wrong length");
  const auto phi = normalizing_values(space, rho, norm);
  double s = 0.0;
  for (Index x = 0; x < space.size(); ++x) s += phi[x] * space.weight(x) * u[x] * u[x];
  return s;
}

double rayleigh_minmax_bound(const MMSpace& space, double rho, const std::vector<std::vector<double>>& basis,
                             const Normalization& norm) {
  const auto k = static_cast<Eigen::Index>(basis.size());
  if (k == 0) throw InputError("basis must be nonempty");
  const RhoOperator op = RhoOperator::assemble(space, rho, norm);
  std::vector<std::vector<double>> lap;
  lap.reserve(basis.size());
  for (const auto& u : basis) lap.push_back(op.apply(u));
  Eigen::MatrixXd energy(k, k), gram(k, k);
  for (Eigen::Index i = 0; i < k; ++i)
    for (Eigen::Index j = 0; j <= i; ++j) {
      energy(i, j) = energy(j, i) = 0.5 * (op.inner(lap[i], basis[j]) + op.inner(basis[i], lap[j]));
      gram(i, j) = gram(j, i) = op.inner(basis[i], basis[j]);
    }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> g(gram, Eigen::EigenvaluesOnly);
  const double gmax = g.eigenvalues().maxCoeff();
  if (!(gmax > 0) || g.eigenvalues().minCoeff() <= 1e-12 * gmax)
    throw InputError("basis is linearly dependent (rank-deficient Gram matrix)");
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> ges(energy, gram, Eigen::EigenvaluesOnly);
  return ges.eigenvalues().maxCoeff();
}

std::vector<std::vector<double>> tent_functions(const MMSpace& space, const SeparatedSet& centers, double r,
                                                double rho) {
  if (!(r > 0) || r < rho) throw InputError("tent radius must satisfy r >= rho > 0");
  if (!is_separated(space, centers.indices, 3.0 * r))
    throw InputError("tent centers must be pairwise at least 3r apart");
  std::vector<std::vector<double>> out;
  out.reserve(centers.indices.size());
  for (Index c : centers.indices) {
    if (c >= space.size()) throw InputError("tent center out of range");
    std::vector<double> u(space.size());
    for (Index x = 0; x < space.size(); ++x) u[x] = std::max(1.0 - space.dist(x, c) / r, 0.0);
    out.push_back(std::move(u));
  }
  return out;
}

}  // namespace rholap
