#pragma once

#include "rholap/generators.hpp"
#include "rholap/laplacian.hpp"
#include "rholap/mmspace.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <numeric>
#include <random>
#include <vector>

namespace testing {

using namespace rholap;

inline double uniform(std::mt19937_64& rng, double lo, double hi) { return lo + (hi - lo) * unit_draw(rng()); }

/// Random points in the unit square with weights k/8, k in 1..16.
inline MMSpace random_space(std::mt19937_64& rng, std::size_t n, std::size_t dim = 2) {
  std::vector<double> coords(n * dim);
  for (double& c : coords) c = unit_draw(rng());
  std::vector<Rational> w;
  for (std::size_t i = 0; i < n; ++i) w.emplace_back(static_cast<long>(1 + rng() % 16), 8);
  std::vector<std::string> ids;
  for (std::size_t i = 0; i < n; ++i) ids.push_back("p" + std::to_string(i));
  return MMSpace("random", ids, CoordinateMetric::euclidean(dim, coords), w);
}

inline std::vector<double> random_vector(std::mt19937_64& rng, std::size_t n) {
  std::vector<double> u(n);
  for (double& v : u) v = uniform(rng, -1, 1);
  return u;
}

/// The operator written straight from the defining sum, as a dense
/// (non-symmetric) matrix.
inline Eigen::MatrixXd direct_matrix(const MMSpace& s, double rho, const std::vector<double>& phi) {
  const Index n = s.size();
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (Index x = 0; x < n; ++x)
    for (Index y = 0; y < n; ++y)
      if (s.dist(x, y) < rho) {
        a(x, x) += s.weight(y) / phi[x];
        a(x, y) -= s.weight(y) / phi[x];
      }
  return a;
}

inline std::vector<double> direct_per_ball_phi(const MMSpace& s, double rho) {
  std::vector<double> phi(s.size(), 0.0);
  for (Index x = 0; x < s.size(); ++x)
    for (Index y = 0; y < s.size(); ++y)
      if (s.dist(x, y) < rho) phi[x] += s.weight(y);
  for (double& p : phi) p *= rho * rho;
  return phi;
}

/// Ascending real parts of a general eigensolve.
inline std::vector<double> direct_spectrum(const Eigen::MatrixXd& a) {
  Eigen::EigenSolver<Eigen::MatrixXd> es(a, false);
  std::vector<double> v;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) v.push_back(es.eigenvalues()(i).real());
  std::sort(v.begin(), v.end());
  return v;
}

inline std::vector<double> full_spectrum(const MMSpace& s, double rho, const Normalization& norm = {}) {
  const RhoOperator op = RhoOperator::assemble(s, rho, norm);
  SpectrumOptions opts;
  opts.solver = SolverKind::Dense;
  return low_spectrum(op, op.size(), opts).eigenvalues;
}

}  // namespace testing
