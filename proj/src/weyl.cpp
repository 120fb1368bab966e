#include "rholap/weyl.hpp"

#include "rholap/coupling_ops.hpp"
#include "rholap/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace rholap {

namespace {

Spectrum spectrum_prefix(const RhoOperator& op, std::size_t k, SpectrumOptions opts) {
  // Long prefixes are cheaper to take from a full dense solve.
  if (opts.solver == SolverKind::Auto && 4 * k > op.size()) opts.solver = SolverKind::Dense;
  return low_spectrum(op, k, opts);
}

}  // namespace

EigenCount count_eigenvalues(const RhoOperator& op, double bound, const SpectrumOptions& opts) {
  EigenCount out;
  out.bound = bound;
  if (bound < 0) return out;
  std::size_t k = std::min<std::size_t>(16, op.size());
  while (true) {
    const Spectrum sp = spectrum_prefix(op, k, opts);
    out.eigenvalues = sp.eigenvalues;
    if (sp.eigenvalues.back() > bound || k == op.size()) break;
    k = std::min<std::size_t>(2 * k, op.size());
  }
  out.count = static_cast<std::size_t>(
      std::upper_bound(out.eigenvalues.begin(), out.eigenvalues.end(), bound) - out.eigenvalues.begin());
  return out;
}

double kth_eigenvalue(const RhoOperator& op, std::size_t k, const SpectrumOptions& opts) {
  if (k == 0) throw InputError("eigenvalue index is 1-based");
  if (k > op.size()) return std::numeric_limits<double>::infinity();
  return spectrum_prefix(op, k, opts).eigenvalues.back();
}

QRatio q_ratio(const MMSpace& space, double rho, double r) {
  if (!(rho > 0) || !(r > 0)) throw InputError("rho and r must be positive");
  const Index n = space.size();
  std::vector<double> density(n);
  for (Index z = 0; z < n; ++z) density[z] = rho * rho * ball_mass(space, z, rho) * space.weight(z);
  QRatio q;
  q.value = 0.0;
  for (Index x = 0; x < n; ++x) {
    double big = 0.0, small = 0.0;
    for (Index z = 0; z < n; ++z) {
      const double d = space.dist(x, z);
      if (d < 2 * r) big += density[z];
      if (d < r / 2) small += density[z];
    }
    const double ratio = big / small;
    if (ratio > q.value) {
      q.value = ratio;
      q.witness = x;
    }
  }
  return q;
}

ManyEigenvaluesReport many_eigenvalues_check(const MMSpace& space, double rho, double r,
                                             const SpectrumOptions& opts, std::size_t packing_budget) {
  if (!(rho > 0) || !(r >= rho)) throw InputError("need r >= rho > 0");
  ManyEigenvaluesReport rep;
  rep.rho = rho;
  rep.r = r;
  const PackingResult pack = packing_number_exact(space, 3 * r, packing_budget);
  rep.n = pack.count;
  rep.packing_exact = pack.exact;
  rep.q = q_ratio(space, rho, r).value;
  rep.bound = 4 * rep.q / (r * r);

  const RhoOperator op = RhoOperator::assemble(space, rho);
  rep.lambda_n = kth_eigenvalue(op, rep.n, opts);

  SeparatedSet centers;
  centers.indices = pack.witness;
  centers.separation = 3 * r;
  rep.tent_bound = rayleigh_minmax_bound(space, rho, tent_functions(space, centers, r, rho));
  rep.holds = rep.lambda_n <= rep.bound;
  return rep;
}

double few_eigenvalues_lambda(const MMSpace& space, double rho) {
  const auto biv = check_biv(space, 1.0, 5 * rho / 6, 5 * rho / 12);
  const auto dbl = check_doubling(space, 1.0, 5 * rho / 6, 5 * rho / 3);
  return std::max({1.0, biv.minimal_lambda, dbl.minimal_lambda});
}

FewEigenvaluesReport few_eigenvalues_check(const MMSpace& space, double rho, double lambda,
                                           const SpectrumOptions& opts, std::size_t packing_budget) {
  if (!(rho > 0)) throw InputError("rho must be positive");
  if (!(lambda >= 1)) throw InputError("Lambda must be >= 1");
  FewEigenvaluesReport rep;
  rep.rho = rho;
  rep.lambda = lambda;
  rep.c = 1.0 / stability_constant(6 * lambda, 0.0);
  rep.biv = check_biv(space, lambda, 5 * rho / 6, 5 * rho / 12);
  rep.doubling = check_doubling(space, lambda, 5 * rho / 6, 5 * rho / 3);
  rep.preconditions_hold = rep.biv.holds && rep.doubling.holds;

  const PackingResult pack = packing_number_exact(space, rho / 24, packing_budget);
  rep.n = pack.count;
  rep.packing_exact = pack.exact;

  const RhoOperator op = RhoOperator::assemble(space, rho);
  rep.count = count_eigenvalues(op, rep.c / (rho * rho), opts).count;
  rep.holds = rep.count <= rep.n;
  rep.empirical_c = kth_eigenvalue(op, rep.n + 1, opts) * rho * rho;
  return rep;
}

}  // namespace rholap
