#pragma once

#include "rholap/laplacian.hpp"
#include "rholap/regularity.hpp"

#include <vector>

namespace rholap {

/// Number of eigenvalues in [0, R], with multiplicity; grows the requested
/// spectrum until it passes R or exhausts the space.
struct EigenCount {
  double bound = 0.0;
  std::size_t count = 0;
  std::vector<double> eigenvalues;  ///< the computed prefix of the spectrum
};

EigenCount count_eigenvalues(const RhoOperator& op, double bound, const SpectrumOptions& opts = {});

/// The k-th smallest eigenvalue (1-based); +inf when k exceeds the size.
double kth_eigenvalue(const RhoOperator& op, std::size_t k, const SpectrumOptions& opts = {});

/// mu^rho(A) = sum_{z in A} rho^2 mu(B_rho(z)) w_z.
struct QRatio {
  double value = 0.0;
  Index witness = 0;
};

/// sup_x mu^rho(B_2r(x)) / mu^rho(B_{r/2}(x)).
QRatio q_ratio(const MMSpace& space, double rho, double r);

/// Lower Weyl-type bound: lambda_N <= 4 Q(r) r^-2 with N = N_X(3r), r >= rho.
struct ManyEigenvaluesReport {
  double rho = 0.0, r = 0.0;
  std::size_t n = 0;      ///< N_X(3r)
  bool packing_exact = false;
  double q = 0.0;
  double bound = 0.0;     ///< 4 Q r^-2
  double lambda_n = 0.0;
  double tent_bound = 0.0;  ///< min-max value on the tent functions of a maximal packing
  bool holds = false;
};

ManyEigenvaluesReport many_eigenvalues_check(const MMSpace& space, double rho, double r,
                                             const SpectrumOptions& opts = {},
                                             std::size_t packing_budget = 10'000'000);

/// Upper Weyl-type bound: #(c rho^-2) <= N_X(rho/24) with c = 1/C(6 Lambda).
struct FewEigenvaluesReport {
  double rho = 0.0, lambda = 0.0;
  double c = 0.0;
  ConditionReport biv;       ///< BIV(Lambda, 5 rho/6, 5 rho/12)
  ConditionReport doubling;  ///< mu(B_{5 rho/3}) <= Lambda mu(B_{5 rho/6})
  bool preconditions_hold = false;
  std::size_t n = 0;  ///< N_X(rho/24)
  bool packing_exact = false;
  std::size_t count = 0;  ///< #(c rho^-2)
  bool holds = false;
  /// lambda_{N+1} rho^2: the largest c for which the count bound holds
  /// (+inf when N is the whole space).
  double empirical_c = 0.0;
};

FewEigenvaluesReport few_eigenvalues_check(const MMSpace& space, double rho, double lambda,
                                           const SpectrumOptions& opts = {},
                                           std::size_t packing_budget = 10'000'000);

/// Smallest Lambda >= 1 passing both hypotheses of the upper bound.
double few_eigenvalues_lambda(const MMSpace& space, double rho);

}  // namespace rholap
