#pragma once

#include "rholap/mmspace.hpp"

#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace rholap {

enum class Condition { SLV, BIV, Doubling, BishopGromov };

std::string to_string(Condition c);

/// Outcome of one regularity audit.
///
/// worst_ratio is the extremal statistic of the condition:
///   SLV           max_x mass(layer) / mass(B_rho(x))          (holds iff <= Lambda eps / rho)
///   BIV           min_pairs mass(B_rho(x) & B_rho(y)) / mass(B_{rho+eps}(x))  (holds iff >= 1/Lambda)
///   Doubling      max_x mass(B_big(x)) / mass(B_small(x))      (holds iff <= Lambda)
///   BishopGromov  max log(mass ratio) / log(r1/r2)             (holds iff <= Lambda)
struct ConditionReport {
  Condition condition = Condition::SLV;
  double lambda = 0.0;
  double rho = 0.0;  ///< r_small for doubling
  double eps = 0.0;  ///< r_big for doubling
  std::vector<std::pair<double, double>> radii;  ///< (r1, r2) grid for Bishop-Gromov

  bool holds = true;
  double worst_ratio = 0.0;
  double minimal_lambda = 0.0;  ///< smallest Lambda that passes; may be +inf
  Index witness = 0;
  std::optional<Index> witness_pair;  ///< second point for BIV
  std::optional<std::pair<double, double>> witness_radii;  ///< Bishop-Gromov

  std::vector<double> per_point;  ///< per-point extremal statistic, when requested
};

/// Per-point statistics, shared by the audits and by witness re-checks.
double slv_ratio(const MMSpace& space, Index x, double rho, double eps);
double biv_ratio(const MMSpace& space, Index x, Index y, double rho, double eps);
double doubling_ratio(const MMSpace& space, Index x, double r_small, double r_big);
/// log(mass(B_r1)/mass(B_r2)) / log(r1/r2); 0 when r1 == r2.
double bishop_gromov_exponent(const MMSpace& space, Index x, double r1, double r2);

ConditionReport check_slv(const MMSpace& space, double lambda, double rho, double eps, bool per_point = false);
/// eps = 0 is accepted (the condition is then a pure intersection bound).
ConditionReport check_biv(const MMSpace& space, double lambda, double rho, double eps, bool per_point = false);
ConditionReport check_doubling(const MMSpace& space, double lambda, double r_small, double r_big,
                               bool per_point = false);
ConditionReport check_bishop_gromov(const MMSpace& space, double lambda,
                                    const std::vector<std::pair<double, double>>& radii, bool per_point = false);

/// All pairs r1 >= r2 drawn from a radius list.
std::vector<std::pair<double, double>> radius_pairs(const std::vector<double>& radii);

/// Transfer of SLV/BIV from X to a space Y that is (eps, delta)-close to it.
struct StabilityProbeReport {
  double lambda = 0.0, rho = 0.0, eps = 0.0, delta = 0.0;
  ConditionReport x_slv, x_biv;  ///< X at (Lambda, rho - 2 eps, 5 eps)
  ConditionReport y_slv, y_biv;  ///< Y at (6 e^{2 delta} Lambda, rho, eps) and (e^{2 delta} Lambda, rho, eps)
  bool preconditions_hold = false;
  bool conclusions_hold = false;
  /// Each conclusion is only claimed when its own precondition holds; an
  /// unmet precondition is reported, not counted as a counterexample.
  bool consistent() const { return (!x_slv.holds || y_slv.holds) && (!x_biv.holds || y_biv.holds); }
};

/// Requires 0 < eps <= rho/12. The closeness itself is taken from the caller.
StabilityProbeReport conditions_stability_probe(const MMSpace& x, const MMSpace& y, double lambda, double rho,
                                                double eps, double delta);

}  // namespace rholap
