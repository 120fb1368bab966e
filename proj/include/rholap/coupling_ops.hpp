#pragma once

#include "rholap/laplacian.hpp"
#include "rholap/mmspace.hpp"
#include "rholap/regularity.hpp"
#include "rholap/transport.hpp"

#include <vector>

namespace rholap {

/// Space on the support of a coupling: one point per entry (x, y), weight
/// gamma(x, y), distance pulled back from the chosen side. Fibers over one
/// point of that side are zero-distance clusters.
MMSpace split(const MMSpace& x, const MMSpace& y, const Coupling& gamma, Side side);

/// Genuine-metric variant: max(d_side, c rho^-2 d_other). Requires
/// 0 < c < 1 / diam(other side).
MMSpace split_genuine(const MMSpace& x, const MMSpace& y, const Coupling& gamma, Side side, double rho, double c);

/// The side's point set carrying the coupling marginal as its measure.
MMSpace reduced_space(const MMSpace& space, std::span<const Rational> marginal);

/// Fiber averaging between the two sides of a coupling:
///   X->Y: (T u)(y) = sum_x gamma(x, y) u(x) / gamma_Y(y).
class TransportOperator {
 public:
  TransportOperator(const Coupling& gamma, Side from);

  Side from() const { return from_; }
  Index source_size() const { return source_size_; }
  Index target_size() const { return rows_.size(); }

  std::vector<double> apply(std::span<const double> u) const;
  /// Every kernel row sums to one, checked in exact arithmetic.
  bool rows_stochastic_exact() const;

 private:
  struct Term {
    Index source;
    Rational exact;
    double weight;
  };
  Side from_;
  Index source_size_ = 0;
  std::vector<std::vector<Term>> rows_;
};

/// 2 (L + 4 L^2 + 4 L^3) with L = e^delta max(Lambda, 1).
double stability_constant(double lambda, double delta);
/// Lambda + 4 Lambda^2 + 4 Lambda^3, for Lambda >= 1.
double metric_change_constant(double lambda);

struct RatioCheck {
  std::size_t k = 0;  ///< 1-based
  double lambda_a = 0.0;
  double lambda_b = 0.0;
  double ratio = 0.0;  ///< lambda_a / lambda_b
  double lower = 0.0;
  double upper = 0.0;
  double margin = 0.0;  ///< min(ratio - lower, upper - ratio)
  bool checked = false;
  bool within = true;
};

struct AuditPair {
  ConditionReport slv, biv;
  bool holds() const { return slv.holds && biv.holds; }
};

struct StabilityReport {
  double rho = 0.0, eps = 0.0, delta = 0.0, lambda = 0.0;
  double constant = 0.0;   ///< C
  double threshold = 0.0;  ///< e^{-4 delta} (1 + C eps/rho)^-1 rho^-2
  AuditPair audit_x, audit_y;
  bool preconditions_hold = false;
  std::vector<RatioCheck> per_k;
  std::size_t checked = 0;
  bool holds = true;  ///< every checked k lies within the bound
};

/// Two-sided eigenvalue ratio bound for a certified pair. Dense spectra.
StabilityReport stability_check(const MMSpace& x, const MMSpace& y, const ClosenessCertificate& cert, double rho,
                                double lambda);

struct MetricChangeReport {
  double rho = 0.0, eps = 0.0, lambda = 0.0;
  double constant = 0.0;
  double max_distance_change = 0.0;
  AuditPair audit_a, audit_b;
  bool preconditions_hold = false;
  std::vector<RatioCheck> per_k;  ///< ratio = lambda_k(b) / lambda_k(a)
  std::size_t checked = 0;
  bool holds = true;
};

/// Same points and weights, distances changed by at most eps. Dense spectra.
MetricChangeReport metric_perturbation_check(const MMSpace& a, const MMSpace& b, double rho, double lambda,
                                             double eps);

struct TxyReport {
  double rho = 0.0, eps = 0.0, delta = 0.0, lambda = 0.0;
  double constant = 0.0;
  double amplitude = 0.0;  ///< A = e^delta (1 + C eps/rho)
  AuditPair audit_x, audit_y;
  bool preconditions_hold = false;

  double norm_u = 0.0;     ///< ||u||^2 on X
  double norm_tu = 0.0;    ///< ||T u||^2 on Y
  double energy_u = 0.0;   ///< D_X(u)
  double energy_tu = 0.0;  ///< D_Y(T u)
  double roundtrip = 0.0;  ///< ||T_YX T_XY u - u||^2 on X

  double slack_norm_lower = 0.0;
  double slack_norm_upper = 0.0;
  double slack_energy = 0.0;
  double slack_roundtrip = 0.0;
  /// Smallest amplitude for which all three inequalities hold for this u.
  double required_amplitude = 0.0;
  bool holds = true;  ///< all slacks >= -tolerance
};

TxyReport verify_txy_bounds(const MMSpace& x, const MMSpace& y, const ClosenessCertificate& cert, double rho,
                            double lambda, std::span<const double> u);

}  // namespace rholap
