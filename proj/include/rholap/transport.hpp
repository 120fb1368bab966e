#pragma once

#include "rholap/mmspace.hpp"
#include "rholap/rational.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace rholap {

/// Sparse joint measure on X x Y with exact marginals.
struct Coupling {
  struct Entry {
    Index x = 0;
    Index y = 0;
    Rational mass;
  };

  Index nx = 0;
  Index ny = 0;
  std::vector<Entry> entries;  ///< sorted by (x, y), masses > 0
  std::vector<Rational> marginal_x;
  std::vector<Rational> marginal_y;

  /// Merges duplicate pairs, drops zero masses, recomputes marginals.
  static Coupling from_entries(Index nx, Index ny, std::vector<Entry> entries);
  /// The identity coupling of a measure with itself.
  static Coupling diagonal(std::span<const Rational> masses);

  Rational total() const;
  /// Stored marginals equal the entry sums exactly.
  bool marginals_consistent() const;
};

/// Distances between points of X and points of Y, needed to define
/// closeness on the disjoint union. Always materialized as an nx x ny table.
class CrossMetric {
 public:
  enum class Mode { Shared, Explicit, Assignment };

  /// X and Y carry coordinate metrics over the same ambient space.
  static CrossMetric shared(const MMSpace& x, const MMSpace& y);
  /// Row-major nx x ny table.
  static CrossMetric explicit_matrix(Index nx, Index ny, std::vector<double> values);
  /// d(x, y) = d_X(x, assignment[y]) + offset: each point of Y stands in for
  /// a point of X, displaced by at most `offset`.
  static CrossMetric assignment(const MMSpace& x, std::vector<Index> assignment, double offset = 0.0);

  Mode mode() const { return mode_; }
  Index nx() const { return nx_; }
  Index ny() const { return ny_; }
  double operator()(Index x, Index y) const { return table_[x * ny_ + y]; }
  const std::vector<double>& table() const { return table_; }
  const std::vector<Index>& assigned() const { return assignment_; }
  double offset() const { return offset_; }

 private:
  Mode mode_ = Mode::Explicit;
  Index nx_ = 0, ny_ = 0;
  std::vector<double> table_;
  std::vector<Index> assignment_;
  double offset_ = 0.0;
};

std::string to_string(CrossMetric::Mode mode);

enum class Side { X, Y };

/// A set A on one side with mu'(A) > mu(A^E): a certificate of infeasibility.
struct HallViolator {
  Side side = Side::X;
  std::vector<Index> set;    ///< A
  std::vector<Index> image;  ///< A^E on the other side
  Rational lhs;              ///< mu'(A)
  Rational rhs;              ///< mu(A^E)
  Rational deficit;          ///< lhs - rhs > 0
};

struct FeasibilityResult {
  std::optional<Coupling> coupling;
  std::optional<HallViolator> violator;
  bool feasible() const { return coupling.has_value(); }
};

using PairSet = std::vector<std::pair<Index, Index>>;

/// Finds gamma with supp(gamma) in E and marginals between mu' and mu on
/// both sides, or a Hall violator. Exact circulation with lower bounds.
FeasibilityResult coupling_feasibility(std::span<const Rational> mu_x, std::span<const Rational> mu_y,
                                       std::span<const Rational> mu_x_low, std::span<const Rational> mu_y_low,
                                       const PairSet& edges);

/// Recomputes A^E and both masses from scratch.
bool check_violator(const HallViolator& v, std::span<const Rational> mu_x, std::span<const Rational> mu_y,
                    std::span<const Rational> mu_x_low, std::span<const Rational> mu_y_low, const PairSet& edges);

/// Subset check of relative (eps, delta)-closeness of two measures on one
/// space, over every subset of the joint support (at most 20 points).
bool relative_prokhorov_bruteforce(const Metric& z, std::span<const Rational> mu1, std::span<const Rational> mu2,
                                   double eps, double delta);

struct WassersteinResult {
  double eps_star = 0.0;
  Coupling coupling;  ///< indices refer to the common space on both sides
};

/// L-infinity Wasserstein distance of two equal-mass measures on one space.
WassersteinResult linf_wasserstein(const Metric& z, std::span<const Rational> mu1, std::span<const Rational> mu2);

struct ClosenessCertificate {
  double eps = 0.0;
  double delta = 0.0;
  std::vector<Rational> reduced_x;
  std::vector<Rational> reduced_y;
  Coupling coupling;
  CrossMetric cross;
};

struct CertifyResult {
  std::optional<ClosenessCertificate> certificate;
  std::optional<HallViolator> violator;  ///< relative to the supplied cross metric
  bool certified() const { return certificate.has_value(); }
};

/// Admissible pairs { (x, y) : cross(x, y) <= eps }.
PairSet admissible_pairs(const CrossMetric& cross, double eps);

CertifyResult certify_closeness(const MMSpace& x, const MMSpace& y, const CrossMetric& cross, double eps,
                                double delta);

struct CertificateCheck {
  bool shape_ok = false;
  bool sandwich_ok = false;
  bool marginals_ok = false;
  bool cross_ok = false;       ///< every support pair within eps under the stored cross metric
  bool distortion_ok = false;  ///< |d_X - d_Y| <= 2 eps over support pairs
  double max_distortion = 0.0;
  bool ok() const { return shape_ok && sandwich_ok && marginals_ok && cross_ok && distortion_ok; }
};

/// Distances are doubles, so the distance checks allow 1e-12 of slack
/// relative to max(1, diameters); mass checks are exact.
CertificateCheck verify_certificate(const ClosenessCertificate& cert, const MMSpace& x, const MMSpace& y);

struct Discretization {
  MMSpace net;
  std::vector<Index> net_points;  ///< indices into X
  std::vector<Index> basin;       ///< basin[x] = index into net
  ClosenessCertificate certificate;
};

/// Greedy eps-net with nearest-point basins and the basin coupling, which
/// certifies (eps, 0)-closeness.
Discretization discretize(const MMSpace& x, double eps, std::span<const Index> order = {});

}  // namespace rholap
