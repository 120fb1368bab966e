#pragma once

#include "rholap/metric.hpp"
#include "rholap/rational.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace rholap {

/// A finite metric-measure space: points, a (semi-)metric and positive
/// atomic weights. Weights are held exactly and as doubles.
///
/// Points of zero weight are dropped on construction, so every stored point
/// lies in the support of the measure. Instances are immutable.
class MMSpace {
 public:
  MMSpace(std::string label, std::vector<std::string> ids, MetricPtr metric,
          std::vector<Rational> weights);

  /// Convenience for generated data; weights go through rational_from_double.
  static MMSpace from_doubles(std::string label, MetricPtr metric, std::span<const double> weights);

  Index size() const { return ids_.size(); }
  const std::string& label() const { return label_; }
  const std::vector<std::string>& ids() const { return ids_; }

  double dist(Index i, Index j) const { return metric_->distance(i, j); }
  const Metric& metric() const { return *metric_; }
  const MetricPtr& metric_ptr() const { return metric_; }

  double weight(Index i) const { return weights_[i]; }
  std::span<const double> weights() const { return weights_; }
  const Rational& exact_weight(Index i) const { return exact_[i]; }
  const std::vector<Rational>& exact_weights() const { return exact_; }
  double total_mass() const;
  Rational exact_total_mass() const;

  double diameter() const;
  double min_positive_distance() const;

  /// Same points and metric, new weights (zero entries drop their point).
  MMSpace with_weights(std::vector<Rational> weights) const;
  MMSpace with_label(std::string label) const;
  /// Sub-space on the listed points, in the listed order.
  MMSpace restricted(std::span<const Index> indices) const;

  /// Indices kept from the caller's input (zero-weight points removed).
  const std::vector<Index>& source_indices() const { return source_; }

 private:
  MMSpace() = default;

  std::string label_;
  std::vector<std::string> ids_;
  MetricPtr metric_;
  std::vector<Rational> exact_;
  std::vector<double> weights_;
  std::vector<Index> source_;
};

/// Open ball { y : d(center, y) < radius }.
struct Ball {
  Index center = 0;
  double radius = 0.0;
  std::vector<Index> members;
  double mass = 0.0;
};

/// Closed neighborhood { y : d(y, base) <= radius }.
struct Neighborhood {
  std::vector<Index> base;
  double radius = 0.0;
  std::vector<Index> members;
};

struct SeparatedSet {
  std::vector<Index> indices;
  double separation = 0.0;
  bool maximal = false;
};

Ball ball(const MMSpace& space, Index center, double radius);

/// mu(B_radius(center)), summed in index order.
double ball_mass(const MMSpace& space, Index center, double radius);

Neighborhood neighborhood(const MMSpace& space, std::span<const Index> base, double radius);

/// Greedy maximal r-separated set scanning points in `order` (identity when
/// empty). Maximality makes it an r-net: every point is < r from a member.
SeparatedSet greedy_separated_net(const MMSpace& space, double r, std::span<const Index> order = {});

bool is_separated(const MMSpace& space, std::span<const Index> indices, double r);
/// Every point lies at distance < r from some listed point.
bool covers(const MMSpace& space, std::span<const Index> indices, double r);

/// Seeded uniform permutation of 0..n-1.
std::vector<Index> seeded_permutation(Index n, std::uint64_t seed);

struct PackingResult {
  std::size_t count = 0;
  bool exact = false;            ///< false when the node budget ran out
  std::vector<Index> witness;    ///< an r-separated set of size `count`
  std::size_t nodes = 0;
};

/// Maximum size of an r-separated subset (the packing number N_X(r)), by
/// branch and bound on the conflict graph d < r. Beyond `node_budget` the
/// best set found so far is returned with exact = false.
PackingResult packing_number_exact(const MMSpace& space, double r, std::size_t node_budget = 10'000'000);

struct TriangleAudit {
  bool holds = true;
  double tolerance = 0.0;
  double worst_violation = 0.0;  ///< max of d(i,k) - d(i,j) - d(j,k)
  Index i = 0, j = 0, k = 0;
};

/// O(n^3) scan; tolerance defaults to 1e-9 * diameter.
TriangleAudit audit_triangle(const MMSpace& space, std::optional<double> tolerance = std::nullopt);

}  // namespace rholap
