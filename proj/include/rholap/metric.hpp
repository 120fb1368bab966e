#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace rholap {

using Index = std::size_t;

enum class MetricKind { Matrix, Euclidean, Sphere, Torus, Pullback };

std::string to_string(MetricKind kind);

/// Distance oracle over points 0..size()-1. Implementations are immutable
/// and safe to share between spaces.
class Metric {
 public:
  virtual ~Metric() = default;

  virtual Index size() const = 0;
  virtual double distance(Index i, Index j) const = 0;
  virtual MetricKind kind() const = 0;

  /// The metric induced on the listed points, in the listed order.
  virtual std::shared_ptr<const Metric> restrict(std::span<const Index> indices) const = 0;
};

using MetricPtr = std::shared_ptr<const Metric>;

/// Dense symmetric matrix. Symmetry, zero diagonal and nonnegativity are
/// enforced on construction; the triangle inequality is not.
class MatrixMetric final : public Metric {
 public:
  MatrixMetric(Index n, std::vector<double> row_major);

  Index size() const override { return n_; }
  double distance(Index i, Index j) const override { return d_[i * n_ + j]; }
  MetricKind kind() const override { return MetricKind::Matrix; }
  MetricPtr restrict(std::span<const Index> indices) const override;

  static MetricPtr materialize(const Metric& metric);

 private:
  Index n_;
  std::vector<double> d_;
};

/// Points with coordinates in R^dim, S^2 (unit vectors, great-circle
/// distance) or a flat torus R^dim / (periods) with the quotient metric.
class CoordinateMetric final : public Metric {
 public:
  static MetricPtr euclidean(std::size_t dim, std::vector<double> coords);
  static MetricPtr sphere(std::vector<double> unit_vectors, double radius = 1.0);
  static MetricPtr torus(std::vector<double> periods, std::vector<double> coords);

  Index size() const override { return n_; }
  double distance(Index i, Index j) const override;
  MetricKind kind() const override { return kind_; }
  MetricPtr restrict(std::span<const Index> indices) const override;

  std::size_t dim() const { return dim_; }
  std::span<const double> point(Index i) const { return {coords_.data() + i * dim_, dim_}; }
  std::span<const double> periods() const { return periods_; }
  double radius() const { return radius_; }

  /// Distance between a point of this metric and a point of another
  /// coordinate metric living in the same ambient space.
  double cross_distance(Index i, const CoordinateMetric& other, Index j) const;
  bool same_ambient(const CoordinateMetric& other) const;

 private:
  CoordinateMetric(MetricKind kind, std::size_t dim, std::vector<double> coords,
                   std::vector<double> periods, double radius);
  double between(std::span<const double> a, std::span<const double> b) const;

  MetricKind kind_;
  std::size_t dim_;
  Index n_;
  std::vector<double> coords_;
  std::vector<double> periods_;
  double radius_;
};

/// d(i, j) = max(base(map[i], map[j]), scale * secondary(map2[i], map2[j])),
/// the second term only when a secondary metric is attached. With no
/// secondary term this is the fiber-collapsing semi-metric of a split space.
class PullbackMetric final : public Metric {
 public:
  PullbackMetric(MetricPtr base, std::vector<Index> map);
  PullbackMetric(MetricPtr base, std::vector<Index> map, MetricPtr secondary,
                 std::vector<Index> secondary_map, double scale);

  Index size() const override { return map_.size(); }
  double distance(Index i, Index j) const override;
  MetricKind kind() const override { return MetricKind::Pullback; }
  MetricPtr restrict(std::span<const Index> indices) const override;

 private:
  MetricPtr base_;
  std::vector<Index> map_;
  MetricPtr secondary_;
  std::vector<Index> secondary_map_;
  double scale_ = 0.0;
};

}  // namespace rholap
