#include "rholap/metric.hpp"

#include "rholap/errors.hpp"

#include <algorithm>
#include <cmath>

namespace rholap {

std::string to_string(MetricKind kind) {
  switch (kind) {
    case MetricKind::Matrix: return "matrix";
    case MetricKind::Euclidean: return "euclidean";
    case MetricKind::Sphere: return "sphere";
    case MetricKind::Torus: return "torus";
    case MetricKind::Pullback: return "pullback";
  }
  return "unknown";
}

MatrixMetric::MatrixMetric(Index n, std::vector<double> row_major) : n_(n), d_(std::move(row_major)) {
  if (d_.size() != n * n) throw InputError("distance matrix has wrong size");
  for (Index i = 0; i < n; ++i) {
    if (d_[i * n + i] != 0.0) throw InputError("distance matrix diagonal must be zero");
    for (Index j = 0; j < i; ++j) {
      double a = d_[i * n + j];
      if (!std::isfinite(a) || a < 0.0) throw InputError("distances must be finite and >= 0");
      if (a != d_[j * n + i]) throw InputError("distance matrix must be symmetric");
    }
  }
}

MetricPtr MatrixMetric::restrict(std::span<const Index> indices) const {
  const Index m = indices.size();
  std::vector<double> d(m * m);
  for (Index a = 0; a < m; ++a)
    for (Index b = 0; b < m; ++b) d[a * m + b] = distance(indices[a], indices[b]);
  return std::make_shared<MatrixMetric>(m, std::move(d));
}

MetricPtr MatrixMetric::materialize(const Metric& metric) {
  const Index n = metric.size();
  std::vector<double> d(n * n, 0.0);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < i; ++j) d[i * n + j] = d[j * n + i] = metric.distance(i, j);
  return std::make_shared<MatrixMetric>(n, std::move(d));
}

CoordinateMetric::CoordinateMetric(MetricKind kind, std::size_t dim, std::vector<double> coords,
                                   std::vector<double> periods, double radius)
    : kind_(kind), dim_(dim), n_(0), coords_(std::move(coords)), periods_(std::move(periods)),
      radius_(radius) {
  if (dim_ == 0) throw InputError("coordinate dimension must be positive");
  if (coords_.size() % dim_ != 0) throw InputError("coordinate array length not a multiple of dim");
  for (double c : coords_)
    if (!std::isfinite(c)) throw InputError("coordinates must be finite");
  n_ = coords_.size() / dim_;
}

MetricPtr CoordinateMetric::euclidean(std::size_t dim, std::vector<double> coords) {
  return MetricPtr(new CoordinateMetric(MetricKind::Euclidean, dim, std::move(coords), {}, 1.0));
}

MetricPtr CoordinateMetric::sphere(std::vector<double> unit_vectors, double radius) {
  if (!(radius > 0)) throw InputError("sphere radius must be positive");
  auto* m = new CoordinateMetric(MetricKind::Sphere, 3, std::move(unit_vectors), {}, radius);
  MetricPtr ptr(m);
  for (Index i = 0; i < m->n_; ++i) {
    auto p = m->point(i);
    double norm = std::sqrt(p[0] * p[0] + p[1] * p[1] + p[2] * p[2]);
    if (std::abs(norm - 1.0) > 1e-9) throw InputError("sphere coordinates must be unit vectors");
  }
  return ptr;
}

MetricPtr CoordinateMetric::torus(std::vector<double> periods, std::vector<double> coords) {
  if (periods.empty()) throw InputError("torus needs at least one period");
  for (double p : periods)
    if (!(p > 0) || !std::isfinite(p)) throw InputError("torus periods must be positive");
  const std::size_t dim = periods.size();
  return MetricPtr(new CoordinateMetric(MetricKind::Torus, dim, std::move(coords), std::move(periods), 1.0));
}

double CoordinateMetric::between(std::span<const double> a, std::span<const double> b) const {
  switch (kind_) {
    case MetricKind::Sphere: {
      double dot = a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
      dot = std::clamp(dot, -1.0, 1.0);
      return radius_ * std::acos(dot);
    }
    case MetricKind::Torus: {
      double s = 0.0;
      for (std::size_t k = 0; k < dim_; ++k) {
        double p = periods_[k];
        double t = std::fmod(std::abs(a[k] - b[k]), p);
        t = std::min(t, p - t);
        s += t * t;
      }
      return std::sqrt(s);
    }
    default: {
      double s = 0.0;
      for (std::size_t k = 0; k < dim_; ++k) {
        double t = a[k] - b[k];
        s += t * t;
      }
      return std::sqrt(s);
    }
  }
}

double CoordinateMetric::distance(Index i, Index j) const {
  if (i == j) return 0.0;
  return between(point(i), point(j));
}

MetricPtr CoordinateMetric::restrict(std::span<const Index> indices) const {
  std::vector<double> coords;
  coords.reserve(indices.size() * dim_);
  for (Index i : indices) {
    auto p = point(i);
    coords.insert(coords.end(), p.begin(), p.end());
  }
  return MetricPtr(new CoordinateMetric(kind_, dim_, std::move(coords), periods_, radius_));
}

bool CoordinateMetric::same_ambient(const CoordinateMetric& other) const {
  return kind_ == other.kind_ && dim_ == other.dim_ && periods_ == other.periods_ &&
         radius_ == other.radius_;
}

double CoordinateMetric::cross_distance(Index i, const CoordinateMetric& other, Index j) const {
  if (!same_ambient(other)) throw InputError("coordinate metrics live in different ambient spaces");
  return between(point(i), other.point(j));
}

PullbackMetric::PullbackMetric(MetricPtr base, std::vector<Index> map)
    : base_(std::move(base)), map_(std::move(map)) {
  for (Index i : map_)
    if (i >= base_->size()) throw InputError("pullback index out of range");
}

PullbackMetric::PullbackMetric(MetricPtr base, std::vector<Index> map, MetricPtr secondary,
                               std::vector<Index> secondary_map, double scale)
    : PullbackMetric(std::move(base), std::move(map)) {
  secondary_ = std::move(secondary);
  secondary_map_ = std::move(secondary_map);
  scale_ = scale;
  if (secondary_map_.size() != map_.size()) throw InputError("pullback maps differ in length");
  for (Index i : secondary_map_)
    if (i >= secondary_->size()) throw InputError("pullback index out of range");
  if (!(scale_ >= 0)) throw InputError("pullback scale must be >= 0");
}

double PullbackMetric::distance(Index i, Index j) const {
  double d = base_->distance(map_[i], map_[j]);
  if (secondary_) d = std::max(d, scale_ * secondary_->distance(secondary_map_[i], secondary_map_[j]));
  return d;
}

MetricPtr PullbackMetric::restrict(std::span<const Index> indices) const {
  std::vector<Index> map;
  map.reserve(indices.size());
  for (Index i : indices) map.push_back(map_[i]);
  if (!secondary_) return std::make_shared<PullbackMetric>(base_, std::move(map));
  std::vector<Index> map2;
  map2.reserve(indices.size());
  for (Index i : indices) map2.push_back(secondary_map_[i]);
  return std::make_shared<PullbackMetric>(base_, std::move(map), secondary_, std::move(map2), scale_);
}

}  // namespace rholap
