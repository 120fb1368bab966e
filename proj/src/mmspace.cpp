#include "rholap/mmspace.hpp"

#include "rholap/errors.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <random>

namespace rholap {

MMSpace::MMSpace(std::string label, std::vector<std::string> ids, MetricPtr metric,
                 std::vector<Rational> weights)
    : label_(std::move(label)), metric_(std::move(metric)) {
  if (!metric_) throw InputError("mm-space needs a metric");
  const Index n = metric_->size();
  if (weights.size() != n) throw InputError("weights and metric disagree on the number of points");
  if (ids.empty()) {
    ids.reserve(n);
    for (Index i = 0; i < n; ++i) ids.push_back(std::to_string(i));
  }
  if (ids.size() != n) throw InputError("point identifiers and metric disagree on the number of points");

  std::vector<Index> keep;
  for (Index i = 0; i < n; ++i) {
    weights[i].canonicalize();
    if (weights[i] < 0) throw InputError("negative weight at point " + ids[i]);
    if (weights[i] > 0) keep.push_back(i);
  }
  if (keep.empty()) throw InputError("mm-space has no point of positive weight");
  if (keep.size() != n) {
    metric_ = metric_->restrict(keep);
    for (Index a = 0; a < keep.size(); ++a) {
      ids_.push_back(std::move(ids[keep[a]]));
      exact_.push_back(std::move(weights[keep[a]]));
    }
  } else {
    ids_ = std::move(ids);
    exact_ = std::move(weights);
  }
  source_ = std::move(keep);
  weights_ = to_doubles(exact_);
}

MMSpace MMSpace::from_doubles(std::string label, MetricPtr metric, std::span<const double> weights) {
  std::vector<Rational> w;
  w.reserve(weights.size());
  for (double x : weights) w.push_back(rational_from_double(x));
  return MMSpace(std::move(label), {}, std::move(metric), std::move(w));
}

double MMSpace::total_mass() const {
  double s = 0.0;
  for (double w : weights_) s += w;
  return s;
}

Rational MMSpace::exact_total_mass() const { return sum(exact_); }

double MMSpace::diameter() const {
  double d = 0.0;
  for (Index i = 0; i < size(); ++i)
    for (Index j = 0; j < i; ++j) d = std::max(d, dist(i, j));
  return d;
}

double MMSpace::min_positive_distance() const {
  double d = std::numeric_limits<double>::infinity();
  for (Index i = 0; i < size(); ++i)
    for (Index j = 0; j < i; ++j) {
      double t = dist(i, j);
      if (t > 0) d = std::min(d, t);
    }
  return d;
}

MMSpace MMSpace::with_weights(std::vector<Rational> weights) const {
  return MMSpace(label_, ids_, metric_, std::move(weights));
}

MMSpace MMSpace::with_label(std::string label) const {
  MMSpace out = *this;
  out.label_ = std::move(label);
  return out;
}

MMSpace MMSpace::restricted(std::span<const Index> indices) const {
  std::vector<std::string> ids;
  std::vector<Rational> w;
  for (Index i : indices) {
    if (i >= size()) throw InputError("point index out of range");
    ids.push_back(ids_[i]);
    w.push_back(exact_[i]);
  }
  return MMSpace(label_, std::move(ids), metric_->restrict(indices), std::move(w));
}

namespace {

void check_index(const MMSpace& space, Index i) {
  if (i >= space.size()) throw InputError("point index " + std::to_string(i) + " out of range");
}

}  // namespace

Ball ball(const MMSpace& space, Index center, double radius) {
  check_index(space, center);
  if (!(radius > 0)) throw InputError("ball radius must be positive");
  Ball b{center, radius, {}, 0.0};
  for (Index y = 0; y < space.size(); ++y) {
    if (space.dist(center, y) < radius) {
      b.members.push_back(y);
      b.mass += space.weight(y);
    }
  }
  return b;
}

double ball_mass(const MMSpace& space, Index center, double radius) {
  check_index(space, center);
  double m = 0.0;
  for (Index y = 0; y < space.size(); ++y)
    if (space.dist(center, y) < radius) m += space.weight(y);
  return m;
}

Neighborhood neighborhood(const MMSpace& space, std::span<const Index> base, double radius) {
  if (base.empty()) throw InputError("neighborhood base set must be nonempty");
  if (radius < 0) throw InputError("neighborhood radius must be >= 0");
  for (Index a : base) check_index(space, a);
  Neighborhood nb{{base.begin(), base.end()}, radius, {}};
  for (Index y = 0; y < space.size(); ++y) {
    for (Index a : base) {
      if (space.dist(a, y) <= radius) {
        nb.members.push_back(y);
        break;
      }
    }
  }
  return nb;
}

SeparatedSet greedy_separated_net(const MMSpace& space, double r, std::span<const Index> order) {
  if (!(r > 0)) throw InputError("separation must be positive");
  std::vector<Index> identity;
  if (order.empty()) {
    identity.resize(space.size());
    std::iota(identity.begin(), identity.end(), Index{0});
    order = identity;
  }
  if (order.size() != space.size()) throw InputError("seed order must be a permutation of all points");
  std::vector<char> seen(space.size(), 0);
  for (Index i : order) {
    check_index(space, i);
    if (seen[i]) throw InputError("seed order repeats a point");
    seen[i] = 1;
  }

  SeparatedSet net{{}, r, true};
  for (Index x : order) {
    bool far = true;
    for (Index y : net.indices) {
      if (space.dist(x, y) < r) {
        far = false;
        break;
      }
    }
    if (far) net.indices.push_back(x);
  }
  return net;
}

bool is_separated(const MMSpace& space, std::span<const Index> indices, double r) {
  for (std::size_t a = 0; a < indices.size(); ++a)
    for (std::size_t b = 0; b < a; ++b)
      if (space.dist(indices[a], indices[b]) < r) return false;
  return true;
}

bool covers(const MMSpace& space, std::span<const Index> indices, double r) {
  for (Index x = 0; x < space.size(); ++x) {
    bool hit = false;
    for (Index y : indices) {
      if (space.dist(x, y) < r) {
        hit = true;
        break;
      }
    }
    if (!hit) return false;
  }
  return true;
}

std::vector<Index> seeded_permutation(Index n, std::uint64_t seed) {
  std::vector<Index> p(n);
  std::iota(p.begin(), p.end(), Index{0});
  std::mt19937_64 rng(seed);
  // Fisher-Yates with an explicit index draw keeps the order stable across
  // standard library implementations of std::shuffle.
  for (Index i = n; i > 1; --i) {
    Index j = static_cast<Index>(rng() % i);
    std::swap(p[i - 1], p[j]);
  }
  return p;
}

TriangleAudit audit_triangle(const MMSpace& space, std::optional<double> tolerance) {
  TriangleAudit audit;
  audit.tolerance = tolerance.value_or(1e-9 * space.diameter());
  const Index n = space.size();
  for (Index i = 0; i < n; ++i)
    for (Index k = 0; k < n; ++k) {
      const double dik = space.dist(i, k);
      for (Index j = 0; j < n; ++j) {
        double excess = dik - space.dist(i, j) - space.dist(j, k);
        if (excess > audit.worst_violation) {
          audit.worst_violation = excess;
          audit.i = i;
          audit.j = j;
          audit.k = k;
        }
      }
    }
  audit.holds = audit.worst_violation <= audit.tolerance;
  return audit;
}

}  // namespace rholap
