#include "rholap/generators.hpp"

#include "rholap/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

namespace rholap {

namespace {

std::vector<std::string> numbered(const std::string& prefix, std::size_t n) {
  std::vector<std::string> ids;
  ids.reserve(n);
  for (std::size_t i = 0; i < n; ++i) ids.push_back(prefix + std::to_string(i));
  return ids;
}

void require_count(std::size_t n) {
  if (n == 0) throw InputError("point count must be positive");
}

void require_length(double v, const char* what) {
  if (!(v > 0) || !std::isfinite(v)) throw InputError(std::string(what) + " must be positive");
}

}  // namespace

double unit_draw(std::uint64_t bits) { return static_cast<double>(bits >> 11) * 0x1.0p-53; }

MMSpace circle(std::size_t n, double length) {
  require_count(n);
  require_length(length, "circle length");
  std::vector<double> coords(n);
  for (std::size_t i = 0; i < n; ++i) coords[i] = length * static_cast<double>(i) / static_cast<double>(n);
  const Rational w = rational_from_double(length) / static_cast<unsigned long>(n);
  return MMSpace("circle", numbered("c", n), CoordinateMetric::torus({length}, std::move(coords)),
                 std::vector<Rational>(n, w));
}

MMSpace sphere(std::size_t n, std::uint64_t seed) {
  require_count(n);
  std::mt19937_64 rng(seed);
  // Uniform random rotation from a uniform unit quaternion.
  const double u1 = unit_draw(rng()), u2 = unit_draw(rng()), u3 = unit_draw(rng());
  const double tau = 2 * std::numbers::pi;
  const double qw = std::sqrt(1 - u1) * std::sin(tau * u2), qx = std::sqrt(1 - u1) * std::cos(tau * u2);
  const double qy = std::sqrt(u1) * std::sin(tau * u3), qz = std::sqrt(u1) * std::cos(tau * u3);
  const double rot[3][3] = {
      {1 - 2 * (qy * qy + qz * qz), 2 * (qx * qy - qz * qw), 2 * (qx * qz + qy * qw)},
      {2 * (qx * qy + qz * qw), 1 - 2 * (qx * qx + qz * qz), 2 * (qy * qz - qx * qw)},
      {2 * (qx * qz - qy * qw), 2 * (qy * qz + qx * qw), 1 - 2 * (qx * qx + qy * qy)}};

  const double golden = std::numbers::pi * (3 - std::sqrt(5.0));
  std::vector<double> coords;
  coords.reserve(3 * n);
  for (std::size_t i = 0; i < n; ++i) {
    const double z = n == 1 ? 1.0 : 1 - 2 * (static_cast<double>(i) + 0.5) / static_cast<double>(n);
    const double rad = std::sqrt(std::max(0.0, 1 - z * z));
    const double phi = golden * static_cast<double>(i);
    const double p[3] = {rad * std::cos(phi), rad * std::sin(phi), z};
    double q[3];
    for (int a = 0; a < 3; ++a) q[a] = rot[a][0] * p[0] + rot[a][1] * p[1] + rot[a][2] * p[2];
    const double norm = std::sqrt(q[0] * q[0] + q[1] * q[1] + q[2] * q[2]);
    for (double v : q) coords.push_back(v / norm);
  }
  const Rational w = rational_from_double(4 * std::numbers::pi) / static_cast<unsigned long>(n);
  return MMSpace("sphere", numbered("s", n), CoordinateMetric::sphere(std::move(coords)),
                 std::vector<Rational>(n, w));
}

MMSpace flat_torus(std::size_t n_per_side, double period_x, double period_y) {
  require_count(n_per_side);
  require_length(period_x, "torus period");
  require_length(period_y, "torus period");
  const std::size_t n = n_per_side * n_per_side;
  std::vector<double> coords;
  coords.reserve(2 * n);
  const auto m = static_cast<double>(n_per_side);
  for (std::size_t i = 0; i < n_per_side; ++i)
    for (std::size_t j = 0; j < n_per_side; ++j) {
      coords.push_back(period_x * static_cast<double>(i) / m);
      coords.push_back(period_y * static_cast<double>(j) / m);
    }
  const Rational w = rational_from_double(period_x) * rational_from_double(period_y) / static_cast<unsigned long>(n);
  return MMSpace("torus", numbered("t", n), CoordinateMetric::torus({period_x, period_y}, std::move(coords)),
                 std::vector<Rational>(n, w));
}

MMSpace interval(std::size_t n, double length) {
  require_count(n);
  require_length(length, "interval length");
  std::vector<double> coords(n);
  for (std::size_t i = 0; i < n; ++i)
    coords[i] = length * (static_cast<double>(i) + 0.5) / static_cast<double>(n);
  const Rational w = rational_from_double(length) / static_cast<unsigned long>(n);
  return MMSpace("interval", numbered("i", n), CoordinateMetric::euclidean(1, std::move(coords)),
                 std::vector<Rational>(n, w));
}

MMSpace two_components(std::size_t n, double length, double gap, double t) {
  require_count(n);
  require_length(length, "circle length");
  if (!(gap >= length / 2) || !std::isfinite(gap)) throw InputError("gap must be at least half the circle length");
  if (!(t >= 0) || !std::isfinite(t)) throw InputError("mass ratio t must be >= 0");
  const MMSpace c = circle(n, length);
  const std::size_t total = 2 * n;
  std::vector<double> d(total * total, gap);
  for (std::size_t i = 0; i < total; ++i)
    for (std::size_t j = 0; j < total; ++j) {
      if ((i < n) == (j < n)) d[i * total + j] = c.dist(i % n, j % n);
    }
  std::vector<Rational> w(total, c.exact_weight(0));
  const Rational scale = rational_from_double(t);
  for (std::size_t i = n; i < total; ++i) w[i] *= scale;
  std::vector<std::string> ids = numbered("a", n);
  for (auto& s : numbered("b", n)) ids.push_back(s);
  return MMSpace("two-components", std::move(ids), std::make_shared<MatrixMetric>(total, std::move(d)),
                 std::move(w));
}

MMSpace perturb_metric(const MMSpace& space, double eps, std::uint64_t seed) {
  if (!(eps >= 0) || !std::isfinite(eps)) throw InputError("eps must be >= 0");
  if (eps == 0) return space;
  const Index n = space.size();
  std::mt19937_64 rng(seed);
  std::vector<double> d(n * n, 0.0);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < i; ++j) {
      // 2u - 1 lies in [-1, 1); the endpoint -1 is redrawn to keep |jitter| < eps.
      double s;
      do s = 2 * unit_draw(rng()) - 1;
      while (s == -1.0);
      d[i * n + j] = d[j * n + i] = std::max(0.0, space.dist(i, j) + eps * s);
    }
  return MMSpace(space.label() + "-jitter", space.ids(), std::make_shared<MatrixMetric>(n, std::move(d)),
                 space.exact_weights());
}

MMSpace perturb_measure(const MMSpace& space, double delta, std::uint64_t seed) {
  if (!(delta >= 0) || !std::isfinite(delta)) throw InputError("delta must be >= 0");
  if (delta == 0) return space;
  std::mt19937_64 rng(seed);
  std::vector<Rational> w;
  w.reserve(space.size());
  for (Index i = 0; i < space.size(); ++i) {
    const double s = delta * (2 * unit_draw(rng()) - 1);
    // Factors below one are exp(s); above one, 1/exp(-s). Either way the
    // factor stays within [r, 1/r] for r the rational of exp(-delta).
    const Rational f = s <= 0 ? rational_from_double(std::exp(s)) : 1 / rational_from_double(std::exp(-s));
    w.push_back(space.exact_weight(i) * f);
  }
  return space.with_weights(std::move(w)).with_label(space.label() + "-reweighted");
}

MMSpace from_graph(std::size_t n, const std::vector<Edge>& edges, std::vector<Rational> weights,
                   std::vector<std::string> ids) {
  require_count(n);
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> d(n * n, inf);
  for (std::size_t i = 0; i < n; ++i) d[i * n + i] = 0.0;
  for (const auto& e : edges) {
    if (e.a >= n || e.b >= n) throw InputError("edge endpoint out of range");
    if (!(e.length >= 0) || !std::isfinite(e.length)) throw InputError("edge lengths must be finite and >= 0");
    if (e.a == e.b) continue;
    d[e.a * n + e.b] = std::min(d[e.a * n + e.b], e.length);
    d[e.b * n + e.a] = d[e.a * n + e.b];
  }
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) d[i * n + j] = std::min(d[i * n + j], d[i * n + k] + d[k * n + j]);
  for (double v : d)
    if (v == inf) throw InputError("graph is disconnected");
  // Floating sums along different paths can differ in the last bit.
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < i; ++j) d[i * n + j] = d[j * n + i];
  if (ids.empty()) ids = numbered("v", n);
  return MMSpace("graph", std::move(ids), std::make_shared<MatrixMetric>(n, std::move(d)), std::move(weights));
}

}  // namespace rholap
