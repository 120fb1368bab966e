#pragma once

#include "rholap/mmspace.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace rholap {

/// n equispaced points on a circle of the given length, arc-length metric,
/// uniform weights length/n.
MMSpace circle(std::size_t n, double length);

/// n Fibonacci-lattice points on the unit sphere, turned by a rotation drawn
/// from `seed`; great-circle metric, weights 4 pi / n.
MMSpace sphere(std::size_t n, std::uint64_t seed);

/// n_per_side^2 grid points on R^2 / (periods), quotient metric, uniform
/// weights area / n_per_side^2.
MMSpace flat_torus(std::size_t n_per_side, double period_x, double period_y);

/// Midpoints of n equal cells of [0, length], weights length/n.
MMSpace interval(std::size_t n, double length);

/// Two circles of n points each with every cross distance equal to `gap`;
/// the second circle's weights are scaled by t, and t = 0 removes it.
/// Requires gap >= length/2 so the result is a metric.
MMSpace two_components(std::size_t n, double length, double gap, double t);

/// Adds i.i.d. jitter from (-eps, eps) to every off-diagonal distance,
/// symmetrically, flooring at 0. eps = 0 returns the space unchanged.
MMSpace perturb_metric(const MMSpace& space, double eps, std::uint64_t seed);

/// Multiplies every weight by an i.i.d. factor in [e^-delta, e^delta],
/// drawn so that e^-delta is the exact rational used by the closeness checks.
MMSpace perturb_measure(const MMSpace& space, double delta, std::uint64_t seed);

struct Edge {
  Index a = 0;
  Index b = 0;
  double length = 0.0;
};

/// Shortest-path metric of a connected weighted graph.
MMSpace from_graph(std::size_t n, const std::vector<Edge>& edges, std::vector<Rational> weights,
                   std::vector<std::string> ids = {});

/// Uniform double in [0, 1) from the top 53 bits of one draw.
double unit_draw(std::uint64_t bits);

}  // namespace rholap
