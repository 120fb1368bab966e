#include "doctest.h"
#include "support.hpp"

#include "rholap/errors.hpp"
#include "rholap/mmspace.hpp"

#include <cmath>
#include <numbers>

using namespace rholap;
using testing::random_space;

namespace {

MMSpace line(std::vector<double> xs, std::vector<Rational> w = {}) {
  if (w.empty()) w.assign(xs.size(), Rational(1));
  std::vector<std::string> ids;
  for (std::size_t i = 0; i < xs.size(); ++i) ids.push_back(std::to_string(i));
  return MMSpace("line", ids, CoordinateMetric::euclidean(1, xs), w);
}

}  // namespace

TEST_CASE("ball of two points") {
  const MMSpace s = line({0.0, 1.0}, {Rational(2), Rational(3)});
  const Ball small = ball(s, 0, 0.5);
  CHECK(small.members == std::vector<Index>{0});
  CHECK(small.mass == 2.0);
  const Ball big = ball(s, 0, 2.0);
  CHECK(big.members == std::vector<Index>{0, 1});
  CHECK(big.mass == 5.0);
  // The boundary is excluded.
  CHECK(ball(s, 0, 1.0).members.size() == 1);
  CHECK_THROWS_AS(ball(s, 2, 1.0), InputError);
}

TEST_CASE("ball on five chordal circle points matches a pairwise scan") {
  std::vector<double> c;
  for (int i = 0; i < 5; ++i) {
    c.push_back(std::cos(2 * std::numbers::pi * i / 5));
    c.push_back(std::sin(2 * std::numbers::pi * i / 5));
  }
  const MMSpace s("pentagon", {"a", "b", "c", "d", "e"}, CoordinateMetric::euclidean(2, c),
                  std::vector<Rational>(5, Rational(1)));
  for (Index x = 0; x < 5; ++x) {
    std::vector<Index> expected;
    for (Index y = 0; y < 5; ++y) {
      const double chord = std::hypot(c[2 * x] - c[2 * y], c[2 * x + 1] - c[2 * y + 1]);
      if (chord < 1.2) expected.push_back(y);
    }
    CHECK(ball(s, x, 1.2).members == expected);
    CHECK(expected.size() == 3);
  }
}

TEST_CASE("neighborhoods") {
  std::mt19937_64 rng(7);
  const MMSpace s = random_space(rng, 8);
  std::vector<Index> all(8);
  std::iota(all.begin(), all.end(), 0);
  CHECK(neighborhood(s, all, 0.1).members == all);
  const std::vector<Index> a{2, 5};
  CHECK(neighborhood(s, a, 0.0).members == a);

  for (int trial = 0; trial < 200; ++trial) {
    std::vector<Index> base;
    for (Index i = 0; i < 8; ++i)
      if (rng() % 3 == 0) base.push_back(i);
    if (base.empty()) base.push_back(rng() % 8);
    const double r = testing::uniform(rng, 0.0, 0.8);
    std::vector<Index> expected;
    for (Index y = 0; y < 8; ++y) {
      double d = 1e300;
      for (Index b : base) d = std::min(d, s.dist(b, y));
      if (d <= r) expected.push_back(y);
    }
    const Neighborhood nb = neighborhood(s, base, r);
    CHECK(nb.members == expected);
    const Neighborhood wider = neighborhood(s, base, r + 0.1);
    CHECK(std::includes(wider.members.begin(), wider.members.end(), nb.members.begin(), nb.members.end()));
  }
}

TEST_CASE("ball monotone in radius") {
  std::mt19937_64 rng(11);
  const MMSpace s = random_space(rng, 30);
  for (int trial = 0; trial < 100; ++trial) {
    const Index x = rng() % 30;
    const double r2 = testing::uniform(rng, 0.01, 0.5);
    const double r1 = r2 + testing::uniform(rng, 0.0, 0.5);
    const Ball b1 = ball(s, x, r1), b2 = ball(s, x, r2);
    CHECK(std::includes(b1.members.begin(), b1.members.end(), b2.members.begin(), b2.members.end()));
  }
}

TEST_CASE("greedy separated nets") {
  const MMSpace one = line({0.0});
  CHECK(greedy_separated_net(one, 1.0).indices == std::vector<Index>{0});
  const MMSpace two = line({0.0, 3.0});
  CHECK(greedy_separated_net(two, 1.0).indices.size() == 2);

  std::mt19937_64 rng(3);
  std::vector<double> angles(100);
  for (double& a : angles) a = 2 * std::numbers::pi * unit_draw(rng());
  const MMSpace circ("circle", std::vector<std::string>(100, "p"),
                     CoordinateMetric::torus({2 * std::numbers::pi}, angles),
                     std::vector<Rational>(100, Rational(1)));
  for (int seed = 0; seed < 10; ++seed) {
    const auto order = seeded_permutation(100, seed);
    const SeparatedSet net = greedy_separated_net(circ, 0.5, order);
    CHECK(net.maximal);
    CHECK(is_separated(circ, net.indices, 0.5));
    CHECK(covers(circ, net.indices, 0.5));
    CHECK(net.indices.size() >= 6);
    CHECK(net.indices.size() <= 12);
  }
}

TEST_CASE("exact packing numbers") {
  CHECK(packing_number_exact(line({0.0, 1.0, 2.0}), 1.5).count == 2);
  CHECK(packing_number_exact(line({0.0, 1.0, 2.0}), 5.0).count == 1);

  std::mt19937_64 rng(19);
  for (int trial = 0; trial < 20; ++trial) {
    const MMSpace s = random_space(rng, 12);
    const double r = testing::uniform(rng, 0.1, 0.6);
    std::size_t best = 0;
    for (unsigned mask = 1; mask < (1u << 12); ++mask) {
      std::vector<Index> set;
      for (Index i = 0; i < 12; ++i)
        if (mask >> i & 1) set.push_back(i);
      if (set.size() > best && is_separated(s, set, r)) best = set.size();
    }
    const PackingResult p = packing_number_exact(s, r);
    CHECK(p.exact);
    CHECK(p.count == best);
    CHECK(is_separated(s, p.witness, r));
    CHECK(p.count >= greedy_separated_net(s, r).indices.size());
    CHECK(packing_number_exact(s, r * 1.3).count <= p.count);
    std::vector<Index> keep(11);
    std::iota(keep.begin(), keep.end(), 1);
    CHECK(packing_number_exact(s.restricted(keep), r).count <= p.count);
  }
}

TEST_CASE("packing budget exhaustion is reported") {
  std::mt19937_64 rng(5);
  const MMSpace s = random_space(rng, 60);
  const PackingResult p = packing_number_exact(s, 0.15, 3);
  CHECK_FALSE(p.exact);
  CHECK(p.count >= 1);
  CHECK(is_separated(s, p.witness, 0.15));
}

TEST_CASE("zero weights drop points and semi-metrics are accepted") {
  const MMSpace s("m", {"a", "b", "c"}, std::make_shared<MatrixMetric>(3, std::vector<double>{0, 0, 1, 0, 0, 1, 1, 1, 0}),
                  {Rational(1), Rational(0), Rational(2)});
  CHECK(s.size() == 2);
  CHECK(s.ids() == std::vector<std::string>{"a", "c"});
  CHECK(s.exact_total_mass() == 3);

  const MMSpace semi("m", {"a", "b", "c"},
                     std::make_shared<MatrixMetric>(3, std::vector<double>{0, 0, 1, 0, 0, 1, 1, 1, 0}),
                     {Rational(1), Rational(1), Rational(1)});
  CHECK(semi.dist(0, 1) == 0.0);
  CHECK(audit_triangle(semi).holds);
  const MMSpace bad("m", {"a", "b", "c"},
                    std::make_shared<MatrixMetric>(3, std::vector<double>{0, 1, 3, 1, 0, 1, 3, 1, 0}),
                    {Rational(1), Rational(1), Rational(1)});
  const TriangleAudit t = audit_triangle(bad);
  CHECK_FALSE(t.holds);
  CHECK(t.worst_violation == doctest::Approx(1.0));
}
