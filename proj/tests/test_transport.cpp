#include "doctest.h"
#include "support.hpp"

#include "rholap/errors.hpp"
#include "rholap/maxflow.hpp"
#include "rholap/transport.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

using namespace rholap;
using namespace testing;

namespace {

std::vector<Rational> random_masses(std::mt19937_64& rng, std::size_t n, bool allow_zero) {
  std::vector<Rational> m;
  for (std::size_t i = 0; i < n; ++i) {
    const long k = static_cast<long>(rng() % 7) - (allow_zero ? 1 : 0);
    m.emplace_back(std::max(k, allow_zero ? 0L : 1L), 6);
  }
  for (auto& q : m) q.canonicalize();
  return m;
}

/// Every subset condition of the marriage-type criterion, both sides.
bool hall_conditions(std::span<const Rational> mx, std::span<const Rational> my, std::span<const Rational> lx,
                     std::span<const Rational> ly, const PairSet& edges) {
  const std::size_t nx = mx.size(), ny = my.size();
  for (unsigned a = 1; a < (1u << nx); ++a) {
    Rational lhs = 0, rhs = 0;
    std::vector<bool> hit(ny, false);
    for (auto [x, y] : edges)
      if (a >> x & 1) hit[y] = true;
    for (std::size_t x = 0; x < nx; ++x)
      if (a >> x & 1) lhs += lx[x];
    for (std::size_t y = 0; y < ny; ++y)
      if (hit[y]) rhs += my[y];
    if (lhs > rhs) return false;
  }
  for (unsigned b = 1; b < (1u << ny); ++b) {
    Rational lhs = 0, rhs = 0;
    std::vector<bool> hit(nx, false);
    for (auto [x, y] : edges)
      if (b >> y & 1) hit[x] = true;
    for (std::size_t y = 0; y < ny; ++y)
      if (b >> y & 1) lhs += ly[y];
    for (std::size_t x = 0; x < nx; ++x)
      if (hit[x]) rhs += mx[x];
    if (lhs > rhs) return false;
  }
  return true;
}

void check_coupling(const Coupling& g, std::span<const Rational> mx, std::span<const Rational> my,
                    std::span<const Rational> lx, std::span<const Rational> ly, const PairSet& edges) {
  CHECK(g.marginals_consistent());
  for (const auto& e : g.entries) {
    CHECK(e.mass > 0);
    CHECK(std::find(edges.begin(), edges.end(), std::make_pair(e.x, e.y)) != edges.end());
  }
  for (std::size_t i = 0; i < mx.size(); ++i) CHECK((lx[i] <= g.marginal_x[i] && g.marginal_x[i] <= mx[i]));
  for (std::size_t i = 0; i < my.size(); ++i) CHECK((ly[i] <= g.marginal_y[i] && g.marginal_y[i] <= my[i]));
}

MMSpace line(std::vector<double> xs, std::vector<Rational> w) {
  std::vector<std::string> ids;
  for (std::size_t i = 0; i < xs.size(); ++i) ids.push_back("p" + std::to_string(i));
  return MMSpace("line", ids, CoordinateMetric::euclidean(1, xs), w);
}

}  // namespace

TEST_CASE("exact max-flow") {
  RationalMaxFlow f(4);
  const auto a = f.add_edge(0, 1, Rational(1, 3));
  f.add_edge(0, 2, Rational(1, 2));
  f.add_edge(1, 3, Rational(1));
  f.add_edge(2, 3, Rational(1, 7));
  f.add_edge(1, 2, Rational(1));
  CHECK(f.max_flow(0, 3) == Rational(1, 3) + Rational(1, 7));
  CHECK(f.flow(a) == Rational(1, 3));
  const auto reach = f.residual_reachable(0);
  CHECK(reach[2]);
  CHECK_FALSE(reach[3]);
}

TEST_CASE("coupling from entries merges and drops zeros") {
  const Coupling g = Coupling::from_entries(2, 2, {{0, 1, Rational(1, 2)}, {0, 1, Rational(1, 4)}, {1, 0, Rational(0)}});
  REQUIRE(g.entries.size() == 1);
  CHECK(g.entries[0].mass == Rational(3, 4));
  CHECK(g.marginal_x[0] == Rational(3, 4));
  CHECK(g.marginal_y[0] == 0);
  CHECK(g.total() == Rational(3, 4));
}

TEST_CASE("feasibility on trivial edge sets") {
  const std::vector<Rational> mx{Rational(1), Rational(2)}, my{Rational(3, 2), Rational(3, 2)};
  PairSet all{{0, 0}, {0, 1}, {1, 0}, {1, 1}};
  const FeasibilityResult r = coupling_feasibility(mx, my, mx, my, all);
  REQUIRE(r.feasible());
  check_coupling(*r.coupling, mx, my, mx, my, all);

  const std::vector<Rational> zero{Rational(0), Rational(0)};
  const FeasibilityResult e = coupling_feasibility(mx, my, mx, zero, {});
  REQUIRE(e.violator.has_value());
  CHECK(e.violator->side == Side::X);
  CHECK(e.violator->set == std::vector<Index>{0, 1});
  CHECK(e.violator->rhs == 0);
  CHECK(e.violator->deficit == 3);
  CHECK(check_violator(*e.violator, mx, my, mx, zero, {}));

  const std::vector<Rational> too_big{Rational(2), Rational(2)};
  CHECK_THROWS_AS(coupling_feasibility(mx, my, too_big, my, all), InputError);
}

TEST_CASE("feasibility agrees with the subset criterion") {
  std::mt19937_64 rng(31);
  int feasible = 0, infeasible = 0;
  for (int trial = 0; trial < 400; ++trial) {
    const std::size_t nx = 1 + rng() % 6, ny = 1 + rng() % 6;
    const auto mx = random_masses(rng, nx, true);
    const auto my = random_masses(rng, ny, true);
    std::vector<Rational> lx, ly;
    for (const auto& m : mx) lx.push_back(m * Rational(static_cast<long>(rng() % 4), 3));
    for (const auto& m : my) ly.push_back(m * Rational(static_cast<long>(rng() % 4), 3));
    for (std::size_t i = 0; i < nx; ++i) lx[i] = std::min(lx[i], mx[i]);
    for (std::size_t i = 0; i < ny; ++i) ly[i] = std::min(ly[i], my[i]);
    PairSet edges;
    for (Index x = 0; x < nx; ++x)
      for (Index y = 0; y < ny; ++y)
        if (rng() % 3 == 0) edges.emplace_back(x, y);

    const bool oracle = hall_conditions(mx, my, lx, ly, edges);
    const FeasibilityResult r = coupling_feasibility(mx, my, lx, ly, edges);
    CHECK(r.feasible() == oracle);
    if (r.feasible()) {
      ++feasible;
      check_coupling(*r.coupling, mx, my, lx, ly, edges);
    } else {
      ++infeasible;
      REQUIRE(r.violator.has_value());
      CHECK(r.violator->deficit > 0);
      CHECK(check_violator(*r.violator, mx, my, lx, ly, edges));
    }
  }
  CHECK(feasible > 50);
  CHECK(infeasible > 50);
}

TEST_CASE("relative Prokhorov subset check") {
  const MMSpace z = line({0.0, 3.0}, {Rational(1), Rational(1)});
  const std::vector<Rational> a{Rational(1), Rational(0)}, b{Rational(0), Rational(1)};
  CHECK_FALSE(relative_prokhorov_bruteforce(z.metric(), a, b, 2.9, 0.0));
  CHECK(relative_prokhorov_bruteforce(z.metric(), a, b, 3.0, 0.0));
  CHECK(relative_prokhorov_bruteforce(z.metric(), a, a, 0.0, 0.0));
  std::mt19937_64 rng(4);
  const MMSpace big = random_space(rng, 21);
  const std::vector<Rational> m(21, Rational(1));
  CHECK_THROWS_AS(relative_prokhorov_bruteforce(big.metric(), m, m, 0.1, 0.0), BudgetExceeded);
}

TEST_CASE("subset check agrees with certification on random instances") {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 150; ++trial) {
    const std::size_t n = 2 + rng() % 7;
    const MMSpace z = random_space(rng, n);
    const auto m1 = random_masses(rng, n, true);
    const auto m2 = random_masses(rng, n, true);
    const double eps = uniform(rng, 0.0, 0.6), delta = uniform(rng, 0.0, 1.0);
    std::vector<Index> s1, s2;
    std::vector<Rational> w1, w2;
    for (Index i = 0; i < n; ++i) {
      if (m1[i] > 0) s1.push_back(i), w1.push_back(m1[i]);
      if (m2[i] > 0) s2.push_back(i), w2.push_back(m2[i]);
    }
    if (s1.empty() || s2.empty()) continue;
    const MMSpace x("x", std::vector<std::string>(s1.size(), "x"), z.metric().restrict(s1), w1);
    const MMSpace y("y", std::vector<std::string>(s2.size(), "y"), z.metric().restrict(s2), w2);
    const CertifyResult c = certify_closeness(x, y, CrossMetric::shared(x, y), eps, delta);
    CHECK(c.certified() == relative_prokhorov_bruteforce(z.metric(), m1, m2, eps, delta));
  }
}

TEST_CASE("L-infinity Wasserstein against a permutation scan") {
  const MMSpace z2 = line({0.0, 3.0}, {Rational(1), Rational(1)});
  const std::vector<Rational> a{Rational(1), Rational(0)}, b{Rational(0), Rational(1)};
  CHECK(linf_wasserstein(z2.metric(), a, b).eps_star == 3.0);
  const WassersteinResult same = linf_wasserstein(z2.metric(), a, a);
  CHECK(same.eps_star == 0.0);
  REQUIRE(same.coupling.entries.size() == 1);
  CHECK(same.coupling.entries[0].x == same.coupling.entries[0].y);
  CHECK_THROWS_AS(linf_wasserstein(z2.metric(), a, std::vector<Rational>{Rational(0), Rational(2)}), InputError);

  std::mt19937_64 rng(51);
  for (int trial = 0; trial < 10; ++trial) {
    const MMSpace z = random_space(rng, 14);
    std::vector<Rational> m1(14, Rational(0)), m2(14, Rational(0));
    for (int i = 0; i < 7; ++i) m1[i] = m2[7 + i] = 1;
    std::vector<int> perm{0, 1, 2, 3, 4, 5, 6};
    double best = 1e300;
    do {
      double worst = 0.0;
      for (int i = 0; i < 7; ++i) worst = std::max(worst, z.dist(i, 7 + perm[i]));
      best = std::min(best, worst);
    } while (std::next_permutation(perm.begin(), perm.end()));
    const WassersteinResult w = linf_wasserstein(z.metric(), m1, m2);
    CHECK(w.eps_star == best);
    CHECK(w.coupling.total() == 7);
    for (const auto& e : w.coupling.entries) CHECK(z.dist(e.x, e.y) <= best);
    CHECK(linf_wasserstein(z.metric(), m2, m1).eps_star == best);
  }
}

TEST_CASE("certification of a space against itself") {
  std::mt19937_64 rng(61);
  const MMSpace x = random_space(rng, 12);
  const CertifyResult c = certify_closeness(x, x, CrossMetric::shared(x, x), 0.0, 0.0);
  REQUIRE(c.certified());
  CHECK(c.certificate->coupling.entries.size() == 12);
  for (const auto& e : c.certificate->coupling.entries) CHECK(e.x == e.y);
  CHECK(verify_certificate(*c.certificate, x, x).ok());
}

TEST_CASE("certification is monotone in eps and delta") {
  std::mt19937_64 rng(71);
  for (int trial = 0; trial < 30; ++trial) {
    const MMSpace x = random_space(rng, 6);
    const MMSpace y = random_space(rng, 5);
    const CrossMetric cross = CrossMetric::shared(x, y);
    bool prev = false;
    for (double eps : {0.05, 0.1, 0.2, 0.4, 0.8, 1.5}) {
      const bool now = certify_closeness(x, y, cross, eps, 0.3).certified();
      if (prev) CHECK(now);
      prev = now;
    }
    prev = false;
    for (double delta : {0.0, 0.1, 0.3, 0.7, 1.5, 3.0}) {
      const bool now = certify_closeness(x, y, cross, 0.3, delta).certified();
      if (prev) CHECK(now);
      prev = now;
    }
  }
}

TEST_CASE("certificate verification") {
  std::mt19937_64 rng(81);
  const MMSpace x = random_space(rng, 7);
  const MMSpace y = random_space(rng, 6);
  const CrossMetric cross = CrossMetric::shared(x, y);
  const CertifyResult c = certify_closeness(x, y, cross, 0.8, 1.0);
  REQUIRE(c.certified());
  CHECK(verify_certificate(*c.certificate, x, y).ok());

  ClosenessCertificate tampered = *c.certificate;
  tampered.coupling.entries[0].mass += Rational(1, 100);
  CHECK_FALSE(verify_certificate(tampered, x, y).ok());
  CHECK_FALSE(verify_certificate(tampered, x, y).marginals_ok);

  // Random couplings: the reported distortion equals a direct pair scan.
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Coupling::Entry> entries;
    for (Index i = 0; i < 7; ++i)
      for (Index j = 0; j < 6; ++j)
        if (rng() % 4 == 0) entries.push_back({i, j, Rational(1, 10)});
    if (entries.empty()) continue;
    ClosenessCertificate cert = *c.certificate;
    cert.coupling = Coupling::from_entries(7, 6, entries);
    double worst = 0.0;
    for (const auto& a : cert.coupling.entries)
      for (const auto& b : cert.coupling.entries)
        worst = std::max(worst, std::abs(x.dist(a.x, b.x) - y.dist(a.y, b.y)));
    CHECK(verify_certificate(cert, x, y).max_distortion == worst);
  }
}

TEST_CASE("discretization") {
  const MMSpace x = circle(1000, 2 * std::numbers::pi);
  const Discretization d = discretize(x, 0.1);
  CHECK(verify_certificate(d.certificate, x, d.net).ok());
  CHECK(d.certificate.delta == 0.0);
  CHECK(d.net.size() >= 32);
  CHECK(d.net.size() <= 62);
  CHECK(d.net.exact_total_mass() == x.exact_total_mass());
  for (Index i = 0; i < x.size(); ++i) CHECK(x.dist(i, d.net_points[d.basin[i]]) < 0.1);

  const Discretization one = discretize(x, 10.0);
  CHECK(one.net.size() == 1);
  CHECK(one.net.exact_weight(0) == x.exact_total_mass());

  const Discretization all = discretize(x, 0.001);
  CHECK(all.net.size() == x.size());
  for (const auto& e : all.certificate.coupling.entries) CHECK(all.net_points[e.y] == e.x);

  const auto order = seeded_permutation(x.size(), 3);
  const Discretization seeded = discretize(x, 0.1, order);
  CHECK(verify_certificate(seeded.certificate, x, seeded.net).ok());
}

TEST_CASE("measured-error model certifies at twice the net scale") {
  const MMSpace x = circle(400, 2 * std::numbers::pi);
  const double eps = 0.05, delta = 0.1;
  const Discretization d = discretize(x, eps);
  const MMSpace y = perturb_measure(perturb_metric(d.net, eps, 7), delta, 8);
  for (Index i = 0; i < y.size(); ++i)
    for (Index j = 0; j < y.size(); ++j) CHECK(std::abs(y.dist(i, j) - d.net.dist(i, j)) < eps);
  const CrossMetric cross = CrossMetric::assignment(x, d.net_points, eps);
  const CertifyResult c = certify_closeness(x, y, cross, 2 * eps, delta);
  REQUIRE(c.certified());
  const CertificateCheck check = verify_certificate(*c.certificate, x, y);
  CHECK(check.ok());
  CHECK(check.max_distortion <= 3 * eps);
}
