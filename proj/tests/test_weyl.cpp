#include "doctest.h"
#include "support.hpp"

#include "rholap/coupling_ops.hpp"
#include "rholap/weyl.hpp"

#include <cmath>
#include <limits>
#include <numbers>

using namespace rholap;
using namespace testing;

TEST_CASE("eigenvalue counting") {
  const MMSpace s = circle(300, 2 * std::numbers::pi);
  const double rho = 0.5;
  const auto all = full_spectrum(s, rho);
  for (double bound : {0.0, 0.1, 0.5, 1.0, 2.0, 3.9}) {
    const std::size_t expect = std::count_if(all.begin(), all.end(), [&](double v) { return v <= bound; });
    // Bounds sitting on a cluster would be ambiguous under round-off.
    bool near = false;
    for (double v : all) near = near || std::abs(v - bound) < 1e-9;
    if (!near) CHECK(count_eigenvalues(RhoOperator::assemble(s, rho), bound).count == expect);
  }
  const RhoOperator op = RhoOperator::assemble(s, rho);
  CHECK(kth_eigenvalue(op, 3) == doctest::Approx(all[2]));
  CHECK(kth_eigenvalue(op, 301) == std::numeric_limits<double>::infinity());
}

TEST_CASE("Q ratio against a direct scan") {
  std::mt19937_64 rng(3);
  const MMSpace s = random_space(rng, 40);
  const double rho = 0.1, r = 0.15;
  const auto phi = direct_per_ball_phi(s, rho);
  double best = 0.0;
  for (Index x = 0; x < s.size(); ++x) {
    double big = 0.0, small = 0.0;
    for (Index z = 0; z < s.size(); ++z) {
      if (s.dist(x, z) < 2 * r) big += phi[z] * s.weight(z);
      if (s.dist(x, z) < r / 2) small += phi[z] * s.weight(z);
    }
    best = std::max(best, big / small);
  }
  CHECK(q_ratio(s, rho, r).value == doctest::Approx(best).epsilon(1e-12));
}

TEST_CASE("single point") {
  const MMSpace s("one", {"a"}, CoordinateMetric::euclidean(1, {0.0}), {Rational(1)});
  CHECK(count_eigenvalues(RhoOperator::assemble(s, 1.0), 0.0).count == 1);
  const ManyEigenvaluesReport many = many_eigenvalues_check(s, 1.0, 1.0);
  CHECK(many.n == 1);
  CHECK(many.holds);
  const FewEigenvaluesReport few = few_eigenvalues_check(s, 1.0, 1.0);
  CHECK(few.n == 1);
  CHECK(few.count == 1);
  CHECK(few.holds);
}

TEST_CASE("lower bound on the circle") {
  const MMSpace s = circle(300, 2 * std::numbers::pi);
  const double rho = 0.3;
  const auto all = full_spectrum(s, rho);
  for (double r : {rho, 2 * rho, 4 * rho}) {
    const ManyEigenvaluesReport rep = many_eigenvalues_check(s, rho, r);
    CHECK(rep.packing_exact);
    // Equispaced points: N(3r) = number of grid steps fitting 3r apart.
    const double h = 2 * std::numbers::pi / 300;
    const std::size_t step = static_cast<std::size_t>(std::ceil(3 * r / h - 1e-9));
    CHECK(rep.n == 300 / step);
    CHECK(rep.lambda_n == doctest::Approx(all[rep.n - 1]));
    CHECK(rep.holds);
    CHECK(rep.lambda_n <= rep.tent_bound + 1e-9);
    CHECK(rep.tent_bound <= rep.bound + 1e-9);
  }
}

TEST_CASE("upper bound on the circle") {
  const MMSpace s = circle(200, 2 * std::numbers::pi);
  const double rho = 1.0;
  const double lam = few_eigenvalues_lambda(s, rho);
  CHECK(lam >= 1.0);
  const FewEigenvaluesReport rep = few_eigenvalues_check(s, rho, lam);
  CHECK(rep.preconditions_hold);
  CHECK(rep.packing_exact);
  CHECK(rep.holds);
  CHECK(rep.count <= rep.n);
  CHECK(rep.c == doctest::Approx(1.0 / stability_constant(6 * lam, 0.0)));
  const auto all = full_spectrum(s, rho);
  CHECK(rep.empirical_c == doctest::Approx(all[rep.n] * rho * rho));
  CHECK_FALSE(few_eigenvalues_check(s, rho, 0.9 * lam).preconditions_hold);
}
