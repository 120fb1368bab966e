#include "rholap/regularity.hpp"

#include "rholap/errors.hpp"

#include <cmath>

namespace rholap {

std::string to_string(Condition c) {
  switch (c) {
    case Condition::SLV: return "SLV";
    case Condition::BIV: return "BIV";
    case Condition::Doubling: return "doubling";
    case Condition::BishopGromov: return "bishop-gromov";
  }
  return "unknown";
}

namespace {

void require_point(const MMSpace& space, Index x) {
  if (x >= space.size()) throw InputError("point index out of range");
}

double layer_mass(const MMSpace& space, Index x, double inner, double outer) {
  double m = 0.0;
  for (Index y = 0; y < space.size(); ++y) {
    const double d = space.dist(x, y);
    if (d >= inner && d < outer) m += space.weight(y);
  }
  return m;
}

// Points of B_rho(x) in index order.
std::vector<Index> ball_members(const MMSpace& space, Index x, double rho) {
  std::vector<Index> out;
  for (Index y = 0; y < space.size(); ++y)
    if (space.dist(x, y) < rho) out.push_back(y);
  return out;
}

double intersection_mass(const MMSpace& space, const std::vector<Index>& a, const std::vector<Index>& b) {
  double m = 0.0;
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i < *j) {
      ++i;
    } else if (*j < *i) {
      ++j;
    } else {
      m += space.weight(*i);
      ++i;
      ++j;
    }
  }
  return m;
}

void require_positive(double v, const char* what) {
  if (!(v > 0) || !std::isfinite(v)) throw InputError(std::string(what) + " must be positive and finite");
}

}  // namespace

double slv_ratio(const MMSpace& space, Index x, double rho, double eps) {
  require_point(space, x);
  return layer_mass(space, x, rho, rho + eps) / ball_mass(space, x, rho);
}

double biv_ratio(const MMSpace& space, Index x, Index y, double rho, double eps) {
  require_point(space, x);
  require_point(space, y);
  const double inter = intersection_mass(space, ball_members(space, x, rho), ball_members(space, y, rho));
  return inter / ball_mass(space, x, rho + eps);
}

double doubling_ratio(const MMSpace& space, Index x, double r_small, double r_big) {
  require_point(space, x);
  return ball_mass(space, x, r_big) / ball_mass(space, x, r_small);
}

double bishop_gromov_exponent(const MMSpace& space, Index x, double r1, double r2) {
  require_point(space, x);
  if (r1 == r2) return 0.0;
  return std::log(ball_mass(space, x, r1) / ball_mass(space, x, r2)) / std::log(r1 / r2);
}

ConditionReport check_slv(const MMSpace& space, double lambda, double rho, double eps, bool per_point) {
  require_positive(lambda, "Lambda");
  require_positive(rho, "rho");
  require_positive(eps, "eps");
  ConditionReport r;
  r.condition = Condition::SLV;
  r.lambda = lambda;
  r.rho = rho;
  r.eps = eps;
  r.worst_ratio = -1.0;
  for (Index x = 0; x < space.size(); ++x) {
    const double q = slv_ratio(space, x, rho, eps);
    if (per_point) r.per_point.push_back(q);
    if (q > r.worst_ratio) {
      r.worst_ratio = q;
      r.witness = x;
    }
  }
  // Compared through minimal_lambda so that passing it back always holds.
  r.minimal_lambda = r.worst_ratio * rho / eps;
  r.holds = r.minimal_lambda <= lambda;
  return r;
}

ConditionReport check_biv(const MMSpace& space, double lambda, double rho, double eps, bool per_point) {
  require_positive(lambda, "Lambda");
  require_positive(rho, "rho");
  if (!(eps >= 0) || eps > rho / 2) throw InputError("BIV requires 0 <= eps <= rho/2");
  ConditionReport r;
  r.condition = Condition::BIV;
  r.lambda = lambda;
  r.rho = rho;
  r.eps = eps;
  r.worst_ratio = std::numeric_limits<double>::infinity();
  const Index n = space.size();
  std::vector<std::vector<Index>> balls(n);
  std::vector<double> outer(n);
  for (Index x = 0; x < n; ++x) {
    balls[x] = ball_members(space, x, rho);
    outer[x] = ball_mass(space, x, rho + eps);
  }
  for (Index x = 0; x < n; ++x) {
    double local = std::numeric_limits<double>::infinity();
    for (Index y = 0; y < n; ++y) {
      if (space.dist(x, y) > rho + eps) continue;
      const double q = intersection_mass(space, balls[x], balls[y]) / outer[x];
      local = std::min(local, q);
      if (q < r.worst_ratio) {
        r.worst_ratio = q;
        r.witness = x;
        r.witness_pair = y;
      }
    }
    if (per_point) r.per_point.push_back(local);
  }
  r.minimal_lambda = r.worst_ratio > 0 ? 1.0 / r.worst_ratio : std::numeric_limits<double>::infinity();
  r.holds = r.minimal_lambda <= lambda;
  return r;
}

ConditionReport check_doubling(const MMSpace& space, double lambda, double r_small, double r_big, bool per_point) {
  require_positive(lambda, "Lambda");
  require_positive(r_small, "r_small");
  if (!(r_big > r_small) || !std::isfinite(r_big)) throw InputError("doubling requires r_big > r_small");
  ConditionReport r;
  r.condition = Condition::Doubling;
  r.lambda = lambda;
  r.rho = r_small;
  r.eps = r_big;
  r.worst_ratio = 0.0;
  for (Index x = 0; x < space.size(); ++x) {
    const double q = doubling_ratio(space, x, r_small, r_big);
    if (per_point) r.per_point.push_back(q);
    if (q > r.worst_ratio) {
      r.worst_ratio = q;
      r.witness = x;
    }
  }
  r.holds = r.worst_ratio <= lambda;
  r.minimal_lambda = r.worst_ratio;
  return r;
}

ConditionReport check_bishop_gromov(const MMSpace& space, double lambda,
                                    const std::vector<std::pair<double, double>>& radii, bool per_point) {
  if (!(lambda >= 0)) throw InputError("Lambda must be nonnegative");
  if (radii.empty()) throw InputError("radius grid is empty");
  for (auto [r1, r2] : radii)
    if (!(r2 > 0) || !(r1 >= r2) || !std::isfinite(r1)) throw InputError("radius pairs need r1 >= r2 > 0");
  ConditionReport r;
  r.condition = Condition::BishopGromov;
  r.lambda = lambda;
  r.radii = radii;
  r.worst_ratio = 0.0;
  r.witness_radii = radii.front();
  for (Index x = 0; x < space.size(); ++x) {
    double local = 0.0;
    for (auto [r1, r2] : radii) {
      const double e = bishop_gromov_exponent(space, x, r1, r2);
      local = std::max(local, e);
      if (e > r.worst_ratio) {
        r.worst_ratio = e;
        r.witness = x;
        r.witness_radii = std::make_pair(r1, r2);
      }
    }
    if (per_point) r.per_point.push_back(local);
  }
  r.holds = r.worst_ratio <= lambda;
  r.minimal_lambda = r.worst_ratio;
  return r;
}

std::vector<std::pair<double, double>> radius_pairs(const std::vector<double>& radii) {
  std::vector<std::pair<double, double>> out;
  for (double a : radii)
    for (double b : radii)
      if (a > b) out.emplace_back(a, b);
  return out;
}

StabilityProbeReport conditions_stability_probe(const MMSpace& x, const MMSpace& y, double lambda, double rho,
                                                double eps, double delta) {
  require_positive(rho, "rho");
  require_positive(eps, "eps");
  if (eps > rho / 12) throw InputError("stability probe requires eps <= rho/12");
  if (!(delta >= 0)) throw InputError("delta must be nonnegative");
  StabilityProbeReport p;
  p.lambda = lambda;
  p.rho = rho;
  p.eps = eps;
  p.delta = delta;
  p.x_slv = check_slv(x, lambda, rho - 2 * eps, 5 * eps);
  p.x_biv = check_biv(x, lambda, rho - 2 * eps, 5 * eps);
  const double lift = std::exp(2 * delta);
  p.y_slv = check_slv(y, 6 * lift * lambda, rho, eps);
  p.y_biv = check_biv(y, lift * lambda, rho, eps);
  p.preconditions_hold = p.x_slv.holds && p.x_biv.holds;
  p.conclusions_hold = p.y_slv.holds && p.y_biv.holds;
  return p;
}

}  // namespace rholap
