#include "rholap/transport.hpp"

#include "rholap/errors.hpp"
#include "rholap/maxflow.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace rholap {

Coupling Coupling::from_entries(Index nx, Index ny, std::vector<Entry> entries) {
  std::map<std::pair<Index, Index>, Rational> merged;
  for (auto& e : entries) {
    if (e.x >= nx || e.y >= ny) throw InputError("coupling entry out of range");
    if (e.mass < 0) throw InputError("coupling mass must be nonnegative");
    merged[{e.x, e.y}] += e.mass;
  }
  Coupling c;
  c.nx = nx;
  c.ny = ny;
  c.marginal_x.assign(nx, Rational(0));
  c.marginal_y.assign(ny, Rational(0));
  for (auto& [key, mass] : merged) {
    if (mass == 0) continue;
    c.marginal_x[key.first] += mass;
    c.marginal_y[key.second] += mass;
    c.entries.push_back({key.first, key.second, mass});
  }
  return c;
}

Coupling Coupling::diagonal(std::span<const Rational> masses) {
  std::vector<Entry> e;
  for (Index i = 0; i < masses.size(); ++i) e.push_back({i, i, masses[i]});
  return from_entries(masses.size(), masses.size(), std::move(e));
}

Rational Coupling::total() const {
  Rational t(0);
  for (const auto& e : entries) t += e.mass;
  return t;
}

bool Coupling::marginals_consistent() const {
  if (marginal_x.size() != nx || marginal_y.size() != ny) return false;
  std::vector<Rational> mx(nx, Rational(0)), my(ny, Rational(0));
  for (const auto& e : entries) {
    if (e.x >= nx || e.y >= ny || e.mass <= 0) return false;
    mx[e.x] += e.mass;
    my[e.y] += e.mass;
  }
  return mx == marginal_x && my == marginal_y;
}

std::string to_string(CrossMetric::Mode mode) {
  switch (mode) {
    case CrossMetric::Mode::Shared: return "shared";
    case CrossMetric::Mode::Explicit: return "explicit";
    case CrossMetric::Mode::Assignment: return "assignment";
  }
  return "unknown";
}

CrossMetric CrossMetric::shared(const MMSpace& x, const MMSpace& y) {
  const auto* cx = dynamic_cast<const CoordinateMetric*>(&x.metric());
  const auto* cy = dynamic_cast<const CoordinateMetric*>(&y.metric());
  if (cx == nullptr || cy == nullptr || !cx->same_ambient(*cy))
    throw InputError("shared cross metric needs coordinate metrics over one ambient space");
  CrossMetric c;
  c.mode_ = Mode::Shared;
  c.nx_ = x.size();
  c.ny_ = y.size();
  c.table_.resize(c.nx_ * c.ny_);
  for (Index i = 0; i < c.nx_; ++i)
    for (Index j = 0; j < c.ny_; ++j) c.table_[i * c.ny_ + j] = cx->cross_distance(i, *cy, j);
  return c;
}

CrossMetric CrossMetric::explicit_matrix(Index nx, Index ny, std::vector<double> values) {
  if (values.size() != nx * ny) throw InputError("cross matrix has wrong size");
  for (double v : values)
    if (!(v >= 0) || !std::isfinite(v)) throw InputError("cross distances must be finite and nonnegative");
  CrossMetric c;
  c.mode_ = Mode::Explicit;
  c.nx_ = nx;
  c.ny_ = ny;
  c.table_ = std::move(values);
  return c;
}

CrossMetric CrossMetric::assignment(const MMSpace& x, std::vector<Index> assignment, double offset) {
  if (!(offset >= 0) || !std::isfinite(offset)) throw InputError("assignment offset must be nonnegative");
  CrossMetric c;
  c.mode_ = Mode::Assignment;
  c.nx_ = x.size();
  c.ny_ = assignment.size();
  c.offset_ = offset;
  c.table_.resize(c.nx_ * c.ny_);
  for (Index j = 0; j < c.ny_; ++j) {
    if (assignment[j] >= c.nx_) throw InputError("assignment target out of range");
    for (Index i = 0; i < c.nx_; ++i) c.table_[i * c.ny_ + j] = x.dist(i, assignment[j]) + offset;
  }
  c.assignment_ = std::move(assignment);
  return c;
}

namespace {

void validate_bounds(std::span<const Rational> mu, std::span<const Rational> low, const char* side) {
  if (mu.size() != low.size()) throw InputError(std::string("measure size mismatch on side ") + side);
  for (Index i = 0; i < mu.size(); ++i) {
    if (low[i] < 0) throw InputError(std::string("lower measure is negative on side ") + side);
    if (low[i] > mu[i]) throw InputError(std::string("lower measure exceeds measure on side ") + side);
  }
}

// Max flow with sources on one side only. Returns a violator if the lower
// measure on that side cannot be routed.
std::optional<HallViolator> one_sided_violator(Side side, std::span<const Rational> low_a,
                                               std::span<const Rational> mu_b, const PairSet& edges,
                                               const Rational& infinite) {
  const Index na = low_a.size(), nb = mu_b.size();
  RationalMaxFlow g(na + nb + 2);
  const std::size_t s = na + nb, t = na + nb + 1;
  Rational need(0);
  for (Index a = 0; a < na; ++a) {
    g.add_edge(s, a, low_a[a]);
    need += low_a[a];
  }
  for (auto [x, y] : edges) {
    const Index a = side == Side::X ? x : y;
    const Index b = side == Side::X ? y : x;
    g.add_edge(a, na + b, infinite);
  }
  for (Index b = 0; b < nb; ++b) g.add_edge(na + b, t, mu_b[b]);
  if (g.max_flow(s, t) >= need) return std::nullopt;

  const auto reach = g.residual_reachable(s);
  HallViolator v;
  v.side = side;
  v.lhs = 0;
  v.rhs = 0;
  for (Index a = 0; a < na; ++a)
    if (reach[a]) {
      v.set.push_back(a);
      v.lhs += low_a[a];
    }
  for (Index b = 0; b < nb; ++b)
    if (reach[na + b]) {
      v.image.push_back(b);
      v.rhs += mu_b[b];
    }
  v.deficit = v.lhs - v.rhs;
  return v;
}

}  // namespace

FeasibilityResult coupling_feasibility(std::span<const Rational> mu_x, std::span<const Rational> mu_y,
                                       std::span<const Rational> mu_x_low, std::span<const Rational> mu_y_low,
                                       const PairSet& edges) {
  validate_bounds(mu_x, mu_x_low, "X");
  validate_bounds(mu_y, mu_y_low, "Y");
  const Index nx = mu_x.size(), ny = mu_y.size();
  for (auto [x, y] : edges)
    if (x >= nx || y >= ny) throw InputError("admissible pair out of range");

  const Rational infinite = sum(mu_x) + sum(mu_y) + 1;

  // Circulation S -> X -> Y -> T -> S with lower bounds on the outer arcs,
  // reduced to a max flow between auxiliary terminals.
  const std::size_t s = nx + ny, t = nx + ny + 1, ss = nx + ny + 2, tt = nx + ny + 3;
  RationalMaxFlow g(nx + ny + 4);
  std::vector<Rational> excess(nx + ny + 4, Rational(0));
  std::vector<std::size_t> x_arc(nx);
  for (Index x = 0; x < nx; ++x) {
    x_arc[x] = g.add_edge(s, x, mu_x[x] - mu_x_low[x]);
    excess[x] += mu_x_low[x];
    excess[s] -= mu_x_low[x];
  }
  std::vector<std::size_t> pair_arc;
  pair_arc.reserve(edges.size());
  for (auto [x, y] : edges) pair_arc.push_back(g.add_edge(x, nx + y, infinite));
  for (Index y = 0; y < ny; ++y) {
    g.add_edge(nx + y, t, mu_y[y] - mu_y_low[y]);
    excess[t] += mu_y_low[y];
    excess[nx + y] -= mu_y_low[y];
  }
  g.add_edge(t, s, infinite);
  Rational demand(0);
  for (std::size_t v = 0; v < nx + ny + 2; ++v) {
    if (excess[v] > 0) {
      g.add_edge(ss, v, excess[v]);
      demand += excess[v];
    } else if (excess[v] < 0) {
      g.add_edge(v, tt, -excess[v]);
    }
  }

  FeasibilityResult out;
  if (g.max_flow(ss, tt) == demand) {
    std::vector<Coupling::Entry> entries;
    for (std::size_t k = 0; k < edges.size(); ++k) {
      const Rational& f = g.flow(pair_arc[k]);
      if (f > 0) entries.push_back({edges[k].first, edges[k].second, f});
    }
    out.coupling = Coupling::from_entries(nx, ny, std::move(entries));
    return out;
  }

  out.violator = one_sided_violator(Side::X, mu_x_low, mu_y, edges, infinite);
  if (!out.violator) out.violator = one_sided_violator(Side::Y, mu_y_low, mu_x, edges, infinite);
  if (!out.violator)
    throw std::logic_error("circulation infeasible but both one-sided conditions hold");
  return out;
}

bool check_violator(const HallViolator& v, std::span<const Rational> mu_x, std::span<const Rational> mu_y,
                    std::span<const Rational> mu_x_low, std::span<const Rational> mu_y_low, const PairSet& edges) {
  const bool on_x = v.side == Side::X;
  const auto low = on_x ? mu_x_low : mu_y_low;
  const auto other = on_x ? mu_y : mu_x;
  std::vector<bool> in_set(low.size(), false), in_image(other.size(), false);
  Rational lhs(0), rhs(0);
  for (Index a : v.set) {
    if (a >= low.size() || in_set[a]) return false;
    in_set[a] = true;
    lhs += low[a];
  }
  for (auto [x, y] : edges) {
    const Index a = on_x ? x : y;
    const Index b = on_x ? y : x;
    if (in_set[a]) in_image[b] = true;
  }
  for (Index b = 0; b < other.size(); ++b)
    if (in_image[b]) rhs += other[b];
  return lhs > rhs && lhs == v.lhs && rhs == v.rhs && v.deficit == lhs - rhs;
}

bool relative_prokhorov_bruteforce(const Metric& z, std::span<const Rational> mu1, std::span<const Rational> mu2,
                                   double eps, double delta) {
  if (mu1.size() != z.size() || mu2.size() != z.size()) throw InputError("measure size mismatch");
  if (!(eps >= 0)) throw InputError("eps must be nonnegative");
  std::vector<Index> support;
  for (Index i = 0; i < z.size(); ++i) {
    if (mu1[i] < 0 || mu2[i] < 0) throw InputError("measures must be nonnegative");
    if (mu1[i] > 0 || mu2[i] > 0) support.push_back(i);
  }
  const std::size_t k = support.size();
  if (k > 20) throw BudgetExceeded("subset enumeration is limited to 20 support points");
  const Rational factor = exp_neg_factor(delta);

  const std::size_t full = std::size_t{1} << k;
  std::vector<std::uint32_t> near(k, 0);
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t b = 0; b < k; ++b)
      if (z.distance(support[a], support[b]) <= eps) near[a] |= std::uint32_t{1} << b;

  std::vector<std::uint32_t> grown(full, 0);
  std::vector<Rational> m1(full), m2(full);
  m1[0] = 0;
  m2[0] = 0;
  for (std::size_t mask = 1; mask < full; ++mask) {
    const auto low = static_cast<std::size_t>(__builtin_ctzll(mask));
    const std::size_t rest = mask & (mask - 1);
    grown[mask] = grown[rest] | near[low];
    m1[mask] = m1[rest] + mu1[support[low]];
    m2[mask] = m2[rest] + mu2[support[low]];
  }
  for (std::size_t mask = 1; mask < full; ++mask) {
    if (m1[grown[mask]] < factor * m2[mask]) return false;
    if (m2[grown[mask]] < factor * m1[mask]) return false;
  }
  return true;
}

WassersteinResult linf_wasserstein(const Metric& z, std::span<const Rational> mu1, std::span<const Rational> mu2) {
  if (mu1.size() != z.size() || mu2.size() != z.size()) throw InputError("measure size mismatch");
  if (sum(mu1) != sum(mu2)) throw InputError("W-infinity needs measures of equal total mass");
  std::vector<Index> sx, sy;
  for (Index i = 0; i < z.size(); ++i) {
    if (mu1[i] < 0 || mu2[i] < 0) throw InputError("measures must be nonnegative");
    if (mu1[i] > 0) sx.push_back(i);
    if (mu2[i] > 0) sy.push_back(i);
  }
  if (sx.empty()) throw InputError("measures are zero");
  std::vector<Rational> ax, ay;
  for (Index i : sx) ax.push_back(mu1[i]);
  for (Index j : sy) ay.push_back(mu2[j]);

  std::vector<double> candidates;
  for (Index i : sx)
    for (Index j : sy) candidates.push_back(z.distance(i, j));
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

  auto attempt = [&](double eps) {
    PairSet e;
    for (Index a = 0; a < sx.size(); ++a)
      for (Index b = 0; b < sy.size(); ++b)
        if (z.distance(sx[a], sy[b]) <= eps) e.emplace_back(a, b);
    return coupling_feasibility(ax, ay, ax, ay, e);
  };

  std::size_t lo = 0, hi = candidates.size() - 1;
  FeasibilityResult best = attempt(candidates[hi]);
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo) / 2;
    auto r = attempt(candidates[mid]);
    if (r.feasible()) {
      hi = mid;
      best = std::move(r);
    } else {
      lo = mid + 1;
    }
  }
  if (!best.feasible()) throw std::logic_error("complete bipartite coupling infeasible for equal masses");

  std::vector<Coupling::Entry> entries;
  for (const auto& e : best.coupling->entries) entries.push_back({sx[e.x], sy[e.y], e.mass});
  return {candidates[hi], Coupling::from_entries(z.size(), z.size(), std::move(entries))};
}

PairSet admissible_pairs(const CrossMetric& cross, double eps) {
  PairSet e;
  for (Index x = 0; x < cross.nx(); ++x)
    for (Index y = 0; y < cross.ny(); ++y)
      if (cross(x, y) <= eps) e.emplace_back(x, y);
  return e;
}

CertifyResult certify_closeness(const MMSpace& x, const MMSpace& y, const CrossMetric& cross, double eps,
                                double delta) {
  if (cross.nx() != x.size() || cross.ny() != y.size()) throw InputError("cross metric does not match the spaces");
  if (!(eps >= 0) || !std::isfinite(eps)) throw InputError("eps must be finite and nonnegative");
  const Rational factor = exp_neg_factor(delta);
  std::vector<Rational> low_x, low_y;
  for (const auto& w : x.exact_weights()) low_x.push_back(factor * w);
  for (const auto& w : y.exact_weights()) low_y.push_back(factor * w);

  auto r = coupling_feasibility(x.exact_weights(), y.exact_weights(), low_x, low_y, admissible_pairs(cross, eps));
  CertifyResult out;
  if (r.feasible()) {
    ClosenessCertificate c;
    c.eps = eps;
    c.delta = delta;
    c.reduced_x = r.coupling->marginal_x;
    c.reduced_y = r.coupling->marginal_y;
    c.coupling = std::move(*r.coupling);
    c.cross = cross;
    out.certificate = std::move(c);
  } else {
    out.violator = std::move(r.violator);
  }
  return out;
}

CertificateCheck verify_certificate(const ClosenessCertificate& cert, const MMSpace& x, const MMSpace& y) {
  CertificateCheck chk;
  const Coupling& g = cert.coupling;
  chk.shape_ok = cert.eps >= 0 && cert.delta >= 0 && cert.reduced_x.size() == x.size() &&
                 cert.reduced_y.size() == y.size() && g.nx == x.size() && g.ny == y.size() &&
                 cert.cross.nx() == x.size() && cert.cross.ny() == y.size();
  for (const auto& e : g.entries)
    if (e.x >= g.nx || e.y >= g.ny || e.mass <= 0) chk.shape_ok = false;
  if (!chk.shape_ok) return chk;

  const Rational factor = exp_neg_factor(cert.delta);
  chk.sandwich_ok = true;
  for (Index i = 0; i < x.size(); ++i)
    if (cert.reduced_x[i] > x.exact_weight(i) || cert.reduced_x[i] < factor * x.exact_weight(i))
      chk.sandwich_ok = false;
  for (Index j = 0; j < y.size(); ++j)
    if (cert.reduced_y[j] > y.exact_weight(j) || cert.reduced_y[j] < factor * y.exact_weight(j))
      chk.sandwich_ok = false;

  std::vector<Rational> rows(x.size(), Rational(0)), cols(y.size(), Rational(0));
  for (const auto& e : g.entries) {
    rows[e.x] += e.mass;
    cols[e.y] += e.mass;
  }
  chk.marginals_ok = rows == cert.reduced_x && cols == cert.reduced_y;

  const double tol = 1e-12 * std::max({1.0, x.diameter(), y.diameter()});
  chk.cross_ok = true;
  for (const auto& e : g.entries)
    if (cert.cross(e.x, e.y) > cert.eps + tol) chk.cross_ok = false;

  double worst = 0.0;
  for (std::size_t a = 0; a < g.entries.size(); ++a)
    for (std::size_t b = a + 1; b < g.entries.size(); ++b) {
      const auto& p = g.entries[a];
      const auto& q = g.entries[b];
      worst = std::max(worst, std::abs(x.dist(p.x, q.x) - y.dist(p.y, q.y)));
    }
  chk.max_distortion = worst;
  chk.distortion_ok = worst <= 2 * cert.eps + tol;
  return chk;
}

Discretization discretize(const MMSpace& x, double eps, std::span<const Index> order) {
  if (!(eps > 0) || !std::isfinite(eps)) throw InputError("eps must be positive");
  const SeparatedSet net = greedy_separated_net(x, eps, order);
  const Index m = net.indices.size();
  std::vector<Index> basin(x.size());
  std::vector<Rational> mass(m, Rational(0));
  std::vector<Coupling::Entry> entries;
  for (Index p = 0; p < x.size(); ++p) {
    Index best = 0;
    double best_d = x.dist(p, net.indices[0]);
    for (Index k = 1; k < m; ++k) {
      const double d = x.dist(p, net.indices[k]);
      if (d < best_d) {
        best_d = d;
        best = k;
      }
    }
    basin[p] = best;
    mass[best] += x.exact_weight(p);
    entries.push_back({p, best, x.exact_weight(p)});
  }
  MMSpace y = x.restricted(net.indices).with_weights(mass).with_label(x.label() + "-net");

  ClosenessCertificate cert;
  cert.eps = eps;
  cert.delta = 0.0;
  cert.coupling = Coupling::from_entries(x.size(), m, std::move(entries));
  cert.reduced_x = cert.coupling.marginal_x;
  cert.reduced_y = cert.coupling.marginal_y;
  cert.cross = CrossMetric::assignment(x, net.indices, 0.0);
  return {std::move(y), net.indices, std::move(basin), std::move(cert)};
}

}  // namespace rholap
