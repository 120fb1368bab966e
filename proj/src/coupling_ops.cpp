#include "rholap/coupling_ops.hpp"

#include "rholap/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace rholap {

namespace {

void check_coupling(const MMSpace& x, const MMSpace& y, const Coupling& gamma) {
  if (gamma.nx != x.size() || gamma.ny != y.size()) throw InputError("coupling does not match the spaces");
  if (!gamma.marginals_consistent()) throw InputError("coupling marginals are inconsistent");
  if (gamma.entries.empty()) throw InputError("coupling is empty");
}

std::vector<std::string> pair_ids(const MMSpace& x, const MMSpace& y, const Coupling& gamma) {
  std::vector<std::string> ids;
  ids.reserve(gamma.entries.size());
  for (const auto& e : gamma.entries) ids.push_back(x.ids()[e.x] + "|" + y.ids()[e.y]);
  return ids;
}

std::vector<Rational> entry_masses(const Coupling& gamma) {
  std::vector<Rational> w;
  w.reserve(gamma.entries.size());
  for (const auto& e : gamma.entries) w.push_back(e.mass);
  return w;
}

std::vector<Index> side_map(const Coupling& gamma, Side side) {
  std::vector<Index> m;
  m.reserve(gamma.entries.size());
  for (const auto& e : gamma.entries) m.push_back(side == Side::X ? e.x : e.y);
  return m;
}

Eigen::VectorXd full_spectrum(const MMSpace& space, double rho) {
  const RhoOperator op = RhoOperator::assemble(space, rho);
  return dense_smallest(op.symmetrized_dense(), op.size()).values;
}

AuditPair audit(const MMSpace& s, double lambda, double rho, double eps) {
  AuditPair a;
  if (eps > 0) {
    a.slv = check_slv(s, lambda, rho, eps);
    a.biv = check_biv(s, lambda, rho, eps);
  }
  return a;
}

// Compares lambda_k(a) / lambda_k(b) with [lower, upper] for every k passing `take`.
template <class Take>
std::vector<RatioCheck> compare_spectra(const Eigen::VectorXd& a, const Eigen::VectorXd& b, double rho,
                                        double lower, double upper, Take take) {
  const double scale = 1.0 / (rho * rho);
  const double zero = 1e-12 * scale;
  const double slop = 1e-10 * scale;
  std::vector<RatioCheck> out;
  const auto m = std::min(a.size(), b.size());
  for (Eigen::Index i = 0; i < m; ++i) {
    RatioCheck r;
    r.k = static_cast<std::size_t>(i) + 1;
    r.lambda_a = a(i);
    r.lambda_b = b(i);
    r.lower = lower;
    r.upper = upper;
    r.ratio = r.lambda_b > 0 ? r.lambda_a / r.lambda_b : std::numeric_limits<double>::infinity();
    r.checked = take(r.lambda_a) && !(r.lambda_a <= zero && r.lambda_b <= zero);
    if (r.checked) {
      r.within = r.lambda_a <= upper * r.lambda_b + slop && r.lambda_a >= lower * r.lambda_b - slop;
      r.margin = std::min(r.ratio - lower, upper - r.ratio);
    }
    out.push_back(r);
  }
  return out;
}

}  // namespace

MMSpace split(const MMSpace& x, const MMSpace& y, const Coupling& gamma, Side side) {
  check_coupling(x, y, gamma);
  const MMSpace& base = side == Side::X ? x : y;
  auto metric = std::make_shared<PullbackMetric>(base.metric_ptr(), side_map(gamma, side));
  return MMSpace(base.label() + "-split", pair_ids(x, y, gamma), metric, entry_masses(gamma));
}

MMSpace split_genuine(const MMSpace& x, const MMSpace& y, const Coupling& gamma, Side side, double rho, double c) {
  check_coupling(x, y, gamma);
  if (!(rho > 0)) throw InputError("rho must be positive");
  const MMSpace& base = side == Side::X ? x : y;
  const MMSpace& other = side == Side::X ? y : x;
  if (!(c > 0) || c * other.diameter() >= 1.0) throw InputError("need 0 < c < 1/diam of the other side");
  auto metric = std::make_shared<PullbackMetric>(base.metric_ptr(), side_map(gamma, side), other.metric_ptr(),
                                                 side_map(gamma, side == Side::X ? Side::Y : Side::X),
                                                 c / (rho * rho));
  return MMSpace(base.label() + "-split", pair_ids(x, y, gamma), metric, entry_masses(gamma));
}

MMSpace reduced_space(const MMSpace& space, std::span<const Rational> marginal) {
  return space.with_weights(std::vector<Rational>(marginal.begin(), marginal.end()));
}

TransportOperator::TransportOperator(const Coupling& gamma, Side from) : from_(from) {
  if (!gamma.marginals_consistent()) throw InputError("coupling marginals are inconsistent");
  const bool xy = from == Side::X;
  source_size_ = xy ? gamma.nx : gamma.ny;
  const auto& target_marginal = xy ? gamma.marginal_y : gamma.marginal_x;
  rows_.resize(xy ? gamma.ny : gamma.nx);
  for (const auto& e : gamma.entries) {
    const Index src = xy ? e.x : e.y;
    const Index dst = xy ? e.y : e.x;
    Rational k = e.mass / target_marginal[dst];
    rows_[dst].push_back({src, k, to_double(k)});
  }
  for (const auto& row : rows_)
    if (row.empty()) throw InputError("coupling has a zero marginal on the target side");
}

std::vector<double> TransportOperator::apply(std::span<const double> u) const {
  if (u.size() != source_size_) throw InputError("function has wrong length");
  std::vector<double> out(rows_.size(), 0.0);
  for (Index t = 0; t < rows_.size(); ++t)
    for (const auto& term : rows_[t]) out[t] += term.weight * u[term.source];
  return out;
}

bool TransportOperator::rows_stochastic_exact() const {
  for (const auto& row : rows_) {
    Rational s(0);
    for (const auto& term : row) s += term.exact;
    if (s != 1) return false;
  }
  return true;
}

double metric_change_constant(double lambda) {
  return lambda + 4 * lambda * lambda + 4 * lambda * lambda * lambda;
}

double stability_constant(double lambda, double delta) {
  return 2 * metric_change_constant(std::exp(delta) * std::max(lambda, 1.0));
}

StabilityReport stability_check(const MMSpace& x, const MMSpace& y, const ClosenessCertificate& cert, double rho,
                                double lambda) {
  if (!(rho > 0) || !(lambda > 0)) throw InputError("rho and Lambda must be positive");
  StabilityReport r;
  r.rho = rho;
  r.eps = cert.eps;
  r.delta = cert.delta;
  r.lambda = lambda;
  r.constant = stability_constant(lambda, cert.delta);
  const double grow = 1 + r.constant * cert.eps / rho;
  const double lift = std::exp(4 * cert.delta);
  r.threshold = 1 / (lift * grow * rho * rho);
  r.audit_x = audit(x, lambda, rho, 2 * cert.eps);
  r.audit_y = audit(y, lambda, rho, 2 * cert.eps);
  r.preconditions_hold = cert.eps <= rho / 4 && verify_certificate(cert, x, y).ok() && r.audit_x.holds() &&
                         r.audit_y.holds();

  const double threshold = r.threshold;
  r.per_k = compare_spectra(full_spectrum(x, rho), full_spectrum(y, rho), rho, 1 / (lift * grow), lift * grow,
                            [threshold](double la) { return la < threshold; });
  for (const auto& c : r.per_k) {
    if (!c.checked) continue;
    ++r.checked;
    if (!c.within) r.holds = false;
  }
  return r;
}

MetricChangeReport metric_perturbation_check(const MMSpace& a, const MMSpace& b, double rho, double lambda,
                                             double eps) {
  if (a.size() != b.size() || a.exact_weights() != b.exact_weights())
    throw InputError("spaces must share points and weights");
  if (!(rho > 0) || !(lambda > 0) || !(eps > 0)) throw InputError("rho, Lambda and eps must be positive");
  MetricChangeReport r;
  r.rho = rho;
  r.eps = eps;
  r.lambda = lambda;
  r.constant = metric_change_constant(lambda);
  for (Index i = 0; i < a.size(); ++i)
    for (Index j = 0; j < i; ++j) r.max_distance_change = std::max(r.max_distance_change, std::abs(a.dist(i, j) - b.dist(i, j)));
  if (eps <= rho / 2) {
    r.audit_a = audit(a, lambda, rho, eps);
    r.audit_b = audit(b, lambda, rho, eps);
  }
  r.preconditions_hold = lambda >= 1 && eps <= rho / 2 && r.max_distance_change <= eps && r.audit_a.holds() &&
                         r.audit_b.holds();
  const double grow = 1 + r.constant * eps / rho;
  r.per_k = compare_spectra(full_spectrum(b, rho), full_spectrum(a, rho), rho, 1 / grow, grow,
                            [](double) { return true; });
  for (const auto& c : r.per_k) {
    if (!c.checked) continue;
    ++r.checked;
    if (!c.within) r.holds = false;
  }
  return r;
}

TxyReport verify_txy_bounds(const MMSpace& x, const MMSpace& y, const ClosenessCertificate& cert, double rho,
                            double lambda, std::span<const double> u) {
  if (!(rho > 0) || !(lambda > 0)) throw InputError("rho and Lambda must be positive");
  if (u.size() != x.size()) throw InputError("function has wrong length");
  TxyReport r;
  r.rho = rho;
  r.eps = cert.eps;
  r.delta = cert.delta;
  r.lambda = lambda;
  r.constant = stability_constant(lambda, cert.delta);
  r.amplitude = std::exp(cert.delta) * (1 + r.constant * cert.eps / rho);
  r.audit_x = audit(x, lambda, rho, 2 * cert.eps);
  r.audit_y = audit(y, lambda, rho, 2 * cert.eps);
  r.preconditions_hold = cert.eps <= rho / 4 && verify_certificate(cert, x, y).ok() && r.audit_x.holds() &&
                         r.audit_y.holds();

  const TransportOperator to_y(cert.coupling, Side::X);
  const TransportOperator to_x(cert.coupling, Side::Y);
  const auto tu = to_y.apply(u);
  auto back = to_x.apply(tu);
  for (Index i = 0; i < back.size(); ++i) back[i] -= u[i];

  const double r2 = rho * rho;
  r.norm_u = weighted_norm_sq(x, rho, u);
  r.norm_tu = weighted_norm_sq(y, rho, tu);
  r.energy_u = dirichlet_form(x, rho, u);
  r.energy_tu = dirichlet_form(y, rho, tu);
  r.roundtrip = weighted_norm_sq(x, rho, back);

  const double a = r.amplitude;
  r.slack_norm_lower = r.norm_tu - (r.norm_u / a - a * r2 * r.energy_u);
  r.slack_norm_upper = a * r.norm_u - r.norm_tu;
  r.slack_energy = a * r.energy_u - r.energy_tu;
  r.slack_roundtrip = a * r2 * r.energy_u - r.roundtrip;

  const double tol_norm = 1e-10 * std::max({r.norm_u, r.norm_tu, r2 * r.energy_u});
  const double tol_energy = 1e-10 * std::max(r.energy_u, r.energy_tu);
  r.holds = r.slack_norm_lower >= -tol_norm && r.slack_norm_upper >= -tol_norm &&
            r.slack_energy >= -tol_energy && r.slack_roundtrip >= -tol_norm;

  const double inf = std::numeric_limits<double>::infinity();
  auto need = [inf](double num, double den, double tol) {
    if (den > 0) return num / den;
    return num > tol ? inf : 0.0;
  };
  double req = need(r.norm_tu, r.norm_u, tol_norm);
  req = std::max(req, need(r.energy_tu, r.energy_u, tol_energy));
  req = std::max(req, need(r.roundtrip, r2 * r.energy_u, tol_norm));
  // A^-1 N - A rho^2 D <= T  <=>  rho^2 D A^2 + T A - N >= 0 for A > 0.
  const double q = r2 * r.energy_u;
  double lower_need;
  if (q > 0)
    lower_need = (-r.norm_tu + std::sqrt(r.norm_tu * r.norm_tu + 4 * q * r.norm_u)) / (2 * q);
  else
    lower_need = need(r.norm_u, r.norm_tu, tol_norm);
  r.required_amplitude = std::max(req, lower_need);
  return r;
}

}  // namespace rholap
