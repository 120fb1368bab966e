#include "rholap/io.hpp"

#include "rholap/errors.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>

namespace rholap {

namespace {

Json number(double v) {
  if (std::isfinite(v)) return v;
  return v > 0 ? Json("inf") : v < 0 ? Json("-inf") : Json("nan");
}

Json rationals(std::span<const Rational> v) {
  Json a = Json::array();
  for (const auto& q : v) a.push_back(to_string(q));
  return a;
}

Rational rational_field(const Json& j) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rational(j.get<long>());
  if (j.is_number()) return rational_from_double(j.get<double>());
  throw InputError("expected a decimal string or number");
}

std::vector<double> flat_coordinates(const Json& rows, std::size_t dim) {
  if (!rows.is_array()) throw InputError("coordinates must be an array");
  std::vector<double> out;
  out.reserve(rows.size() * dim);
  for (const auto& row : rows) {
    if (!row.is_array() || row.size() != dim) throw InputError("coordinate row has wrong length");
    for (const auto& v : row) out.push_back(v.get<double>());
  }
  return out;
}

Json coordinate_rows(const CoordinateMetric& m) {
  Json rows = Json::array();
  for (Index i = 0; i < m.size(); ++i) {
    Json row = Json::array();
    for (double v : m.point(i)) row.push_back(v);
    rows.push_back(std::move(row));
  }
  return rows;
}

Json matrix_rows(const Metric& m) {
  Json rows = Json::array();
  for (Index i = 0; i < m.size(); ++i) {
    Json row = Json::array();
    for (Index j = 0; j <= i; ++j) row.push_back(m.distance(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

MetricPtr metric_from_json(const Json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "matrix") {
    const Json& rows = j.at("distances");
    const Index n = rows.size();
    std::vector<double> d(n * n, 0.0);
    for (Index i = 0; i < n; ++i) {
      const Json& row = rows[i];
      if (row.size() == i + 1) {
        for (Index k = 0; k <= i; ++k) d[i * n + k] = d[k * n + i] = row[k].get<double>();
      } else if (row.size() == n) {
        for (Index k = 0; k < n; ++k) d[i * n + k] = row[k].get<double>();
      } else {
        throw InputError("distance row " + std::to_string(i) + " must be full or lower-triangular");
      }
    }
    return std::make_shared<MatrixMetric>(n, std::move(d));
  }
  if (kind == "euclidean") {
    const auto dim = j.at("dim").get<std::size_t>();
    return CoordinateMetric::euclidean(dim, flat_coordinates(j.at("coordinates"), dim));
  }
  if (kind == "sphere") {
    return CoordinateMetric::sphere(flat_coordinates(j.at("coordinates"), 3), j.value("radius", 1.0));
  }
  if (kind == "torus") {
    auto periods = j.at("periods").get<std::vector<double>>();
    const std::size_t dim = periods.size();
    return CoordinateMetric::torus(std::move(periods), flat_coordinates(j.at("coordinates"), dim));
  }
  throw InputError("unknown metric kind '" + kind + "'");
}

Json audit_pair(const AuditPair& a) { return {{"slv", report_to_json(a.slv)}, {"biv", report_to_json(a.biv)}}; }

Json ratio_rows(const std::vector<RatioCheck>& rows) {
  Json a = Json::array();
  for (const auto& r : rows) {
    a.push_back({{"k", r.k},
                 {"lambda_a", number(r.lambda_a)},
                 {"lambda_b", number(r.lambda_b)},
                 {"ratio", number(r.ratio)},
                 {"lower", number(r.lower)},
                 {"upper", number(r.upper)},
                 {"checked", r.checked},
                 {"within", r.within},
                 {"margin", number(r.margin)}});
  }
  return a;
}

}  // namespace

Json output_header(const Json& config) {
  return {{"tool", "rholap"}, {"version", kLibraryVersion}, {"format_version", kFormatVersion}, {"config", config}};
}

Json space_to_json(const MMSpace& space) {
  Json metric;
  const Metric& m = space.metric();
  const auto* coord = dynamic_cast<const CoordinateMetric*>(&m);
  if (coord != nullptr && m.kind() == MetricKind::Euclidean) {
    metric = {{"kind", "euclidean"}, {"dim", coord->dim()}, {"coordinates", coordinate_rows(*coord)}};
  } else if (coord != nullptr && m.kind() == MetricKind::Sphere) {
    metric = {{"kind", "sphere"}, {"radius", coord->radius()}, {"coordinates", coordinate_rows(*coord)}};
  } else if (coord != nullptr && m.kind() == MetricKind::Torus) {
    Json periods = Json::array();
    for (double p : coord->periods()) periods.push_back(p);
    metric = {{"kind", "torus"}, {"periods", periods}, {"coordinates", coordinate_rows(*coord)}};
  } else {
    metric = {{"kind", "matrix"}, {"distances", matrix_rows(m)}};
  }
  return {{"format_version", kFormatVersion},
          {"label", space.label()},
          {"points", space.ids()},
          {"metric", std::move(metric)},
          {"weights", rationals(space.exact_weights())}};
}

MMSpace space_from_json(const Json& j) {
  try {
    if (!j.is_object()) throw InputError("mm-space file must hold a JSON object");
    MetricPtr metric = metric_from_json(j.at("metric"));
    std::vector<Rational> w;
    for (const auto& v : j.at("weights")) w.push_back(rational_field(v));
    std::vector<std::string> ids;
    if (j.contains("points")) ids = j.at("points").get<std::vector<std::string>>();
    return MMSpace(j.value("label", std::string("space")), std::move(ids), std::move(metric), std::move(w));
  } catch (const Json::exception& e) {
    throw InputError(std::string("malformed mm-space JSON: ") + e.what());
  }
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw InputError(path + ": " + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path);
  out << text;
}

MMSpace load_space(const std::string& path) {
  const Json j = read_json_file(path);
  // discretize output keeps the net under "net".
  if (!j.contains("metric") && j.contains("net")) return space_from_json(j.at("net"));
  return space_from_json(j);
}

void save_space(const std::string& path, const MMSpace& space) {
  write_text_file(path, space_to_json(space).dump(1) + "\n");
}

Json coupling_to_json(const Coupling& c) {
  Json a = Json::array();
  for (const auto& e : c.entries) a.push_back(Json::array({e.x, e.y, to_string(e.mass)}));
  return a;
}

Json certificate_to_json(const ClosenessCertificate& cert) {
  Json cross = {{"mode", to_string(cert.cross.mode())}};
  if (cert.cross.mode() == CrossMetric::Mode::Explicit) {
    Json rows = Json::array();
    for (Index i = 0; i < cert.cross.nx(); ++i) {
      Json row = Json::array();
      for (Index k = 0; k < cert.cross.ny(); ++k) row.push_back(cert.cross(i, k));
      rows.push_back(std::move(row));
    }
    cross["matrix"] = std::move(rows);
  } else if (cert.cross.mode() == CrossMetric::Mode::Assignment) {
    cross["assignment"] = cert.cross.assigned();
    cross["offset"] = cert.cross.offset();
  }
  return {{"format_version", kFormatVersion},
          {"eps", cert.eps},
          {"delta", cert.delta},
          {"reduced_X", rationals(cert.reduced_x)},
          {"reduced_Y", rationals(cert.reduced_y)},
          {"coupling", coupling_to_json(cert.coupling)},
          {"cross", std::move(cross)}};
}

ClosenessCertificate certificate_from_json(const Json& j, const MMSpace& x, const MMSpace& y) {
  try {
    ClosenessCertificate c;
    c.eps = j.at("eps").get<double>();
    c.delta = j.at("delta").get<double>();
    for (const auto& v : j.at("reduced_X")) c.reduced_x.push_back(rational_field(v));
    for (const auto& v : j.at("reduced_Y")) c.reduced_y.push_back(rational_field(v));
    std::vector<Coupling::Entry> entries;
    for (const auto& e : j.at("coupling")) {
      if (!e.is_array() || e.size() != 3) throw InputError("coupling entries are [i, j, mass]");
      entries.push_back({e[0].get<Index>(), e[1].get<Index>(), rational_field(e[2])});
    }
    // Keep stored entries as written so that tampering stays detectable.
    Coupling g;
    g.nx = x.size();
    g.ny = y.size();
    g.marginal_x.assign(g.nx, Rational(0));
    g.marginal_y.assign(g.ny, Rational(0));
    for (const auto& e : entries) {
      if (e.x >= g.nx || e.y >= g.ny) throw InputError("coupling entry out of range");
      g.marginal_x[e.x] += e.mass;
      g.marginal_y[e.y] += e.mass;
    }
    g.entries = std::move(entries);
    c.coupling = std::move(g);

    const Json& cross = j.at("cross");
    const std::string mode = cross.at("mode").get<std::string>();
    if (mode == "shared") {
      c.cross = CrossMetric::shared(x, y);
    } else if (mode == "explicit") {
      std::vector<double> t;
      for (const auto& row : cross.at("matrix"))
        for (const auto& v : row) t.push_back(v.get<double>());
      c.cross = CrossMetric::explicit_matrix(x.size(), y.size(), std::move(t));
    } else if (mode == "assignment") {
      c.cross = CrossMetric::assignment(x, cross.at("assignment").get<std::vector<Index>>(),
                                        cross.value("offset", 0.0));
    } else {
      throw InputError("unknown cross metric mode '" + mode + "'");
    }
    return c;
  } catch (const Json::exception& e) {
    throw InputError(std::string("malformed certificate JSON: ") + e.what());
  }
}

ClosenessCertificate load_certificate(const std::string& path, const MMSpace& x, const MMSpace& y) {
  return certificate_from_json(read_json_file(path), x, y);
}

Json violator_to_json(const HallViolator& v) {
  return {{"side", v.side == Side::X ? "X" : "Y"},
          {"set", v.set},
          {"image", v.image},
          {"lhs", to_string(v.lhs)},
          {"rhs", to_string(v.rhs)},
          {"deficit", to_string(v.deficit)}};
}

Json certificate_check_to_json(const CertificateCheck& c) {
  return {{"ok", c.ok()},
          {"shape_ok", c.shape_ok},
          {"sandwich_ok", c.sandwich_ok},
          {"marginals_ok", c.marginals_ok},
          {"cross_ok", c.cross_ok},
          {"distortion_ok", c.distortion_ok},
          {"max_distortion", number(c.max_distortion)}};
}

Json report_to_json(const ConditionReport& r) {
  Json params;
  switch (r.condition) {
    case Condition::SLV:
    case Condition::BIV: params = {{"lambda", r.lambda}, {"rho", r.rho}, {"eps", r.eps}}; break;
    case Condition::Doubling: params = {{"lambda", r.lambda}, {"r_small", r.rho}, {"r_big", r.eps}}; break;
    case Condition::BishopGromov: {
      Json grid = Json::array();
      for (auto [a, b] : r.radii) grid.push_back(Json::array({a, b}));
      params = {{"lambda", r.lambda}, {"radii", grid}};
      break;
    }
  }
  Json witness = {{"point", r.witness}};
  if (r.witness_pair) witness["pair"] = *r.witness_pair;
  if (r.witness_radii) witness["radii"] = Json::array({r.witness_radii->first, r.witness_radii->second});
  Json j = {{"condition", to_string(r.condition)},
            {"params", params},
            {"holds", r.holds},
            {"worst_ratio", number(r.worst_ratio)},
            {"witness", witness},
            {"minimal_lambda", number(r.minimal_lambda)}};
  if (!r.per_point.empty()) {
    Json a = Json::array();
    for (double v : r.per_point) a.push_back(number(v));
    j["per_point"] = a;
  }
  return j;
}

Json report_to_json(const StabilityProbeReport& r) {
  return {{"lambda", r.lambda},
          {"rho", r.rho},
          {"eps", r.eps},
          {"delta", r.delta},
          {"preconditions_hold", r.preconditions_hold},
          {"conclusions_hold", r.conclusions_hold},
          {"consistent", r.consistent()},
          {"x_slv", report_to_json(r.x_slv)},
          {"x_biv", report_to_json(r.x_biv)},
          {"y_slv", report_to_json(r.y_slv)},
          {"y_biv", report_to_json(r.y_biv)}};
}

Json report_to_json(const StabilityReport& r) {
  return {{"rho", r.rho},
          {"eps", r.eps},
          {"delta", r.delta},
          {"lambda", r.lambda},
          {"constant", r.constant},
          {"threshold", r.threshold},
          {"preconditions_hold", r.preconditions_hold},
          {"audit_x", audit_pair(r.audit_x)},
          {"audit_y", audit_pair(r.audit_y)},
          {"checked", r.checked},
          {"holds", r.holds},
          {"per_k", ratio_rows(r.per_k)}};
}

Json report_to_json(const MetricChangeReport& r) {
  return {{"rho", r.rho},
          {"eps", r.eps},
          {"lambda", r.lambda},
          {"constant", r.constant},
          {"max_distance_change", r.max_distance_change},
          {"preconditions_hold", r.preconditions_hold},
          {"audit_a", audit_pair(r.audit_a)},
          {"audit_b", audit_pair(r.audit_b)},
          {"checked", r.checked},
          {"holds", r.holds},
          {"per_k", ratio_rows(r.per_k)}};
}

Json report_to_json(const TxyReport& r) {
  return {{"rho", r.rho},
          {"eps", r.eps},
          {"delta", r.delta},
          {"lambda", r.lambda},
          {"constant", r.constant},
          {"amplitude", r.amplitude},
          {"preconditions_hold", r.preconditions_hold},
          {"norm_u", r.norm_u},
          {"norm_tu", r.norm_tu},
          {"energy_u", r.energy_u},
          {"energy_tu", r.energy_tu},
          {"roundtrip", r.roundtrip},
          {"slack_norm_lower", r.slack_norm_lower},
          {"slack_norm_upper", r.slack_norm_upper},
          {"slack_energy", r.slack_energy},
          {"slack_roundtrip", r.slack_roundtrip},
          {"required_amplitude", number(r.required_amplitude)},
          {"holds", r.holds}};
}

Json report_to_json(const ManyEigenvaluesReport& r) {
  return {{"rho", r.rho},
          {"r", r.r},
          {"N", r.n},
          {"packing_exact", r.packing_exact},
          {"Q", number(r.q)},
          {"bound", number(r.bound)},
          {"lambda_N", number(r.lambda_n)},
          {"tent_bound", number(r.tent_bound)},
          {"holds", r.holds}};
}

Json report_to_json(const FewEigenvaluesReport& r) {
  return {{"rho", r.rho},
          {"lambda", r.lambda},
          {"c", r.c},
          {"preconditions_hold", r.preconditions_hold},
          {"biv", report_to_json(r.biv)},
          {"doubling", report_to_json(r.doubling)},
          {"N", r.n},
          {"packing_exact", r.packing_exact},
          {"count", r.count},
          {"holds", r.holds},
          {"empirical_c", number(r.empirical_c)}};
}

void write_spectrum_csv(std::ostream& out, const Spectrum& s, const Json& header) {
  out << "# " << header.dump() << "\n";
  out << "k,lambda,below_rho_inv2,residual\n";
  std::ostringstream line;
  line.precision(std::numeric_limits<double>::max_digits10);
  for (std::size_t i = 0; i < s.eigenvalues.size(); ++i) {
    line.str("");
    line << (i + 1) << ',' << s.eigenvalues[i] << ',' << (s.below_threshold[i] ? 1 : 0) << ',' << s.residuals[i]
         << '\n';
    out << line.str();
  }
}

Normalization parse_normalization(const std::string& text) {
  if (text == "per-ball") return Normalization::per_ball();
  if (text.rfind("constant:", 0) == 0) {
    const std::string v = text.substr(9);
    std::size_t used = 0;
    double phi = 0.0;
    try {
      phi = std::stod(v, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != v.size() || v.empty()) throw InputError("bad constant normalization '" + v + "'");
    return Normalization::constant_value(phi);
  }
  if (text.rfind("file:", 0) == 0) {
    const std::string path = text.substr(5);
    std::ifstream in(path);
    if (!in) throw InputError("cannot open " + path);
    std::vector<double> values;
    double v;
    while (in >> v) values.push_back(v);
    if (!in.eof()) throw InputError("malformed normalization file " + path);
    return Normalization::custom_values(std::move(values));
  }
  throw InputError("normalization must be per-ball, constant:<phi> or file:<path>");
}

}  // namespace rholap
