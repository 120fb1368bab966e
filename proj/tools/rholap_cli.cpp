#include "rholap/coupling_ops.hpp"
#include "rholap/eigensolver.hpp"
#include "rholap/errors.hpp"
#include "rholap/generators.hpp"
#include "rholap/io.hpp"
#include "rholap/laplacian.hpp"
#include "rholap/regularity.hpp"
#include "rholap/transport.hpp"
#include "rholap/weyl.hpp"

#include "CLI11.hpp"

#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>

using namespace rholap;

namespace {

constexpr int kOk = 0;
constexpr int kFails = 1;
constexpr int kInputError = 2;

struct Config {
  std::string subcommand;
  std::vector<std::string> inputs;
  std::string output;
  std::string cert_path;
  std::string kind = "circle";
  std::size_t n = 100;
  std::uint64_t seed = 0;
  double length = 2 * std::numbers::pi;
  double period_x = 2 * std::numbers::pi;
  double period_y = 2 * std::numbers::pi;
  double gap = 10.0;
  double t = 1.0;
  double jitter = 0.0;
  double reweight = 0.0;
  double rho = 0.0;
  std::size_t k = 10;
  std::string normalization = "per-ball";
  std::string solver = "auto";
  double tol = 1e-10;
  double eps = 0.0;
  double delta = 0.0;
  double lambda = 0.0;
  std::string condition = "all";
  double r_small = 0.0;
  double r_big = 0.0;
  std::vector<double> radii;
  std::string cross = "shared";
  std::size_t vectors = 4;
  std::size_t packing_budget = 10'000'000;
  bool seeded_order = false;

  Json to_json() const {
    Json j = {{"subcommand", subcommand}, {"inputs", inputs}, {"output", output}};
    if (subcommand == "generate") {
      j.update({{"kind", kind}, {"n", n}, {"seed", seed}, {"length", length}, {"period_x", period_x},
                {"period_y", period_y}, {"gap", gap}, {"t", t}, {"jitter", jitter}, {"reweight", reweight}});
    } else if (subcommand == "spectrum") {
      j.update({{"rho", rho}, {"k", k}, {"normalization", normalization}, {"solver", solver}, {"tol", tol},
                {"seed", seed}});
    } else if (subcommand == "audit") {
      j.update({{"condition", condition}, {"lambda", lambda}, {"rho", rho}, {"eps", eps}, {"r_small", r_small},
                {"r_big", r_big}, {"radii", radii}});
    } else if (subcommand == "certify") {
      j.update({{"eps", eps}, {"delta", delta}, {"cross", cross}});
    } else if (subcommand == "discretize") {
      j.update({{"eps", eps}, {"seed", seed}, {"seeded_order", seeded_order}, {"cert", cert_path}});
    } else if (subcommand == "compare") {
      j.update({{"cert", cert_path}, {"rho", rho}, {"lambda", lambda}, {"vectors", vectors}});
    } else if (subcommand == "weyl") {
      j.update({{"rho", rho}, {"lambda", lambda}, {"radii", radii}, {"packing_budget", packing_budget}});
    }
    return j;
  }
};

void emit(const Config& cfg, const std::string& text) {
  if (cfg.output.empty() || cfg.output == "-") {
    std::cout << text;
  } else {
    write_text_file(cfg.output, text);
  }
}

void emit_json(const Config& cfg, Json body) {
  Json out = {{"header", output_header(cfg.to_json())}};
  for (auto& [key, value] : body.items()) out[key] = std::move(value);
  emit(cfg, out.dump(1) + "\n");
}

SolverKind parse_solver(const std::string& s) {
  if (s == "auto") return SolverKind::Auto;
  if (s == "dense") return SolverKind::Dense;
  if (s == "iterative") return SolverKind::Iterative;
  throw InputError("solver must be auto, dense or iterative");
}

void require_positive(double v, const char* name) {
  if (!(v > 0)) throw InputError(std::string("--") + name + " must be positive");
}

int cmd_generate(const Config& cfg) {
  MMSpace space = [&] {
    if (cfg.kind == "circle") return circle(cfg.n, cfg.length);
    if (cfg.kind == "sphere") return sphere(cfg.n, cfg.seed);
    if (cfg.kind == "torus") return flat_torus(cfg.n, cfg.period_x, cfg.period_y);
    if (cfg.kind == "interval") return interval(cfg.n, cfg.length);
    if (cfg.kind == "two-components") return two_components(cfg.n, cfg.length, cfg.gap, cfg.t);
    throw InputError("unknown kind '" + cfg.kind + "'");
  }();
  if (cfg.jitter > 0) space = perturb_metric(space, cfg.jitter, cfg.seed);
  if (cfg.reweight > 0) space = perturb_measure(space, cfg.reweight, cfg.seed + 1);
  emit_json(cfg, space_to_json(space));
  return kOk;
}

int cmd_spectrum(const Config& cfg) {
  require_positive(cfg.rho, "rho");
  const MMSpace space = load_space(cfg.inputs.at(0));
  const RhoOperator op = RhoOperator::assemble(space, cfg.rho, parse_normalization(cfg.normalization));
  SpectrumOptions opts;
  opts.solver = parse_solver(cfg.solver);
  opts.tol = cfg.tol;
  if (cfg.seed != 0) opts.seed = cfg.seed;
  const std::size_t k = std::min<std::size_t>(cfg.k, op.size());
  const Spectrum s = low_spectrum(op, k, opts);
  std::ostringstream out;
  write_spectrum_csv(out, s, output_header(cfg.to_json()));
  emit(cfg, out.str());
  return kOk;
}

int cmd_audit(const Config& cfg) {
  require_positive(cfg.lambda, "lambda");
  const MMSpace space = load_space(cfg.inputs.at(0));
  const bool all = cfg.condition == "all";
  Json reports = Json::array();
  bool holds = true;
  bool any = false;
  auto add = [&](const ConditionReport& r) {
    holds = holds && r.holds;
    any = true;
    reports.push_back(report_to_json(r));
  };
  if (all || cfg.condition == "slv") add(check_slv(space, cfg.lambda, cfg.rho, cfg.eps));
  if (all || cfg.condition == "biv") add(check_biv(space, cfg.lambda, cfg.rho, cfg.eps));
  if (all || cfg.condition == "doubling") {
    const double small = cfg.r_small > 0 ? cfg.r_small : cfg.rho;
    const double big = cfg.r_big > 0 ? cfg.r_big : 2 * small;
    add(check_doubling(space, cfg.lambda, small, big));
  }
  if (all || cfg.condition == "bishop-gromov") {
    std::vector<double> radii = cfg.radii;
    if (radii.empty()) radii = {cfg.rho / 2, cfg.rho, 2 * cfg.rho};
    add(check_bishop_gromov(space, cfg.lambda, radius_pairs(radii)));
  }
  if (!any) throw InputError("unknown condition '" + cfg.condition + "'");
  emit_json(cfg, {{"holds", holds}, {"reports", reports}});
  return holds ? kOk : kFails;
}

CrossMetric parse_cross(const std::string& spec, const MMSpace& x, const MMSpace& y) {
  if (spec == "shared") return CrossMetric::shared(x, y);
  const auto colon = spec.find(':');
  if (colon == std::string::npos) throw InputError("cross must be shared, explicit:<path> or assignment:<path>");
  const std::string mode = spec.substr(0, colon);
  const Json j = read_json_file(spec.substr(colon + 1));
  if (mode == "explicit") {
    std::vector<double> t;
    for (const auto& row : j)
      for (const auto& v : row) t.push_back(v.get<double>());
    return CrossMetric::explicit_matrix(x.size(), y.size(), std::move(t));
  }
  if (mode == "assignment") {
    if (j.is_array()) return CrossMetric::assignment(x, j.get<std::vector<Index>>());
    return CrossMetric::assignment(x, j.at("assignment").get<std::vector<Index>>(), j.value("offset", 0.0));
  }
  throw InputError("unknown cross mode '" + mode + "'");
}

int cmd_certify(const Config& cfg) {
  const MMSpace x = load_space(cfg.inputs.at(0));
  const MMSpace y = load_space(cfg.inputs.at(1));
  const CrossMetric cross = parse_cross(cfg.cross, x, y);
  const CertifyResult r = certify_closeness(x, y, cross, cfg.eps, cfg.delta);
  if (r.certified()) {
    emit_json(cfg, {{"certified", true}, {"certificate", certificate_to_json(*r.certificate)}});
    return kOk;
  }
  emit_json(cfg, {{"certified", false},
                  {"note", "closeness refuted for the supplied cross metric only"},
                  {"violator", violator_to_json(*r.violator)}});
  return kFails;
}

int cmd_discretize(const Config& cfg) {
  require_positive(cfg.eps, "eps");
  const MMSpace x = load_space(cfg.inputs.at(0));
  std::vector<Index> order;
  if (cfg.seeded_order) order = seeded_permutation(x.size(), cfg.seed);
  const Discretization d = discretize(x, cfg.eps, order);
  const CertificateCheck check = verify_certificate(d.certificate, x, d.net);
  if (!cfg.cert_path.empty()) {
    Json cert = certificate_to_json(d.certificate);
    cert["header"] = output_header(cfg.to_json());
    write_text_file(cfg.cert_path, cert.dump(1) + "\n");
  }
  emit_json(cfg, {{"net", space_to_json(d.net)},
                  {"certificate", certificate_to_json(d.certificate)},
                  {"verification", certificate_check_to_json(check)}});
  return check.ok() ? kOk : kFails;
}

int cmd_compare(const Config& cfg) {
  require_positive(cfg.rho, "rho");
  require_positive(cfg.lambda, "lambda");
  if (cfg.cert_path.empty()) throw InputError("--cert is required");
  const MMSpace x = load_space(cfg.inputs.at(0));
  const MMSpace y = load_space(cfg.inputs.at(1));
  const ClosenessCertificate cert = load_certificate(cfg.cert_path, x, y);
  const CertificateCheck check = verify_certificate(cert, x, y);
  const StabilityReport stab = stability_check(x, y, cert, cfg.rho, cfg.lambda);

  // Low eigenvectors of X serve as the test functions for the transport bounds.
  const RhoOperator op = RhoOperator::assemble(x, cfg.rho);
  SpectrumOptions opts;
  opts.solver = SolverKind::Dense;
  opts.want_vectors = true;
  const std::size_t m = std::min<std::size_t>(cfg.vectors + 1, x.size());
  const Spectrum s = low_spectrum(op, m, opts);
  Json txy = Json::array();
  bool txy_holds = true;
  for (std::size_t i = 0; i < m; ++i) {
    const Eigen::VectorXd col = s.eigenvectors.col(static_cast<Eigen::Index>(i));
    std::vector<double> u(col.data(), col.data() + col.size());
    const TxyReport r = verify_txy_bounds(x, y, cert, cfg.rho, cfg.lambda, u);
    txy_holds = txy_holds && r.holds;
    Json j = report_to_json(r);
    j["eigen_index"] = i + 1;
    txy.push_back(std::move(j));
  }
  const bool holds = check.ok() && stab.preconditions_hold && stab.holds && txy_holds;
  emit_json(cfg, {{"holds", holds},
                  {"certificate_check", certificate_check_to_json(check)},
                  {"stability", report_to_json(stab)},
                  {"transport", txy}});
  return holds ? kOk : kFails;
}

int cmd_weyl(const Config& cfg) {
  require_positive(cfg.rho, "rho");
  const MMSpace space = load_space(cfg.inputs.at(0));
  const double lambda = cfg.lambda > 0 ? cfg.lambda : few_eigenvalues_lambda(space, cfg.rho);
  std::vector<double> radii = cfg.radii;
  if (radii.empty()) radii = {cfg.rho, 2 * cfg.rho, 4 * cfg.rho};
  const FewEigenvaluesReport few = few_eigenvalues_check(space, cfg.rho, lambda, {}, cfg.packing_budget);
  bool holds = few.holds;
  Json many = Json::array();
  for (double r : radii) {
    const ManyEigenvaluesReport rep = many_eigenvalues_check(space, cfg.rho, r, {}, cfg.packing_budget);
    holds = holds && rep.holds;
    many.push_back(report_to_json(rep));
  }
  emit_json(cfg, {{"holds", holds}, {"upper_bound", report_to_json(few)}, {"lower_bound", many}});
  return holds ? kOk : kFails;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"rho-Laplacians on finite metric-measure spaces"};
  app.set_version_flag("--version",
                       std::string("rholap ") + kLibraryVersion + " (format " + std::to_string(kFormatVersion) + ")");
  app.require_subcommand(1);
  Config cfg;

  auto* gen = app.add_subcommand("generate", "write a model mm-space");
  gen->add_option("--kind", cfg.kind, "circle | sphere | torus | interval | two-components");
  gen->add_option("--n", cfg.n, "point count (per side for the torus, per component for two-components)");
  gen->add_option("--seed", cfg.seed);
  gen->add_option("--length", cfg.length, "circle or interval length");
  gen->add_option("--period-x", cfg.period_x);
  gen->add_option("--period-y", cfg.period_y);
  gen->add_option("--gap", cfg.gap, "distance between the two components");
  gen->add_option("--t", cfg.t, "mass ratio of the second component");
  gen->add_option("--jitter", cfg.jitter, "metric jitter amplitude");
  gen->add_option("--reweight", cfg.reweight, "log-scale weight noise");
  gen->add_option("-o,--output", cfg.output);

  auto* spec = app.add_subcommand("spectrum", "low spectrum as CSV");
  spec->add_option("input", cfg.inputs)->required()->expected(1);
  spec->add_option("--rho", cfg.rho)->required();
  spec->add_option("--k", cfg.k);
  spec->add_option("--normalization", cfg.normalization, "per-ball | constant:<phi> | file:<path>");
  spec->add_option("--solver", cfg.solver, "auto | dense | iterative");
  spec->add_option("--tol", cfg.tol);
  spec->add_option("--seed", cfg.seed);
  spec->add_option("-o,--output", cfg.output);

  auto* aud = app.add_subcommand("audit", "regularity audits; exit 0 iff all hold");
  aud->add_option("input", cfg.inputs)->required()->expected(1);
  aud->add_option("--condition", cfg.condition, "slv | biv | doubling | bishop-gromov | all");
  aud->add_option("--lambda", cfg.lambda)->required();
  aud->add_option("--rho", cfg.rho)->required();
  aud->add_option("--eps", cfg.eps);
  aud->add_option("--r-small", cfg.r_small);
  aud->add_option("--r-big", cfg.r_big);
  aud->add_option("--radii", cfg.radii, "radius list for the Bishop-Gromov grid");
  aud->add_option("-o,--output", cfg.output);

  auto* cer = app.add_subcommand("certify", "closeness certificate or Hall violator");
  cer->add_option("inputs", cfg.inputs)->required()->expected(2);
  cer->add_option("--eps", cfg.eps)->required();
  cer->add_option("--delta", cfg.delta);
  cer->add_option("--cross", cfg.cross, "shared | explicit:<path> | assignment:<path>");
  cer->add_option("-o,--output", cfg.output);

  auto* dis = app.add_subcommand("discretize", "greedy net with basin certificate");
  dis->add_option("input", cfg.inputs)->required()->expected(1);
  dis->add_option("--eps", cfg.eps)->required();
  dis->add_option("--seed", cfg.seed)->each([&](const std::string&) { cfg.seeded_order = true; });
  dis->add_option("--cert", cfg.cert_path, "also write the certificate here");
  dis->add_option("-o,--output", cfg.output);

  auto* cmp = app.add_subcommand("compare", "eigenvalue stability and transport bounds");
  cmp->add_option("inputs", cfg.inputs)->required()->expected(2);
  cmp->add_option("--cert", cfg.cert_path)->required();
  cmp->add_option("--rho", cfg.rho)->required();
  cmp->add_option("--lambda", cfg.lambda)->required();
  cmp->add_option("--vectors", cfg.vectors, "nontrivial eigenvectors used as test functions");
  cmp->add_option("-o,--output", cfg.output);

  auto* wey = app.add_subcommand("weyl", "Weyl-type eigenvalue count bounds");
  wey->add_option("input", cfg.inputs)->required()->expected(1);
  wey->add_option("--rho", cfg.rho)->required();
  wey->add_option("--lambda", cfg.lambda, "defaults to the smallest passing value");
  wey->add_option("--r", cfg.radii, "radii for the lower bound (default rho, 2 rho, 4 rho)");
  wey->add_option("--packing-budget", cfg.packing_budget);
  wey->add_option("-o,--output", cfg.output);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInputError;
  }

  try {
    if (gen->parsed()) return cfg.subcommand = "generate", cmd_generate(cfg);
    if (spec->parsed()) return cfg.subcommand = "spectrum", cmd_spectrum(cfg);
    if (aud->parsed()) return cfg.subcommand = "audit", cmd_audit(cfg);
    if (cer->parsed()) return cfg.subcommand = "certify", cmd_certify(cfg);
    if (dis->parsed()) return cfg.subcommand = "discretize", cmd_discretize(cfg);
    if (cmp->parsed()) return cfg.subcommand = "compare", cmd_compare(cfg);
    if (wey->parsed()) return cfg.subcommand = "weyl", cmd_weyl(cfg);
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInputError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFails;
  }
  return kInputError;
}
