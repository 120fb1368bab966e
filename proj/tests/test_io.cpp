#include "doctest.h"
#include "support.hpp"

#include "rholap/errors.hpp"
#include "rholap/io.hpp"

#include <filesystem>
#include <numbers>
#include <sstream>

using namespace rholap;
using namespace testing;

TEST_CASE("rationals") {
  CHECK(parse_rational("12") == 12);
  CHECK(parse_rational("-0.125") == Rational(-1, 8));
  CHECK(parse_rational("3.5e-2") == Rational(7, 200));
  CHECK(parse_rational("7/3") == Rational(7, 3));
  CHECK_THROWS_AS(parse_rational("abc"), InputError);
  CHECK_THROWS_AS(parse_rational("1/0"), InputError);
  CHECK(to_string(Rational(1, 8)) == "0.125");
  CHECK(to_string(Rational(1, 3)) == "1/3");
  for (double v : {0.1, 1.0 / 3, 2 * std::numbers::pi / 7, 1e-300})
    CHECK(to_double(parse_rational(to_string(rational_from_double(v)))) == v);
  CHECK(exp_neg_factor(0.0) == 1);
  CHECK(to_double(exp_neg_factor(0.5)) == std::exp(-0.5));
}

TEST_CASE("space round trips") {
  std::mt19937_64 rng(1);
  for (const MMSpace& s : {random_space(rng, 6), circle(9, 2.0), sphere(12, 3), flat_torus(3, 1.0, 2.0),
                           two_components(4, 2.0, 5.0, 0.5)}) {
    const MMSpace back = space_from_json(space_to_json(s));
    REQUIRE(back.size() == s.size());
    CHECK(back.ids() == s.ids());
    CHECK(back.exact_weights() == s.exact_weights());
    for (Index i = 0; i < s.size(); ++i)
      for (Index j = 0; j < s.size(); ++j) CHECK(back.dist(i, j) == s.dist(i, j));
    CHECK(space_to_json(back).dump() == space_to_json(s).dump());
  }
}

TEST_CASE("matrix files accept full or lower rows") {
  const Json lower = Json::parse(R"({"label":"m","points":["a","b","c"],
    "metric":{"kind":"matrix","distances":[[0],[1,0],[2,1,0]]},"weights":["0.5","1/3","2"]})");
  const Json full = Json::parse(R"({"label":"m","points":["a","b","c"],
    "metric":{"kind":"matrix","distances":[[0,1,2],[1,0,1],[2,1,0]]},"weights":["0.5","1/3","2"]})");
  const MMSpace a = space_from_json(lower), b = space_from_json(full);
  CHECK(a.dist(0, 2) == 2.0);
  CHECK(b.dist(2, 0) == 2.0);
  CHECK(a.exact_weight(1) == Rational(1, 3));
  const Json bad = Json::parse(R"({"label":"m","points":["a","b"],"metric":{"kind":"matrix","distances":[[0,1,2],[1]]},"weights":["1","1"]})");
  CHECK_THROWS_AS(space_from_json(bad), InputError);
  CHECK_THROWS_AS(space_from_json(Json::parse(R"({"points":[]})")), InputError);
}

TEST_CASE("certificate round trip keeps tampering visible") {
  const MMSpace x = circle(50, 2 * std::numbers::pi);
  const Discretization d = discretize(x, 0.3);
  Json j = certificate_to_json(d.certificate);
  const ClosenessCertificate back = certificate_from_json(j, x, d.net);
  CHECK(verify_certificate(back, x, d.net).ok());
  CHECK(back.cross.mode() == CrossMetric::Mode::Assignment);

  j["coupling"][0][2] = "1000";
  CHECK_FALSE(verify_certificate(certificate_from_json(j, x, d.net), x, d.net).ok());
}

TEST_CASE("spectrum CSV and normalization flags") {
  const RhoOperator op = RhoOperator::assemble(circle(40, 2 * std::numbers::pi), 0.5);
  const Spectrum sp = low_spectrum(op, 3);
  std::ostringstream out;
  write_spectrum_csv(out, sp, output_header({{"rho", 0.5}}));
  const std::string text = out.str();
  CHECK(text.rfind("# ", 0) == 0);
  CHECK(text.find("k,lambda,below_rho_inv2,residual") != std::string::npos);
  CHECK(text.find("\"version\":\"1.0.0\"") != std::string::npos);

  CHECK(parse_normalization("per-ball").kind == Normalization::Kind::PerBall);
  const Normalization c = parse_normalization("constant:0.25");
  CHECK(c.kind == Normalization::Kind::Constant);
  CHECK(c.constant == 0.25);
  CHECK_THROWS_AS(parse_normalization("constant:x"), InputError);
  CHECK_THROWS_AS(parse_normalization("file:/nonexistent/phi.txt"), InputError);
  CHECK_THROWS_AS(parse_normalization("other"), InputError);
}

TEST_CASE("reports serialize non-finite values as strings") {
  const MMSpace s("pair", {"a", "b"}, std::make_shared<MatrixMetric>(2, std::vector<double>{0, 1, 1, 0}),
                  {Rational(1), Rational(1)});
  const ConditionReport r = check_biv(s, 1.0, 0.8, 0.4);
  const Json j = report_to_json(r);
  CHECK(j["minimal_lambda"] == "inf");
  CHECK(j["holds"] == false);
}
