#include <gtest/gtest.h>

#include "pencil/json_io.hpp"
#include "pencil/suites.hpp"

using namespace pencil;

TEST(Json, ConfigRoundTrip) {
  Rng rng(1);
  const PencilConfig cfg = random_config(3, rng);
  const Json j = config_to_json(cfg);
  EXPECT_EQ(j["n"], 3);
  EXPECT_EQ(j["mu"].size(), 6u);
  EXPECT_EQ(j["mu"][0].size(), 2u);
  const PencilConfig back = config_from_json(Json::parse(j.dump()));
  EXPECT_EQ(back.n, cfg.n);
  EXPECT_EQ(back.mu, cfg.mu);
}

TEST(Json, ConfigValidation) {
  EXPECT_THROW(config_from_json(Json::parse(R"({"n": 2, "mu": [0, 1, 2, 3, 3]})")), PencilError);
  EXPECT_THROW(config_from_json(Json::parse(R"({"n": 2})")), PencilError);
  EXPECT_THROW(config_from_json(Json::parse(R"({"n": 2, "mu": [[0, 1, 2], 1, 2, 3, 4]})")), PencilError);
  EXPECT_NO_THROW(config_from_json(Json::parse(R"({"n": 2, "mu": [0, [1, 0], 2, 3, 4]})")));
}

TEST(Json, SpectralValueShape) {
  Rng rng(2);
  const PencilConfig cfg = random_config(3, rng);
  const CotangentSample s = sample_cotangent(cfg, rng);
  const SpectralValue v = spectral_value(cfg, s);
  const Json j = spectral_value_to_json(v);
  EXPECT_EQ(j["s"].size(), 6u);
  EXPECT_EQ(j["roots"].size(), 2u);
  EXPECT_EQ(j["psi"].size(), v.psi.coeffs().size());
  EXPECT_EQ(complex_from_json(j["s"][1]), v.s(1));
}

TEST(Json, PlaneLiftShape) {
  Rng rng(3);
  const PencilConfig cfg = random_config(2, rng);
  const CotangentSample s = sample_cotangent(cfg, rng);
  const Json j = plane_lift_to_json(plane_lift(cfg, tangent_frame(cfg, s.point), s));
  EXPECT_EQ(j["lambda"].size(), 1u);
  EXPECT_EQ(j["plane"].size(), 2u);        // n basis vectors
  EXPECT_EQ(j["plane"][0].size(), 6u);     // of length 2n+2
}

TEST(Json, HyperellipticRoundTrip) {
  const HyperellipticData d = make_hyperelliptic({0.0, 1.0, 2.0, Complex(3.0, 1.0), 4.0, 5.0});
  const HyperellipticData back = hyperelliptic_from_json(Json::parse(hyperelliptic_to_json(d).dump()));
  EXPECT_EQ(back.genus, 2);
  EXPECT_EQ(back.branch, d.branch);
  Json bad = hyperelliptic_to_json(d);
  bad["genus"] = 4;
  EXPECT_THROW(hyperelliptic_from_json(bad), PencilError);
}

TEST(Json, ReportShape) {
  Rng rng(4);
  const Json j = report_to_json(s0_pushforward_identity(random_exact_config(2, rng), rng));
  EXPECT_EQ(j["suite"], "s0_pushforward");
  EXPECT_TRUE(j["pass"].get<bool>());
  EXPECT_EQ(j["identities"][0]["draws"], 50);
}

TEST(Certificate, PassSemanticsAndOrdering) {
  Certificate c;
  c.cfg = integer_config(2);
  EXPECT_FALSE(c.pass());
  c.checks.push_back({"zeta", "a", 1, 0.0, 0.0, true});
  c.checks.push_back({"alpha", "b", 1, 0.0, 0.0, true});
  EXPECT_TRUE(c.pass());
  CheckRecord skipped{"mid", "c", 0, 0.0, 0.0, false, true, "not applicable"};
  c.checks.push_back(skipped);
  EXPECT_TRUE(c.pass());
  const Json j = certificate_to_json(c);
  EXPECT_EQ(j["schema"], 1);
  EXPECT_EQ(j["checks"][0]["name"], "alpha");
  EXPECT_EQ(j["checks"][1]["name"], "mid");
  EXPECT_EQ(j["checks"][1]["reason"], "not applicable");
  EXPECT_TRUE(j["checks"][0].contains("anchor"));
  c.checks.push_back({"beta", "d", 1, 2.0, 1.0, false});
  EXPECT_FALSE(c.pass());
  EXPECT_FALSE(certificate_to_json(c)["pass"].get<bool>());
}

TEST(Suites, DeterministicCertificates) {
  SuiteOptions o;
  o.cfg = integer_config(2);
  o.seed = 5;
  o.samples = 20;
  Json a = certificate_to_json(run_verify(o, Suite::All));
  Json b = certificate_to_json(run_verify(o, Suite::All));
  a.erase("wall_time_s");
  b.erase("wall_time_s");
  EXPECT_EQ(a, b);
  EXPECT_TRUE(a["pass"].get<bool>());
}

TEST(Suites, ChecksIndependentOfSuiteSelection) {
  SuiteOptions o;
  o.cfg = integer_config(3);
  o.seed = 11;
  o.samples = 20;
  const Certificate all = run_verify(o, Suite::All);
  const Certificate geo = run_verify(o, Suite::Geometry);
  for (const CheckRecord& g : geo.checks) {
    const auto it = std::find_if(all.checks.begin(), all.checks.end(), [&](const CheckRecord& r) { return r.name == g.name; });
    ASSERT_NE(it, all.checks.end());
    EXPECT_EQ(it->max_residual, g.max_residual) << g.name;
  }
}

TEST(Suites, Tolerances) {
  SuiteOptions o;
  EXPECT_THROW(override_tolerance(o, "nonsense", 1.0), PencilError);
  EXPECT_THROW(override_tolerance(o, "gram", -1.0), PencilError);
  override_tolerance(o, "gram", 0.0);
  EXPECT_EQ(o.tolerances["gram"], 0.0);
  EXPECT_EQ(parse_suite("dynamics"), Suite::Dynamics);
  EXPECT_THROW(parse_suite("everything"), PencilError);
}

TEST(Suites, ImpossibleToleranceFails) {
  SuiteOptions o;
  o.cfg = integer_config(2);
  o.samples = 10;
  override_tolerance(o, "homogeneity", 0.0);
  override_tolerance(o, "gauge", 0.0);
  const Certificate c = run_verify(o, Suite::Geometry);
  EXPECT_FALSE(c.pass());
}
