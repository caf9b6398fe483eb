#include <doctest.h>

#include <cmath>
#include <omp.h>

#include "ggsel/errors.hpp"
#include "ggsel/io.hpp"
#include "ggsel/simharness.hpp"

using namespace ggsel;
using namespace ggsel::sim;

TEST_CASE("scenario presets carry the study parameters") {
  const Scenario s1 = preset_scenario("S1");
  CHECK(s1.params.a == 0.013);
  CHECK(s1.params.b == 0.092);
  CHECK(s1.params.sigma2 == 0.0625);
  CHECK(preset_scenario("S2").params.sigma2 == 0.03);
  const Scenario s3 = preset_scenario("S3");
  CHECK(s3.params.a == 0.0198);
  CHECK(s3.params.b == 0.0726);
  CHECK(s3.params.sigma2 == 0.0);
  CHECK_THROWS_AS(preset_scenario("S4"), ArgumentError);
}

TEST_CASE("calibrate_cohort inverts the window survival") {
  Scenario sc = preset_scenario("S1");
  sc.target_n = 10000;
  const long long n0 = calibrate_cohort(sc);
  CHECK(std::llabs(n0 - 71430) < 100);
  CHECK(n0 == std::llround(10000.0 / survival(sc.params, 30.0)));

  Scenario s3 = preset_scenario("S3");
  s3.target_n = 5000;
  CHECK(calibrate_cohort(s3) ==
        std::llround(5000.0 / std::exp(-(0.0198 / 0.0726) * std::expm1(0.0726 * 30))));

  sc.window_age = sc.origin_age;
  CHECK(calibrate_cohort(sc) == sc.target_n);
}

TEST_CASE("generate_replication: determinism, support, and binomial size bound") {
  Scenario sc = preset_scenario("S1");
  sc.target_n = 20000;
  sc.master_seed = 99;

  const Sample a = generate_replication(sc, 3);
  const Sample b = generate_replication(sc, 3);
  CHECK(a.lifespans == b.lifespans);
  CHECK(a.truncation == 30.0);
  for (double y : a.lifespans) CHECK(y > 30.0);

  const Sample c = generate_replication(sc, 4);
  CHECK(a.lifespans != c.lifespans);

  const double n0 = static_cast<double>(calibrate_cohort(sc));
  const double p = survival(sc.params, 30.0);
  const double bound = 3.0 * std::sqrt(n0 * p * (1.0 - p));
  CHECK(std::fabs(static_cast<double>(a.n()) - 20000.0) < bound);
}

TEST_CASE("run_scenario: determinism and thread-count invariance") {
  Scenario sc = preset_scenario("S1");
  sc.target_n = 400;
  sc.replications = 6;
  sc.master_seed = 1234;
  const std::vector<FocusSpec> foci = {{FocusKind::Sigma2, 0.0},
                                       {FocusKind::LogHazardCurvature, 40.0}};
  const std::vector<std::string> crit = {"fic_mae", "pretest", "aic_star", "lrt"};

  const auto m1 = run_scenario(sc, crit, foci);
  const auto m2 = run_scenario(sc, crit, foci);
  CHECK(io::metrics_to_json(m1).dump() == io::metrics_to_json(m2).dump());

  const int saved = omp_get_max_threads();
  omp_set_num_threads(1);
  const auto m3 = run_scenario(sc, crit, foci);
  omp_set_num_threads(saved);
  CHECK(io::metrics_to_json(m1).dump() == io::metrics_to_json(m3).dump());

  CHECK(m1.n_failed == 0);
  CHECK(m1.criterion_keys.size() == 5);  // fic per focus + pretest + aic + lrt
  for (const auto& key : m1.criterion_keys) {
    const auto& cs = m1.criteria.at(key);
    CHECK(cs.proportion_full >= 0.0);
    CHECK(cs.proportion_full <= 1.0);
  }
  CHECK(m1.foci.count("sigma2") == 1);
  CHECK(m1.foci.count("curvature@100") == 1);
  CHECK(m1.foci.at("curvature@100").mu_true ==
        doctest::Approx(log_hazard_curvature(sc.params, 40.0)).epsilon(1e-14));
  // the chosen estimate equals the chosen model's estimate, so the scaled
  // error of fic_mae-selected mu never exceeds the worse of the two models
  CHECK(m1.foci.at("sigma2").per_criterion.count("fic_mae:sigma2") == 1);
}

TEST_CASE("run_scenario rejects unknown criteria") {
  Scenario sc = preset_scenario("S3");
  sc.target_n = 100;
  sc.replications = 2;
  CHECK_THROWS_AS(run_scenario(sc, {"bic"}, {{FocusKind::Sigma2, 0.0}}), ArgumentError);
}

TEST_SUITE("slow") {

TEST_CASE("decision proportions are monotone in the true frailty variance") {
  // S3 (sigma2 = 0) -> S2 (0.03) -> S1 (0.0625) at a fixed desk-scale n.
  const std::vector<FocusSpec> foci = {{FocusKind::LogHazardCurvature, 40.0}};
  const std::vector<std::string> crit = {"fic_mae", "pretest", "aic_star"};
  std::map<std::string, std::vector<double>> prop, se;
  for (const char* name : {"S3", "S2", "S1"}) {
    Scenario sc = preset_scenario(name);
    sc.target_n = 4000;
    sc.replications = 80;
    sc.master_seed = 4242;
    const auto m = run_scenario(sc, crit, foci);
    for (const auto& key : m.criterion_keys) {
      prop[key].push_back(m.criteria.at(key).proportion_full);
      se[key].push_back(m.criteria.at(key).mc_se);
    }
  }
  for (const auto& [key, p] : prop) {
    for (int i = 0; i + 1 < 3; ++i) {
      const double slack =
          2.0 * std::sqrt(se[key][i] * se[key][i] + se[key][i + 1] * se[key][i + 1]);
      CHECK(p[i + 1] >= p[i] - slack);
    }
  }
}

}  // TEST_SUITE("slow")

TEST_CASE("mae_oracle_study validates the draw count") {
  CHECK_THROWS_AS(mae_oracle_study({{1, 1, 0, 1}}, 99, 1), ArgumentError);
}

TEST_CASE("mae_oracle_study anchors at the closed-form plug-in") {
  const auto study = mae_oracle_study({{1.0, 1.0, 0.0, 1.0}}, 300000, 5);
  const auto& r = study.rows[0];
  CHECK(r.mae_full_cf == doctest::Approx(0.963131).epsilon(1e-4));
  CHECK(r.mae_null_cf == doctest::Approx(std::sqrt(2.0 / M_PI)).epsilon(1e-12));
  CHECK(r.mae_full_mc == doctest::Approx(r.mae_full_cf).epsilon(0.01));
  CHECK(r.mae_null_mc == doctest::Approx(r.mae_null_cf).epsilon(0.01));
  CHECK(r.mse_null_mc == doctest::Approx(1.0).epsilon(0.02));
}
