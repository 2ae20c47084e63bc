#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "betacorm/error.hpp"
#include "betacorm/math.hpp"
#include "betacorm/matrix.hpp"
#include "betacorm/moments.hpp"
#include "betacorm/rng.hpp"
#include "betacorm/simulate.hpp"

#include "support/quadrature.hpp"
#include "support/special.hpp"
#include "support/stats.hpp"

#include <cmath>
#include <vector>

using namespace betacorm;
namespace ts = testsupport;

TEST_CASE("rng determinism and substreams") {
  Rng a(42);
  Rng b(42);
  for (int k = 0; k < 100; ++k) CHECK(a.next() == b.next());

  Rng base(42);
  Rng s0 = base.substream(0);
  Rng s1 = base.substream(1);
  CHECK(s0.next() != s1.next());

  Rng u(7);
  for (int k = 0; k < 1000; ++k) {
    const double v = u.uniform();
    CHECK(v > 0.0);
    CHECK(v < 1.0);
  }
}

TEST_CASE("gamma and beta samplers match their cdfs") {
  Rng rng(123);
  std::vector<double> gamma_draws;
  for (int k = 0; k < 20000; ++k) gamma_draws.push_back(sample_gamma(rng, 2.5, 1.5));
  CHECK(ts::ks_test(gamma_draws, [](double x) { return ts::gamma_cdf(x, 2.5, 1.5); }) > 1e-3);

  std::vector<double> gamma_small;
  for (int k = 0; k < 20000; ++k) gamma_small.push_back(sample_gamma(rng, 0.3, 2.0));
  CHECK(ts::ks_test(gamma_small, [](double x) { return ts::gamma_cdf(x, 0.3, 2.0); }) > 1e-3);

  std::vector<double> beta_draws;
  for (int k = 0; k < 20000; ++k) beta_draws.push_back(sample_beta(rng, 2.0, 5.0));
  CHECK(ts::ks_test(beta_draws, [](double x) { return ts::beta_cdf(x, 2.0, 5.0); }) > 1e-3);

  std::vector<double> normal_draws;
  for (int k = 0; k < 20000; ++k) normal_draws.push_back(sample_normal(rng));
  CHECK(ts::ks_test(normal_draws, [](double x) {
          return 0.5 * std::erfc(-x / std::sqrt(2.0));
        }) > 1e-3);
}

TEST_CASE("clamping keeps sampled values in the open unit interval") {
  CHECK(clamp_unit_open(0.0) == 1e-300);
  CHECK(clamp_unit_open(1.0) == 1.0 - 1e-16);
  CHECK(clamp_unit_open(0.5) == 0.5);
}

TEST_CASE("quantile by linear interpolation") {
  std::vector<double> values;
  for (int k = 1; k <= 100; ++k) values.push_back(k);
  CHECK(quantile_linear(values, 0.5) == doctest::Approx(50.5));
  CHECK(quantile_linear(values, 0.0) == 1.0);
  CHECK(quantile_linear(values, 1.0) == 100.0);
}

TEST_CASE("validate_matrix accepts minimal well-formed input") {
  BinaryMatrix entries(2, 2);
  entries << 1, 0, 0, 1;
  const auto data = validate_matrix(entries, {1, 1}, {"A", "B"}, {"f1", "f2"});
  CHECK(data.rows() == 2);
  CHECK(data.num_groups() == 2);
  CHECK(data.group_of_row(1) == 1);
  CHECK(data.group_ones(0, 0) == 1);
  CHECK(data.ones_in_column(1) == 1);
}

TEST_CASE("validate_matrix reports non-binary entries with their position") {
  BinaryMatrix entries(2, 2);
  entries << 1, 0, 0, 2;
  try {
    validate_matrix(entries, {1, 1}, {"A", "B"}, {"f1", "f2"});
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("non-binary entry at (j=2,k=1,i=2)") != std::string::npos);
  }
}

TEST_CASE("validate_matrix collects every violation") {
  BinaryMatrix entries(3, 2);
  entries.setZero();
  try {
    validate_matrix(entries, {1, 0, 1}, {"A", "A", "B"}, {"f", "f"});
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    CHECK(e.violations().size() >= 3);  // empty group, duplicate group, duplicate feature
  }
}

TEST_CASE("paper-scale shapes validate") {
  BinaryMatrix entries = BinaryMatrix::Zero(250, 300);
  std::vector<std::string> groups{"g1", "g2", "g3", "g4", "g5"};
  std::vector<std::string> features;
  for (int i = 0; i < 300; ++i) features.push_back("f" + std::to_string(i));
  const auto data = validate_matrix(entries, {100, 60, 40, 30, 20}, groups, features);
  CHECK(data.rows() == 250);
  CHECK(data.num_features() == 300);
}

TEST_CASE("prior moments formula plugs") {
  const auto r1 = prior_moments(1.0, 0.5, 1.0, 1);
  CHECK(r1.p_marginal == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(r1.mean_B == 0.5);
  CHECK(r1.var_B_term == doctest::Approx(0.125).epsilon(1e-15));
  CHECK(r1.p_joint_d == r1.p_marginal);  // exact reduction at d = 1

  const auto r2 = prior_moments(1.0, 0.5, 1.0, 2);
  CHECK(r2.var_Bj == doctest::Approx(1.0 / 16.0).epsilon(1e-15));
  CHECK(r2.cov_jk == doctest::Approx(1.0 / 32.0).epsilon(1e-15));
  CHECK(r2.p_joint_d == doctest::Approx(0.09375).epsilon(1e-15));

  // correlation vanishes as q -> 1
  const auto r3 = prior_moments(1.0, 1.0 - 1e-12, 1.0, 2);
  CHECK(r3.corr_jk < 1e-10);

  CHECK_THROWS_AS(prior_moments(-1.0, 0.5, 1.0, 1), Error);
  CHECK_THROWS_AS(prior_moments(1.0, 0.5, 1.0, 0), Error);
}

TEST_CASE("prior moments against Monte Carlo (single setting)") {
  const double a = 1.0;
  const double q = 0.5;
  const double c = 1.0;
  const auto report = prior_moments(a, q, c, 2);

  Rng rng(2024);
  const int n = 100000;
  std::vector<double> p_draws;
  std::vector<double> b1;
  std::vector<double> b2;
  for (int k = 0; k < n; ++k) {
    const double p = sample_beta(rng, c * q, c * (1.0 - q));
    p_draws.push_back(p);
    b1.push_back(sample_beta(rng, a, 1.0) * p);
    b2.push_back(sample_beta(rng, a, 1.0) * p);
  }

  const auto mean_p = ts::mean_estimate(p_draws);
  CHECK(ts::within_se(mean_p.value, report.mean_B, mean_p.se, 3.0));
  const auto var_p = ts::variance_estimate(p_draws);
  CHECK(ts::within_se(var_p.value, report.var_B_term, var_p.se, 3.0));

  const auto mean_b = ts::mean_estimate(b1);
  CHECK(ts::within_se(mean_b.value, report.mean_Bj, mean_b.se, 3.0));
  const auto var_b = ts::variance_estimate(b1);
  CHECK(ts::within_se(var_b.value, report.var_Bj, var_b.se, 3.0));
  const auto cov = ts::covariance_estimate(b1, b2);
  CHECK(ts::within_se(cov.value, report.cov_jk, cov.se, 3.0));
  const auto corr = ts::correlation_estimate(b1, b2);
  CHECK(ts::within_se(corr.value, report.corr_jk, corr.se, 3.0));
}

TEST_CASE("slab summary") {
  const auto slab = slab_summary(1.0, 1e-5);
  CHECK(slab.w() == doctest::Approx(1.0 - 1e-5).epsilon(1e-12));
  CHECK(slab.cdf(1e-5) == 0.0);
  CHECK(slab.cdf(1.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK_THROWS_AS(slab.cdf(0.5e-5), Error);
  CHECK_THROWS_AS(slab.cdf(1.5), Error);

  // log symmetry of the small-a limit at sqrt(x0)
  const auto tiny = slab_summary(1e-8, 1e-5);
  CHECK(tiny.cdf(std::sqrt(1e-5)) == doctest::Approx(0.5).epsilon(1e-6));

  // cdf agrees with the a -> 0 limit within 1e-4 pointwise for a <= 1e-6
  for (const double a : {1e-6, 1e-7, 1e-9}) {
    const auto s = slab_summary(a, 1e-5);
    for (double x = 2e-5; x < 1.0; x *= 1.9) {
      CHECK(std::abs(s.cdf(x) - s.limit_cdf(x)) < 1e-4);
    }
  }

  // limit density integrates to one over (x0, 1)
  const auto rule = ts::gauss_legendre(200);
  const auto s = slab_summary(1e-8, 1e-5);
  // substitute x = exp(t) to tame the 1/x integrand
  const double total = ts::integrate(
      [&](double t) { return s.limit_pdf(std::exp(t)) * std::exp(t); }, std::log(1e-5), 0.0,
      rule);
  CHECK(total == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("forward_simulate shapes and determinism") {
  auto config = PriorConfig::uniform(300);
  const std::vector<Index> sizes{100, 60, 40, 30, 20};
  const auto sim1 = forward_simulate(config, sizes, 99);
  CHECK(sim1.data.rows() == 250);
  CHECK(sim1.data.num_features() == 300);
  CHECK(sim1.data.num_groups() == 5);

  const auto sim2 = forward_simulate(config, sizes, 99);
  CHECK(sim1.data.entries == sim2.data.entries);
  CHECK(sim1.truth == sim2.truth);

  const auto sim3 = forward_simulate(config, sizes, 100);
  CHECK(sim1.data.entries != sim3.data.entries);
}

namespace {

// se of the overall frequency from per-feature means, which respects the
// dependence between cells that share p_i and m_ji.
double feature_level_frequency_se(const GroupedBinaryMatrix& data, double* frequency) {
  std::vector<double> per_feature;
  for (Index i = 0; i < data.num_features(); ++i) {
    double sum = 0.0;
    for (Index r = 0; r < data.rows(); ++r) sum += data.entries(r, i);
    per_feature.push_back(sum / static_cast<double>(data.rows()));
  }
  const auto est = ts::mean_estimate(per_feature);
  *frequency = est.value;
  return est.se;
}

}  // namespace

TEST_CASE("forward_simulate concentration limit") {
  auto config = PriorConfig::uniform(300, 0.999);
  config.c_fixed = 1e6;
  config.shapes_fixed = Vector::Constant(1, 1e6);
  const auto sim = forward_simulate(config, {50, 50, 50, 50, 50}, 7);
  double freq = 0.0;
  const double se = feature_level_frequency_se(sim.data, &freq);
  // E[x] = (a/(a+1)) q with both betas degenerate at their means
  CHECK(ts::within_se(freq, 0.999, std::max(se, 1e-5), 3.0));
}

TEST_CASE("forward_simulate marginal presence probability") {
  auto config = PriorConfig::uniform(400, 0.5);
  config.c_fixed = 1.0;
  config.shapes_fixed = Vector::Constant(1, 1.0);
  const auto sim = forward_simulate(config, {125, 125}, 11);
  double freq = 0.0;
  const double se = feature_level_frequency_se(sim.data, &freq);
  CHECK(ts::within_se(freq, 0.25, se, 3.0));  // a/(a+1) q, independent of c
}

TEST_CASE("simulate_from_state shares the generating parameters") {
  auto config = PriorConfig::uniform(20, 0.5);
  config.c_fixed = 2.0;
  const auto sim = forward_simulate(config, {10, 10}, 3);
  const auto test = simulate_from_state(sim.truth, {8, 12}, 4);
  CHECK(test.rows() == 20);
  CHECK(test.num_features() == 20);
  CHECK(test.num_groups() == 2);
  CHECK_THROWS_AS(simulate_from_state(sim.truth, {5, 5, 5}, 4), Error);
}

TEST_CASE("degenerate q rejected at config validation") {
  auto config = PriorConfig::uniform(4, 0.5);
  config.q[2] = 1.0;
  CHECK_THROWS_AS(forward_simulate(config, {3}, 1), ValidationError);
}
