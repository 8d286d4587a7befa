#include <doctest.h>

#include <cmath>

#include "dcqw/errors.hpp"
#include "dcqw/experiments.hpp"
#include "dcqw/measurement.hpp"
#include "dcqw/stats.hpp"

using namespace dcqw;

TEST_CASE("power-law fits") {
  std::vector<double> t, a, b, c;
  for (int i = 1; i <= 10000; ++i) {
    t.push_back(i);
    a.push_back(2.5 * std::sqrt(i));
    b.push_back(3.0);
    c.push_back(std::sqrt(i / std::log(i + 1.0)));
  }
  const PowerLawFit fa = fit_exponent(t, a);
  CHECK(std::abs(fa.gamma - 0.5) < 1e-12);
  CHECK(fa.amplitude == doctest::Approx(2.5));
  CHECK(fa.t_lo == doctest::Approx(10000 / std::sqrt(10.0)));
  CHECK(std::abs(fit_exponent(t, b).gamma) < 1e-12);
  // log-slope of sqrt(t / ln t) is 1/2 - 1/(2 ln t): 0.43 to 0.45 on this window
  const double g = fit_exponent(t, c, 1e3, 1e4).gamma;
  CHECK(g > 0.43);
  CHECK(g < 0.45);
  b[9999] = 0.0;
  CHECK_THROWS_AS(fit_exponent(t, b), DomainError);
}

TEST_CASE("gaussian fit") {
  std::vector<double> x, y;
  for (int i = -40; i <= 40; ++i) {
    x.push_back(i);
    y.push_back(0.7 * std::exp(-0.5 * std::pow((i - 1.3) / 6.2, 2)));
  }
  const GaussianFit g = fit_gaussian(x, y);
  CHECK(g.amplitude == doctest::Approx(0.7).epsilon(1e-6));
  CHECK(g.mean == doctest::Approx(1.3).epsilon(1e-6));
  CHECK(g.sigma == doctest::Approx(6.2).epsilon(1e-6));
  CHECK(g.r2 == doctest::Approx(1.0).epsilon(1e-9));
  std::vector<double> one(81, 0.0);
  one[40] = 1.0;
  CHECK(std::abs(fit_gaussian(x, one).sigma) < 1e-3);
  CHECK_THROWS_AS(fit_gaussian(x, std::vector<double>(81, 0.0)), DomainError);
}

TEST_CASE("chi-square with tail bin") {
  // geometric law starting at 0, observed exactly at expectation
  std::vector<double> expected, observed;
  double rest = 1.0;
  for (int n = 0; n < 10; ++n) {
    expected.push_back(0.5 * std::pow(0.5, n));
    rest -= expected.back();
    observed.push_back(1e4 * expected.back());
  }
  observed.back() += 1e4 * rest;
  const ChiSquare ok = chi_square_test(observed, expected, 1e4);
  CHECK(ok.statistic == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(ok.p_value == doctest::Approx(1.0));
  std::swap(observed[0], observed[1]);
  CHECK(chi_square_test(observed, expected, 1e4).p_value < 1e-6);
}

TEST_CASE("linear fit and mean") {
  const LinearFit f = linear_fit({0, 1, 2, 3}, {1, 3, 5, 7});
  CHECK(f.slope == doctest::Approx(2.0));
  CHECK(f.intercept == doctest::Approx(1.0));
  CHECK(f.r2 == doctest::Approx(1.0));
  const MeanErr m = mean_stderr({1, 2, 3, 4});
  CHECK(m.mean == doctest::Approx(2.5));
  CHECK(m.stderr_mean == doctest::Approx(std::sqrt(5.0 / 12.0)));
}

TEST_CASE("ensemble determinism and thread independence") {
  ExperimentSpec s;
  s.disorder.kind = DisorderKind::hub_dynamic;
  s.disorder.p = 0.4;
  s.T = 60;
  s.R = 12;
  s.seed = 42;
  const EnsembleResult a = run_ensemble(s);
  const EnsembleResult b = run_ensemble(s);
  CHECK(a.sigma_mean == b.sigma_mean);
  CHECK(a.sigma_stderr == b.sigma_stderr);
  s.seed = 43;
  CHECK(run_ensemble(s).sigma_mean != a.sigma_mean);
  for (double v : a.sigma_mean) CHECK(v >= 0.0);
  CHECK(a.t.size() == 61);
}

TEST_CASE("clean ensemble stays caged") {
  ExperimentSpec s;
  s.T = 300;
  s.R = 1;
  const EnsembleResult e = run_ensemble(s);
  for (double v : e.sigma_mean) CHECK(v < 5.0);
}

TEST_CASE("ensemble budget guard") {
  ExperimentSpec s;
  s.T = 1000000;
  s.R = 100000;
  CHECK_THROWS_AS(run_ensemble(s), ResourceError);
}

TEST_CASE("subdiffusion theory") {
  CHECK(subdiffusion_gamma_theory(0.5) == doctest::Approx(0.2));
  CHECK(subdiffusion_gamma_theory(0.0) == doctest::Approx(1.0 / 3));
  CHECK(subdiffusion_gamma_theory(-2.0) == doctest::Approx(0.5));
  CHECK_THROWS_AS(subdiffusion_gamma_theory(1.5), DomainError);
  CHECK_THROWS_AS(subdiffusion_experiment(1.0, 10, 1, 1), DomainError);
}

TEST_CASE("variance law") {
  CHECK(predicted_variance_dynamic_rim(100, HubSpinConfig{}) == doctest::Approx(99.0 / 4));
  CHECK(predicted_variance_dynamic_rim(100, HubSpinConfig{0.5, 0.5, 0.5, 0.5}) ==
        doctest::Approx(25.0));
}

TEST_CASE("measurement chain equals explicit evolution") {
  MeasurementSpec m;
  m.measurements = 30;
  m.trajectories = 40;
  m.seed = 5;
  CHECK(measurement_markov_paths(m) == measurement_reference(m, m.measurements * m.period + 10));
}

TEST_CASE("measurement spread") {
  MeasurementSpec m;
  m.measurements = 200;
  m.period = 12;
  const auto e12 = measurement_exact_sigma(m);
  CHECK(e12.back() < 1e-6);
  m.period = 5;
  const auto e5 = measurement_exact_sigma(m);
  CHECK(e5.back() / std::sqrt(200.0) == doctest::Approx(0.81).epsilon(0.01));
  const TransitionTable t = transition_table(m);
  for (const auto& row : t.rows) CHECK(row.cumulative.back() == doctest::Approx(1.0).epsilon(1e-12));
}
