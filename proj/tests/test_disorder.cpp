#include <doctest.h>

#include <cmath>
#include <map>

#include "dcqw/disorder.hpp"
#include "dcqw/errors.hpp"
#include "dcqw/experiments.hpp"

using namespace dcqw;

TEST_CASE("static cage law is normalized and matches its mean") {
  for (double f : {0.0, 0.5})
    for (double ps : {0.2, 0.5, 0.85}) {
      double mass = 0.0, mean = 0.0;
      for (int n = 5; n < 2000; ++n) {
        const double p = predicted_cage_prob_static(n, ps, f);
        mass += p;
        mean += n * p;
      }
      CHECK(mass == doctest::Approx(1.0).epsilon(1e-10));
      CHECK(mean == doctest::Approx(predicted_avg_extension(ps, f).value).epsilon(1e-9));
    }
  CHECK(predicted_avg_extension(0.3, 0.5).value == doctest::Approx(3 + 2 / 0.3));
  CHECK(predicted_avg_extension(0.3, 0.0).value == doctest::Approx(3 + 2 / 0.7));
  CHECK(predicted_avg_extension(0.0, 0.5).infinite);
  CHECK_THROWS_AS(predicted_cage_prob_static(6, 0.5, 0.25), DomainError);
}

// Brute force over all coin sequences that matter.
TEST_CASE("dynamic cage law equals enumeration of the rules") {
  for (double f : {0.0, 0.5})
    for (int T : {3, 6, 9})
      for (double pt : {0.2, 0.65}) {
        std::map<int, double> law;
        for (long mask = 0; mask < (1L << T); ++mask) {
          std::vector<HubCoin> seq(T + 1, HubCoin::grover());
          double w = 1.0;
          for (int k = 1; k <= T; ++k) {
            const bool grover = (mask >> (k - 1)) & 1;
            seq[k] = grover ? HubCoin::grover() : HubCoin::hadamard();
            w *= grover ? pt : 1.0 - pt;
          }
          law[dynamic_cage_rule(seq, f)] += w;
        }
        double mass = 0.0;
        for (int n = 5; n <= 2 * T + 5; ++n) {
          CHECK(predicted_cage_prob_dynamic(n, T, pt, f) == doctest::Approx(law[n]).epsilon(1e-12));
          mass += predicted_cage_prob_dynamic(n, T, pt, f);
        }
        CHECK(mass == doctest::Approx(1.0).epsilon(1e-12));
      }
}

TEST_CASE("static rule equals the simulated cage at half flux") {
  const CageStatistics s = cage_statistics(0.4, 0.5, 30, 200, 99);
  CHECK(s.extents == s.rule_extents);
  for (int e : s.extents) CHECK(e >= 5);
}

TEST_CASE("theta_as law") {
  Rng rng(3);
  for (double alpha : {0.5, 0.0, -2.0}) {
    const auto v = sample_theta_as(alpha, 200000, rng);
    double mean_abs = 0.0, mean = 0.0;
    for (double x : v) {
      CHECK(std::abs(x) <= pi / 2);
      mean_abs += std::abs(x);
      mean += x;
    }
    mean_abs /= v.size();
    mean /= v.size();
    // E u^{1/(1-a)} = (1-a)/(2-a)
    CHECK(mean_abs == doctest::Approx(pi / 2 * (1 - alpha) / (2 - alpha)).epsilon(0.01));
    CHECK(std::abs(mean) < 0.01);
  }
  CHECK_THROWS_AS(sample_theta_as(1.0, 3, rng), DomainError);
}

TEST_CASE("box and hub samplers") {
  Rng rng(8);
  const auto box = sample_rim_box(1.0, 0.4, 50000, rng);
  double m = 0.0;
  for (double x : box) {
    CHECK(x >= 0.8);
    CHECK(x <= 1.2);
    m += x;
  }
  CHECK(m / box.size() == doctest::Approx(1.0).epsilon(1e-3));
  const auto hubs = sample_hub_static(0.3, 100000, rng);
  double g = 0.0;
  for (const auto& h : hubs) g += h.kind == HubCoin::Kind::grover;
  CHECK(g / hubs.size() == doctest::Approx(0.3).epsilon(0.02));
  CHECK_THROWS_AS(sample_hub_static(1.5, 3, rng), DomainError);
  CHECK_THROWS_AS(sample_hub_dynamic(-0.1, 3, rng), DomainError);
}

TEST_CASE("realized fields") {
  Rng rng(2);
  DisorderSpec d;
  d.kind = DisorderKind::rim_dynamic;
  d.dtheta = 2 * pi;
  const CoinField f = realize_field(d, 10, 50, rng);
  CHECK(f.time_dependent());
  CHECK(f.steps_defined() >= 50);
  d.kind = DisorderKind::hub_static;
  d.p = 0.5;
  const CoinField h = realize_field(d, 10, 0, rng);
  CHECK(h.hub.size() == 10);
  CHECK_FALSE(h.time_dependent());
  d.kind = DisorderKind::combined;
  d.alpha = 2.0;
  CHECK_THROWS_AS(d.validate(), DomainError);
  // same stream, same field
  Rng a = realization_rng(5, 7), b = realization_rng(5, 7);
  d.kind = DisorderKind::hub_rim_static;
  d.dtheta = 1.0;
  const CoinField fa = realize_field(d, 12, 0, a), fb = realize_field(d, 12, 0, b);
  for (int n = 0; n < 12; ++n) {
    CHECK(fa.rim_b_at(0, n).theta == fb.rim_b_at(0, n).theta);
    CHECK(fa.hub_at(0, n) == fb.hub_at(0, n));
  }
}
