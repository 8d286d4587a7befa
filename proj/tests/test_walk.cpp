#include <doctest.h>

#include "dcqw/disorder.hpp"
#include "dcqw/errors.hpp"
#include "dcqw/propagator.hpp"
#include "dcqw/walk.hpp"

using namespace dcqw;

namespace {

WalkState random_state(const ChainGeometry& g, std::uint64_t seed) {
  Rng rng(seed);
  WalkState s = WalkState::zero(g);
  for (int i = 0; i < g.dim(); ++i) s.amp[i] = cplx(uniform(rng, -1, 1), uniform(rng, -1, 1));
  s.amp /= s.amp.norm();
  return s;
}

CoinField disordered_field(int L, long T, std::uint64_t seed) {
  DisorderSpec d;
  d.kind = DisorderKind::hub_rim_static;
  d.dtheta = 1.3;
  Rng rng(seed);
  return realize_field(d, L, T, rng);
}

}  // namespace

// Values from an independent dense numpy implementation of the same walk.
TEST_CASE("frozen cell probabilities after five steps") {
  const ChainGeometry g{6, Boundary::periodic};
  const CoinField f = CoinField::uniform(HubCoin::grover(), {0.4});
  CoinField field = f;
  field.rim_c = {RimCoinParams{0.9}};
  WalkState s = WalkState::basis(g, {2, Site::a, slot::Rb});
  for (long t = 0; t < 5; ++t) s = step(s, field, t, FluxGauge{0.3});
  const double expected[6] = {0.025934368854807578, 0.52395288962704911, 0.34138759665952134,
                              0.081141722372940789, 0.01718943398063949, 0.010393988505041748};
  const auto p = position_distribution(s);
  for (int n = 0; n < 6; ++n) CHECK(p[n] == doctest::Approx(expected[n]).epsilon(1e-12));
}

TEST_CASE("frozen clean cage spread") {
  const ChainGeometry g{30, Boundary::periodic};
  const CoinField f = CoinField::uniform(HubCoin::grover());
  WalkState s = WalkState::hub_spin(g, 15, HubSpinConfig{});
  for (long t = 0; t < 20; ++t) s = step(s, f, t, FluxGauge{0.5});
  CHECK(std_dev(position_distribution(s)) == doctest::Approx(0.70710678118662795).epsilon(1e-12));
}

TEST_CASE("parallel step matches serial reference") {
  for (auto b : {Boundary::periodic, Boundary::open}) {
    const ChainGeometry g{9, b};
    const CoinField f = disordered_field(9, 0, 3);
    WalkState a = random_state(g, 11), r = a;
    for (long t = 0; t < 12; ++t) {
      a = step(a, f, t, FluxGauge{0.21});
      r = step_reference(r, f, t, FluxGauge{0.21});
    }
    CHECK((a.amp - r.amp).norm() < 1e-13);
    CHECK(a.norm() == doctest::Approx(1.0).epsilon(1e-13));
  }
}

TEST_CASE("dense operator matches step") {
  const ChainGeometry g{5, Boundary::periodic};
  const CoinField f = disordered_field(5, 0, 8);
  const WalkState s = random_state(g, 2);
  const Eigen::MatrixXcd w = dense_walk_operator(f, 0, g, FluxGauge{0.4});
  CHECK((w * s.amp - step(s, f, 0, FluxGauge{0.4}).amp).norm() < 1e-13);
  CHECK((w.adjoint() * w - Eigen::MatrixXcd::Identity(40, 40)).norm() < 1e-13);
}

// Windowed propagator: a packet deep inside the chain, one that wraps
// around a periodic chain and one that hits the ends of an open chain.
TEST_CASE("propagator matches the reference in all window regimes") {
  struct Case {
    int L;
    Boundary b;
    int cell;
    long T;
  };
  for (const Case c : {Case{40, Boundary::periodic, 20, 12}, Case{12, Boundary::periodic, 1, 30},
                       Case{10, Boundary::open, 8, 25}}) {
    const ChainGeometry g{c.L, c.b};
    for (bool temporal : {false, true}) {
      DisorderSpec d;
      d.kind = temporal ? DisorderKind::rim_dynamic : DisorderKind::hub_rim_static;
      d.dtheta = 2.0;
      Rng rng(5);
      const CoinField f = realize_field(d, c.L, c.T, rng);
      const WalkState s0 = WalkState::hub(g, c.cell, generic_hub_spinor());
      for (bool par : {false, true}) {
        Propagator p(s0, f, FluxGauge{0.3}, {0.0, par, false});
        WalkState r = s0;
        for (long t = 0; t < c.T; ++t) {
          p.advance();
          r = step_reference(r, f, t, FluxGauge{0.3});
        }
        CHECK((p.state().amp - r.amp).norm() < 1e-12);
        CHECK(p.sigma() == doctest::Approx(std_dev(position_distribution(r))).epsilon(1e-10));
      }
    }
  }
}

TEST_CASE("clean Grover cage at half flux") {
  const ChainGeometry g{40, Boundary::periodic};
  const CoinField f = CoinField::uniform(HubCoin::grover());
  Propagator p(WalkState::hub(g, 20, generic_hub_spinor()), f, FluxGauge{0.5}, {0.0, true, true});
  for (int t = 0; t < 200; ++t) p.advance();
  CHECK(p.cage_extent() == 5);
  CHECK(p.norm2() == doctest::Approx(1.0).epsilon(1e-12));
  // away from the critical flux the walker spreads
  Propagator q(WalkState::hub(g, 20, generic_hub_spinor()), f, FluxGauge{0.3}, {0.0, true, true});
  for (int t = 0; t < 15; ++t) q.advance();
  CHECK(q.cage_extent() > 5);
}

TEST_CASE("evolve records every step") {
  const ChainGeometry g{20, Boundary::periodic};
  const CoinField f = CoinField::uniform(HubCoin::hadamard());
  const auto rec = evolve(WalkState::hub(g, 10, generic_hub_spinor()), 40, f, FluxGauge{0.0},
                          {Observable::sigma, Observable::support, Observable::norm, Observable::cage});
  CHECK(rec.sigma.size() == 41);
  CHECK(rec.support.front() == 1);
  for (double n : rec.norm) CHECK(n == doctest::Approx(1.0).epsilon(1e-12));
  for (int c : rec.cage) CHECK(c <= 5);
  CHECK_THROWS_AS(evolve(rec.final_state, -1, f, FluxGauge{0.0}, {}), DomainError);
}

TEST_CASE("support extent on a ring") {
  std::vector<double> p(10, 0.0);
  p[0] = 0.5;
  p[9] = 0.5;
  CHECK(support_extent(p, 1e-12, Boundary::periodic) == 2);
  CHECK(support_extent(p, 1e-12, Boundary::open) == 10);
}

TEST_CASE("measurement collapses onto one basis state") {
  const ChainGeometry g{6, Boundary::periodic};
  Rng rng(4);
  const auto [post, idx] = measure_position(random_state(g, 9), rng);
  CHECK(post.norm() == doctest::Approx(1.0));
  CHECK(std::abs(post.amp[flat_index(idx, g)]) == doctest::Approx(1.0));
}

TEST_CASE("two-step operator matches composed steps") {
  for (auto [tb, tc] : {std::pair{0.3, 1.1}, std::pair{pi / 4, pi / 4}, std::pair{-2.0, 0.7}}) {
    const TwoStepBlocks a = two_step_operator(tb, tc);
    const TwoStepBlocks b = composed_two_step(tb, tc, FluxGauge{0.5});
    CHECK((a.stay - b.stay).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((a.right - b.right).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((a.left - b.left).cwiseAbs().maxCoeff() < 1e-12);
  }
  CHECK_THROWS_AS(two_step_operator(0.1, 0.2, FluxGauge{0.3}), DomainError);
}

TEST_CASE("hub spin basis") {
  const Eigen::Matrix4cd b = spin_basis();
  CHECK((b.adjoint() * b - Eigen::Matrix4cd::Identity()).norm() < 1e-15);
  HubSpinConfig s{0.5, 0.5, 0.5, 0.5};
  CHECK(s.imbalance() == doctest::Approx(0.0));
  CHECK(HubSpinConfig{}.imbalance() == doctest::Approx(1.0));
}
