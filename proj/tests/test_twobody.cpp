#include <doctest.h>

#include <algorithm>

#include "dcqw/errors.hpp"
#include "dcqw/twobody.hpp"

using namespace dcqw;

namespace {

double circ_dist(double a, double b) {
  const double d = std::fmod(std::abs(a - b), 2 * pi);
  return std::min(d, 2 * pi - d);
}

std::vector<double> sorted_block_spectrum(const TwoBodyParams& p, Sublattice s) {
  std::vector<double> all;
  for (const auto& row : two_body_spectrum({p.f}, p, s).rows)
    all.insert(all.end(), row.energies.begin(), row.energies.end());
  std::sort(all.begin(), all.end());
  return all;
}

}  // namespace

TEST_CASE("sublattices split the pair space") {
  int one = 0;
  for (int a = 0; a < 8; ++a)
    for (int b = 0; b < 8; ++b) {
      CHECK(in_sublattice(a, b, Sublattice::one) != in_sublattice(a, b, Sublattice::two));
      one += in_sublattice(a, b, Sublattice::one);
    }
  CHECK(one == 32);
  const SublatticeGraph g = build_sublattice(Sublattice::one, 6);
  CHECK(g.dimension == 32 * 36);
  CHECK(g.nodes.size() == 36 * 5);  // (a,a), (b,b), (b,c), (c,b), (c,c) per cell pair
}

TEST_CASE("without interaction the walk factorizes") {
  TwoBodyParams p;
  p.L = 5;
  p.f = 0.3;
  p.rim = {0.5};
  const TwoBodyWalk w(p);
  Rng rng(1);
  Eigen::MatrixXcd psi(40, 40);
  for (int i = 0; i < 40; ++i)
    for (int j = 0; j < 40; ++j) psi(i, j) = cplx(uniform(rng, -1, 1), uniform(rng, -1, 1));
  const Eigen::MatrixXcd w1 = w.one_body();
  CHECK((w.apply(psi) - w1 * psi * w1.transpose()).norm() < 1e-12);
}

TEST_CASE("momentum blocks reproduce the dense operator") {
  for (double phi : {0.0, 1.3}) {
    TwoBodyParams p;
    p.L = 5;
    p.f = 0.2;
    p.phi = phi;
    const TwoBodyWalk w(p);
    for (Sublattice s : {Sublattice::one, Sublattice::two}) {
      const auto dense = full_spectrum_dense(w.dense(s), false).rows[0].energies;
      const auto blocks = sorted_block_spectrum(p, s);
      REQUIRE(dense.size() == blocks.size());
      for (std::size_t i = 0; i < dense.size(); ++i) CHECK(circ_dist(dense[i], blocks[i]) < 1e-9);
    }
  }
}

TEST_CASE("free spectrum is the pairwise sum") {
  TwoBodyParams p;
  p.L = 6;
  p.f = 0.37;
  const auto sums = pair_sum_spectrum(p);
  auto both = sorted_block_spectrum(p, Sublattice::one);
  const auto two = sorted_block_spectrum(p, Sublattice::two);
  both.insert(both.end(), two.begin(), two.end());
  std::sort(both.begin(), both.end());
  REQUIRE(both.size() == sums.size());
  for (std::size_t i = 0; i < sums.size(); ++i) CHECK(circ_dist(sums[i], both[i]) < 1e-9);
}

TEST_CASE("interaction breaks flat two-body bands") {
  TwoBodyParams p;
  p.L = 6;
  p.phi = 0.0;
  CHECK(max_band_spread(two_body_spectrum({0.5}, p, Sublattice::one)) < 1e-10);
  p.phi = 0.1 * pi;
  CHECK(max_band_spread(two_body_spectrum({0.5}, p, Sublattice::one)) > 1e-3);
  // sublattice 2 never feels the interaction
  CHECK(max_band_spread(two_body_spectrum({0.5}, p, Sublattice::two)) < 1e-10);
}

TEST_CASE("stable subspace dimensions") {
  TwoBodyParams p;
  p.L = 10;
  p.phi = 2.0;
  const int expected[3][3] = {{320, 320, 320}, {64, 128, 192}, {32, 64, 96}};
  for (int c = 1; c <= 3; ++c)
    for (int s = 1; s <= 3; ++s)
      CHECK(stable_subspace_dimension(static_cast<PairCondition>(c), static_cast<SpinConfig>(s), p) ==
            expected[c - 1][s - 1]);
}

TEST_CASE("grown subspace does not leak") {
  TwoBodyParams p;
  p.L = 8;
  p.phi = 2.0;
  const TwoBodyWalk w(p);
  const PairBasis b(8, CoinFamily::grover);
  const auto psi = initial_pair_state(8, PairCondition::nearest, SpinConfig::iii, 4);
  const auto sub = grow_stable_subspace(w, b, psi);
  CHECK(stable_subspace_leakage(w, b, sub.blocks, psi, 40) < 1e-10);
  CHECK(stable_subspace_leakage(w, b, {{4, 4}}, psi, 5) > 0.1);
}

TEST_CASE("pair basis expansion is exact") {
  const PairBasis b(6, CoinFamily::grover);
  const Eigen::MatrixXcd s = b.pair_state(2, 4, 3, 7);
  CHECK(s.norm() > 0.5);
  const Eigen::MatrixXd wgt = b.block_weights(s);
  CHECK(wgt.sum() == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(wgt(2, 3) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("pair distance") {
  TwoBodyParams p;
  p.L = 10;
  p.phi = 2.0;
  const TwoBodyWalk w(p);
  const auto psi = initial_pair_state(10, PairCondition::same, SpinConfig::i, 5);
  const auto d = max_pair_distance(w, psi, initial_cells(PairCondition::same, 5), 60);
  CHECK(d.front() == 0.0);
  CHECK(std::is_sorted(d.begin(), d.end()));
  CHECK(d.back() == doctest::Approx(std::sqrt(50.0)));
  CHECK_THROWS_AS(TwoBodyWalk(TwoBodyParams{4}), DomainError);
  CHECK_THROWS_AS(TwoBodyWalk(TwoBodyParams{41}), ResourceError);
}
