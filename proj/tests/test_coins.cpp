#include <doctest.h>

#include "dcqw/coins.hpp"
#include "dcqw/errors.hpp"

using namespace dcqw;

TEST_CASE("coins are unitary") {
  const Eigen::Matrix4cd I4 = Eigen::Matrix4cd::Identity();
  CHECK((grover4().adjoint() * grover4() - I4).norm() < 1e-15);
  CHECK((hadamard4().adjoint() * hadamard4() - I4).norm() < 1e-15);
  CHECK((hadamard4_theta(0.3).adjoint() * hadamard4_theta(0.3) - I4).norm() < 1e-15);
  const Eigen::Matrix2cd u = rim_coin({0.7, 0.2, -1.1, 0.4});
  CHECK((u.adjoint() * u - Eigen::Matrix2cd::Identity()).norm() < 1e-15);
}

TEST_CASE("coin entries") {
  const Eigen::Matrix4cd g = grover4();
  CHECK(g(0, 0).real() == doctest::Approx(-0.5));
  CHECK(g(0, 1).real() == doctest::Approx(0.5));
  const Eigen::Matrix4cd h = hadamard4();
  CHECK(h(3, 3).real() == doctest::Approx(0.5));
  CHECK(h(1, 2).real() == doctest::Approx(0.5));
  CHECK(h(1, 1).real() == doctest::Approx(-0.5));
  CHECK((hadamard4_theta(pi / 4) - hadamard4()).norm() < 1e-15);
  const Eigen::Matrix2cd u = rim_coin({pi / 4});
  CHECK(u(0, 0).real() == doctest::Approx(std::sqrt(0.5)));
  CHECK(u(0, 1).real() == doctest::Approx(-std::sqrt(0.5)));
  CHECK(u(1, 0).real() == doctest::Approx(std::sqrt(0.5)));
}

TEST_CASE("coin field validation") {
  const ChainGeometry g{4, Boundary::periodic};
  CoinField f = CoinField::uniform(HubCoin::grover());
  CHECK_NOTHROW(f.validate(g, 1000));
  f.rim_b.resize(3);
  CHECK_THROWS_AS(f.validate(g, 1), ConfigError);
  CoinField t = CoinField::uniform(HubCoin::grover());
  t.theta_b_t = {0.1, 0.2};
  CHECK(t.time_dependent());
  CHECK_THROWS_AS(t.validate(g, 3), ConfigError);
}

TEST_CASE("coin operator is block diagonal and unitary") {
  const ChainGeometry g{3, Boundary::periodic};
  const CoinField f = CoinField::uniform(HubCoin::hadamard(), {0.3, 0.1, 0.2, 0.0});
  const Eigen::MatrixXcd c = build_coin_operator(f, 0, g).dense();
  CHECK((c.adjoint() * c - Eigen::MatrixXcd::Identity(24, 24)).norm() < 1e-14);
  CHECK(std::abs(c(0, 8)) == 0.0);
  CHECK(std::abs(c(4, 0)) == 0.0);
}
