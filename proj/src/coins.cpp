#include "dcqw/coins.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "dcqw/errors.hpp"

namespace dcqw {

Eigen::Matrix2cd rim_coin(const RimCoinParams& p) {
  const double c = std::cos(p.theta), s = std::sin(p.theta);
  Eigen::Matrix2cd m;
  m << c * std::polar(1.0, p.beta), -s * std::polar(1.0, p.phi + p.omega),
      s * std::polar(1.0, -p.omega), c * std::polar(1.0, p.phi - p.beta);
  return m;
}

Eigen::Matrix4cd grover4() {
  return Eigen::Matrix4cd::Constant(0.5) - Eigen::Matrix4cd::Identity();
}

Eigen::Matrix4cd hadamard4() { return hadamard4_theta(pi / 4); }

Eigen::Matrix4cd hadamard4_theta(double theta) {
  Eigen::Matrix2cd h;
  h << std::cos(theta), std::sin(theta), std::sin(theta), -std::cos(theta);
  Eigen::Matrix4cd out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) out.block<2, 2>(2 * i, 2 * j) = h(i, j) * h;
  return out;
}

Eigen::Matrix4cd HubCoin::matrix() const {
  switch (kind) {
    case Kind::grover: return grover4();
    case Kind::hadamard: return hadamard4();
    case Kind::hadamard_theta: return hadamard4_theta(theta);
  }
  return grover4();
}

CoinField CoinField::uniform(HubCoin hub, RimCoinParams rim) {
  CoinField f;
  f.hub = {hub};
  f.rim_b = {rim};
  f.rim_c = {rim};
  return f;
}

long CoinField::steps_defined() const {
  long n = std::numeric_limits<long>::max();
  if (!hub_t.empty()) n = std::min<long>(n, hub_t.size());
  if (!theta_b_t.empty()) n = std::min<long>(n, theta_b_t.size());
  if (!theta_c_t.empty()) n = std::min<long>(n, theta_c_t.size());
  return n;
}

void CoinField::validate(const ChainGeometry& geom, long steps) const {
  auto check = [&](std::size_t n, const char* what) {
    if (n != 1 && n != static_cast<std::size_t>(geom.L))
      throw ConfigError(std::string("coin field '") + what + "' has " + std::to_string(n) +
                        " entries for L=" + std::to_string(geom.L));
  };
  check(hub.size(), "hub");
  check(rim_b.size(), "rim_b");
  check(rim_c.size(), "rim_c");
  if (steps > steps_defined())
    throw ConfigError("coin field defined for " + std::to_string(steps_defined()) +
                      " steps, " + std::to_string(steps) + " requested");
}

HubCoin CoinField::hub_at(long t, int cell) const {
  if (!hub_t.empty()) return hub_t.at(t);
  return hub.size() == 1 ? hub[0] : hub[cell];
}

RimCoinParams CoinField::rim_b_at(long t, int cell) const {
  RimCoinParams p = rim_b.size() == 1 ? rim_b[0] : rim_b[cell];
  if (!theta_b_t.empty()) p.theta += theta_b_t.at(t);
  return p;
}

RimCoinParams CoinField::rim_c_at(long t, int cell) const {
  RimCoinParams p = rim_c.size() == 1 ? rim_c[0] : rim_c[cell];
  if (!theta_c_t.empty()) p.theta += theta_c_t.at(t);
  return p;
}

void CoinOperator::apply(const cplx* in, cplx* out) const {
  for (int n = 0; n < geom.L; ++n) {
    const int o = 8 * n;
    Eigen::Map<const Eigen::Vector4cd> h(in + o);
    Eigen::Map<const Eigen::Vector2cd> vb(in + o + 4), vc(in + o + 6);
    Eigen::Map<Eigen::Vector4cd>(out + o) = hub[n] * h;
    Eigen::Map<Eigen::Vector2cd>(out + o + 4) = b[n] * vb;
    Eigen::Map<Eigen::Vector2cd>(out + o + 6) = c[n] * vc;
  }
}

Eigen::MatrixXcd CoinOperator::dense() const {
  const int d = geom.dim();
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(d, d);
  for (int n = 0; n < geom.L; ++n) {
    m.block<4, 4>(8 * n, 8 * n) = hub[n];
    m.block<2, 2>(8 * n + 4, 8 * n + 4) = b[n];
    m.block<2, 2>(8 * n + 6, 8 * n + 6) = c[n];
  }
  return m;
}

CoinOperator build_coin_operator(const CoinField& field, long t, const ChainGeometry& geom) {
  geom.validate();
  field.validate(geom, t + 1);
  CoinOperator op{geom, {}, {}, {}};
  op.hub.reserve(geom.L);
  op.b.reserve(geom.L);
  op.c.reserve(geom.L);
  for (int n = 0; n < geom.L; ++n) {
    op.hub.push_back(field.hub_at(t, n).matrix());
    op.b.push_back(rim_coin(field.rim_b_at(t, n)));
    op.c.push_back(rim_coin(field.rim_c_at(t, n)));
  }
  return op;
}

Eigen::MatrixXcd dense_walk_operator(const CoinField& field, long t, const ChainGeometry& geom,
                                     const FluxGauge& gauge) {
  return build_shift(geom, gauge).dense() * build_coin_operator(field, t, geom).dense();
}

}  // namespace dcqw
