#include "dcqw/walk.hpp"

#include <algorithm>
#include <cmath>

#include "dcqw/errors.hpp"
#include "dcqw/propagator.hpp"

namespace dcqw {

Eigen::Matrix4cd spin_basis() {
  const double r = 1.0 / std::sqrt(2.0);
  Eigen::Matrix4cd m;
  // rows: Rb, Lb, Lc, Rc; columns: R+, L+, R-, L-
  m << r, 0, r, 0,
       0, r, 0, r,
       0, r, 0, -r,
       r, 0, -r, 0;
  return m;
}

Eigen::Vector4cd HubSpinConfig::hub_amplitudes() const {
  return spin_basis() * Eigen::Vector4cd(a0, b0, c0, d0);
}

double HubSpinConfig::imbalance() const {
  return std::norm(a0) - std::norm(b0) - std::norm(c0) + std::norm(d0);
}

WalkState WalkState::zero(const ChainGeometry& geom) {
  geom.validate();
  return {geom, Eigen::VectorXcd::Zero(geom.dim())};
}

WalkState WalkState::basis(const ChainGeometry& geom, const BasisIndex& idx) {
  WalkState s = zero(geom);
  s.amp[flat_index(idx, geom)] = 1.0;
  return s;
}

WalkState WalkState::hub(const ChainGeometry& geom, int cell, const Eigen::Vector4cd& v) {
  WalkState s = zero(geom);
  if (cell < 0 || cell >= geom.L) throw IndexError("cell out of range");
  if (v.norm() == 0.0) throw DomainError("zero hub spinor");
  s.amp.segment<4>(8 * cell) = v / v.norm();
  return s;
}

WalkState WalkState::hub_spin(const ChainGeometry& geom, int cell, const HubSpinConfig& spin) {
  return hub(geom, cell, spin.hub_amplitudes());
}

namespace {

CoinLayer full_layer(const CoinField& field, long t, const ChainGeometry& geom) {
  const CoinOperator op = build_coin_operator(field, t, geom);
  return {op.hub, op.b, op.c};
}

}  // namespace

WalkState step(const WalkState& state, const CoinField& field, long t, const FluxGauge& gauge) {
  if (state.amp.size() != state.geom.dim()) throw DomainError("state dimension mismatch");
  const CoinLayer layer = full_layer(field, t, state.geom);
  WalkState out = WalkState::zero(state.geom);
  Eigen::VectorXcd scratch(state.geom.dim());
  walk_kernel(state.geom, gauge.peierls(), layer, state.amp.data(), out.amp.data(),
              scratch.data(), 0, state.geom.L - 1, true);
  return out;
}

WalkState step_reference(const WalkState& state, const CoinField& field, long t,
                         const FluxGauge& gauge) {
  if (state.amp.size() != state.geom.dim()) throw DomainError("state dimension mismatch");
  const CoinOperator coin = build_coin_operator(field, t, state.geom);
  const ShiftOperator shift = build_shift(state.geom, gauge);
  Eigen::VectorXcd tmp(state.geom.dim());
  coin.apply(state.amp.data(), tmp.data());
  WalkState out = WalkState::zero(state.geom);
  shift.apply(tmp.data(), out.amp.data());
  return out;
}

std::vector<double> position_distribution(const WalkState& state) {
  std::vector<double> p(state.geom.L);
  for (int n = 0; n < state.geom.L; ++n) p[n] = state.amp.segment<8>(8 * n).squaredNorm();
  return p;
}

double std_dev(const std::vector<double>& dist) {
  double s0 = 0.0, s1 = 0.0, s2 = 0.0;
  for (std::size_t n = 0; n < dist.size(); ++n) {
    const double x = static_cast<double>(n);
    s0 += dist[n];
    s1 += dist[n] * x;
    s2 += dist[n] * x * x;
  }
  if (s0 <= 0.0) return 0.0;
  const double mean = s1 / s0;
  return std::sqrt(std::max(0.0, s2 / s0 - mean * mean));
}

int support_extent(const std::vector<double>& dist, double eps, Boundary boundary) {
  if (eps <= 0.0) throw DomainError("support threshold must be positive");
  const int L = static_cast<int>(dist.size());
  std::vector<int> occ;
  for (int n = 0; n < L; ++n)
    if (dist[n] > eps) occ.push_back(n);
  if (occ.empty()) return 0;
  if (boundary == Boundary::open) return occ.back() - occ.front() + 1;
  int gap = L - 1 - occ.back() + occ.front();
  for (std::size_t i = 1; i < occ.size(); ++i) gap = std::max(gap, occ[i] - occ[i - 1] - 1);
  return L - gap;
}

int support_extent(const WalkState& state, double eps) {
  return support_extent(position_distribution(state), eps, state.geom.boundary);
}

std::pair<WalkState, BasisIndex> measure_position(const WalkState& state, Rng& rng) {
  const double total = state.amp.squaredNorm();
  if (!(total > 0.0)) throw DomainError("cannot measure a zero state");
  const double u = uniform01(rng) * total;
  double acc = 0.0;
  int pick = -1;
  for (int i = 0; i < state.amp.size(); ++i) {
    const double p = std::norm(state.amp[i]);
    if (p == 0.0) continue;
    pick = i;
    acc += p;
    if (u < acc) break;
  }
  const BasisIndex idx = basis_index(pick, state.geom);
  return {WalkState::basis(state.geom, idx), idx};
}

EvolutionRecord evolve(const WalkState& initial, long T, const CoinField& field,
                       const FluxGauge& gauge, const std::vector<Observable>& record,
                       double trim_threshold) {
  if (T < 0) throw DomainError("negative step count");
  field.validate(initial.geom, T);
  auto wants = [&](Observable o) { return std::find(record.begin(), record.end(), o) != record.end(); };
  PropagatorOptions opts;
  opts.trim_threshold = trim_threshold;
  opts.track_cage = wants(Observable::cage);
  Propagator prop(initial, field, gauge, opts);
  EvolutionRecord rec;
  auto sample = [&] {
    if (wants(Observable::sigma)) rec.sigma.push_back(prop.sigma());
    if (wants(Observable::support)) rec.support.push_back(prop.support_extent());
    if (wants(Observable::norm)) rec.norm.push_back(std::sqrt(prop.norm2()));
    if (opts.track_cage) rec.cage.push_back(prop.cage_extent());
  };
  sample();
  for (long t = 0; t < T; ++t) {
    prop.advance();
    sample();
  }
  rec.final_state = prop.state();
  return rec;
}

TwoStepBlocks two_step_operator(double theta_b, double theta_c, const FluxGauge& gauge,
                                HubCoin hub) {
  const double f = gauge.f - std::floor(gauge.f);
  if (hub.kind != HubCoin::Kind::grover || std::abs(f - 0.5) > 1e-12)
    throw DomainError("closed-form two-step operator needs a Grover hub at f=1/2");
  const double cp = 0.5 * (std::cos(theta_b) + std::cos(theta_c));
  const double cm = 0.5 * (std::cos(theta_b) - std::cos(theta_c));
  const double sp = 0.5 * (std::sin(theta_b) + std::sin(theta_c));
  const double sm = 0.5 * (std::sin(theta_b) - std::sin(theta_c));
  TwoStepBlocks w;
  w.stay << 0, cp, -cm, 0,
            cp, 0, 0, -cm,
            0, cm, -cp, 0,
            cm, 0, 0, -cp;
  w.right << 0, 0, 0, 0,
             0, -sm, sp, 0,
             0, 0, 0, 0,
             0, -sp, sm, 0;
  w.left << sm, 0, 0, -sp,
            0, 0, 0, 0,
            sp, 0, 0, -sm,
            0, 0, 0, 0;
  return w;
}

TwoStepBlocks composed_two_step(double theta_b, double theta_c, const FluxGauge& gauge,
                                HubCoin hub) {
  const ChainGeometry geom{5, Boundary::periodic};
  constexpr int centre = 2;
  CoinField field = CoinField::uniform(hub);
  // Even-step rim angles never act (the walker sits on hubs), any value works.
  field.theta_b_t = {0.3, theta_b - pi / 4};
  field.theta_c_t = {-0.7, theta_c - pi / 4};
  const Eigen::Matrix4cd basis = spin_basis();
  TwoStepBlocks w;
  for (int col = 0; col < 4; ++col) {
    WalkState s = WalkState::hub(geom, centre, basis.col(col));
    s = step(step(s, field, 0, gauge), field, 1, gauge);
    auto coeffs = [&](int cell) -> Eigen::Vector4cd {
      return basis.adjoint() * s.amp.segment<4>(8 * cell);
    };
    w.stay.col(col) = coeffs(centre);
    w.right.col(col) = coeffs(centre + 1);
    w.left.col(col) = coeffs(centre - 1);
  }
  return w;
}

}  // namespace dcqw
