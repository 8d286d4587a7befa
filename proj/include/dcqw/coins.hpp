#pragma once

#include <vector>

#include <Eigen/Dense>

#include "dcqw/lattice.hpp"

namespace dcqw {

struct RimCoinParams {
  double theta = pi / 4;
  double phi = 0.0;
  double omega = 0.0;
  double beta = 0.0;
};

Eigen::Matrix2cd rim_coin(const RimCoinParams& p);
Eigen::Matrix4cd grover4();
Eigen::Matrix4cd hadamard4();
Eigen::Matrix4cd hadamard4_theta(double theta);

struct HubCoin {
  enum class Kind { grover, hadamard, hadamard_theta };
  Kind kind = Kind::grover;
  double theta = pi / 4;  // only used by hadamard_theta

  static HubCoin grover() { return {Kind::grover, pi / 4}; }
  static HubCoin hadamard() { return {Kind::hadamard, pi / 4}; }
  static HubCoin hadamard_theta(double t) { return {Kind::hadamard_theta, t}; }

  Eigen::Matrix4cd matrix() const;
  bool operator==(const HubCoin&) const = default;
};

// Coins over space and time. Spatial vectors have size 1 (uniform) or L.
// Optional temporal parts have one entry per step and are uniform in space:
// hub_t replaces the hub coin, theta_b_t / theta_c_t are added to the rim
// angles of every cell.
struct CoinField {
  std::vector<HubCoin> hub{HubCoin::grover()};
  std::vector<RimCoinParams> rim_b{RimCoinParams{}};
  std::vector<RimCoinParams> rim_c{RimCoinParams{}};
  std::vector<HubCoin> hub_t;
  std::vector<double> theta_b_t;
  std::vector<double> theta_c_t;

  static CoinField uniform(HubCoin hub, RimCoinParams rim = {});

  bool time_dependent() const {
    return !hub_t.empty() || !theta_b_t.empty() || !theta_c_t.empty();
  }
  // Number of steps covered by the temporal part (unbounded if static).
  long steps_defined() const;
  void validate(const ChainGeometry& geom, long steps) const;

  HubCoin hub_at(long t, int cell) const;
  RimCoinParams rim_b_at(long t, int cell) const;
  RimCoinParams rim_c_at(long t, int cell) const;
};

// Block-diagonal coin operator at one time step.
struct CoinOperator {
  ChainGeometry geom;
  std::vector<Eigen::Matrix4cd> hub;
  std::vector<Eigen::Matrix2cd> b;
  std::vector<Eigen::Matrix2cd> c;

  void apply(const cplx* in, cplx* out) const;
  Eigen::MatrixXcd dense() const;
};

CoinOperator build_coin_operator(const CoinField& field, long t, const ChainGeometry& geom);

// Dense W = S C for small chains; the reference for everything spectral.
Eigen::MatrixXcd dense_walk_operator(const CoinField& field, long t, const ChainGeometry& geom,
                                     const FluxGauge& gauge);

}  // namespace dcqw
