#pragma once

#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "dcqw/coins.hpp"
#include "dcqw/lattice.hpp"
#include "dcqw/rng.hpp"

namespace dcqw {

// Hub spin in the basis {R+, L+, R-, L-}, R± = (Rb ± Rc)/√2, L± = (Lb ± Lc)/√2.
struct HubSpinConfig {
  cplx a0 = 1.0, b0 = 0.0, c0 = 0.0, d0 = 0.0;

  Eigen::Vector4cd hub_amplitudes() const;  // in slot order (Rb, Lb, Lc, Rc)
  double imbalance() const;                 // |a0|²-|b0|²-|c0|²+|d0|²
};

// Columns are R+, L+, R-, L- written in slot order.
Eigen::Matrix4cd spin_basis();

struct WalkState {
  ChainGeometry geom;
  Eigen::VectorXcd amp;

  static WalkState zero(const ChainGeometry& geom);
  static WalkState basis(const ChainGeometry& geom, const BasisIndex& idx);
  static WalkState hub(const ChainGeometry& geom, int cell, const Eigen::Vector4cd& v);
  static WalkState hub_spin(const ChainGeometry& geom, int cell, const HubSpinConfig& s);

  double norm() const { return amp.norm(); }
};

// One step S·C(t). `step` uses the OpenMP kernel, `step_reference` applies the
// coin and the shift tables one after another in plain serial code.
WalkState step(const WalkState& state, const CoinField& field, long t, const FluxGauge& gauge);
WalkState step_reference(const WalkState& state, const CoinField& field, long t,
                         const FluxGauge& gauge);

std::vector<double> position_distribution(const WalkState& state);
double std_dev(const std::vector<double>& dist);
// Cells in the smallest contiguous window (an arc on a periodic chain) that
// holds every cell with probability above eps.
int support_extent(const std::vector<double>& dist, double eps = 1e-12,
                   Boundary boundary = Boundary::periodic);
int support_extent(const WalkState& state, double eps = 1e-12);

std::pair<WalkState, BasisIndex> measure_position(const WalkState& state, Rng& rng);

enum class Observable { sigma, support, norm, cage };

struct EvolutionRecord {
  std::vector<double> sigma;
  std::vector<int> support;
  std::vector<double> norm;
  std::vector<int> cage;  // extent of the support accumulated since t=0
  WalkState final_state;
};

// Records the requested observables at t = 0..T (T+1 entries each).
EvolutionRecord evolve(const WalkState& initial, long T, const CoinField& field,
                       const FluxGauge& gauge, const std::vector<Observable>& record,
                       double trim_threshold = 0.0);

struct TwoStepBlocks {
  Eigen::Matrix4cd stay;   // |i><i|
  Eigen::Matrix4cd right;  // |i+1><i|
  Eigen::Matrix4cd left;   // |i-1><i|
};

// Closed-form hub-to-hub operator over two steps (Grover hub, f=1/2, real
// rim rotations) in the {R+, L+, R-, L-} basis; theta values of the odd step.
TwoStepBlocks two_step_operator(double theta_b, double theta_c, const FluxGauge& gauge = {0.5},
                                HubCoin hub = HubCoin::grover());
// Same blocks obtained by composing two calls of step().
TwoStepBlocks composed_two_step(double theta_b, double theta_c, const FluxGauge& gauge,
                                HubCoin hub = HubCoin::grover());

}  // namespace dcqw
