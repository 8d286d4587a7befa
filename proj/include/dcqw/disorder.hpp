#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "dcqw/coins.hpp"
#include "dcqw/rng.hpp"

namespace dcqw {

enum class DisorderKind {
  none,
  hub_static,     // Grover with probability p per cell, Hadamard otherwise
  hub_dynamic,    // same, redrawn each step and uniform over the chain
  rim_static,     // theta_b, theta_c per cell from [theta0 - dtheta/2, theta0 + dtheta/2]
  rim_dynamic,    // one theta_b and one theta_c per step, uniform over the chain
  combined,       // theta_b = theta_s(t) + theta_as(i), theta_c = theta_s(t) - theta_as(i)
  hub_rim_static  // rim_static plus HadamardTheta hub coins from the same box
};

struct DisorderSpec {
  DisorderKind kind = DisorderKind::none;
  double p = 0.5;
  double theta0 = pi / 4;
  double dtheta = 0.0;
  double alpha = 0.0;
  HubCoin hub = HubCoin::grover();  // hub coin where the disorder leaves it alone

  void validate() const;
};

std::vector<HubCoin> sample_hub_static(double ps, int L, Rng& rng);
std::vector<HubCoin> sample_hub_dynamic(double pt, long T, Rng& rng);
std::vector<double> sample_rim_box(double theta0, double dtheta, std::size_t count, Rng& rng);
// |theta_as| = (pi/2) u^{1/(1-alpha)}, u in (0,1], random sign.
std::vector<double> sample_theta_as(double alpha, std::size_t count, Rng& rng);

// One disorder realization over T steps.
CoinField realize_field(const DisorderSpec& spec, int L, long T, Rng& rng);

// Probability of a static-disorder cage of n cells (f in {0, 1/2}).
double predicted_cage_prob_static(int n, double ps, double f);

struct AvgExtension {
  double value = 0.0;
  bool infinite = false;
};
AvgExtension predicted_avg_extension(double ps, double f);

// Probability of a cage of n cells after T hub applications under temporal
// disorder. Follows the temporal rules: the right wall moves one cell per
// extending coin among applications 1..T-1, the left wall per extending coin
// among 2..T; Hadamard extends at f=1/2, Grover at f=0.
double predicted_cage_prob_dynamic(int n, int T, double pt, double f);

// Rule-based cage size for static hub labels around start cell n0.
// Exact per realization at f=1/2; at f=0 only the distribution agrees.
int static_cage_rule(const std::vector<HubCoin>& labels, int n0, double f);

// Rule-based cage size from hub coins at applications k = 0..T (index k).
// An upper bound on the simulated cage; equal for short sequences.
int dynamic_cage_rule(const std::vector<HubCoin>& per_application, double f);

// A hub spinor with no symmetry, so that no cage edge cancels by accident.
Eigen::Vector4cd generic_hub_spinor();

}  // namespace dcqw
