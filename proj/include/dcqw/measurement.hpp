#pragma once

#include <cstdint>
#include <vector>

#include "dcqw/coins.hpp"
#include "dcqw/stats.hpp"

namespace dcqw {

struct MeasurementSpec {
  double theta = pi / 3;
  double f = 0.5;
  HubCoin hub = HubCoin::grover();
  int period = 5;
  int measurements = 1000;
  int trajectories = 10000;
  int initial_slot = 0;  // Rb = (R+ + R-)/√2
  std::uint64_t seed = 1;
};

// Outcome law of one measurement period started from a basis state: the
// clean walk is translation invariant, so the law depends only on the
// internal slot and the cell offset.
struct TransitionTable {
  int period = 0;
  // For each start slot: outcomes (cell offset, slot) in flat-index order with
  // cumulative probabilities.
  struct Row {
    std::vector<int> offset, slot;
    std::vector<double> cumulative;
  };
  std::vector<Row> rows;  // 8 entries
};

TransitionTable transition_table(const MeasurementSpec& spec);

struct MeasurementResult {
  std::vector<double> n;      // measurement count
  std::vector<double> sigma;  // spread of positions over trajectories
  std::vector<double> exact_sigma;  // from exact propagation of the outcome law
  double sqrt_d = 0.0;        // least-squares a in sigma = a sqrt(n)
  double d = 0.0;
  std::vector<int> final_positions;  // cell offsets after the last measurement
  std::vector<double> hist_x, hist_p;
  GaussianFit gaussian;
};

// Monte Carlo over trajectories using the transition table.
MeasurementResult measurement_experiment(const MeasurementSpec& spec);

// Reference: the same trajectories by explicit evolution on a chain of L
// cells with measure_position. Returns the outcome offsets per trajectory.
std::vector<std::vector<int>> measurement_reference(const MeasurementSpec& spec, int L);
std::vector<std::vector<int>> measurement_markov_paths(const MeasurementSpec& spec);

// sigma(n) for n = 1..N from exact propagation of the outcome law.
std::vector<double> measurement_exact_sigma(const MeasurementSpec& spec);

}  // namespace dcqw
