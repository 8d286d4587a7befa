#include "dcqw/measurement.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>

#include "dcqw/errors.hpp"
#include "dcqw/propagator.hpp"
#include "dcqw/rng.hpp"
#include "dcqw/walk.hpp"

namespace dcqw {

namespace {

void check(const MeasurementSpec& s) {
  if (s.period < 1) throw ConfigError("measurement period must be >= 1");
  if (s.measurements < 1) throw ConfigError("measurements must be >= 1");
  if (s.trajectories < 1) throw ConfigError("trajectories must be >= 1");
  if (s.initial_slot < 0 || s.initial_slot > 7) throw ConfigError("initial slot out of range");
}

CoinField clean_field(const MeasurementSpec& s) {
  return CoinField::uniform(s.hub, RimCoinParams{s.theta});
}

int sample(const TransitionTable::Row& row, double total, Rng& rng) {
  const double u = uniform01(rng) * total;
  const auto it = std::upper_bound(row.cumulative.begin(), row.cumulative.end(), u);
  const auto i = it == row.cumulative.end() ? row.cumulative.size() - 1 : it - row.cumulative.begin();
  return static_cast<int>(i);
}

}  // namespace

TransitionTable transition_table(const MeasurementSpec& spec) {
  check(spec);
  const int L = spec.period + 8;
  const int c0 = L / 2;
  const ChainGeometry geom{L, Boundary::periodic};
  const CoinField field = clean_field(spec);
  const FluxGauge gauge{spec.f};
  TransitionTable tab;
  tab.period = spec.period;
  tab.rows.resize(8);
  for (int s = 0; s < 8; ++s) {
    const int flat = 8 * c0 + s;
    WalkState psi = WalkState::basis(geom, basis_index(flat, geom));
    Propagator prop(psi, field, gauge, {0.0, false, false});
    for (int t = 0; t < spec.period; ++t) prop.advance();
    psi = prop.state();
    auto& row = tab.rows[s];
    double acc = 0.0;
    for (int i = 0; i < psi.amp.size(); ++i) {
      const double p = std::norm(psi.amp[i]);
      if (p == 0.0) continue;
      acc += p;
      row.offset.push_back(i / 8 - c0);
      row.slot.push_back(i % 8);
      row.cumulative.push_back(acc);
    }
  }
  return tab;
}

std::vector<std::vector<int>> measurement_markov_paths(const MeasurementSpec& spec) {
  const TransitionTable tab = transition_table(spec);
  std::vector<std::vector<int>> paths(spec.trajectories, std::vector<int>(spec.measurements));
#pragma omp parallel for schedule(static)
  for (int j = 0; j < spec.trajectories; ++j) {
    Rng rng = realization_rng(spec.seed, static_cast<std::uint64_t>(j));
    int slot = spec.initial_slot, x = 0;
    for (int m = 0; m < spec.measurements; ++m) {
      const auto& row = tab.rows[slot];
      const int i = sample(row, row.cumulative.back(), rng);
      x += row.offset[i];
      slot = row.slot[i];
      paths[j][m] = x;
    }
  }
  return paths;
}

std::vector<std::vector<int>> measurement_reference(const MeasurementSpec& spec, int L) {
  check(spec);
  const ChainGeometry geom{L, Boundary::periodic};
  geom.validate();
  const CoinField field = clean_field(spec);
  const FluxGauge gauge{spec.f};
  const int c0 = L / 2;
  std::vector<std::vector<int>> paths(spec.trajectories, std::vector<int>(spec.measurements));
  for (int j = 0; j < spec.trajectories; ++j) {
    Rng rng = realization_rng(spec.seed, static_cast<std::uint64_t>(j));
    WalkState psi = WalkState::basis(geom, BasisIndex{c0, Site::a, spec.initial_slot});
    long x = 0;
    int cell = c0;
    for (int m = 0; m < spec.measurements; ++m) {
      for (int t = 0; t < spec.period; ++t) psi = step(psi, field, t, gauge);
      auto [next, idx] = measure_position(psi, rng);
      int d = idx.cell - cell;
      if (d > L / 2) d -= L;
      if (d < -L / 2) d += L;
      x += d;
      cell = idx.cell;
      psi = std::move(next);
      paths[j][m] = static_cast<int>(x);
    }
  }
  return paths;
}

std::vector<double> measurement_exact_sigma(const MeasurementSpec& spec) {
  const TransitionTable tab = transition_table(spec);
  // Zeroth, first and second position moments conditioned on the slot.
  std::array<double, 8> m0{}, m1{}, m2{};
  m0[spec.initial_slot] = 1.0;
  std::vector<double> out(spec.measurements);
  for (int n = 0; n < spec.measurements; ++n) {
    std::array<double, 8> a0{}, a1{}, a2{};
    for (int s = 0; s < 8; ++s) {
      if (m0[s] == 0.0 && m1[s] == 0.0 && m2[s] == 0.0) continue;
      const auto& row = tab.rows[s];
      const double total = row.cumulative.back();
      double prev = 0.0;
      for (std::size_t i = 0; i < row.slot.size(); ++i) {
        const double p = (row.cumulative[i] - prev) / total;
        prev = row.cumulative[i];
        const double o = row.offset[i];
        const int s2 = row.slot[i];
        a0[s2] += p * m0[s];
        a1[s2] += p * (m1[s] + o * m0[s]);
        a2[s2] += p * (m2[s] + 2.0 * o * m1[s] + o * o * m0[s]);
      }
    }
    m0 = a0;
    m1 = a1;
    m2 = a2;
    double e1 = 0.0, e2 = 0.0;
    for (int s = 0; s < 8; ++s) {
      e1 += m1[s];
      e2 += m2[s];
    }
    out[n] = std::sqrt(std::max(0.0, e2 - e1 * e1));
  }
  return out;
}

MeasurementResult measurement_experiment(const MeasurementSpec& spec) {
  const auto paths = measurement_markov_paths(spec);
  const int N = spec.measurements;
  const double J = spec.trajectories;
  MeasurementResult out;
  out.n.resize(N);
  out.sigma.resize(N);
  // Integer sums keep the reduction exact and order independent.
  for (int m = 0; m < N; ++m) {
    std::int64_t s1 = 0, s2 = 0;
    for (const auto& p : paths) {
      s1 += p[m];
      s2 += static_cast<std::int64_t>(p[m]) * p[m];
    }
    const double mean = s1 / J;
    out.n[m] = m + 1.0;
    out.sigma[m] = std::sqrt(std::max(0.0, s2 / J - mean * mean));
  }
  out.exact_sigma = measurement_exact_sigma(spec);
  double num = 0.0, den = 0.0;
  for (int m = 0; m < N; ++m) {
    num += out.sigma[m] * std::sqrt(out.n[m]);
    den += out.n[m];
  }
  out.sqrt_d = num / den;
  out.d = out.sqrt_d * out.sqrt_d;

  out.final_positions.reserve(paths.size());
  for (const auto& p : paths) out.final_positions.push_back(p.back());
  const auto [lo, hi] = std::minmax_element(out.final_positions.begin(), out.final_positions.end());
  for (int x = *lo; x <= *hi; ++x) out.hist_x.push_back(x);
  out.hist_p.assign(out.hist_x.size(), 0.0);
  for (int x : out.final_positions) out.hist_p[x - *lo] += 1.0 / J;
  out.gaussian = fit_gaussian(out.hist_x, out.hist_p);
  return out;
}

}  // namespace dcqw
