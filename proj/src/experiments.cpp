#include "dcqw/experiments.hpp"

#include <algorithm>
#include <cmath>

#include "dcqw/errors.hpp"
#include "dcqw/propagator.hpp"

namespace dcqw {

namespace {

// Complex amplitude updates allowed per ensemble: 8 L T R.
constexpr double kEnsembleBudget = 2e12;

}  // namespace

ChainGeometry ExperimentSpec::geometry() const {
  const int cells = L > 0 ? L : static_cast<int>(T + 8);
  return ChainGeometry{cells, boundary};
}

void ExperimentSpec::validate() const {
  if (L < 0) throw ConfigError("length must be >= 0");
  if (T < 0) throw ConfigError("steps must be >= 0");
  if (R < 1) throw ConfigError("realizations must be >= 1");
  if (trim_threshold < 0.0) throw ConfigError("trim threshold must be >= 0");
  geometry().validate();
  disorder.validate();
}

EnsembleResult run_ensemble(const ExperimentSpec& spec) {
  spec.validate();
  const ChainGeometry geom = spec.geometry();
  const double work = 8.0 * geom.L * static_cast<double>(spec.T + 1) * spec.R;
  if (work > kEnsembleBudget) throw ResourceError("ensemble exceeds the 8 L T R budget");
  const int n0 = geom.L / 2;
  const FluxGauge gauge{spec.f};
  const long T = spec.T;
  const int R = spec.R;

  // Per-realization rows, reduced in index order afterwards so the result
  // does not depend on the thread count.
  std::vector<std::vector<double>> sig(R, std::vector<double>(T + 1));
  std::vector<std::vector<double>> dist(spec.record_distribution ? R : 0);

#pragma omp parallel for schedule(dynamic, 1)
  for (int r = 0; r < R; ++r) {
    Rng rng = realization_rng(spec.seed, static_cast<std::uint64_t>(r));
    const CoinField field = realize_field(spec.disorder, geom.L, T, rng);
    const WalkState init = spec.initial == InitialKind::generic_hub
                               ? WalkState::hub(geom, n0, generic_hub_spinor())
                               : WalkState::hub_spin(geom, n0, spec.spin);
    Propagator prop(init, field, gauge, {spec.trim_threshold, false, false});
    sig[r][0] = prop.sigma();
    for (long t = 1; t <= T; ++t) {
      prop.advance();
      sig[r][t] = prop.sigma();
    }
    if (spec.record_distribution) dist[r] = prop.cell_probabilities();
  }

  EnsembleResult out;
  out.R = R;
  out.seed = spec.seed;
  out.t.resize(T + 1);
  out.sigma_mean.resize(T + 1);
  out.sigma_stderr.resize(T + 1);
  out.sigma2_mean.resize(T + 1);
  out.sigma2_stderr.resize(T + 1);
  std::vector<double> col(R), col2(R);
  for (long t = 0; t <= T; ++t) {
    for (int r = 0; r < R; ++r) {
      col[r] = sig[r][t];
      col2[r] = sig[r][t] * sig[r][t];
    }
    const MeanErr m = mean_stderr(col);
    const MeanErr m2 = mean_stderr(col2);
    out.t[t] = static_cast<double>(t);
    out.sigma_mean[t] = m.mean;
    out.sigma_stderr[t] = m.stderr_mean;
    out.sigma2_mean[t] = m2.mean;
    out.sigma2_stderr[t] = m2.stderr_mean;
  }
  if (spec.record_distribution) {
    out.mean_distribution.assign(geom.L, 0.0);
    for (int r = 0; r < R; ++r)
      for (int n = 0; n < geom.L; ++n) out.mean_distribution[n] += dist[r][n] / R;
  }
  return out;
}

CageStatistics cage_statistics(double ps, double f, long steps, int R, std::uint64_t seed,
                               int L) {
  if (ps < 0.0 || ps > 1.0) throw ConfigError("ps must lie in [0, 1]");
  if (R < 1 || steps < 1) throw ConfigError("need R >= 1 and steps >= 1");
  const ChainGeometry geom{L, Boundary::periodic};
  geom.validate();
  if (L < steps + 4) throw ConfigError("chain too short for the requested steps");
  const int n0 = L / 2;
  const FluxGauge gauge{f};
  DisorderSpec spec;
  spec.kind = DisorderKind::hub_static;
  spec.p = ps;

  CageStatistics out;
  out.extents.resize(R);
  out.rule_extents.resize(R);
#pragma omp parallel for schedule(dynamic, 16)
  for (int r = 0; r < R; ++r) {
    Rng rng = realization_rng(seed, static_cast<std::uint64_t>(r));
    const CoinField field = realize_field(spec, L, steps, rng);
    Propagator prop(WalkState::hub(geom, n0, generic_hub_spinor()), field, gauge,
                    {0.0, false, true});
    for (long t = 0; t < steps; ++t) prop.advance();
    out.extents[r] = prop.cage_extent();
    out.rule_extents[r] = static_cage_rule(field.hub, n0, f);
  }

  std::vector<double> ext(out.extents.begin(), out.extents.end());
  out.mean = mean_stderr(ext);
  const AvgExtension avg = predicted_avg_extension(ps, f);
  out.predicted_mean = avg.infinite ? INFINITY : avg.value;

  // A wall is reached only if it lies within steps/2 cells, so sizes up to
  // that reach are exact and everything above is pooled into the tail bin.
  const int n_fit = static_cast<int>(steps / 2);
  std::vector<double> obs(n_fit - 4, 0.0), expct(n_fit - 4, 0.0);
  for (int n : out.extents) {
    const int i = std::clamp(n, 5, n_fit) - 5;
    obs[i] += 1.0;
  }
  for (int n = 5; n <= n_fit; ++n) expct[n - 5] = predicted_cage_prob_static(n, ps, f);
  out.chi2 = chi_square_test(obs, expct, static_cast<double>(R));
  return out;
}

double subdiffusion_gamma_theory(double alpha) {
  if (alpha >= 1.0) throw DomainError("alpha must be < 1");
  if (alpha < -1.0) return 0.5;
  return (1.0 - alpha) / (3.0 - alpha);
}

SubdiffusionResult subdiffusion_experiment(double alpha, long T, int R, std::uint64_t seed,
                                           double fit_lo, double fit_hi) {
  if (alpha >= 1.0) throw DomainError("alpha must be < 1");
  ExperimentSpec spec;
  spec.f = 0.5;
  spec.disorder.kind = DisorderKind::combined;
  spec.disorder.alpha = alpha;
  spec.T = T;
  spec.R = R;
  spec.seed = seed;
  SubdiffusionResult out;
  out.ensemble = run_ensemble(spec);
  out.fit = fit_hi > fit_lo ? fit_exponent(out.ensemble.t, out.ensemble.sigma_mean, fit_lo, fit_hi)
                            : fit_exponent(out.ensemble.t, out.ensemble.sigma_mean);
  out.gamma_theory = subdiffusion_gamma_theory(alpha);
  return out;
}

double predicted_variance_dynamic_rim(double t, const HubSpinConfig& spin) {
  const double m = spin.imbalance();
  return (t - m * m) / 4.0;
}

TailProfile eigenvector_tail_profile(const CoinField& field, const ChainGeometry& geom,
                                     const FluxGauge& gauge) {
  const SpectrumResult s = full_spectrum(field, geom, gauge, true);
  const Eigen::MatrixXcd& v = *s.vectors;
  const int L = geom.L;
  const int dmax = L / 2;
  TailProfile out;
  out.distance.resize(dmax + 1);
  out.mean_log10_prob.assign(dmax + 1, 0.0);
  std::vector<double> count(dmax + 1, 0.0);
  std::vector<double> p(L);
  for (int j = 0; j < v.cols(); ++j) {
    for (int n = 0; n < L; ++n) p[n] = v.col(j).segment<8>(8 * n).squaredNorm();
    const int peak = static_cast<int>(std::max_element(p.begin(), p.end()) - p.begin());
    for (int n = 0; n < L; ++n) {
      int d = std::abs(n - peak);
      d = std::min(d, L - d);
      out.mean_log10_prob[d] += std::log10(std::max(p[n], 1e-300));
      count[d] += 1.0;
    }
  }
  for (int d = 0; d <= dmax; ++d) {
    out.distance[d] = d;
    out.mean_log10_prob[d] /= count[d];
  }
  return out;
}

IprScan ipr_scan(const std::vector<double>& dthetas, double f, DisorderKind kind, int L, int R,
                 std::uint64_t seed) {
  const ChainGeometry geom{L, Boundary::periodic};
  geom.validate();
  IprScan out;
  out.dtheta = dthetas;
  const int P = static_cast<int>(dthetas.size());
  std::vector<double> per(static_cast<std::size_t>(P) * R);
#pragma omp parallel for collapse(2) schedule(dynamic, 1)
  for (int i = 0; i < P; ++i) {
    for (int r = 0; r < R; ++r) {
      DisorderSpec spec;
      spec.kind = kind;
      spec.dtheta = dthetas[i];
      Rng rng = realization_rng(seed, static_cast<std::uint64_t>(r), static_cast<std::uint64_t>(i));
      const CoinField field = realize_field(spec, L, 0, rng);
      const EigenIpr e = eigen_ipr(field, geom, FluxGauge{f});
      double s = 0.0;
      for (double v : e.ipr) s += std::log(v);
      per[static_cast<std::size_t>(i) * R + r] = s / static_cast<double>(e.ipr.size());
    }
  }
  for (int i = 0; i < P; ++i) {
    const MeanErr m = mean_stderr(
        std::vector<double>(per.begin() + static_cast<long>(i) * R, per.begin() + (i + 1L) * R));
    out.mean_log_ipr.push_back(m.mean);
    out.stderr_log_ipr.push_back(m.stderr_mean);
  }
  return out;
}

std::vector<std::vector<double>> disordered_spectra(const DisorderSpec& spec, double f, int L,
                                                    int R, std::uint64_t seed) {
  const ChainGeometry geom{L, Boundary::periodic};
  geom.validate();
  std::vector<std::vector<double>> out(R);
#pragma omp parallel for schedule(dynamic, 1)
  for (int r = 0; r < R; ++r) {
    Rng rng = realization_rng(seed, static_cast<std::uint64_t>(r));
    const CoinField field = realize_field(spec, L, 0, rng);
    out[r] = full_spectrum(field, geom, FluxGauge{f}, false).rows.at(0).energies;
  }
  return out;
}

}  // namespace dcqw
