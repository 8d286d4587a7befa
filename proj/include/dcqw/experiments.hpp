#pragma once

#include <cstdint>
#include <vector>

#include "dcqw/disorder.hpp"
#include "dcqw/spectral.hpp"
#include "dcqw/stats.hpp"
#include "dcqw/walk.hpp"

namespace dcqw {

enum class InitialKind { hub_spin, generic_hub };

struct ExperimentSpec {
  int L = 0;  // 0: T + 8 cells, enough that the light cone never wraps
  Boundary boundary = Boundary::periodic;
  double f = 0.5;
  DisorderSpec disorder;
  InitialKind initial = InitialKind::hub_spin;
  HubSpinConfig spin;
  long T = 100;
  int R = 100;
  std::uint64_t seed = 1;
  double trim_threshold = 1e-30;
  bool record_distribution = false;

  ChainGeometry geometry() const;
  int start_cell() const { return geometry().L / 2; }
  void validate() const;
};

struct EnsembleResult {
  std::vector<double> t;
  std::vector<double> sigma_mean, sigma_stderr;    // disorder average of sigma
  std::vector<double> sigma2_mean, sigma2_stderr;  // disorder average of sigma^2
  std::vector<double> mean_distribution;           // final per-cell probability, averaged
  int R = 0;
  std::uint64_t seed = 0;
};

EnsembleResult run_ensemble(const ExperimentSpec& spec);

struct CageStatistics {
  std::vector<int> extents;       // simulated cage size per realization
  std::vector<int> rule_extents;  // static rule per realization
  MeanErr mean;
  double predicted_mean = 0.0;
  ChiSquare chi2;
};

// Static hub disorder, generic hub spinor on the centre cell, cage size from
// the support accumulated over `steps` steps.
CageStatistics cage_statistics(double ps, double f, long steps, int R, std::uint64_t seed,
                               int L = 64);

struct SubdiffusionResult {
  EnsembleResult ensemble;
  PowerLawFit fit;
  double gamma_theory = 0.0;
};

double subdiffusion_gamma_theory(double alpha);
SubdiffusionResult subdiffusion_experiment(double alpha, long T, int R, std::uint64_t seed,
                                           double fit_lo = 0.0, double fit_hi = 0.0);

double predicted_variance_dynamic_rim(double t, const HubSpinConfig& spin);

// Log-averaged eigenvector profile (log10 cell probability against the
// distance from each eigenvector's peak), averaged over eigenvectors.
struct TailProfile {
  std::vector<double> distance;
  std::vector<double> mean_log10_prob;
};
TailProfile eigenvector_tail_profile(const CoinField& field, const ChainGeometry& geom,
                                     const FluxGauge& gauge);

struct IprScan {
  std::vector<double> dtheta;
  std::vector<double> mean_log_ipr;
  std::vector<double> stderr_log_ipr;
};
IprScan ipr_scan(const std::vector<double>& dthetas, double f, DisorderKind kind, int L, int R,
                 std::uint64_t seed);

// Pooled eigenphases of R disordered chains for level statistics.
std::vector<std::vector<double>> disordered_spectra(const DisorderSpec& spec, double f, int L,
                                                    int R, std::uint64_t seed);

}  // namespace dcqw
