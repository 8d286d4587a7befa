#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "dcqw/coins.hpp"
#include "dcqw/walk.hpp"

namespace dcqw {

using Matrix8cd = Eigen::Matrix<cplx, 8, 8>;

// Quasi-energy of an eigenvalue lambda = e^{-i eps}, mapped to (-pi, pi].
double quasi_energy(cplx lambda);

// Eigenpairs of a normal matrix via complex Schur (LAPACK zgees); for a
// normal matrix the Schur vectors are orthonormal eigenvectors.
struct NormalEigen {
  Eigen::VectorXcd values;
  Eigen::MatrixXcd vectors;  // empty unless requested
};
NormalEigen normal_eigen(const Eigen::MatrixXcd& m, bool vectors);

std::vector<double> eigenphases(const Eigen::MatrixXcd& unitary);

Matrix8cd bloch_operator(double k, double f, const HubCoin& hub, const RimCoinParams& rim_b = {},
                         const RimCoinParams& rim_c = {});

struct SpectrumRow {
  double f = 0.0;
  double k = 0.0;
  std::vector<double> energies;  // sorted ascending in (-pi, pi]
};

struct SpectrumResult {
  std::vector<SpectrumRow> rows;
  std::optional<Eigen::MatrixXcd> vectors;  // columns match rows[0].energies (single operator)

  // (energy, multiplicity) over all rows, merged within tol on the circle.
  std::vector<std::pair<double, int>> degeneracies(double tol = 1e-8) const;
};

SpectrumResult spectrum_vs_flux(const std::vector<double>& fluxes, const std::vector<double>& ks,
                                const HubCoin& hub, const RimCoinParams& rim = {});

// Largest k-variation of any sorted band among rows sharing the same flux.
double max_band_spread(const SpectrumResult& s);

// Reference route: dense Schur decomposition of the full 8L x 8L unitary.
SpectrumResult full_spectrum_dense(const Eigen::MatrixXcd& w, bool vectors);

// Production route for periodic chains. S always maps hub states to rim
// states and back, so W = [[0, A], [B, 0]]; the eigenpairs of the 4L x 4L
// unitary AB give those of W as (v, ±Bv/mu)/√2 with eigenvalues ±mu, mu² = eig(AB).
SpectrumResult full_spectrum(const CoinField& field, const ChainGeometry& geom,
                             const FluxGauge& gauge, bool vectors);

// IPR of every eigenvector of W (length 8L, same order as the energies).
struct EigenIpr {
  std::vector<double> energies;
  std::vector<double> ipr;
};
EigenIpr eigen_ipr(const CoinField& field, const ChainGeometry& geom, const FluxGauge& gauge);

double ipr(const Eigen::VectorXcd& v, const ChainGeometry& geom);
std::vector<double> site_probabilities(const Eigen::VectorXcd& v, const ChainGeometry& geom);

struct SpacingStats {
  std::vector<double> spacings;     // pooled unfolded spacings
  std::vector<double> hist_edges;   // bin edges
  std::vector<double> hist_density; // normalized histogram
  double ks_distance = 0.0;         // sup |F_emp(s) - (1 - e^{-s})|
};

// Circular nearest-neighbour spacings after unfolding every realization with
// the ensemble-averaged level counting function, pooled. Mean spacing is 1.
SpacingStats level_spacing_stats(const std::vector<std::vector<double>>& realizations,
                                 double bin_width = 0.1, double s_max = 5.0);

enum class CoinFamily { grover, hadamard };

struct ConfinedEigenstate {
  CoinFamily family;
  double epsilon;
  int center;
  cplx alpha, beta, gamma, delta;
  WalkState state;
};

// Quasi-energies of the maximally confined states, per family.
std::vector<double> confined_energies(CoinFamily family);
double critical_flux(CoinFamily family);
HubCoin family_coin(CoinFamily family);

ConfinedEigenstate confined_eigenstate(CoinFamily family, double epsilon, int center,
                                       const ChainGeometry& geom);

double eigen_residual(const WalkState& psi, double epsilon, const CoinField& field,
                      const FluxGauge& gauge);

}  // namespace dcqw
