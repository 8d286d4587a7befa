#pragma once

#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "dcqw/coins.hpp"
#include "dcqw/spectral.hpp"

namespace dcqw {

// Two distinguishable walkers on a periodic chain. A two-body state is an
// 8L x 8L matrix Psi(i, j), i for walker 1 and j for walker 2, flat one-body
// indices. Sublattice 1 holds hub-hub and rim-rim pairs, sublattice 2 the
// mixed pairs; the walk never connects them.
enum class Sublattice { one = 1, two = 2 };

bool in_sublattice(int slot1, int slot2, Sublattice s);

// Site-level graph of one sublattice: nodes are (cell n, cell m, site pair).
struct PairSite {
  int n = 0, m = 0;
  Site s1 = Site::a, s2 = Site::a;
  bool operator==(const PairSite&) const = default;
};
struct SublatticeGraph {
  int L = 0;
  Sublattice which = Sublattice::one;
  std::vector<PairSite> nodes;
  std::vector<std::vector<int>> adjacency;
  int states_per_cell = 0;  // internal pair states per cell pair
  long dimension = 0;       // 32 L²
  int node_index(const PairSite& p) const;
};
SublatticeGraph build_sublattice(Sublattice which, int L);

struct TwoBodyParams {
  int L = 10;
  double f = 0.5;
  HubCoin hub = HubCoin::grover();
  RimCoinParams rim{};
  double phi = 0.0;  // interaction phase on same-cell (a,a), (b,b), (c,c)
};

class TwoBodyWalk {
 public:
  explicit TwoBodyWalk(const TwoBodyParams& p);

  const TwoBodyParams& params() const { return p_; }
  int L() const { return p_.L; }
  // One step on the full 64 L² space.
  Eigen::MatrixXcd apply(const Eigen::MatrixXcd& psi) const;
  // One-body operator shared by both walkers.
  const Eigen::SparseMatrix<cplx>& one_body() const { return w1_; }

  // Block of the operator at centre-of-mass momentum k = 2 pi q / L in the
  // basis |k, d, sigma> = L^{-1/2} sum_n e^{ikn} |n, n+d, sigma>; 32 L x 32 L.
  Eigen::MatrixXcd block(int q, Sublattice s) const;
  // Dense operator on one sublattice (32 L² x 32 L²), small L only.
  Eigen::MatrixXcd dense(Sublattice s) const;
  // Index of (d, slot1, slot2) in a block, -1 if not on the sublattice.
  static int block_index(int d, int slot1, int slot2, Sublattice s);

 private:
  TwoBodyParams p_;
  Eigen::SparseMatrix<cplx> c1_, s1_, w1_;
  Eigen::MatrixXcd mask_;
};

// Rows (f, k) with the eigenphases of every momentum block.
SpectrumResult two_body_spectrum(const std::vector<double>& fluxes, const TwoBodyParams& p,
                                 Sublattice s);
// Sorted multiset eps_i + eps_j over all pairs of one-body eigenphases.
std::vector<double> pair_sum_spectrum(const TwoBodyParams& p);

// Expansion in products of one-body confined states (maximally confined states,
// Grover at f=1/2 or Hadamard at f=0). On sublattice 1 the products with
// (eps1, eps2) and (eps1 + pi, eps2 + pi) coincide, so walker 1 keeps only
// eps1 in {0, pi/2, -3pi/8, 3pi/8} and every block (n1, n2) holds 32 states.
class PairBasis {
 public:
  PairBasis(int L, CoinFamily family);
  int L() const { return L_; }
  // Sublattice-1 part of |n1, eps(e1)> x |n2, eps(e2)>, e1 in [0, 8).
  Eigen::MatrixXcd pair_state(int n1, int e1, int n2, int e2) const;
  // Coefficients c(n1, h, n2, e2), rows 4 n1 + h (h indexes the kept eps1),
  // columns 8 n2 + e2, of a sublattice-1 state.
  Eigen::MatrixXcd coefficients(const Eigen::MatrixXcd& psi) const;
  Eigen::MatrixXd block_weights(const Eigen::MatrixXcd& psi) const;
  const Eigen::MatrixXcd& one_body_basis() const { return b1_; }
  static constexpr int kept[4] = {0, 2, 4, 6};

 private:
  int L_;
  Eigen::MatrixXcd b1_, b1_inv_;
};

enum class PairCondition { same = 1, nearest = 2, next_nearest = 3 };
enum class SpinConfig { i = 1, ii = 2, iii = 3 };

// Both walkers on hub sites: walker 1 at cell n, walker 2 at n, n-1 or n-2.
Eigen::MatrixXcd initial_pair_state(int L, PairCondition c, SpinConfig s, int n);
std::pair<int, int> initial_cells(PairCondition c, int n);

struct StableSubspace {
  std::vector<std::pair<int, int>> blocks;  // (n1, n2)
  int dimension = 0;
};
// Smallest union of blocks that holds psi and is closed under the walk.
StableSubspace grow_stable_subspace(const TwoBodyWalk& w, const PairBasis& b,
                                    const Eigen::MatrixXcd& psi, double tol = 1e-10);
int stable_subspace_dimension(PairCondition c, SpinConfig s, const TwoBodyParams& p);

// Orthonormal basis (columns are vectorized states) of a union of blocks.
Eigen::MatrixXcd subspace_basis(const PairBasis& b, const std::vector<std::pair<int, int>>& blocks);
// Norm of the part of W^T psi outside the span of the blocks.
double stable_subspace_leakage(const TwoBodyWalk& w, const PairBasis& b,
                               const std::vector<std::pair<int, int>>& blocks,
                               const Eigen::MatrixXcd& psi, long T);

struct SubspaceSpectrum {
  std::vector<double> energies;
  double leakage = 0.0;  // ||B V - V M||
  int dimension = 0;
};
// Operator restricted to span{psi_j(k, eps, eps')_{S/AS}} at momentum block q.
SubspaceSpectrum subspace_spectrum(const TwoBodyWalk& w, const PairBasis& b, int j, bool symmetric,
                                   int q);

// Largest Euclidean distance (periodic minimal image, cell units) from the
// initial cell pair reached by any cell pair with probability > eps, up to
// each t = 0..T.
std::vector<double> max_pair_distance(const TwoBodyWalk& w, const Eigen::MatrixXcd& psi,
                                      std::pair<int, int> origin, long T, double eps = 1e-12);

}  // namespace dcqw
