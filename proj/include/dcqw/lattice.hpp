#pragma once

#include <complex>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

namespace dcqw {

using cplx = std::complex<double>;
inline constexpr double pi = std::numbers::pi;

enum class Boundary { periodic, open };
enum class Site { a, b, c };

struct ChainGeometry {
  int L = 0;
  Boundary boundary = Boundary::periodic;

  int dim() const { return 8 * L; }
  void validate() const;
};

// Per-cell layout of the 8 internal states. Hub states point along the four
// edges leaving the hub; rim states point to the right or left cell.
namespace slot {
inline constexpr int Rb = 0;  // hub, edge to the b site on its right
inline constexpr int Lb = 1;  // hub, edge to the b site on its left
inline constexpr int Lc = 2;  // hub, edge to the c site on its left
inline constexpr int Rc = 3;  // hub, edge to the c site on its right
inline constexpr int BR = 4;  // b, toward hub of the next cell
inline constexpr int BL = 5;  // b, toward hub of its own cell
inline constexpr int CR = 6;
inline constexpr int CL = 7;
}  // namespace slot

struct BasisIndex {
  int cell = 0;
  Site site = Site::a;
  int internal = 0;

  bool operator==(const BasisIndex&) const = default;
};

int flat_index(const BasisIndex& idx, const ChainGeometry& geom);
BasisIndex basis_index(int flat, const ChainGeometry& geom);

struct FluxGauge {
  double f = 0.0;
  cplx peierls() const;
};

// S as a sparse involution: every basis state has exactly one partner, and
// (S psi)[partner(i)] = phase(i) * psi[i].
class ShiftOperator {
 public:
  ShiftOperator(const ChainGeometry& geom, const FluxGauge& gauge);

  const ChainGeometry& geometry() const { return geom_; }
  int partner(int i) const { return partner_[i]; }
  cplx phase(int i) const { return phase_[i]; }

  void apply(const cplx* in, cplx* out) const;
  Eigen::MatrixXcd dense() const;

 private:
  ChainGeometry geom_;
  std::vector<int> partner_;
  std::vector<cplx> phase_;
};

ShiftOperator build_shift(const ChainGeometry& geom, const FluxGauge& gauge);

// Oriented product of the hop phases around the rhombus of cell n,
// a_n -> c_n -> a_{n+1} -> b_n -> a_n. Equals e^{i 2 pi f}.
cplx plaquette_phase(const ShiftOperator& s, int cell);

}  // namespace dcqw
