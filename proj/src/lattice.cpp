#include "dcqw/lattice.hpp"

#include <string>

#include "dcqw/errors.hpp"

namespace dcqw {

void ChainGeometry::validate() const {
  if (L < 1) throw ConfigError("chain length must be positive, got " + std::to_string(L));
  if (boundary == Boundary::periodic && L < 2)
    throw ConfigError("periodic chain needs at least 2 cells");
}

int flat_index(const BasisIndex& idx, const ChainGeometry& geom) {
  if (idx.cell < 0 || idx.cell >= geom.L) throw IndexError("cell out of range");
  switch (idx.site) {
    case Site::a:
      if (idx.internal < 0 || idx.internal > 3) throw IndexError("hub internal state out of range");
      return 8 * idx.cell + idx.internal;
    case Site::b:
      if (idx.internal < 0 || idx.internal > 1) throw IndexError("rim internal state out of range");
      return 8 * idx.cell + 4 + idx.internal;
    case Site::c:
      if (idx.internal < 0 || idx.internal > 1) throw IndexError("rim internal state out of range");
      return 8 * idx.cell + 6 + idx.internal;
  }
  throw IndexError("unknown site");
}

BasisIndex basis_index(int flat, const ChainGeometry& geom) {
  if (flat < 0 || flat >= geom.dim()) throw IndexError("flat index out of range");
  const int cell = flat / 8;
  const int k = flat % 8;
  if (k < 4) return {cell, Site::a, k};
  if (k < 6) return {cell, Site::b, k - 4};
  return {cell, Site::c, k - 6};
}

cplx FluxGauge::peierls() const { return std::polar(1.0, 2.0 * pi * f); }

ShiftOperator::ShiftOperator(const ChainGeometry& geom, const FluxGauge& gauge)
    : geom_(geom), partner_(geom.dim(), -1), phase_(geom.dim(), cplx(1.0)) {
  geom.validate();
  const cplx ph = gauge.peierls();
  auto link = [&](int i, int j, cplx p) {
    partner_[i] = j;
    phase_[i] = p;
    partner_[j] = i;
    phase_[j] = std::conj(p);
  };
  const int L = geom.L;
  for (int n = 0; n < L; ++n) {
    const int here = 8 * n;
    link(here + slot::Rb, here + slot::BL, 1.0);
    link(here + slot::Rc, here + slot::CL, ph);
    if (n + 1 < L || geom.boundary == Boundary::periodic) {
      const int next = 8 * ((n + 1) % L);
      link(here + slot::BR, next + slot::Lb, 1.0);
      link(here + slot::CR, next + slot::Lc, 1.0);
    }
  }
  // Open ends reflect the dangling states onto themselves.
  for (int i = 0; i < geom.dim(); ++i)
    if (partner_[i] < 0) partner_[i] = i;
}

void ShiftOperator::apply(const cplx* in, cplx* out) const {
  const int d = geom_.dim();
  for (int i = 0; i < d; ++i) out[partner_[i]] = phase_[i] * in[i];
}

Eigen::MatrixXcd ShiftOperator::dense() const {
  const int d = geom_.dim();
  Eigen::MatrixXcd s = Eigen::MatrixXcd::Zero(d, d);
  for (int i = 0; i < d; ++i) s(partner_[i], i) = phase_[i];
  return s;
}

ShiftOperator build_shift(const ChainGeometry& geom, const FluxGauge& gauge) {
  return ShiftOperator(geom, gauge);
}

cplx plaquette_phase(const ShiftOperator& s, int cell) {
  const int L = s.geometry().L;
  const int here = 8 * cell;
  const int next = 8 * ((cell + 1) % L);
  auto hop = [&](int from, int to) {
    if (s.partner(from) != to) throw DomainError("plaquette edge missing");
    return s.phase(from);
  };
  return hop(here + slot::Rc, here + slot::CL) * hop(here + slot::CR, next + slot::Lc) *
         hop(next + slot::Lb, here + slot::BR) * hop(here + slot::BL, here + slot::Rb);
}

}  // namespace dcqw
