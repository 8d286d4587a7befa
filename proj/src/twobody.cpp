#include "dcqw/twobody.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "dcqw/errors.hpp"
#include "dcqw/walk.hpp"

namespace dcqw {

namespace {

Site site_of(int slot) { return slot < 4 ? Site::a : (slot < 6 ? Site::b : Site::c); }

int min_image(int x, int L) {
  x %= L;
  if (x < 0) x += L;
  return std::min(x, L - x);
}

Eigen::VectorXcd vec(const Eigen::MatrixXcd& m) {
  return Eigen::Map<const Eigen::VectorXcd>(m.data(), m.size());
}

}  // namespace

bool in_sublattice(int slot1, int slot2, Sublattice s) {
  const bool same = (slot1 < 4) == (slot2 < 4);
  return s == Sublattice::one ? same : !same;
}

int SublatticeGraph::node_index(const PairSite& p) const {
  const auto it = std::find(nodes.begin(), nodes.end(), p);
  return it == nodes.end() ? -1 : static_cast<int>(it - nodes.begin());
}

SublatticeGraph build_sublattice(Sublattice which, int L) {
  if (L < 5) throw DomainError("two-body chains need L >= 5");
  const ChainGeometry geom{L, Boundary::periodic};
  const ShiftOperator shift(geom, FluxGauge{0.0});
  SublatticeGraph g;
  g.L = L;
  g.which = which;
  g.states_per_cell = 32;
  g.dimension = 32L * L * L;
  const std::vector<std::pair<Site, Site>> kinds =
      which == Sublattice::one
          ? std::vector<std::pair<Site, Site>>{{Site::a, Site::a}, {Site::b, Site::b},
                                               {Site::b, Site::c}, {Site::c, Site::b},
                                               {Site::c, Site::c}}
          : std::vector<std::pair<Site, Site>>{
                {Site::a, Site::b}, {Site::a, Site::c}, {Site::b, Site::a}, {Site::c, Site::a}};
  const int K = static_cast<int>(kinds.size());
  auto kind_index = [&](Site s1, Site s2) {
    for (int i = 0; i < K; ++i)
      if (kinds[i].first == s1 && kinds[i].second == s2) return i;
    return -1;
  };
  for (int n = 0; n < L; ++n)
    for (int m = 0; m < L; ++m)
      for (const auto& [s1, s2] : kinds) g.nodes.push_back({n, m, s1, s2});
  auto node_of = [&](int i, int j) {
    return ((i / 8) * L + j / 8) * K + kind_index(site_of(i % 8), site_of(j % 8));
  };
  std::vector<std::set<int>> adj(g.nodes.size());
  for (int i = 0; i < geom.dim(); ++i)
    for (int j = 0; j < geom.dim(); ++j) {
      if (!in_sublattice(i % 8, j % 8, which)) continue;
      const int u = node_of(i, j);
      const int v = node_of(shift.partner(i), shift.partner(j));
      if (v < 0 || u < 0) throw DomainError("shift leaves the sublattice");
      adj[u].insert(v);
      adj[v].insert(u);
    }
  for (const auto& a : adj) g.adjacency.emplace_back(a.begin(), a.end());
  return g;
}

TwoBodyWalk::TwoBodyWalk(const TwoBodyParams& p) : p_(p) {
  if (p.L < 5) throw DomainError("two-body chains need L >= 5");
  if (p.L > 40) throw ResourceError("two-body chains limited to L <= 40");
  const ChainGeometry geom{p.L, Boundary::periodic};
  const CoinField field = CoinField::uniform(p.hub, p.rim);
  c1_ = build_coin_operator(field, 0, geom).dense().sparseView();
  s1_ = build_shift(geom, FluxGauge{p.f}).dense().sparseView();
  w1_ = s1_ * c1_;
  const int D = geom.dim();
  mask_ = Eigen::MatrixXcd::Ones(D, D);
  const cplx ph = std::polar(1.0, p.phi);
  for (int i = 0; i < D; ++i)
    for (int j = 0; j < D; ++j)
      if (i / 8 == j / 8 && site_of(i % 8) == site_of(j % 8)) mask_(i, j) = ph;
}

Eigen::MatrixXcd TwoBodyWalk::apply(const Eigen::MatrixXcd& psi) const {
  Eigen::MatrixXcd t = c1_ * psi;
  t = (c1_ * t.transpose()).transpose();
  t = t.cwiseProduct(mask_);
  t = s1_ * t;
  return (s1_ * t.transpose()).transpose();
}

int TwoBodyWalk::block_index(int d, int a, int b, Sublattice s) {
  const bool ha = a < 4, hb = b < 4;
  int sigma = -1;
  if (s == Sublattice::one) {
    if (ha && hb) sigma = a * 4 + b;
    else if (!ha && !hb) sigma = 16 + (a - 4) * 4 + (b - 4);
  } else {
    if (ha && !hb) sigma = a * 4 + (b - 4);
    else if (!ha && hb) sigma = 16 + (a - 4) * 4 + b;
  }
  return sigma < 0 ? -1 : d * 32 + sigma;
}

Eigen::MatrixXcd TwoBodyWalk::block(int q, Sublattice s) const {
  const int L = p_.L, D = 8 * L;
  const double k = 2.0 * pi * q / L;
  Eigen::MatrixXcd B = Eigen::MatrixXcd::Zero(32 * L, 32 * L);
  Eigen::MatrixXcd e = Eigen::MatrixXcd::Zero(D, D);
  for (int d = 0; d < L; ++d)
    for (int a = 0; a < 8; ++a)
      for (int b = 0; b < 8; ++b) {
        const int col = block_index(d, a, b, s);
        if (col < 0) continue;
        e(a, 8 * d + b) = 1.0;
        const Eigen::MatrixXcd out = apply(e);
        e(a, 8 * d + b) = 0.0;
        for (int j = 0; j < D; ++j)
          for (int i = 0; i < D; ++i) {
            const cplx x = out(i, j);
            if (x == cplx{}) continue;
            const int n1 = i / 8, n2 = j / 8;
            const int row = block_index((n2 - n1 + L) % L, i % 8, j % 8, s);
            B(row, col) += x * std::polar(1.0, -k * n1);
          }
      }
  return B;
}

Eigen::MatrixXcd TwoBodyWalk::dense(Sublattice s) const {
  const int L = p_.L, D = 8 * L;
  if (L > 14) throw ResourceError("dense two-body operator limited to L <= 14");
  Eigen::MatrixXi index = Eigen::MatrixXi::Constant(D, D, -1);
  int count = 0;
  for (int j = 0; j < D; ++j)
    for (int i = 0; i < D; ++i)
      if (in_sublattice(i % 8, j % 8, s)) index(i, j) = count++;
  Eigen::MatrixXcd W = Eigen::MatrixXcd::Zero(count, count);
  Eigen::MatrixXcd e = Eigen::MatrixXcd::Zero(D, D);
  for (int j = 0; j < D; ++j)
    for (int i = 0; i < D; ++i) {
      if (index(i, j) < 0) continue;
      e(i, j) = 1.0;
      const Eigen::MatrixXcd out = apply(e);
      e(i, j) = 0.0;
      for (int jj = 0; jj < D; ++jj)
        for (int ii = 0; ii < D; ++ii)
          if (out(ii, jj) != cplx{}) W(index(ii, jj), index(i, j)) = out(ii, jj);
    }
  return W;
}

SpectrumResult two_body_spectrum(const std::vector<double>& fluxes, const TwoBodyParams& p,
                                 Sublattice s) {
  const int L = p.L;
  const int F = static_cast<int>(fluxes.size());
  SpectrumResult out;
  out.rows.resize(static_cast<std::size_t>(F) * L);
#pragma omp parallel for schedule(dynamic, 1)
  for (int fi = 0; fi < F; ++fi) {
    TwoBodyParams pf = p;
    pf.f = fluxes[fi];
    const TwoBodyWalk w(pf);
    for (int q = 0; q < L; ++q) {
      auto& row = out.rows[static_cast<std::size_t>(fi) * L + q];
      row.f = fluxes[fi];
      row.k = 2.0 * pi * q / L;
      row.energies = eigenphases(w.block(q, s));
    }
  }
  return out;
}

std::vector<double> pair_sum_spectrum(const TwoBodyParams& p) {
  const ChainGeometry geom{p.L, Boundary::periodic};
  const auto e = full_spectrum(CoinField::uniform(p.hub, p.rim), geom, FluxGauge{p.f}, false)
                     .rows.at(0)
                     .energies;
  std::vector<double> out;
  out.reserve(e.size() * e.size());
  for (double a : e)
    for (double b : e) out.push_back(quasi_energy(std::polar(1.0, -(a + b))));
  std::sort(out.begin(), out.end());
  return out;
}

PairBasis::PairBasis(int L, CoinFamily family) : L_(L) {
  const ChainGeometry geom{L, Boundary::periodic};
  const auto eps = confined_energies(family);
  b1_.resize(8 * L, 8 * L);
  for (int n = 0; n < L; ++n)
    for (int e = 0; e < 8; ++e) b1_.col(8 * n + e) = confined_eigenstate(family, eps[e], n, geom).state.amp;
  b1_inv_ = b1_.partialPivLu().inverse();
}

Eigen::MatrixXcd PairBasis::pair_state(int n1, int e1, int n2, int e2) const {
  const int D = 8 * L_;
  Eigen::MatrixXcd m = b1_.col(8 * n1 + e1) * b1_.col(8 * n2 + e2).transpose();
  for (int j = 0; j < D; ++j)
    for (int i = 0; i < D; ++i)
      if (!in_sublattice(i % 8, j % 8, Sublattice::one)) m(i, j) = 0.0;
  return m;
}

Eigen::MatrixXcd PairBasis::coefficients(const Eigen::MatrixXcd& psi) const {
  const Eigen::MatrixXcd c = b1_inv_ * psi * b1_inv_.transpose();
  Eigen::MatrixXcd out(4 * L_, 8 * L_);
  for (int n1 = 0; n1 < L_; ++n1)
    for (int h = 0; h < 4; ++h)
      for (int n2 = 0; n2 < L_; ++n2)
        for (int e2 = 0; e2 < 8; ++e2) {
          const int r = 8 * n1 + kept[h];
          out(4 * n1 + h, 8 * n2 + e2) = c(r, 8 * n2 + e2) + c(r + 1, 8 * n2 + (e2 ^ 1));
        }
  return out;
}

Eigen::MatrixXd PairBasis::block_weights(const Eigen::MatrixXcd& psi) const {
  const Eigen::MatrixXcd c = coefficients(psi);
  Eigen::MatrixXd w(L_, L_);
  for (int n1 = 0; n1 < L_; ++n1)
    for (int n2 = 0; n2 < L_; ++n2) w(n1, n2) = c.block(4 * n1, 8 * n2, 4, 8).squaredNorm();
  return w;
}

std::pair<int, int> initial_cells(PairCondition c, int n) {
  return {n, n - (static_cast<int>(c) - 1)};
}

Eigen::MatrixXcd initial_pair_state(int L, PairCondition c, SpinConfig s, int n) {
  const int D = 8 * L;
  auto [n1, n2] = initial_cells(c, n);
  n1 = (n1 % L + L) % L;
  n2 = (n2 % L + L) % L;
  Eigen::MatrixXcd psi = Eigen::MatrixXcd::Zero(D, D);
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      bool on = false;
      switch (s) {
        case SpinConfig::i: on = true; break;
        case SpinConfig::ii: on = a == b && (a == 0 || a == 3); break;
        case SpinConfig::iii: on = a == b; break;
      }
      if (on) psi(8 * n1 + a, 8 * n2 + b) = 1.0;
    }
  return psi / psi.norm();
}

StableSubspace grow_stable_subspace(const TwoBodyWalk& w, const PairBasis& b,
                                    const Eigen::MatrixXcd& psi, double tol) {
  const int L = b.L();
  std::vector<std::vector<bool>> in(L, std::vector<bool>(L, false));
  std::vector<std::pair<int, int>> queue;
  auto absorb = [&](const Eigen::MatrixXd& wt) {
    for (int n1 = 0; n1 < L; ++n1)
      for (int n2 = 0; n2 < L; ++n2)
        if (wt(n1, n2) > tol && !in[n1][n2]) {
          in[n1][n2] = true;
          queue.emplace_back(n1, n2);
        }
  };
  absorb(b.block_weights(psi / psi.norm()));
  StableSubspace out;
  for (std::size_t qi = 0; qi < queue.size(); ++qi) {
    const auto [n1, n2] = queue[qi];
    out.blocks.emplace_back(n1, n2);
    for (int h = 0; h < 4; ++h)
      for (int e2 = 0; e2 < 8; ++e2) {
        Eigen::MatrixXcd v = b.pair_state(n1, PairBasis::kept[h], n2, e2);
        v /= v.norm();
        absorb(b.block_weights(w.apply(v)));
      }
  }
  std::sort(out.blocks.begin(), out.blocks.end());
  out.dimension = 32 * static_cast<int>(out.blocks.size());
  return out;
}

int stable_subspace_dimension(PairCondition c, SpinConfig s, const TwoBodyParams& p) {
  const TwoBodyWalk w(p);
  const PairBasis b(p.L, CoinFamily::grover);
  return grow_stable_subspace(w, b, initial_pair_state(p.L, c, s, p.L / 2)).dimension;
}

Eigen::MatrixXcd subspace_basis(const PairBasis& b,
                                const std::vector<std::pair<int, int>>& blocks) {
  const int D = 8 * b.L();
  Eigen::MatrixXcd v(static_cast<long>(D) * D, 32 * static_cast<long>(blocks.size()));
  int col = 0;
  for (const auto& [n1, n2] : blocks)
    for (int h = 0; h < 4; ++h)
      for (int e2 = 0; e2 < 8; ++e2) v.col(col++) = vec(b.pair_state(n1, PairBasis::kept[h], n2, e2));
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(v);
  return qr.householderQ() * Eigen::MatrixXcd::Identity(v.rows(), v.cols());
}

double stable_subspace_leakage(const TwoBodyWalk& w, const PairBasis& b,
                               const std::vector<std::pair<int, int>>& blocks,
                               const Eigen::MatrixXcd& psi, long T) {
  const Eigen::MatrixXcd q = subspace_basis(b, blocks);
  Eigen::MatrixXcd s = psi / psi.norm();
  for (long t = 0; t < T; ++t) s = w.apply(s);
  const Eigen::VectorXcd r = vec(s);
  return (r - q * (q.adjoint() * r)).norm();
}

SubspaceSpectrum subspace_spectrum(const TwoBodyWalk& w, const PairBasis& b, int j, bool symmetric,
                                   int q) {
  const int L = b.L();
  if (j < 0 || j >= L) throw DomainError("relative distance out of range");
  const double k = 2.0 * pi * q / L;
  Eigen::MatrixXcd cols = Eigen::MatrixXcd::Zero(32 * L, 64);
  for (int e1 = 0; e1 < 8; ++e1)
    for (int e2 = 0; e2 < 8; ++e2) {
      const Eigen::MatrixXcd phi = b.pair_state(0, e1, j, e2);
      const Eigen::MatrixXcd sym = symmetric ? Eigen::MatrixXcd(phi + phi.transpose())
                                             : Eigen::MatrixXcd(phi - phi.transpose());
      auto col = cols.col(8 * e1 + e2);
      for (int u = 0; u < L; ++u) {
        const cplx ph = std::polar(1.0, -k * u);
        for (int d = 0; d < L; ++d)
          for (int a = 0; a < 8; ++a)
            for (int c = 0; c < 8; ++c) {
              const int idx = TwoBodyWalk::block_index(d, a, c, Sublattice::one);
              if (idx < 0) continue;
              col(idx) += ph * sym(8 * u + a, 8 * ((u + d) % L) + c);
            }
      }
    }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(cols);
  qr.setThreshold(1e-10);
  const int r = static_cast<int>(qr.rank());
  SubspaceSpectrum out;
  out.dimension = r;
  if (r == 0) return out;
  const Eigen::MatrixXcd V =
      Eigen::MatrixXcd(qr.householderQ()).leftCols(r);
  const Eigen::MatrixXcd B = w.block(q, Sublattice::one);
  const Eigen::MatrixXcd BV = B * V;
  const Eigen::MatrixXcd M = V.adjoint() * BV;
  out.leakage = (BV - V * M).norm();
  if (out.leakage > 1e-8) throw DomainError("subspace is not invariant under the walk");
  out.energies = eigenphases(M);
  return out;
}

std::vector<double> max_pair_distance(const TwoBodyWalk& w, const Eigen::MatrixXcd& psi,
                                      std::pair<int, int> origin, long T, double eps) {
  const int L = w.L();
  std::vector<double> out;
  out.reserve(T + 1);
  Eigen::MatrixXcd s = psi / psi.norm();
  double best = 0.0;
  for (long t = 0; t <= T; ++t) {
    if (t > 0) s = w.apply(s);
    for (int n1 = 0; n1 < L; ++n1)
      for (int n2 = 0; n2 < L; ++n2) {
        if (s.block(8 * n1, 8 * n2, 8, 8).squaredNorm() <= eps) continue;
        const double d1 = min_image(n1 - origin.first, L), d2 = min_image(n2 - origin.second, L);
        best = std::max(best, std::sqrt(d1 * d1 + d2 * d2));
      }
    out.push_back(best);
  }
  return out;
}

}  // namespace dcqw
