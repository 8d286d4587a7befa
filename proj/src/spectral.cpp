#include "dcqw/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include <lapacke.h>

#include "dcqw/errors.hpp"

namespace dcqw {

namespace {

constexpr double kSnap = 1e-10;

double circ_diff(double a, double b) {
  double d = std::fmod(a - b, 2.0 * pi);
  if (d > pi) d -= 2.0 * pi;
  if (d < -pi) d += 2.0 * pi;
  return d;
}

int hub_pos(int flat) { return 4 * (flat / 8) + flat % 8; }
int rim_pos(int flat) { return 4 * (flat / 8) + flat % 8 - 4; }
bool is_hub(int flat) { return flat % 8 < 4; }

lapack_complex_double* lp(cplx* p) { return reinterpret_cast<lapack_complex_double*>(p); }

// W restricted to hub -> rim (B) and rim -> hub (A), both 4L x 4L.
void bipartite_blocks(const CoinField& field, const ChainGeometry& geom, const FluxGauge& gauge,
                      Eigen::MatrixXcd& a, Eigen::MatrixXcd& b) {
  if (geom.boundary != Boundary::periodic)
    throw DomainError("bipartite spectrum needs a periodic chain");
  const ShiftOperator s = build_shift(geom, gauge);
  const CoinOperator c = build_coin_operator(field, 0, geom);
  const int d = 4 * geom.L;
  a = Eigen::MatrixXcd::Zero(d, d);
  b = Eigen::MatrixXcd::Zero(d, d);
  for (int n = 0; n < geom.L; ++n) {
    for (int i = 0; i < 4; ++i) {
      const int from = 8 * n + i;
      const int to = s.partner(from);
      for (int j = 0; j < 4; ++j) b(rim_pos(to), 4 * n + j) += s.phase(from) * c.hub[n](i, j);
    }
    for (int i = 0; i < 4; ++i) {
      const int from = 8 * n + 4 + i;
      const int to = s.partner(from);
      const Eigen::Matrix2cd& u = i < 2 ? c.b[n] : c.c[n];
      const int base = i < 2 ? 0 : 2;
      for (int j = 0; j < 2; ++j)
        a(hub_pos(to), 4 * n + base + j) += s.phase(from) * u(i - base, j);
    }
  }
}

struct Pair {
  double e;
  int src;  // column of the AB eigenvector
  int sign; // +1 or -1
};

std::vector<Pair> bipartite_pairs(const Eigen::VectorXcd& lambda) {
  std::vector<Pair> out;
  out.reserve(2 * lambda.size());
  for (int j = 0; j < lambda.size(); ++j) {
    const cplx mu = std::sqrt(lambda[j]);
    out.push_back({quasi_energy(mu), j, +1});
    out.push_back({quasi_energy(-mu), j, -1});
  }
  std::stable_sort(out.begin(), out.end(), [](const Pair& x, const Pair& y) { return x.e < y.e; });
  return out;
}

}  // namespace

double quasi_energy(cplx lambda) {
  double e = -std::arg(lambda);
  if (e <= -pi + kSnap) e += 2.0 * pi;
  return e;
}

NormalEigen normal_eigen(const Eigen::MatrixXcd& m, bool vectors) {
  const lapack_int n = static_cast<lapack_int>(m.rows());
  if (m.cols() != n) throw DomainError("eigen-decomposition needs a square matrix");
  Eigen::MatrixXcd a = m;
  NormalEigen out;
  out.values.resize(n);
  Eigen::MatrixXcd vs(vectors ? n : 1, vectors ? n : 1);
  lapack_int sdim = 0;
  const lapack_int info =
      LAPACKE_zgees(LAPACK_COL_MAJOR, vectors ? 'V' : 'N', 'N', nullptr, n, lp(a.data()), n,
                    &sdim, lp(out.values.data()), lp(vs.data()), vectors ? n : 1);
  if (info != 0) throw DomainError("zgees failed with info=" + std::to_string(info));
  if (vectors) out.vectors = std::move(vs);
  return out;
}

std::vector<double> eigenphases(const Eigen::MatrixXcd& unitary) {
  const NormalEigen ev = normal_eigen(unitary, false);
  std::vector<double> e(ev.values.size());
  for (int i = 0; i < ev.values.size(); ++i) e[i] = quasi_energy(ev.values[i]);
  std::sort(e.begin(), e.end());
  return e;
}

Matrix8cd bloch_operator(double k, double f, const HubCoin& hub, const RimCoinParams& rim_b,
                         const RimCoinParams& rim_c) {
  using namespace slot;
  Matrix8cd c = Matrix8cd::Zero();
  c.block<4, 4>(0, 0) = hub.matrix();
  c.block<2, 2>(4, 4) = rim_coin(rim_b);
  c.block<2, 2>(6, 6) = rim_coin(rim_c);
  const cplx ph = FluxGauge{f}.peierls();
  const cplx ek = std::polar(1.0, k);
  Matrix8cd s = Matrix8cd::Zero();
  s(BL, Rb) = 1.0;
  s(Rb, BL) = 1.0;
  s(CL, Rc) = ph;
  s(Rc, CL) = std::conj(ph);
  s(Lb, BR) = std::conj(ek);
  s(Lc, CR) = std::conj(ek);
  s(BR, Lb) = ek;
  s(CR, Lc) = ek;
  return s * c;
}

std::vector<std::pair<double, int>> SpectrumResult::degeneracies(double tol) const {
  std::vector<double> all;
  for (const auto& r : rows) all.insert(all.end(), r.energies.begin(), r.energies.end());
  std::sort(all.begin(), all.end());
  std::vector<std::pair<double, int>> out;
  for (double e : all) {
    if (!out.empty() && std::abs(circ_diff(e, out.back().first)) < tol)
      ++out.back().second;
    else
      out.push_back({e, 1});
  }
  if (out.size() > 1 && std::abs(circ_diff(out.front().first, out.back().first)) < tol) {
    out.back().second += out.front().second;
    out.erase(out.begin());
  }
  return out;
}

SpectrumResult spectrum_vs_flux(const std::vector<double>& fluxes, const std::vector<double>& ks,
                                const HubCoin& hub, const RimCoinParams& rim) {
  SpectrumResult res;
  const long nk = static_cast<long>(ks.size());
  const long total = static_cast<long>(fluxes.size()) * nk;
  res.rows.resize(total);
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < total; ++i) {
    const double f = fluxes[i / nk], k = ks[i % nk];
    res.rows[i] = {f, k, eigenphases(bloch_operator(k, f, hub, rim, rim))};
  }
  return res;
}

double max_band_spread(const SpectrumResult& s) {
  std::map<double, const SpectrumRow*> first;
  double spread = 0.0;
  for (const auto& r : s.rows) {
    auto [it, fresh] = first.emplace(r.f, &r);
    if (fresh) continue;
    const auto& ref = it->second->energies;
    if (ref.size() != r.energies.size()) throw DomainError("band count differs between k points");
    for (std::size_t b = 0; b < ref.size(); ++b)
      spread = std::max(spread, std::abs(circ_diff(r.energies[b], ref[b])));
  }
  return spread;
}

SpectrumResult full_spectrum_dense(const Eigen::MatrixXcd& w, bool vectors) {
  if (w.rows() > 4800) throw ResourceError("dense spectrum limited to dimension 4800");
  const NormalEigen ev = normal_eigen(w, vectors);
  std::vector<int> order(ev.values.size());
  std::vector<double> e(ev.values.size());
  for (int i = 0; i < ev.values.size(); ++i) {
    order[i] = i;
    e[i] = quasi_energy(ev.values[i]);
  }
  std::stable_sort(order.begin(), order.end(), [&](int x, int y) { return e[x] < e[y]; });
  SpectrumResult res;
  SpectrumRow row;
  for (int i : order) row.energies.push_back(e[i]);
  res.rows.push_back(std::move(row));
  if (vectors) {
    Eigen::MatrixXcd v(w.rows(), w.cols());
    for (int i = 0; i < static_cast<int>(order.size()); ++i) v.col(i) = ev.vectors.col(order[i]);
    res.vectors = std::move(v);
  }
  return res;
}

SpectrumResult full_spectrum(const CoinField& field, const ChainGeometry& geom,
                             const FluxGauge& gauge, bool vectors) {
  if (geom.L > 600) throw ResourceError("full spectrum limited to L <= 600");
  if (field.time_dependent()) throw DomainError("spectrum needs a static coin field");
  Eigen::MatrixXcd a, b;
  bipartite_blocks(field, geom, gauge, a, b);
  const NormalEigen ev = normal_eigen(a * b, vectors);
  const auto pairs = bipartite_pairs(ev.values);
  SpectrumResult res;
  SpectrumRow row;
  row.f = gauge.f;
  for (const auto& p : pairs) row.energies.push_back(p.e);
  res.rows.push_back(std::move(row));
  if (vectors) {
    const int d = geom.dim();
    const Eigen::MatrixXcd bv = b * ev.vectors;
    Eigen::MatrixXcd v = Eigen::MatrixXcd::Zero(d, d);
    const double r = 1.0 / std::sqrt(2.0);
    for (int col = 0; col < d; ++col) {
      const Pair& p = pairs[col];
      const cplx mu = static_cast<double>(p.sign) * std::sqrt(ev.values[p.src]);
      for (int i = 0; i < d; ++i) {
        v(i, col) = is_hub(i) ? r * ev.vectors(hub_pos(i), p.src) : r * bv(rim_pos(i), p.src) / mu;
      }
    }
    res.vectors = std::move(v);
  }
  return res;
}

EigenIpr eigen_ipr(const CoinField& field, const ChainGeometry& geom, const FluxGauge& gauge) {
  if (geom.L > 600) throw ResourceError("IPR spectrum limited to L <= 600");
  Eigen::MatrixXcd a, b;
  bipartite_blocks(field, geom, gauge, a, b);
  const NormalEigen ev = normal_eigen(a * b, true);
  const Eigen::MatrixXcd bv = b * ev.vectors;
  const int L = geom.L;
  std::vector<double> per_src(ev.values.size());
  for (int j = 0; j < ev.values.size(); ++j) {
    double s = 0.0;
    for (int n = 0; n < L; ++n) {
      const double pa = 0.5 * ev.vectors.col(j).segment<4>(4 * n).squaredNorm();
      const double pb = 0.5 * bv.col(j).segment<2>(4 * n).squaredNorm();
      const double pc = 0.5 * bv.col(j).segment<2>(4 * n + 2).squaredNorm();
      s += pa * pa + pb * pb + pc * pc;
    }
    per_src[j] = s;
  }
  EigenIpr out;
  for (const auto& p : bipartite_pairs(ev.values)) {
    out.energies.push_back(p.e);
    out.ipr.push_back(per_src[p.src]);
  }
  return out;
}

std::vector<double> site_probabilities(const Eigen::VectorXcd& v, const ChainGeometry& geom) {
  std::vector<double> p(3 * geom.L);
  for (int n = 0; n < geom.L; ++n) {
    p[3 * n] = v.segment<4>(8 * n).squaredNorm();
    p[3 * n + 1] = v.segment<2>(8 * n + 4).squaredNorm();
    p[3 * n + 2] = v.segment<2>(8 * n + 6).squaredNorm();
  }
  return p;
}

double ipr(const Eigen::VectorXcd& v, const ChainGeometry& geom) {
  double s = 0.0;
  for (double p : site_probabilities(v, geom)) s += p * p;
  return s;
}

SpacingStats level_spacing_stats(const std::vector<std::vector<double>>& realizations,
                                 double bin_width, double s_max) {
  SpacingStats st;
  // Unfold with the ensemble-averaged counting function: x(e) is the mean
  // number of levels below e, interpolated linearly between pooled levels.
  std::vector<double> pool;
  for (const auto& levels : realizations) {
    if (levels.size() < 100) throw DomainError("level statistics need at least 100 levels");
    pool.insert(pool.end(), levels.begin(), levels.end());
  }
  std::sort(pool.begin(), pool.end());
  const double R = static_cast<double>(realizations.size());
  auto unfold = [&](double e) {
    const auto it = std::lower_bound(pool.begin(), pool.end(), e);
    const auto i = it - pool.begin();
    double x = static_cast<double>(i);
    if (it != pool.end() && i > 0 && *it > pool[i - 1]) x -= (*it - e) / (*it - pool[i - 1]);
    return x / R;
  };
  for (const auto& levels : realizations) {
    std::vector<double> e = levels;
    std::sort(e.begin(), e.end());
    std::vector<double> x(e.size());
    for (std::size_t i = 0; i < e.size(); ++i) x[i] = unfold(e[i]);
    const double total = static_cast<double>(pool.size()) / R;
    for (std::size_t i = 0; i + 1 < x.size(); ++i) st.spacings.push_back(x[i + 1] - x[i]);
    st.spacings.push_back(x.front() + total - x.back());
  }
  std::vector<double> s = st.spacings;
  std::sort(s.begin(), s.end());
  const double n = static_cast<double>(s.size());
  double d = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double cdf = 1.0 - std::exp(-s[i]);
    d = std::max({d, std::abs(cdf - i / n), std::abs((i + 1) / n - cdf)});
  }
  st.ks_distance = d;
  const int bins = static_cast<int>(std::ceil(s_max / bin_width));
  st.hist_density.assign(bins, 0.0);
  for (int i = 0; i <= bins; ++i) st.hist_edges.push_back(i * bin_width);
  for (double x : s) {
    const int bin = static_cast<int>(x / bin_width);
    if (bin < bins) st.hist_density[bin] += 1.0 / (n * bin_width);
  }
  return st;
}

std::vector<double> confined_energies(CoinFamily family) {
  if (family == CoinFamily::grover)
    return {0.0, pi, pi / 2, -pi / 2, -3 * pi / 8, 5 * pi / 8, 3 * pi / 8, -5 * pi / 8};
  return {5 * pi / 12, -7 * pi / 12, -pi / 12, 11 * pi / 12,
          -5 * pi / 12, 7 * pi / 12, pi / 12, -11 * pi / 12};
}

double critical_flux(CoinFamily family) { return family == CoinFamily::grover ? 0.5 : 0.0; }

HubCoin family_coin(CoinFamily family) {
  return family == CoinFamily::grover ? HubCoin::grover() : HubCoin::hadamard();
}

namespace {

struct TableRow {
  double e1, e2;
  cplx alpha, beta, gamma, delta;
};

std::vector<TableRow> table(CoinFamily family) {
  const double s2 = std::sqrt(2.0), s3 = std::sqrt(3.0), s6 = std::sqrt(6.0);
  const cplx i(0.0, 1.0);
  if (family == CoinFamily::grover)
    return {{0.0, pi, 1.0, 1.0 + s2, 1.0 + s2, 1.0},
            {pi / 2, -pi / 2, 1.0, 1.0 - s2, 1.0 - s2, 1.0},
            {-3 * pi / 8, 5 * pi / 8, -1.0, i, -i, 1.0},
            {3 * pi / 8, -5 * pi / 8, -1.0, -i, i, 1.0}};
  const cplx w16 = std::polar(1.0, pi / 6), w56 = std::polar(1.0, 5 * pi / 6);
  const double a1 = std::sqrt(5.0 - 2.0 * s6);
  return {{5 * pi / 12, -7 * pi / 12, -i * a1, 1.0 - w16 * s2, 1.0 + w56 * s2, 1.0},
          {-pi / 12, 11 * pi / 12, -i * (s2 + s3), 1.0 + w16 * s2, 1.0 - w56 * s2, 1.0},
          {-5 * pi / 12, 7 * pi / 12, i * a1, 1.0 + w56 * s2, 1.0 - w16 * s2, 1.0},
          {pi / 12, -11 * pi / 12, i * (s2 + s3), 1.0 - w56 * s2, 1.0 + w16 * s2, 1.0}};
}

}  // namespace

ConfinedEigenstate confined_eigenstate(CoinFamily family, double epsilon, int center,
                                       const ChainGeometry& geom) {
  using namespace slot;
  if (geom.L < 3) throw DomainError("confined eigenstates span 3 cells");
  const TableRow* hit = nullptr;
  const auto rows = table(family);
  for (const auto& r : rows)
    if (std::abs(circ_diff(epsilon, r.e1)) < 1e-9 || std::abs(circ_diff(epsilon, r.e2)) < 1e-9)
      hit = &r;
  if (!hit) throw DomainError("quasi-energy not listed for this coin family");
  // Left hub carries alpha on its right-pointing states, the centre gamma and
  // beta, the right hub delta on its left-pointing states.
  const double sign_left = family == CoinFamily::grover ? -1.0 : 1.0;
  const double sign_centre = family == CoinFamily::grover ? 1.0 : -1.0;
  const int L = geom.L;
  const int left = 8 * ((center - 1 + L) % L), mid = 8 * center, right = 8 * ((center + 1) % L);
  WalkState h = WalkState::zero(geom);
  h.amp[left + Rb] = hit->alpha;
  h.amp[left + Rc] = sign_left * hit->alpha;
  h.amp[mid + Rb] = hit->gamma;
  h.amp[mid + Lb] = hit->beta;
  h.amp[mid + Lc] = hit->beta;
  h.amp[mid + Rc] = sign_centre * hit->gamma;
  h.amp[right + Lb] = -hit->delta;
  h.amp[right + Lc] = hit->delta;

  const CoinField field = CoinField::uniform(family_coin(family));
  const FluxGauge gauge{critical_flux(family)};
  WalkState psi = h;
  psi.amp += std::polar(1.0, epsilon) * step(h, field, 0, gauge).amp;
  psi.amp /= psi.amp.norm();
  return {family, epsilon, center, hit->alpha, hit->beta, hit->gamma, hit->delta, psi};
}

double eigen_residual(const WalkState& psi, double epsilon, const CoinField& field,
                      const FluxGauge& gauge) {
  const WalkState w = step(psi, field, 0, gauge);
  return (w.amp - std::polar(1.0, -epsilon) * psi.amp).norm();
}

}  // namespace dcqw
