#include "dcqw/propagator.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dcqw/errors.hpp"

namespace dcqw {

namespace {

constexpr long kParallelCells = 512;

int wrap_cell(long n, int L) {
  const long m = n % L;
  return static_cast<int>(m < 0 ? m + L : m);
}

}  // namespace

namespace {

// Plain complex matrix-vector products; Eigen's generic fixed-size complex
// product is several times slower here without -march flags.
template <int N>
inline void matvec(const cplx* m, const cplx* x, cplx* y) {
  // m is column major
  double re[N] = {}, im[N] = {};
  for (int j = 0; j < N; ++j) {
    const double xr = x[j].real(), xi = x[j].imag();
    for (int i = 0; i < N; ++i) {
      const double mr = m[j * N + i].real(), mi = m[j * N + i].imag();
      re[i] += mr * xr - mi * xi;
      im[i] += mr * xi + mi * xr;
    }
  }
  for (int i = 0; i < N; ++i) y[i] = cplx(re[i], im[i]);
}

inline void coin_cell(const CoinLayer& layer, int n, const cplx* in, cplx* out) {
  matvec<4>(layer.hub_at(n).data(), in, out);
  matvec<2>(layer.b_at(n).data(), in + 4, out + 4);
  matvec<2>(layer.c_at(n).data(), in + 6, out + 6);
}

}  // namespace

void walk_kernel(const ChainGeometry& geom, cplx peierls, const CoinLayer& layer, const cplx* in,
                 cplx* out, cplx* scratch, long lo, long hi, bool parallel) {
  using namespace slot;
  const int L = geom.L;
  const bool periodic = geom.boundary == Boundary::periodic;
  const bool wrap = periodic && hi - lo + 3 > L;
  if (wrap) {
    lo = 0;
    hi = L - 1;
  }
  const long n_in = hi - lo + 1;
  // Window strictly inside [0, L): no index wrapping needed.
  const bool inside = !wrap && lo >= 1 && hi <= L - 2;

#pragma omp parallel for schedule(static) if (parallel && n_in >= kParallelCells)
  for (long k = 0; k < n_in; ++k) {
    const int n = inside ? static_cast<int>(lo + k) : wrap_cell(lo + k, L);
    coin_cell(layer, n, in + 8 * n, scratch + 8 * n);
  }

  long olo = lo - 1, ohi = hi + 1;
  if (wrap) {
    olo = 0;
    ohi = L - 1;
  } else if (!periodic) {
    olo = std::max(olo, 0L);
    ohi = std::min(ohi, static_cast<long>(L - 1));
  }
  const cplx peierls_c = std::conj(peierls);
  const long n_out = ohi - olo + 1;

  if (inside) {
    // Zero the two cells bordering the window so the gather reads zeros.
    std::fill(scratch + 8 * (lo - 1), scratch + 8 * lo, cplx{});
    std::fill(scratch + 8 * (hi + 1), scratch + 8 * (hi + 2), cplx{});
    if (lo >= 2) std::fill(scratch + 8 * (lo - 2), scratch + 8 * (lo - 1), cplx{});
    if (hi <= L - 3) std::fill(scratch + 8 * (hi + 2), scratch + 8 * (hi + 3), cplx{});
#pragma omp parallel for schedule(static) if (parallel && n_out >= kParallelCells)
    for (long k = 0; k < n_out; ++k) {
      const long m = olo + k;
      const cplx* here = scratch + 8 * m;
      const cplx* left = here - 8;
      const cplx* right = here + 8;
      cplx* o = out + 8 * m;
      if (m == 0 || m == L - 1) {
        // Edge cells of the chain: fall back to the general path below.
        continue;
      }
      o[Rb] = here[BL];
      o[BL] = here[Rb];
      o[Rc] = peierls_c * here[CL];
      o[CL] = peierls * here[Rc];
      o[Lb] = left[BR];
      o[Lc] = left[CR];
      o[BR] = right[Lb];
      o[CR] = right[Lc];
    }
    if (olo > 0 && ohi < L - 1) return;
  }

  static const cplx zero8[8] = {};
  auto src = [&](long m) -> const cplx* {
    if (!wrap && (m < lo || m > hi)) return zero8;
    return scratch + 8 * wrap_cell(m, L);
  };

#pragma omp parallel for schedule(static) if (parallel && n_out >= kParallelCells && !inside)
  for (long k = 0; k < n_out; ++k) {
    const long m = olo + k;
    if (inside && m != 0 && m != L - 1) continue;
    const cplx* here = src(m);
    cplx* o = out + 8 * wrap_cell(m, L);
    o[Rb] = here[BL];
    o[BL] = here[Rb];
    o[Rc] = peierls_c * here[CL];
    o[CL] = peierls * here[Rc];
    if (!periodic && m == 0) {
      o[Lb] = here[Lb];
      o[Lc] = here[Lc];
    } else {
      const cplx* left = src(m - 1);
      o[Lb] = left[BR];
      o[Lc] = left[CR];
    }
    if (!periodic && m == L - 1) {
      o[BR] = here[BR];
      o[CR] = here[CR];
    } else {
      const cplx* right = src(m + 1);
      o[BR] = right[Lb];
      o[CR] = right[Lc];
    }
  }
}

Propagator::Propagator(const WalkState& initial, const CoinField& field, const FluxGauge& gauge,
                       PropagatorOptions opts)
    : geom_(initial.geom),
      field_(&field),
      peierls_(gauge.peierls()),
      opts_(opts),
      psi_(initial.amp),
      next_(Eigen::VectorXcd::Zero(initial.geom.dim())),
      scratch_(Eigen::VectorXcd::Zero(initial.geom.dim())) {
  geom_.validate();
  field.validate(geom_, 0);
  if (initial.amp.size() != geom_.dim()) throw DomainError("state dimension does not match chain");
  const int L = geom_.L;

  std::vector<int> occupied;
  for (int n = 0; n < L; ++n)
    if (psi_.segment(8 * n, 8).squaredNorm() > 0.0) occupied.push_back(n);
  if (occupied.empty()) throw DomainError("initial state is zero");
  if (geom_.boundary == Boundary::open) {
    lo_ = occupied.front();
    hi_ = occupied.back();
  } else {
    // Smallest arc holding the support: start right after the largest gap.
    int best_gap = -1, start = occupied.front();
    for (std::size_t i = 0; i < occupied.size(); ++i) {
      const int a = occupied[i];
      const int b = i + 1 < occupied.size() ? occupied[i + 1] : occupied.front() + L;
      if (b - a - 1 > best_gap) {
        best_gap = b - a - 1;
        start = b % L;
      }
    }
    lo_ = start;
    hi_ = start + (L - best_gap) - 1;
    if (hi_ - lo_ + 3 > L) {
      full_ = true;
      lo_ = 0;
      hi_ = L - 1;
    }
  }

  // Static parts of the coin layer.
  if (field.hub_t.empty()) {
    for (const auto& h : field.hub) layer_.hub.push_back(h.matrix());
  }
  auto init_rim = [&](const std::vector<RimCoinParams>& spatial, bool temporal,
                      std::vector<Eigen::Matrix2cd>& out, std::vector<RimCache>& cache) {
    if (!temporal) {
      for (const auto& p : spatial) out.push_back(rim_coin(p));
      return;
    }
    if (spatial.size() == 1) return;  // rebuilt as a single matrix every step
    rim_per_cell_temporal_ = true;
    out.assign(L, Eigen::Matrix2cd::Identity());
    for (const auto& p : spatial)
      cache.push_back({std::cos(p.theta), std::sin(p.theta), std::polar(1.0, p.beta),
                       std::polar(1.0, p.phi + p.omega), std::polar(1.0, -p.omega),
                       std::polar(1.0, p.phi - p.beta)});
  };
  init_rim(field.rim_b, !field.theta_b_t.empty(), layer_.b, cache_b_);
  init_rim(field.rim_c, !field.theta_c_t.empty(), layer_.c, cache_c_);

  if (opts_.track_cage) {
    max_prob_.assign(L, 0.0);
    for (long m = lo_; m <= hi_; ++m) {
      const int n = cell(m);
      max_prob_[n] = psi_.segment(8 * n, 8).squaredNorm();
    }
  }
}

int Propagator::cell(long n) const { return wrap_cell(n, geom_.L); }

void Propagator::prepare_layer() {
  const CoinField& f = *field_;
  if (t_ >= f.steps_defined())
    throw ConfigError("coin field has no entry for step " + std::to_string(t_));
  if (!f.hub_t.empty()) layer_.hub.assign(1, f.hub_t[t_].matrix());

  auto update = [&](const std::vector<double>& offsets, const std::vector<RimCoinParams>& spatial,
                    const std::vector<RimCache>& cache, std::vector<Eigen::Matrix2cd>& out) {
    if (offsets.empty()) return;
    const double d = offsets[t_];
    if (spatial.size() == 1) {
      RimCoinParams p = spatial[0];
      p.theta += d;
      out.assign(1, rim_coin(p));
      return;
    }
    const double cd = std::cos(d), sd = std::sin(d);
    for (long m = lo_; m <= hi_; ++m) {
      const int n = cell(m);
      const RimCache& r = cache[n];
      const double c = r.c * cd - r.s * sd;
      const double s = r.s * cd + r.c * sd;
      Eigen::Matrix2cd& u = out[n];
      u(0, 0) = c * r.e1;
      u(0, 1) = -s * r.e2;
      u(1, 0) = s * r.e3;
      u(1, 1) = c * r.e4;
    }
  };
  update(f.theta_b_t, f.rim_b, cache_b_, layer_.b);
  update(f.theta_c_t, f.rim_c, cache_c_, layer_.c);
}

void Propagator::advance() {
  prepare_layer();
  walk_kernel(geom_, peierls_, layer_, psi_.data(), next_.data(), scratch_.data(), lo_, hi_,
              opts_.parallel);
  psi_.swap(next_);
  ++t_;
  const int L = geom_.L;
  if (!full_) {
    if (geom_.boundary == Boundary::periodic) {
      if (hi_ - lo_ + 3 > L) {
        full_ = true;
        lo_ = 0;
        hi_ = L - 1;
      } else {
        --lo_;
        ++hi_;
      }
    } else {
      lo_ = std::max(lo_ - 1, 0L);
      hi_ = std::min(hi_ + 1, static_cast<long>(L - 1));
    }
  }
  if (opts_.trim_threshold > 0.0) trim();
  if (opts_.track_cage) {
    for (long m = lo_; m <= hi_; ++m) {
      const int n = cell(m);
      max_prob_[n] = std::max(max_prob_[n], psi_.segment(8 * n, 8).squaredNorm());
    }
  }
}

void Propagator::trim() {
  if (full_) return;
  auto p = [&](long m) { return psi_.segment(8 * cell(m), 8).squaredNorm(); };
  while (hi_ > lo_ && p(lo_) < opts_.trim_threshold) {
    psi_.segment(8 * cell(lo_), 8).setZero();
    ++lo_;
  }
  while (hi_ > lo_ && p(hi_) < opts_.trim_threshold) {
    psi_.segment(8 * cell(hi_), 8).setZero();
    --hi_;
  }
}

WalkState Propagator::state() const {
  WalkState s = WalkState::zero(geom_);
  for (long m = lo_; m <= hi_; ++m) {
    const int n = cell(m);
    s.amp.segment(8 * n, 8) = psi_.segment(8 * n, 8);
  }
  return s;
}

std::vector<double> Propagator::cell_probabilities() const {
  std::vector<double> p(geom_.L, 0.0);
  for (long m = lo_; m <= hi_; ++m) {
    const int n = cell(m);
    p[n] = psi_.segment(8 * n, 8).squaredNorm();
  }
  return p;
}

double Propagator::sigma() const {
  double s0 = 0.0, s1 = 0.0, s2 = 0.0;
  for (long m = lo_; m <= hi_; ++m) {
    const double p = psi_.segment(8 * cell(m), 8).squaredNorm();
    const double x = static_cast<double>(m - lo_);
    s0 += p;
    s1 += p * x;
    s2 += p * x * x;
  }
  if (s0 <= 0.0) return 0.0;
  const double mean = s1 / s0;
  return std::sqrt(std::max(0.0, s2 / s0 - mean * mean));
}

double Propagator::norm2() const {
  double s = 0.0;
  for (long m = lo_; m <= hi_; ++m) s += psi_.segment(8 * cell(m), 8).squaredNorm();
  return s;
}

int Propagator::support_extent(double eps) const {
  if (full_) return dcqw::support_extent(cell_probabilities(), eps, geom_.boundary);
  long first = -1, last = -1;
  for (long m = lo_; m <= hi_; ++m) {
    if (psi_.segment(8 * cell(m), 8).squaredNorm() > eps) {
      if (first < 0) first = m;
      last = m;
    }
  }
  return first < 0 ? 0 : static_cast<int>(last - first + 1);
}

int Propagator::cage_extent(double eps) const {
  if (!opts_.track_cage) throw DomainError("cage tracking disabled");
  return dcqw::support_extent(max_prob_, eps, geom_.boundary);
}

}  // namespace dcqw
