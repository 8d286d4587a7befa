#pragma once

#include <vector>

#include <Eigen/Dense>

#include "dcqw/coins.hpp"
#include "dcqw/walk.hpp"

namespace dcqw {

// Coin matrices for one step; each vector has size 1 (uniform) or L.
struct CoinLayer {
  std::vector<Eigen::Matrix4cd> hub;
  std::vector<Eigen::Matrix2cd> b, c;

  const Eigen::Matrix4cd& hub_at(int n) const { return hub.size() == 1 ? hub[0] : hub[n]; }
  const Eigen::Matrix2cd& b_at(int n) const { return b.size() == 1 ? b[0] : b[n]; }
  const Eigen::Matrix2cd& c_at(int n) const { return c.size() == 1 ? c[0] : c[n]; }
};

// One step restricted to the input cells [lo, hi] (unwrapped coordinates);
// writes the output cells [lo-1, hi+1] (clamped on open chains, whole chain
// when the window covers it). `scratch` must hold 8L amplitudes.
void walk_kernel(const ChainGeometry& geom, cplx peierls, const CoinLayer& layer, const cplx* in,
                 cplx* out, cplx* scratch, long lo, long hi, bool parallel);

struct PropagatorOptions {
  double trim_threshold = 0.0;  // drop edge cells below this probability; 0 keeps all
  bool parallel = true;
  bool track_cage = false;      // accumulate per-cell maximum probability
};

// Evolves one state in place. Only the active window of cells (light cone of
// the initial support, optionally trimmed) is touched, so the cost per step
// follows the wave packet rather than the chain length.
class Propagator {
 public:
  Propagator(const WalkState& initial, const CoinField& field, const FluxGauge& gauge,
             PropagatorOptions opts = {});

  void advance();
  long time() const { return t_; }
  long lo() const { return lo_; }
  long hi() const { return hi_; }
  bool full() const { return full_; }

  WalkState state() const;
  std::vector<double> cell_probabilities() const;  // length L
  double sigma() const;
  double norm2() const;
  int support_extent(double eps = 1e-12) const;
  int cage_extent(double eps = 1e-12) const;

 private:
  int cell(long n) const;
  void prepare_layer();
  void trim();

  ChainGeometry geom_;
  const CoinField* field_;
  cplx peierls_;
  PropagatorOptions opts_;
  Eigen::VectorXcd psi_, next_, scratch_;
  long lo_ = 0, hi_ = 0;
  bool full_ = false;
  long t_ = 0;
  CoinLayer layer_;
  bool rim_per_cell_temporal_ = false;
  struct RimCache {
    double c, s;
    cplx e1, e2, e3, e4;
  };
  std::vector<RimCache> cache_b_, cache_c_;
  std::vector<double> max_prob_;
};

}  // namespace dcqw
