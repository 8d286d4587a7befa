// One line per acceptance criterion. Usage: acceptance [criterion numbers...]
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include "dcqw/commands.hpp"
#include "dcqw/experiments.hpp"
#include "dcqw/measurement.hpp"
#include "dcqw/spectral.hpp"
#include "dcqw/twobody.hpp"

using namespace dcqw;

namespace {

using Clock = std::chrono::steady_clock;

double circ_dist(double a, double b) {
  const double d = std::fmod(std::abs(a - b), 2 * pi);
  return std::min(d, 2 * pi - d);
}

// Every expected level matched by some computed level and vice versa.
bool same_levels(const std::vector<double>& got, const std::vector<double>& want, double tol) {
  auto covered = [tol](const std::vector<double>& a, const std::vector<double>& b) {
    for (double x : a) {
      bool hit = false;
      for (double y : b) hit = hit || circ_dist(x, y) < tol;
      if (!hit) return false;
    }
    return true;
  };
  return covered(got, want) && covered(want, got);
}

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

Outcome flat_bands() {
  std::vector<double> ks;
  for (int j = 0; j < 64; ++j) ks.push_back(-pi + 2 * pi * j / 64);
  const std::vector<double> grover{0, 3 * pi / 8, -3 * pi / 8, pi / 2, -pi / 2,
                                   5 * pi / 8, -5 * pi / 8, pi};
  const std::vector<double> hadamard{pi / 12,      -pi / 12,     5 * pi / 12,  -5 * pi / 12,
                                     7 * pi / 12,  -7 * pi / 12, 11 * pi / 12, -11 * pi / 12};
  const auto g = spectrum_vs_flux({0.5}, ks, HubCoin::grover());
  const auto h = spectrum_vs_flux({0.0}, ks, HubCoin::hadamard());
  const double sg = max_band_spread(g), sh = max_band_spread(h);
  bool ok = sg < 1e-10 && sh < 1e-10;
  for (const auto& row : g.rows) ok = ok && same_levels(row.energies, grover, 1e-10);
  for (const auto& row : h.rows) ok = ok && same_levels(row.energies, hadamard, 1e-10);
  return {ok, fmt("band k-spread Grover %.1e, Hadamard %.1e; all 8 caged levels present", sg, sh)};
}

Outcome confined_states() {
  const ChainGeometry geom{12, Boundary::periodic};
  double worst = 0.0;
  int count = 0;
  for (CoinFamily fam : {CoinFamily::grover, CoinFamily::hadamard}) {
    const CoinField field = CoinField::uniform(family_coin(fam));
    for (double e : confined_energies(fam)) {
      const auto c = confined_eigenstate(fam, e, 6, geom);
      worst = std::max(worst, eigen_residual(c.state, e, field, FluxGauge{critical_flux(fam)}));
      ++count;
    }
  }
  return {count == 16 && worst < 1e-10, fmt("%d states, max residual %.1e", count, worst)};
}

Outcome cage_stats() {
  bool ok = true;
  std::string detail;
  for (double f : {0.0, 0.5})
    for (double ps : {0.3, 0.5, 0.7}) {
      const CageStatistics s = cage_statistics(ps, f, 30, 10000, 7);
      const double rel = std::abs(s.mean.mean - s.predicted_mean) / s.predicted_mean;
      ok = ok && rel < 0.02 && s.chi2.p_value > 0.01;
      detail += fmt(" [f=%.1f ps=%.1f mean %.3f/%.3f p=%.3f]", f, ps, s.mean.mean,
                    s.predicted_mean, s.chi2.p_value);
    }
  return {ok, detail};
}

Outcome dynamic_hub() {
  double d[2];
  bool ok = true;
  std::string detail;
  int i = 0;
  for (double pt : {0.1, 0.9}) {
    ExperimentSpec s;
    s.f = 0.5;
    s.disorder.kind = DisorderKind::hub_dynamic;
    s.disorder.p = pt;
    s.T = 2000;
    s.R = 100;
    s.seed = 3;
    const EnsembleResult e = run_ensemble(s);
    const PowerLawFit fit = fit_exponent(e.t, e.sigma_mean);
    d[i] = e.sigma2_mean.back() / e.t.back();
    ok = ok && std::abs(fit.gamma - 0.5) <= 0.05;
    detail += fmt(" [pt=%.1f gamma=%.3f on t in [%.0f, %.0f], D=%.3f]", pt, fit.gamma, fit.t_lo,
                  fit.t_hi, d[i]);
    ++i;
  }
  return {ok && d[1] < d[0], detail};
}

Outcome variance_law() {
  bool ok = true;
  std::string detail;
  for (const HubSpinConfig spin : {HubSpinConfig{}, HubSpinConfig{0.5, 0.5, 0.5, 0.5}}) {
    ExperimentSpec s;
    s.f = 0.5;
    s.disorder.kind = DisorderKind::rim_dynamic;
    s.disorder.dtheta = 2 * pi;
    s.spin = spin;
    s.T = 900;
    s.R = 500;
    s.seed = 5;
    const EnsembleResult e = run_ensemble(s);
    detail += fmt(" [spin imbalance %.0f:", spin.imbalance());
    for (int t : {100, 400, 900}) {
      const double want = predicted_variance_dynamic_rim(t, spin);
      const double z = (e.sigma2_mean[t] - want) / e.sigma2_stderr[t];
      ok = ok && std::abs(z) <= 3.0;
      detail += fmt(" t=%d %.2f+-%.2f vs %.2f (%.1f se)", t, e.sigma2_mean[t], e.sigma2_stderr[t],
                    want, z);
    }
    detail += "]";
  }
  double worst = 0.0;
  for (auto [tb, tc] : {std::pair{0.3, 1.1}, std::pair{pi / 4, -0.4}, std::pair{2.9, 5.5}}) {
    const TwoStepBlocks a = two_step_operator(tb, tc);
    const TwoStepBlocks b = composed_two_step(tb, tc, FluxGauge{0.5});
    worst = std::max({worst, (a.stay - b.stay).cwiseAbs().maxCoeff(),
                      (a.right - b.right).cwiseAbs().maxCoeff(),
                      (a.left - b.left).cwiseAbs().maxCoeff()});
  }
  detail += fmt(" two-step blocks max diff %.1e", worst);
  return {ok && worst < 1e-12, detail};
}

Outcome rim_static() {
  ExperimentSpec s;
  s.f = 0.5;
  s.disorder.kind = DisorderKind::rim_static;
  s.disorder.dtheta = 0.1 * pi;
  s.T = 2000;
  s.R = 100;
  s.seed = 6;
  const EnsembleResult e = run_ensemble(s);
  const PowerLawFit fit = fit_exponent(e.t, e.sigma_mean);

  const ChainGeometry geom{100, Boundary::periodic};
  Rng rng = realization_rng(6, 0);
  const TailProfile tp =
      eigenvector_tail_profile(realize_field(s.disorder, 100, 0, rng), geom, FluxGauge{0.5});
  std::vector<double> x, y;
  for (std::size_t d = 2; d <= 20; ++d) {
    x.push_back(tp.distance[d]);
    y.push_back(tp.mean_log10_prob[d]);
  }
  const LinearFit lf = linear_fit(x, y);

  const auto spectra = disordered_spectra(s.disorder, 0.5, 100, 100, 6);
  const double ks = level_spacing_stats(spectra).ks_distance;
  return {fit.gamma < 0.05 && lf.r2 > 0.9 && ks < 0.1,
          fmt("gamma=%.4f on [%.0f, %.0f], final sigma %.2f; tail log10 slope %.3f R2=%.4f (d=2..20); "
              "KS=%.4f",
              fit.gamma, fit.t_lo, fit.t_hi, e.sigma_mean.back(), lf.slope, lf.r2, ks)};
}

Outcome ipr_regimes() {
  const std::vector<double> grid{0.001, 0.003, 0.01, 0.03, 0.1, 0.3, 1.0, 1.25, 1.5, 1.75, 2.0};
  const std::vector<double> coarse{0.001, 0.01, 0.1, 0.3, 1.0, 1.5, 2.0};
  auto scaled = [](const std::vector<double>& g) {
    std::vector<double> v;
    for (double x : g) v.push_back(x * pi);
    return v;
  };
  const int L = 200;
  const IprScan c = ipr_scan(scaled(grid), 0.5, DisorderKind::rim_static, L, 16, 8);
  const IprScan o = ipr_scan(scaled(coarse), 0.25, DisorderKind::rim_static, L, 8, 8);
  const auto& m = c.mean_log_ipr;
  // plateau below 0.05 pi: spread there is small next to the total rise
  const double rise = m[6] - m[0];
  const double low = *std::max_element(m.begin(), m.begin() + 3) - *std::min_element(m.begin(), m.begin() + 3);
  // regime iii: [pi, 2 pi] flat within 2 %
  const auto hi_lo = std::minmax_element(m.begin() + 6, m.end());
  const double flat = (*hi_lo.second - *hi_lo.first) / std::abs(m[6]);
  const bool growth = m[5] > m[2] && rise > 0.0 && low < 0.1 * rise;
  bool mono = true;
  const auto& q = o.mean_log_ipr;
  for (std::size_t i = 1; i < q.size(); ++i)
    mono = mono && q[i] >= q[i - 1] - 2.0 * std::hypot(o.stderr_log_ipr[i], o.stderr_log_ipr[i - 1]);
  std::string detail = fmt("L=%d; f=1/2 (R=16):", L);
  for (std::size_t i = 0; i < grid.size(); ++i) detail += fmt(" %.3f", m[i]);
  detail += fmt(" (low spread %.3f, rise %.3f, regime iii spread %.2f%%); f=1/4 (R=8):", low, rise,
                100 * flat);
  for (double v : q) detail += fmt(" %.3f", v);
  return {growth && flat < 0.02 && mono && q.back() > q.front(), detail};
}

Outcome measurement() {
  MeasurementSpec m;
  m.seed = 10;
  const MeasurementResult r5 = measurement_experiment(m);
  m.period = 12;
  const MeasurementResult r12 = measurement_experiment(m);
  return {r5.gaussian.r2 > 0.98 && std::abs(r5.sqrt_d - 0.85) <= 0.05 && r12.d < 1e-3,
          fmt("period 5: sqrt(D)=%.4f (exact chain %.4f), Gaussian R2=%.4f; period 12: D=%.2e",
              r5.sqrt_d, r5.exact_sigma.back() / std::sqrt(r5.n.back()), r5.gaussian.r2, r12.d)};
}

Outcome subdiffusion() {
  struct Case {
    double alpha, lo, hi;
  };
  const Case cases[] = {{0.5, 0.16, 0.26}, {0.0, 0.30, 0.40}, {-0.5, 0.41, 0.51},
                        {-1.0, 0.44, 0.52}, {-2.0, 0.45, 0.55}};
  bool ok = true;
  std::string detail = "T=10000 R=100;";
  for (const Case& c : cases) {
    const SubdiffusionResult r = subdiffusion_experiment(c.alpha, 10000, 100, 9);
    ok = ok && r.fit.gamma >= c.lo && r.fit.gamma <= c.hi;
    detail += fmt(" [alpha=%.1f gamma=%.3f (fit se %.1e) window [%.0f, %.0f] theory %.3f]", c.alpha,
                  r.fit.gamma, r.fit.stderr_gamma, r.fit.t_lo, r.fit.t_hi, r.gamma_theory);
  }
  return {ok, detail};
}

Outcome two_body() {
  std::string detail;
  // (a) no interaction: spectrum is the sum of one-body levels
  TwoBodyParams p;
  p.L = 10;
  p.f = 0.5;
  std::vector<double> both;
  for (Sublattice s : {Sublattice::one, Sublattice::two})
    for (const auto& row : two_body_spectrum({0.5}, p, s).rows)
      both.insert(both.end(), row.energies.begin(), row.energies.end());
  std::sort(both.begin(), both.end());
  const auto sums = pair_sum_spectrum(p);
  double diff = both.size() == sums.size() ? 0.0 : 1.0;
  for (std::size_t i = 0; i < std::min(both.size(), sums.size()); ++i)
    diff = std::max(diff, circ_dist(both[i], sums[i]));
  // degeneracy of each level, per unit of L^2
  std::vector<std::pair<double, int>> deg;
  for (double e : both) {
    if (!deg.empty() && circ_dist(deg.back().first, e) < 1e-8) ++deg.back().second;
    else deg.emplace_back(e, 1);
  }
  if (deg.size() > 1 && circ_dist(deg.front().first, deg.back().first) < 1e-8) {
    deg.front().second += deg.back().second;
    deg.pop_back();
  }
  std::set<int> per;
  for (const auto& d : deg) per.insert(d.second / (p.L * p.L));
  const bool a = diff < 1e-10 && per == std::set<int>{2, 4, 8};
  detail += fmt("(a) pair-sum diff %.1e, degeneracies/L^2 {", diff);
  for (int v : per) detail += fmt(" %d", v);
  detail += " }";

  // (b) interaction breaks flatness
  p.phi = 0.1 * pi;
  const double spread = max_band_spread(two_body_spectrum({0.5}, p, Sublattice::one));
  const bool b = spread > 1e-3;
  detail += fmt("; (b) band spread at phi=0.1pi %.3f", spread);

  // (c), (d) stable subspaces and excursions
  p.phi = 2.0;
  const int table[3][3] = {{320, 320, 320}, {64, 128, 192}, {32, 64, 96}};
  const TwoBodyWalk w(p);
  const PairBasis basis(p.L, CoinFamily::grover);
  bool c = true;
  int dims[9];
  double dist[9], early[9];
  for (int ci = 1; ci <= 3; ++ci)
    for (int si = 1; si <= 3; ++si) {
      const auto cond = static_cast<PairCondition>(ci);
      const auto psi = initial_pair_state(p.L, cond, static_cast<SpinConfig>(si), p.L / 2);
      const int k = 3 * (ci - 1) + (si - 1);
      dims[k] = grow_stable_subspace(w, basis, psi).dimension;
      c = c && dims[k] == table[ci - 1][si - 1];
      const auto d = max_pair_distance(w, psi, initial_cells(cond, p.L / 2), 200);
      dist[k] = d.back();
      early[k] = d[100];
    }
  detail += "; (c) dims";
  for (int k = 0; k < 9; ++k) detail += fmt(" %d", dims[k]);
  bool d = std::abs(dist[0] - p.L / std::sqrt(2.0)) < 0.5;
  for (int k = 3; k < 9; ++k) d = d && dist[k] == early[k] && dist[k] < dist[0];
  for (int i = 0; i < 9; ++i)
    for (int j = 0; j < 9; ++j)
      if (dims[i] < dims[j]) d = d && dist[i] <= dist[j];
  detail += "; (d) max distance at t=200";
  for (int k = 0; k < 9; ++k) detail += fmt(" %.3f", dist[k]);
  return {a && b && c && d, detail};
}

Outcome determinism() {
  std::vector<RunConfig> configs(3);
  configs[0].command = "fig4-rimstatic";
  configs[0].steps = 300;
  configs[0].realizations = 6;
  configs[1].command = "fig3-hubstatic";
  configs[1].realizations = 300;
  configs[2].command = "fig9-subdiff";
  configs[2].steps = 300;
  configs[2].realizations = 4;
  bool ok = true;
  for (auto& base : configs) {
    for (const char* format : {"csv", "json"}) {
      std::string text[2];
      for (auto& t : text) {
        RunConfig c = base;
        c.format = format;
        const Report r = run_command(c);
        t = c.format == "json" ? to_json(r, c) : to_csv(r.tables[0]) + meta_csv(r);
      }
      ok = ok && text[0] == text[1] && !text[0].empty();
    }
  }
  return {ok, "fig4-rimstatic, fig3-hubstatic, fig9-subdiff reruns byte-identical in CSV and JSON"};
}

struct Criterion {
  int id;
  const char* name;
  double budget_s;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> all{
      {1, "flat-band caging", 1, flat_bands},
      {2, "confined eigenstates", 1, confined_states},
      {3, "cage statistics", 120, cage_stats},
      {4, "dynamic-hub diffusion", 300, dynamic_hub},
      {5, "variance law", 300, variance_law},
      {6, "rim-static localization", 600, rim_static},
      {7, "IPR regimes", 900, ipr_regimes},
      {8, "measurement diffusion", 600, measurement},
      {9, "subdiffusion exponents", 3600, subdiffusion},
      {10, "two-body", 1200, two_body},
      {11, "determinism", 600, determinism},
  };
  std::set<int> pick;
  for (int i = 1; i < argc; ++i) pick.insert(std::atoi(argv[i]));
  int failed = 0;
  for (const auto& c : all) {
    if (!pick.empty() && !pick.count(c.id)) continue;
    const auto t0 = Clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    const bool pass = o.pass && secs < c.budget_s;
    failed += !pass;
    std::printf("criterion %2d %-24s %s  (%.1f s, budget %.0f s)  %s\n", c.id, c.name,
                pass ? "PASS" : "FAIL", secs, c.budget_s, o.detail.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
