#include "dcqw/commands.hpp"

#include <cmath>
#include <functional>
#include <map>

#include "dcqw/errors.hpp"
#include "dcqw/experiments.hpp"
#include "dcqw/measurement.hpp"
#include "dcqw/propagator.hpp"
#include "dcqw/spectral.hpp"
#include "dcqw/twobody.hpp"

namespace dcqw {

HubCoin hub_from_name(const std::string& name) {
  if (name == "grover") return HubCoin::grover();
  if (name == "hadamard") return HubCoin::hadamard();
  throw ConfigError("coin.hub: unknown hub coin '" + name + "'");
}

DisorderKind disorder_from_name(const std::string& name) {
  static const std::map<std::string, DisorderKind> kinds{
      {"none", DisorderKind::none},
      {"hub_static", DisorderKind::hub_static},
      {"hub_dynamic", DisorderKind::hub_dynamic},
      {"rim_static", DisorderKind::rim_static},
      {"rim_dynamic", DisorderKind::rim_dynamic},
      {"combined", DisorderKind::combined},
      {"hub_rim_static", DisorderKind::hub_rim_static}};
  const auto it = kinds.find(name);
  if (it == kinds.end()) throw ConfigError("disorder.kind: unknown kind '" + name + "'");
  return it->second;
}

namespace {

RimCoinParams rim_of(const RunConfig& c) { return {*c.theta, c.phi, c.omega, c.beta}; }

DisorderSpec disorder_of(const RunConfig& c) {
  DisorderSpec d;
  d.kind = disorder_from_name(*c.disorder);
  d.p = d.kind == DisorderKind::hub_dynamic ? *c.pt : *c.ps;
  d.theta0 = *c.theta0;
  d.dtheta = *c.dtheta;
  d.alpha = *c.alpha;
  d.hub = hub_from_name(c.hub);
  return d;
}

Boundary boundary_of(const RunConfig& c) {
  return c.boundary == "open" ? Boundary::open : Boundary::periodic;
}

std::vector<double> scan_or(const RunConfig& c, double single) {
  return c.scan ? parse_list(*c.scan) : std::vector<double>{single};
}

Table sigma_table(const EnsembleResult& e) {
  Table t{"sigma", {"t", "sigma_mean", "sigma_stderr", "n_realizations"}, {}};
  for (std::size_t i = 0; i < e.t.size(); ++i)
    t.add({e.t[i], e.sigma_mean[i], e.sigma_stderr[i], static_cast<double>(e.R)});
  return t;
}

void add_fit(Report& r, const PowerLawFit& fit) {
  r.meta.emplace_back("gamma", fit.gamma);
  r.meta.emplace_back("gamma_stderr", fit.stderr_gamma);
  r.meta.emplace_back("fit_t_lo", fit.t_lo);
  r.meta.emplace_back("fit_t_hi", fit.t_hi);
}

void add_spectrum_rows(Table& t, const SpectrumRow& row) {
  for (std::size_t b = 0; b < row.energies.size(); ++b)
    t.add({row.f, row.k, static_cast<double>(b), row.energies[b]});
}

Table spectrum_table() { return {"spectrum", {"f", "k", "band_index", "quasi_energy"}, {}}; }

Report cmd_spectrum(const RunConfig& c) {
  const auto fluxes = parse_flux_grid(*c.flux_grid).values();
  std::vector<double> ks(*c.k_points);
  for (int j = 0; j < *c.k_points; ++j) ks[j] = -pi + 2 * pi * j / *c.k_points;
  const SpectrumResult s = spectrum_vs_flux(fluxes, ks, hub_from_name(c.hub), rim_of(c));
  Report r;
  Table t = spectrum_table();
  for (const auto& row : s.rows) add_spectrum_rows(t, row);
  r.tables.push_back(std::move(t));
  return r;
}

// Clean walk from one hub with spin R+: spread, support and accumulated cage.
Report cmd_cage(const RunConfig& c) {
  const ChainGeometry geom{*c.length, boundary_of(c)};
  geom.validate();
  const CoinField field = CoinField::uniform(hub_from_name(c.hub), rim_of(c));
  const WalkState psi0 = WalkState::hub_spin(geom, geom.L / 2, HubSpinConfig{});
  const EvolutionRecord rec =
      evolve(psi0, *c.steps, field, FluxGauge{*c.flux},
             {Observable::sigma, Observable::support, Observable::cage});
  Report r;
  Table series{"series", {"t", "sigma", "support_extent", "cage_extent"}, {}};
  for (std::size_t t = 0; t < rec.sigma.size(); ++t)
    series.add({static_cast<double>(t), rec.sigma[t], static_cast<double>(rec.support[t]),
                static_cast<double>(rec.cage[t])});
  Table dist{"distribution", {"cell", "probability"}, {}};
  const auto p = position_distribution(rec.final_state);
  for (std::size_t n = 0; n < p.size(); ++n)
    dist.add({static_cast<double>(n) - geom.L / 2, p[n]});
  r.meta.emplace_back("max_cage_extent", static_cast<long>(rec.cage.back()));
  r.tables.push_back(std::move(series));
  r.tables.push_back(std::move(dist));
  return r;
}

Report cmd_hubstatic(const RunConfig& c, bool flux_given) {
  const std::vector<double> fluxes = flux_given ? std::vector<double>{*c.flux}
                                                : std::vector<double>{0.0, 0.5};
  const auto ps_list = scan_or(c, *c.ps);
  Report r;
  Table stats{"cage_stats",
              {"f", "ps", "mean_extent", "stderr_extent", "predicted_mean", "chi2_p_value",
               "n_realizations"},
              {}};
  Table dist{"distribution", {"f", "ps", "extent", "observed", "predicted"}, {}};
  for (double f : fluxes) {
    if (f != 0.0 && f != 0.5)
      throw DomainError("hub-static cage statistics need f = 0 or f = 1/2");
    for (double ps : ps_list) {
      const CageStatistics s = cage_statistics(ps, f, *c.steps, *c.realizations, c.seed, *c.length);
      stats.add({f, ps, s.mean.mean, s.mean.stderr_mean, s.predicted_mean, s.chi2.p_value,
                 static_cast<double>(*c.realizations)});
      int nmax = 0;
      for (int e : s.extents) nmax = std::max(nmax, e);
      std::vector<double> counts(nmax + 1, 0.0);
      for (int e : s.extents) counts[e] += 1.0;
      for (int n = 1; n <= nmax; ++n)
        dist.add({f, ps, static_cast<double>(n), counts[n] / s.extents.size(),
                  predicted_cage_prob_static(n, ps, f)});
    }
  }
  r.tables.push_back(std::move(stats));
  r.tables.push_back(std::move(dist));
  return r;
}

ExperimentSpec ensemble_spec(const RunConfig& c) {
  ExperimentSpec s;
  s.L = *c.length;
  s.boundary = boundary_of(c);
  s.f = *c.flux;
  s.disorder = disorder_of(c);
  s.T = *c.steps;
  s.R = *c.realizations;
  s.seed = c.seed;
  return s;
}

Report cmd_ensemble(const RunConfig& c, bool distribution) {
  ExperimentSpec s = ensemble_spec(c);
  s.record_distribution = distribution;
  const EnsembleResult e = run_ensemble(s);
  Report r;
  r.tables.push_back(sigma_table(e));
  if (distribution) {
    Table d{"distribution", {"cell", "probability"}, {}};
    const int L = static_cast<int>(e.mean_distribution.size());
    const int centre = s.start_cell();
    for (int n = 0; n < L; ++n) d.add({static_cast<double>(n - centre), e.mean_distribution[n]});
    r.tables.push_back(std::move(d));
  }
  if (e.t.size() > 2) add_fit(r, fit_exponent(e.t, e.sigma_mean));
  r.meta.emplace_back("n_realizations", static_cast<long>(e.R));
  return r;
}

// One disorder realization, its spectrum over a flux grid.
Table realization_spectrum(const RunConfig& c, const DisorderSpec& d) {
  const ChainGeometry geom{*c.length, Boundary::periodic};
  geom.validate();
  Rng rng = realization_rng(c.seed, 0);
  const CoinField field = realize_field(d, geom.L, 0, rng);
  const auto fluxes = parse_flux_grid(*c.flux_grid).values();
  std::vector<SpectrumRow> rows(fluxes.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (std::size_t i = 0; i < fluxes.size(); ++i) {
    rows[i] = full_spectrum(field, geom, FluxGauge{fluxes[i]}, false).rows.at(0);
    rows[i].f = fluxes[i];
    rows[i].k = 0.0;
  }
  Table t = spectrum_table();
  for (const auto& row : rows) add_spectrum_rows(t, row);
  return t;
}

Report cmd_zoom(const RunConfig& c) {
  Report r;
  r.tables.push_back(realization_spectrum(c, disorder_of(c)));
  return r;
}

Report cmd_spectral(const RunConfig& c) {
  const DisorderSpec d = disorder_of(c);
  const auto spectra = disordered_spectra(d, *c.flux, *c.length, *c.realizations, c.seed);
  const SpacingStats st = level_spacing_stats(spectra);
  Report r;
  Table sp{"spacing", {"s_lo", "s_hi", "density", "poisson"}, {}};
  for (std::size_t i = 0; i < st.hist_density.size(); ++i) {
    const double a = st.hist_edges[i], b = st.hist_edges[i + 1];
    sp.add({a, b, st.hist_density[i], (std::exp(-a) - std::exp(-b)) / (b - a)});
  }
  const ChainGeometry geom{*c.length, Boundary::periodic};
  Rng rng = realization_rng(c.seed, 0);
  const TailProfile tp =
      eigenvector_tail_profile(realize_field(d, geom.L, 0, rng), geom, FluxGauge{*c.flux});
  Table tail{"tail", {"distance", "mean_log10_prob"}, {}};
  std::vector<double> x, y;
  for (std::size_t i = 0; i < tp.distance.size(); ++i) {
    tail.add({tp.distance[i], tp.mean_log10_prob[i]});
    if (tp.distance[i] >= 2 && tp.distance[i] <= 20) {
      x.push_back(tp.distance[i]);
      y.push_back(tp.mean_log10_prob[i]);
    }
  }
  const LinearFit lf = linear_fit(x, y);
  r.meta.emplace_back("ks_distance", st.ks_distance);
  r.meta.emplace_back("n_spacings", static_cast<long>(st.spacings.size()));
  r.meta.emplace_back("tail_slope", lf.slope);
  r.meta.emplace_back("tail_r2", lf.r2);
  r.meta.emplace_back("tail_fit_lo", 2.0);
  r.meta.emplace_back("tail_fit_hi", 20.0);
  r.tables.push_back(std::move(sp));
  r.tables.push_back(std::move(tail));
  r.tables.push_back(realization_spectrum(c, d));
  return r;
}

// Scan values are in units of pi.
Report cmd_ipr(const RunConfig& c, bool flux_given) {
  const std::vector<double> fluxes = flux_given ? std::vector<double>{*c.flux}
                                                : std::vector<double>{0.5, 0.25};
  std::vector<double> dthetas = parse_list(*c.scan);
  for (double& v : dthetas) v *= pi;
  const DisorderKind kind = disorder_from_name(*c.disorder);
  Report r;
  Table t{"ipr", {"f", "dtheta", "mean_log_ipr", "stderr_log_ipr"}, {}};
  for (double f : fluxes) {
    const IprScan s = ipr_scan(dthetas, f, kind, *c.length, *c.realizations, c.seed);
    for (std::size_t i = 0; i < s.dtheta.size(); ++i)
      t.add({f, s.dtheta[i], s.mean_log_ipr[i], s.stderr_log_ipr[i]});
  }
  r.tables.push_back(std::move(t));
  return r;
}

Report cmd_measure(const RunConfig& c) {
  MeasurementSpec m;
  m.theta = *c.theta;
  m.f = *c.flux;
  m.hub = hub_from_name(c.hub);
  m.period = *c.measure_period;
  m.measurements = *c.measure_count;
  m.trajectories = *c.realizations;
  m.seed = c.seed;
  const MeasurementResult res = measurement_experiment(m);
  Report r;
  Table s{"sigma", {"n", "sigma", "exact_sigma"}, {}};
  for (std::size_t i = 0; i < res.n.size(); ++i) s.add({res.n[i], res.sigma[i], res.exact_sigma[i]});
  Table h{"histogram", {"x", "probability", "gaussian"}, {}};
  const GaussianFit& g = res.gaussian;
  for (std::size_t i = 0; i < res.hist_x.size(); ++i) {
    const double z = (res.hist_x[i] - g.mean) / g.sigma;
    h.add({res.hist_x[i], res.hist_p[i], g.amplitude * std::exp(-0.5 * z * z)});
  }
  r.meta.emplace_back("sqrt_d", res.sqrt_d);
  r.meta.emplace_back("d", res.d);
  r.meta.emplace_back("gaussian_sigma", g.sigma);
  r.meta.emplace_back("gaussian_r2", g.r2);
  r.meta.emplace_back("n_trajectories", static_cast<long>(m.trajectories));
  r.tables.push_back(std::move(s));
  r.tables.push_back(std::move(h));
  return r;
}

Report cmd_subdiffusion(const RunConfig& c) {
  const SubdiffusionResult s = subdiffusion_experiment(*c.alpha, *c.steps, *c.realizations, c.seed);
  Report r;
  r.meta.emplace_back("alpha", *c.alpha);
  add_fit(r, s.fit);
  r.meta.emplace_back("gamma_theory", s.gamma_theory);
  r.meta.emplace_back("n_realizations", static_cast<long>(s.ensemble.R));
  r.tables.push_back(sigma_table(s.ensemble));
  return r;
}

Report cmd_subdiff_scan(const RunConfig& c) {
  const auto alphas = scan_or(c, *c.alpha);
  for (double a : alphas) (void)subdiffusion_gamma_theory(a);
  Report r;
  Table series{"series", {"alpha", "t", "sigma_mean", "sigma_stderr", "n_realizations"}, {}};
  Table fits{"fits", {"alpha", "gamma", "gamma_stderr", "gamma_theory", "fit_t_lo", "fit_t_hi"}, {}};
  for (double a : alphas) {
    const SubdiffusionResult s = subdiffusion_experiment(a, *c.steps, *c.realizations, c.seed);
    const EnsembleResult& e = s.ensemble;
    for (std::size_t i = 0; i < e.t.size(); ++i)
      series.add({a, e.t[i], e.sigma_mean[i], e.sigma_stderr[i], static_cast<double>(e.R)});
    fits.add({a, s.fit.gamma, s.fit.stderr_gamma, s.gamma_theory, s.fit.t_lo, s.fit.t_hi});
  }
  r.tables.push_back(std::move(fits));
  r.tables.push_back(std::move(series));
  return r;
}

Report cmd_twobody(const RunConfig& c) {
  TwoBodyParams p;
  p.L = *c.length;
  p.f = *c.flux;
  p.hub = hub_from_name(c.hub);
  p.rim = rim_of(c);
  p.phi = *c.phi_int;
  Report r;

  const SpectrumResult s =
      two_body_spectrum(parse_flux_grid(*c.flux_grid).values(), p, Sublattice::one);
  Table spec = spectrum_table();
  for (const auto& row : s.rows) add_spectrum_rows(spec, row);
  r.meta.emplace_back("max_band_spread", max_band_spread(s));

  const TwoBodyWalk w(p);
  const CoinFamily family = c.hub == "grover" ? CoinFamily::grover : CoinFamily::hadamard;
  const PairBasis basis(p.L, family);
  const int n = p.L / 2;
  Table stable{"stable", {"condition", "spin", "dimension", "max_distance"}, {}};
  Table dist{"distance", {"t", "condition", "spin", "max_distance"}, {}};
  for (int ci = 1; ci <= 3; ++ci)
    for (int si = 1; si <= 3; ++si) {
      const auto cond = static_cast<PairCondition>(ci);
      const auto spin = static_cast<SpinConfig>(si);
      const Eigen::MatrixXcd psi = initial_pair_state(p.L, cond, spin, n);
      const StableSubspace sub = grow_stable_subspace(w, basis, psi);
      const auto d = max_pair_distance(w, psi, initial_cells(cond, n), *c.steps);
      stable.add({double(ci), double(si), double(sub.dimension), d.back()});
      for (std::size_t t = 0; t < d.size(); ++t) dist.add({double(t), double(ci), double(si), d[t]});
    }
  r.tables.push_back(std::move(spec));
  r.tables.push_back(std::move(stable));
  r.tables.push_back(std::move(dist));
  return r;
}

}  // namespace

Report run_command(RunConfig& cfg) {
  const bool flux_given = cfg.flux.has_value();
  auto warnings = resolve_defaults(cfg);
  const std::string& cmd = cfg.command;
  Report r;
  if (cmd == "spectrum") r = cmd_spectrum(cfg);
  else if (cmd == "fig1-cage") r = cmd_cage(cfg);
  else if (cmd == "fig3-hubstatic") r = cmd_hubstatic(cfg, flux_given);
  else if (cmd == "fig4-rimstatic") r = cmd_ensemble(cfg, true);
  else if (cmd == "fig5-zoom") r = cmd_zoom(cfg);
  else if (cmd == "fig6-spectral") r = cmd_spectral(cfg);
  else if (cmd == "fig7-ipr") r = cmd_ipr(cfg, flux_given);
  else if (cmd == "fig8-measure") r = cmd_measure(cfg);
  else if (cmd == "fig9-subdiff") r = cmd_subdiff_scan(cfg);
  else if (cmd == "subdiffusion") r = cmd_subdiffusion(cfg);
  else if (cmd == "fig11-15-twobody") r = cmd_twobody(cfg);
  else if (cmd == "ensemble") r = cmd_ensemble(cfg, false);
  else throw ConfigError("run.command: unknown command '" + cmd + "'");
  r.command = cmd;
  r.meta.insert(r.meta.begin(), {"seed", static_cast<long>(cfg.seed)});
  r.warnings = std::move(warnings);
  return r;
}

}  // namespace dcqw
