#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <omp.h>

#include "dcqw/commands.hpp"
#include "dcqw/config.hpp"
#include "dcqw/errors.hpp"
#include "dcqw/export.hpp"

namespace {

enum Exit { ok = 0, other = 1, config = 2, domain = 3, resource = 4 };

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum walks on the diamond chain: presets, spectra and ensembles"};
  app.set_help_all_flag("--help-all");

  std::string command, config_file, command_pos;
  std::vector<std::string> sets;
  // flag name -> config key; values are kept as text and parsed by the config layer
  const std::vector<std::pair<std::string, std::string>> flags{
      {"--seed", "run.seed"},          {"--workers", "run.workers"},
      {"--out", "output.path"},        {"--format", "output.format"},
      {"--ps", "disorder.ps"},         {"--pt", "disorder.pt"},
      {"--dtheta", "disorder.dtheta"}, {"--theta0", "disorder.theta0"},
      {"--alpha", "disorder.alpha"},   {"--disorder", "disorder.kind"},
      {"--flux", "walk.flux"},         {"--steps", "run.steps"},
      {"--realizations", "run.realizations"},
      {"--measure-period", "measure.period"},
      {"--measure-count", "measure.count"},
      {"--phi-int", "twobody.phi_int"}, {"--length", "chain.length"},
      {"--boundary", "chain.boundary"}, {"--hub", "coin.hub"},
      {"--theta", "coin.theta"},       {"--flux-grid", "spectrum.flux_grid"},
      {"--k-points", "spectrum.k_points"}, {"--scan", "run.scan"}};
  std::vector<std::optional<std::string>> values(flags.size());

  app.add_option("command_name", command_pos, "preset or command (same as --command)");
  app.add_option("--command", command, "one of: fig1-cage fig3-hubstatic fig4-rimstatic fig5-zoom "
                                       "fig6-spectral fig7-ipr fig8-measure fig9-subdiff "
                                       "fig11-15-twobody spectrum subdiffusion ensemble");
  app.add_option("--config", config_file, "key = value file");
  for (std::size_t i = 0; i < flags.size(); ++i)
    app.add_option(flags[i].first, values[i], flags[i].second);
  app.add_option("--set", sets, "extra key=value overrides")->take_all();
  bool print_config = false;
  app.add_flag("--print-config", print_config, "print the resolved configuration and exit");

  CLI11_PARSE(app, argc, argv);

  try {
    dcqw::RunConfig cfg;
    if (!config_file.empty()) cfg = dcqw::parse_config_file(config_file);
    if (!command_pos.empty()) dcqw::set_config_value(cfg, "run.command", command_pos);
    if (!command.empty()) dcqw::set_config_value(cfg, "run.command", command);
    for (std::size_t i = 0; i < flags.size(); ++i)
      if (values[i]) dcqw::set_config_value(cfg, flags[i].second, *values[i]);
    for (const auto& kv : sets) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) throw dcqw::ConfigError("--set expects key=value, got '" + kv + "'");
      dcqw::set_config_value(cfg, kv.substr(0, eq), kv.substr(eq + 1));
    }

    if (print_config) {
      for (const auto& w : dcqw::resolve_defaults(cfg)) std::cerr << "warning: " << w << "\n";
      std::cout << dcqw::serialize_config(cfg);
      return ok;
    }
    if (cfg.workers > 0) omp_set_num_threads(cfg.workers);

    const dcqw::Report report = dcqw::run_command(cfg);
    for (const auto& w : report.warnings) std::cerr << "warning: " << w << "\n";
    for (const auto& f : dcqw::write_report(report, cfg)) std::cerr << "wrote " << f << "\n";
    return ok;
  } catch (const dcqw::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return config;
  } catch (const dcqw::DomainError& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return domain;
  } catch (const dcqw::ResourceError& e) {
    std::cerr << "resource limit: " << e.what() << "\n";
    return resource;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return other;
  }
}
