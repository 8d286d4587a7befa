#include "dcqw/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "dcqw/errors.hpp"
#include "dcqw/lattice.hpp"

namespace dcqw {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

double to_double(const std::string& key, const std::string& v) {
  double x = 0.0;
  const char* end = v.data() + v.size();
  const auto r = std::from_chars(v.data(), end, x);
  if (r.ec != std::errc() || r.ptr != end || !std::isfinite(x))
    throw ConfigError(key + ": expected a number, got '" + v + "'");
  return x;
}

template <class Int>
Int to_int(const std::string& key, const std::string& v) {
  Int x = 0;
  const char* end = v.data() + v.size();
  const auto r = std::from_chars(v.data(), end, x);
  if (r.ec != std::errc() || r.ptr != end)
    throw ConfigError(key + ": expected an integer, got '" + v + "'");
  return x;
}

std::string one_of(const std::string& key, const std::string& v,
                   const std::vector<std::string>& allowed) {
  if (std::find(allowed.begin(), allowed.end(), v) == allowed.end()) {
    std::string list;
    for (const auto& a : allowed) list += (list.empty() ? "" : ", ") + a;
    throw ConfigError(key + ": '" + v + "' is not one of " + list);
  }
  return v;
}

const std::vector<std::string> kFormats{"csv", "json"};
const std::vector<std::string> kBoundaries{"periodic", "open"};
const std::vector<std::string> kHubs{"grover", "hadamard"};
const std::vector<std::string> kDisorders{"none",        "hub_static", "hub_dynamic",
                                          "rim_static",  "rim_dynamic", "combined",
                                          "hub_rim_static"};

struct Field {
  std::function<void(RunConfig&, const std::string&, const std::string&)> set;
  std::function<std::optional<std::string>(const RunConfig&)> get;
};

template <class T>
std::optional<std::string> show(const std::optional<T>& v) {
  if (!v) return std::nullopt;
  if constexpr (std::is_same_v<T, double>) return format_double(*v);
  else if constexpr (std::is_same_v<T, std::string>) return *v;
  else return std::to_string(*v);
}

const std::vector<std::pair<std::string, Field>>& fields() {
  using C = RunConfig;
  using S = std::string;
  static const std::vector<std::pair<std::string, Field>> f{
      {"run.command",
       {[](C& c, const S& k, const S& v) { c.command = one_of(k, v, command_names()); },
        [](const C& c) { return std::optional<S>(c.command); }}},
      {"run.seed",
       {[](C& c, const S& k, const S& v) { c.seed = to_int<std::uint64_t>(k, v); },
        [](const C& c) { return std::optional<S>(std::to_string(c.seed)); }}},
      {"run.workers",
       {[](C& c, const S& k, const S& v) { c.workers = to_int<int>(k, v); },
        [](const C& c) { return std::optional<S>(std::to_string(c.workers)); }}},
      {"run.steps",
       {[](C& c, const S& k, const S& v) { c.steps = to_int<long>(k, v); },
        [](const C& c) { return show(c.steps); }}},
      {"run.realizations",
       {[](C& c, const S& k, const S& v) { c.realizations = to_int<int>(k, v); },
        [](const C& c) { return show(c.realizations); }}},
      {"run.scan",
       {[](C& c, const S& k, const S& v) {
          (void)parse_list(v);
          c.scan = v;
          (void)k;
        },
        [](const C& c) { return show(c.scan); }}},
      {"output.path",
       {[](C& c, const S&, const S& v) { c.out = v; },
        [](const C& c) { return std::optional<S>(c.out); }}},
      {"output.format",
       {[](C& c, const S& k, const S& v) { c.format = one_of(k, v, kFormats); },
        [](const C& c) { return std::optional<S>(c.format); }}},
      {"chain.length",
       {[](C& c, const S& k, const S& v) { c.length = to_int<int>(k, v); },
        [](const C& c) { return show(c.length); }}},
      {"chain.boundary",
       {[](C& c, const S& k, const S& v) { c.boundary = one_of(k, v, kBoundaries); },
        [](const C& c) { return std::optional<S>(c.boundary); }}},
      {"walk.flux",
       {[](C& c, const S& k, const S& v) { c.flux = to_double(k, v); },
        [](const C& c) { return show(c.flux); }}},
      {"coin.hub",
       {[](C& c, const S& k, const S& v) { c.hub = one_of(k, v, kHubs); },
        [](const C& c) { return std::optional<S>(c.hub); }}},
      {"coin.theta",
       {[](C& c, const S& k, const S& v) { c.theta = to_double(k, v); },
        [](const C& c) { return show(c.theta); }}},
      {"coin.phi",
       {[](C& c, const S& k, const S& v) { c.phi = to_double(k, v); },
        [](const C& c) { return std::optional<S>(format_double(c.phi)); }}},
      {"coin.omega",
       {[](C& c, const S& k, const S& v) { c.omega = to_double(k, v); },
        [](const C& c) { return std::optional<S>(format_double(c.omega)); }}},
      {"coin.beta",
       {[](C& c, const S& k, const S& v) { c.beta = to_double(k, v); },
        [](const C& c) { return std::optional<S>(format_double(c.beta)); }}},
      {"disorder.kind",
       {[](C& c, const S& k, const S& v) { c.disorder = one_of(k, v, kDisorders); },
        [](const C& c) { return show(c.disorder); }}},
      {"disorder.ps",
       {[](C& c, const S& k, const S& v) { c.ps = to_double(k, v); },
        [](const C& c) { return show(c.ps); }}},
      {"disorder.pt",
       {[](C& c, const S& k, const S& v) { c.pt = to_double(k, v); },
        [](const C& c) { return show(c.pt); }}},
      {"disorder.theta0",
       {[](C& c, const S& k, const S& v) { c.theta0 = to_double(k, v); },
        [](const C& c) { return show(c.theta0); }}},
      {"disorder.dtheta",
       {[](C& c, const S& k, const S& v) { c.dtheta = to_double(k, v); },
        [](const C& c) { return show(c.dtheta); }}},
      {"disorder.alpha",
       {[](C& c, const S& k, const S& v) { c.alpha = to_double(k, v); },
        [](const C& c) { return show(c.alpha); }}},
      {"measure.period",
       {[](C& c, const S& k, const S& v) { c.measure_period = to_int<int>(k, v); },
        [](const C& c) { return show(c.measure_period); }}},
      {"measure.count",
       {[](C& c, const S& k, const S& v) { c.measure_count = to_int<int>(k, v); },
        [](const C& c) { return show(c.measure_count); }}},
      {"twobody.phi_int",
       {[](C& c, const S& k, const S& v) { c.phi_int = to_double(k, v); },
        [](const C& c) { return show(c.phi_int); }}},
      {"spectrum.flux_grid",
       {[](C& c, const S& k, const S& v) {
          try {
            (void)parse_flux_grid(v);
          } catch (const ConfigError& e) {
            throw ConfigError(k + ": " + e.what());
          }
          c.flux_grid = v;
        },
        [](const C& c) { return show(c.flux_grid); }}},
      {"spectrum.k_points",
       {[](C& c, const S& k, const S& v) { c.k_points = to_int<int>(k, v); },
        [](const C& c) { return show(c.k_points); }}},
  };
  return f;
}

const Field& field(const std::string& key) {
  for (const auto& [k, f] : fields())
    if (k == key) return f;
  throw ConfigError("unknown key '" + key + "'");
}

}  // namespace

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{
      "fig1-cage",  "fig3-hubstatic", "fig4-rimstatic", "fig5-zoom",
      "fig6-spectral", "fig7-ipr",    "fig8-measure",   "fig9-subdiff",
      "fig11-15-twobody", "spectrum", "subdiffusion",   "ensemble"};
  return names;
}

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> k;
    for (const auto& f : fields()) k.push_back(f.first);
    return k;
  }();
  return keys;
}

void set_config_value(RunConfig& c, const std::string& key, const std::string& value) {
  field(key).set(c, key, trim(value));
}

std::optional<std::string> get_config_value(const RunConfig& c, const std::string& key) {
  return field(key).get(c);
}

RunConfig parse_config_text(const std::string& text, RunConfig base) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    try {
      set_config_value(base, key, line.substr(eq + 1));
    } catch (const ConfigError& e) {
      throw ConfigError("line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  validate_config(base);
  return base;
}

RunConfig parse_config_file(const std::string& path, RunConfig base) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str(), std::move(base));
}

std::string serialize_config(const RunConfig& c) {
  std::string out;
  for (const auto& [k, f] : fields()) {
    const auto v = f.get(c);
    if (v) out += k + " = " + *v + "\n";
  }
  return out;
}

void validate_config(const RunConfig& c) {
  auto unit = [](const char* key, const std::optional<double>& v) {
    if (v && (*v < 0.0 || *v > 1.0)) throw ConfigError(std::string(key) + ": must lie in [0, 1]");
  };
  unit("disorder.ps", c.ps);
  unit("disorder.pt", c.pt);
  if (c.dtheta && *c.dtheta < 0.0) throw ConfigError("disorder.dtheta: must be >= 0");
  if (c.workers < 0) throw ConfigError("run.workers: must be >= 0");
  if (c.length && *c.length < 0) throw ConfigError("chain.length: must be >= 0");
  if (c.steps && *c.steps < 0) throw ConfigError("run.steps: must be >= 0");
  if (c.realizations && *c.realizations < 1) throw ConfigError("run.realizations: must be >= 1");
  if (c.measure_period && *c.measure_period < 1) throw ConfigError("measure.period: must be >= 1");
  if (c.measure_count && *c.measure_count < 1) throw ConfigError("measure.count: must be >= 1");
  if (c.k_points && *c.k_points < 1) throw ConfigError("spectrum.k_points: must be >= 1");
}

std::vector<std::string> resolve_defaults(RunConfig& c) {
  validate_config(c);
  std::vector<std::string> warnings;
  const double critical = c.hub == "grover" ? 0.5 : 0.0;
  const std::string& cmd = c.command;
  auto def = [](auto& slot, auto value) {
    if (!slot) slot = value;
  };

  const bool caged_preset = cmd == "fig1-cage" || cmd == "fig3-hubstatic" ||
                            cmd == "fig8-measure" || cmd == "fig4-rimstatic" ||
                            cmd == "fig6-spectral";
  if (c.flux && caged_preset && std::abs(*c.flux - critical) > 1e-12)
    warnings.push_back("walk.flux = " + format_double(*c.flux) + " differs from the critical flux " +
                       format_double(critical) + " of the " + c.hub +
                       " hub; the explicit value is used");
  def(c.flux, critical);
  def(c.theta0, pi / 4);

  if (cmd == "spectrum") {
    def(c.flux_grid, std::string("0:1:201"));
    def(c.k_points, 64);
  } else if (cmd == "fig1-cage") {
    def(c.steps, 100L);
    def(c.length, 64);
  } else if (cmd == "fig3-hubstatic") {
    def(c.steps, 30L);
    def(c.realizations, 10000);
    def(c.length, 64);
    if (!c.ps) def(c.scan, std::string("0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9"));
  } else if (cmd == "fig4-rimstatic") {
    def(c.disorder, std::string("rim_static"));
    def(c.dtheta, 0.1 * pi);
    def(c.steps, 2000L);
    def(c.realizations, 100);
  } else if (cmd == "fig5-zoom") {
    def(c.disorder, std::string("hub_static"));
    def(c.ps, 0.2);
    def(c.length, 100);
    def(c.flux_grid, std::string("0.45:0.55:101"));
  } else if (cmd == "fig6-spectral") {
    def(c.disorder, std::string("rim_static"));
    def(c.dtheta, 0.1 * pi);
    def(c.length, 100);
    def(c.realizations, 100);
    def(c.flux_grid, std::string("0:1:51"));
  } else if (cmd == "fig7-ipr") {
    def(c.disorder, std::string("rim_static"));
    def(c.length, 200);
    def(c.realizations, 8);
    def(c.scan, std::string("0.001,0.003,0.01,0.03,0.1,0.3,1,1.25,1.5,1.75,2"));
  } else if (cmd == "fig8-measure") {
    def(c.theta, pi / 3);
    def(c.measure_period, 5);
    def(c.measure_count, 1000);
    def(c.realizations, 10000);
  } else if (cmd == "fig9-subdiff") {
    def(c.disorder, std::string("combined"));
    def(c.steps, 10000L);
    def(c.realizations, 100);
    if (!c.alpha) def(c.scan, std::string("0.5,0,-0.5,-1,-2"));
  } else if (cmd == "subdiffusion") {
    def(c.disorder, std::string("combined"));
    def(c.alpha, 0.5);
    def(c.steps, 10000L);
    def(c.realizations, 100);
  } else if (cmd == "fig11-15-twobody") {
    def(c.length, 10);
    def(c.phi_int, 0.1 * pi);
    def(c.steps, 100L);
    def(c.flux_grid, std::string("0:1:21"));
  } else if (cmd == "ensemble") {
    def(c.disorder, std::string("none"));
    def(c.steps, 1000L);
    def(c.realizations, 100);
  }
  def(c.theta, pi / 4);
  def(c.disorder, std::string("none"));
  def(c.dtheta, 0.0);
  def(c.ps, 0.5);
  def(c.pt, 0.5);
  def(c.alpha, 0.0);
  def(c.steps, 100L);
  def(c.realizations, 100);
  def(c.length, 0);
  def(c.measure_period, 5);
  def(c.measure_count, 1000);
  def(c.phi_int, 0.0);
  def(c.flux_grid, std::string("0:1:201"));
  def(c.k_points, 64);
  validate_config(c);
  return warnings;
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(to_double("list", trim(item)));
  if (out.empty()) throw ConfigError("empty list");
  return out;
}

FluxGrid parse_flux_grid(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ':')) parts.push_back(trim(item));
  if (parts.size() != 3) throw ConfigError("flux grid must read start:stop:count");
  FluxGrid g{to_double("start", parts[0]), to_double("stop", parts[1]),
             to_int<int>("count", parts[2])};
  if (g.count < 1) throw ConfigError("flux grid count must be >= 1");
  return g;
}

std::vector<double> FluxGrid::values() const {
  std::vector<double> v(count);
  for (int i = 0; i < count; ++i) v[i] = count == 1 ? start : start + (stop - start) * i / (count - 1);
  return v;
}

}  // namespace dcqw
