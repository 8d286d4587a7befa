#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace dcqw {

// Flat key = value configuration with dotted namespaces. Optional fields
// left unset take the defaults of the chosen command.
struct RunConfig {
  std::string command = "spectrum";
  std::uint64_t seed = 1;
  int workers = 0;  // 0: OpenMP default
  std::string out;  // empty: stdout
  std::string format = "csv";

  std::optional<int> length;
  std::string boundary = "periodic";
  std::optional<double> flux;
  std::string hub = "grover";
  std::optional<double> theta;  // rim angle, pi/4 unless the command says otherwise
  double phi = 0.0, omega = 0.0, beta = 0.0;

  std::optional<std::string> disorder;
  std::optional<double> ps, pt, theta0, dtheta, alpha;

  std::optional<long> steps;
  std::optional<int> realizations;
  std::optional<int> measure_period;
  std::optional<int> measure_count;
  std::optional<double> phi_int;
  std::optional<std::string> flux_grid;  // start:stop:count
  std::optional<int> k_points;
  std::optional<std::string> scan;  // comma-separated values of the scanned parameter

  bool operator==(const RunConfig&) const = default;
};

// Every accepted key, in serialization order.
const std::vector<std::string>& config_keys();

// Sets one key from text; throws ConfigError naming the key.
void set_config_value(RunConfig& c, const std::string& key, const std::string& value);
// Value of a key as text, nullopt if unset.
std::optional<std::string> get_config_value(const RunConfig& c, const std::string& key);

RunConfig parse_config_text(const std::string& text, RunConfig base = {});
RunConfig parse_config_file(const std::string& path, RunConfig base = {});
std::string serialize_config(const RunConfig& c);

// Range checks that do not depend on the command.
void validate_config(const RunConfig& c);

// Fills unset fields with the command's defaults. Returns warnings, e.g. an
// explicit flux that differs from the critical flux of the chosen hub coin.
std::vector<std::string> resolve_defaults(RunConfig& c);

const std::vector<std::string>& command_names();

std::vector<double> parse_list(const std::string& text);
struct FluxGrid {
  double start = 0.0, stop = 1.0;
  int count = 201;
  std::vector<double> values() const;
};
FluxGrid parse_flux_grid(const std::string& text);

std::string format_double(double x);

}  // namespace dcqw
