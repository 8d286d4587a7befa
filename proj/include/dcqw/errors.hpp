#pragma once

#include <stdexcept>
#include <string>

namespace dcqw {

// Each family maps to one CLI exit code (see cli-io).
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ResourceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IndexError : std::out_of_range {
  using std::out_of_range::out_of_range;
};

}  // namespace dcqw
