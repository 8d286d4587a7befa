#pragma once

#include "dcqw/config.hpp"
#include "dcqw/disorder.hpp"
#include "dcqw/export.hpp"

namespace dcqw {

HubCoin hub_from_name(const std::string& name);
DisorderKind disorder_from_name(const std::string& name);

// Resolves the command's defaults and runs it. The resolved configuration
// is written back into `cfg`; warnings land in the report.
Report run_command(RunConfig& cfg);

}  // namespace dcqw
