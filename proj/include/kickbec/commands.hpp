#ifndef KICKBEC_COMMANDS_HPP
#define KICKBEC_COMMANDS_HPP

#include <string>
#include <vector>

#include "kickbec/config.hpp"
#include "kickbec/core.hpp"

namespace kickbec {

enum ExitCode { kExitOk = 0, kExitInvalidConfig = 1, kExitCutoff = 2 };

// 17 significant digits, round-trip exact.
std::string format_number(double v);

// Each command validates the config, writes its CSV files into out_dir
// (created if missing) and returns the process exit code.  ConfigError
// propagates to the caller.
int cmd_simulate(const RunConfig& config, const std::string& out_dir);
int cmd_scan(const RunConfig& config, const std::string& out_dir);
int cmd_predict(const RunConfig& config, const std::string& out_dir);

// Resonance table for the config: single-mode predictions over sweep.param
// and two-mode predictions when the range is in g.  Sorted by value.
std::vector<ResonancePrediction> predictions_for(const RunConfig& config);

}  // namespace kickbec

#endif
