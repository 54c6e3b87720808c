#ifndef KICKBEC_CONFIG_HPP
#define KICKBEC_CONFIG_HPP

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "kickbec/core.hpp"
#include "kickbec/gpe.hpp"
#include "kickbec/scan.hpp"

namespace kickbec {

// Parse or validation failure; line is 0 when the problem is not tied to a
// single line (a missing key, a cross-field constraint).
class ConfigError : public std::runtime_error {
 public:
  ConfigError(int line, std::string key, const std::string& message);
  int line() const { return line_; }
  const std::string& key() const { return key_; }

 private:
  int line_;
  std::string key_;
};

enum class PredictModes { Single, TwoMode, Both };

struct RunConfig {
  PhysicalParams params;
  int n_kicks = 200;
  double dt = 0.0;  // 0: T / 1000
  double gap_dt = 0.0;
  int record_stride = 1;
  int l_max = 32;
  int n_points = 256;
  Engine engine = Engine::FullBogoliubov;
  Observable observable = Observable::NexFinal;

  bool has_sweep = false;
  ParamRange sweep;
  int sweep_samples = 151;
  int sweep_refine = 0;
  bool condensate_only = false;  // full engine without quasiparticle modes

  PredictModes predict_modes = PredictModes::Both;
  int predict_l_max = 3;
  int predict_order_max = 2;
  std::vector<std::pair<int, int>> predict_pairs;  // empty: all l < l' <= predict_l_max

  std::string command;  // simulate|scan|predict, used by recipes
  std::string out_dir = ".";
  int workers = 1;

  // Canonical key=value listing (sorted, full precision); the hash is over it.
  std::string canonical() const;
  std::string hash() const;  // 16 hex digits, FNV-1a 64

  EvolutionConfig evolution() const;
  SweepSpec sweep_spec() const;
  // Cross-field checks; throws ConfigError.
  void validate() const;
  void validate_sweep() const;
};

// Flat key = value text.  '#' and ';' start comments, blank lines are
// skipped, and a "[section]" header prefixes the following keys with
// "section.".  Unknown keys, duplicate keys and malformed values are errors
// carrying the line number.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

// Applies one key = value setting (also used for command-line overrides).
void apply_setting(RunConfig& config, const std::string& key, const std::string& value, int line);

}  // namespace kickbec

#endif
