#include "kickbec/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace kickbec {

ConfigError::ConfigError(int line, std::string key, const std::string& message)
    : std::runtime_error((line > 0 ? "line " + std::to_string(line) + ": " : std::string()) +
                         (key.empty() ? std::string() : "key '" + key + "': ") + message),
      line_(line),
      key_(std::move(key)) {}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool parse_plain(const std::string& s, double& out) {
  const char* first = s.data();
  const char* last = s.data() + s.size();
  auto [p, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && p == last;
}

// A float, optionally times pi ("2pi", "2*pi", "pi"), optionally over
// another such factor ("1/25").
bool parse_factor(std::string s, double& out) {
  s = trim(s);
  if (s.size() >= 2 && s.compare(s.size() - 2, 2, "pi") == 0) {
    std::string c = trim(s.substr(0, s.size() - 2));
    if (!c.empty() && c.back() == '*') c = trim(c.substr(0, c.size() - 1));
    double coeff = 1.0;
    if (!c.empty() && !parse_plain(c, coeff)) return false;
    out = coeff * kPi;
    return true;
  }
  return parse_plain(s, out);
}

double parse_double(const std::string& key, const std::string& value, int line) {
  double out = 0.0;
  const auto slash = value.find('/');
  bool ok;
  if (slash == std::string::npos) {
    ok = parse_factor(value, out);
  } else {
    double num = 0.0, den = 0.0;
    ok = parse_factor(value.substr(0, slash), num) && parse_factor(value.substr(slash + 1), den) && den != 0.0;
    out = ok ? num / den : 0.0;
  }
  if (!ok || !std::isfinite(out)) throw ConfigError(line, key, "expected a number, got '" + value + "'");
  return out;
}

int parse_int(const std::string& key, const std::string& value, int line) {
  int out = 0;
  auto [p, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || p != value.data() + value.size())
    throw ConfigError(line, key, "expected an integer, got '" + value + "'");
  return out;
}

bool parse_bool(const std::string& key, const std::string& value, int line) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw ConfigError(line, key, "expected true|false, got '" + value + "'");
}

std::vector<std::pair<int, int>> parse_pairs(const std::string& key, const std::string& value, int line) {
  std::vector<std::pair<int, int>> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    const auto dash = item.find('-');
    if (dash == std::string::npos) throw ConfigError(line, key, "pairs look like '1-2, 2-3'");
    const int a = parse_int(key, trim(item.substr(0, dash)), line);
    const int b = parse_int(key, trim(item.substr(dash + 1)), line);
    if (a < 1 || b <= a) throw ConfigError(line, key, "pairs need 1 <= l < l'");
    out.emplace_back(a, b);
  }
  if (out.empty()) throw ConfigError(line, key, "empty pair list");
  return out;
}

// 17 significant digits
std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

template <typename F>
auto wrap(const std::string& key, int line, F&& f) {
  try {
    return f();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(line, key, e.what());
  }
}

}  // namespace

void apply_setting(RunConfig& c, const std::string& key, const std::string& value, int line) {
  auto d = [&] { return parse_double(key, value, line); };
  auto i = [&] { return parse_int(key, value, line); };
  if (key == "g") c.params.g = d();
  else if (key == "kbar") c.params.kbar = d();
  else if (key == "K") c.params.K = d();
  else if (key == "T") c.params.T = d();
  else if (key == "epsilon") c.params.epsilon = d();
  else if (key == "kick_kind") c.params.kick_kind = wrap(key, line, [&] { return kick_kind_from_string(value); });
  else if (key == "n_kicks") c.n_kicks = i();
  else if (key == "dt") c.dt = d();
  else if (key == "gap_dt") c.gap_dt = d();
  else if (key == "record_stride") c.record_stride = i();
  else if (key == "l_max") c.l_max = i();
  else if (key == "n_points") c.n_points = i();
  else if (key == "engine") c.engine = wrap(key, line, [&] { return engine_from_string(value); });
  else if (key == "observable") c.observable = wrap(key, line, [&] { return observable_from_string(value); });
  else if (key == "sweep.param") {
    c.sweep.param = wrap(key, line, [&] { return swept_param_from_string(value); });
    c.has_sweep = true;
  } else if (key == "sweep.lo") {
    c.sweep.lo = d();
    c.has_sweep = true;
  } else if (key == "sweep.hi") {
    c.sweep.hi = d();
    c.has_sweep = true;
  } else if (key == "sweep.samples") c.sweep_samples = i();
  else if (key == "sweep.refine") c.sweep_refine = i();
  else if (key == "condensate_only") c.condensate_only = parse_bool(key, value, line);
  else if (key == "predict.modes") {
    if (value == "single") c.predict_modes = PredictModes::Single;
    else if (value == "two_mode") c.predict_modes = PredictModes::TwoMode;
    else if (value == "both") c.predict_modes = PredictModes::Both;
    else throw ConfigError(line, key, "expected single|two_mode|both, got '" + value + "'");
  } else if (key == "predict.l_max") c.predict_l_max = i();
  else if (key == "predict.order_max") c.predict_order_max = i();
  else if (key == "predict.pairs") c.predict_pairs = parse_pairs(key, value, line);
  else if (key == "command") {
    if (value != "simulate" && value != "scan" && value != "predict")
      throw ConfigError(line, key, "expected simulate|scan|predict, got '" + value + "'");
    c.command = value;
  } else if (key == "out") c.out_dir = value;
  else if (key == "workers") c.workers = i();
  else throw ConfigError(line, key, "unknown key");
}

RunConfig parse_config(const std::string& text) {
  RunConfig c;
  std::set<std::string> seen;
  std::istringstream in(text);
  std::string raw, section;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::string s = raw;
    const auto hash = s.find_first_of("#;");
    if (hash != std::string::npos) s = s.substr(0, hash);
    s = trim(s);
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']') throw ConfigError(line, "", "malformed section header '" + s + "'");
      section = trim(s.substr(1, s.size() - 2));
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw ConfigError(line, "", "expected 'key = value', got '" + s + "'");
    std::string key = trim(s.substr(0, eq));
    const std::string value = trim(s.substr(eq + 1));
    if (key.empty()) throw ConfigError(line, "", "missing key");
    if (!section.empty()) key = section + "." + key;
    if (value.empty()) throw ConfigError(line, key, "missing value");
    if (!seen.insert(key).second) throw ConfigError(line, key, "duplicate key");
    apply_setting(c, key, value, line);
  }
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError(0, "", "cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str());
}

std::string RunConfig::canonical() const {
  std::map<std::string, std::string> kv;
  kv["g"] = num(params.g);
  kv["kbar"] = num(params.kbar);
  kv["K"] = num(params.K);
  kv["T"] = num(params.T);
  kv["epsilon"] = num(params.epsilon);
  kv["kick_kind"] = to_string(params.kick_kind);
  kv["n_kicks"] = std::to_string(n_kicks);
  kv["dt"] = num(evolution().dt);
  kv["gap_dt"] = num(gap_dt);
  kv["record_stride"] = std::to_string(record_stride);
  kv["l_max"] = std::to_string(l_max);
  kv["n_points"] = std::to_string(n_points);
  kv["engine"] = to_string(engine);
  kv["condensate_only"] = condensate_only ? "true" : "false";
  kv["observable"] = to_string(observable);
  if (has_sweep) {
    kv["sweep.param"] = to_string(sweep.param);
    kv["sweep.lo"] = num(sweep.lo);
    kv["sweep.hi"] = num(sweep.hi);
    kv["sweep.samples"] = std::to_string(sweep_samples);
    kv["sweep.refine"] = std::to_string(sweep_refine);
  }
  kv["predict.modes"] = predict_modes == PredictModes::Single    ? "single"
                        : predict_modes == PredictModes::TwoMode ? "two_mode"
                                                                 : "both";
  kv["predict.l_max"] = std::to_string(predict_l_max);
  kv["predict.order_max"] = std::to_string(predict_order_max);
  std::string pairs;
  for (const auto& [a, b] : predict_pairs) pairs += (pairs.empty() ? "" : ",") + std::to_string(a) + "-" + std::to_string(b);
  kv["predict.pairs"] = pairs;
  std::string out;
  for (const auto& [k, v] : kv) out += k + "=" + v + "\n";
  return out;
}

std::string RunConfig::hash() const {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : canonical()) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

EvolutionConfig RunConfig::evolution() const {
  EvolutionConfig e = EvolutionConfig::defaults_for(params, n_kicks);
  if (dt > 0.0) e.dt = dt;
  e.gap_dt = gap_dt;
  e.record_stride = record_stride;
  return e;
}

SweepSpec RunConfig::sweep_spec() const {
  SweepSpec s;
  s.range = sweep;
  s.n_samples = sweep_samples;
  s.fixed = params;
  s.engine = engine;
  s.n_kicks = n_kicks;
  s.observable = observable;
  s.n_points = n_points;
  s.l_max = l_max;
  s.steps_per_period = dt > 0.0 ? params.T / dt : 1000.0;
  s.condensate_only = condensate_only;
  s.refine_edges = sweep_refine;
  s.workers = workers;
  return s;
}

void RunConfig::validate() const {
  wrap("", 0, [&] {
    params.validate();
    return 0;
  });
  if (n_kicks < 1) throw ConfigError(0, "n_kicks", "must be >= 1");
  if (l_max < 1) throw ConfigError(0, "l_max", "must be >= 1");
  if (workers < 1) throw ConfigError(0, "workers", "must be >= 1");
  wrap("n_points", 0, [&] {
    RingGrid(n_points).require_resolves(l_max);
    return 0;
  });
  wrap("dt", 0, [&] {
    evolution().validate(params);
    return 0;
  });
}

void RunConfig::validate_sweep() const {
  validate();
  if (!has_sweep) throw ConfigError(0, "sweep.param", "scan needs sweep.param, sweep.lo and sweep.hi");
  if (!(sweep.lo < sweep.hi)) throw ConfigError(0, "sweep.lo", "empty range: need sweep.lo < sweep.hi");
  if (sweep_samples < 2) throw ConfigError(0, "sweep.samples", "must be >= 2");
  if (sweep_refine < 0) throw ConfigError(0, "sweep.refine", "must be >= 0");
  wrap("sweep", 0, [&] {
    sweep_spec().validate();
    return 0;
  });
}

}  // namespace kickbec
