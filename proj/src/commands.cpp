#include "kickbec/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "kickbec/bogoliubov.hpp"
#include "kickbec/gpe.hpp"
#include "kickbec/perturbative.hpp"
#include "kickbec/scan.hpp"

namespace kickbec {

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

std::ofstream open_csv(const std::string& dir, const std::string& name, const RunConfig& config) {
  std::filesystem::create_directories(dir);
  const auto path = std::filesystem::path(dir) / name;
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << "# config-hash: " << config.hash() << "\n";
  return out;
}

struct TimeRow {
  int kick;
  double time, energy, nex, a1_sq, a2_sq;
  bool cutoff;
};

void write_timeseries(const std::string& dir, const RunConfig& config, const std::vector<TimeRow>& rows,
                      double nex0) {
  auto out = open_csv(dir, "timeseries.csv", config);
  out << "kick,time,energy,nex,nex_minus_initial,a1_sq,a2_sq,cutoff_flag\n";
  for (const auto& r : rows) {
    out << r.kick << ',' << format_number(r.time) << ',' << format_number(r.energy) << ','
        << format_number(r.nex) << ',' << format_number(r.nex - nex0) << ',' << format_number(r.a1_sq)
        << ',' << format_number(r.a2_sq) << ',' << (r.cutoff ? 1 : 0) << '\n';
  }
}

TimeRow initial_row(const CondensateField& field, const PhysicalParams& p, double nex0) {
  SplitStepEngine probe(field.grid, p);
  probe.load(field);
  const auto rec = make_energy_record(0, probe);
  return {0, 0.0, rec.energy, nex0, rec.a1_sq, rec.a2_sq, false};
}

int simulate_full(const RunConfig& config, const std::string& dir) {
  const PhysicalParams& p = config.params;
  const RingGrid grid(config.n_points);
  const auto field = init_homogeneous(grid);
  const auto cfg = config.evolution();
  std::vector<TimeRow> rows;
  const double nan = std::nan("");

  if (config.condensate_only) {
    const auto [final_field, records] = evolve_kicked(field, p, cfg);
    rows.push_back(initial_row(field, p, nan));
    for (const auto& r : records) rows.push_back({r.kick, r.time, r.energy, nan, r.a1_sq, r.a2_sq, false});
    write_timeseries(dir, config, rows, nan);
    return kExitOk;
  }

  const auto modes = init_modes(p, grid, config.l_max, ModeLayout::Mirrored, main_substep(p, cfg, grid));
  const auto run = evolve_coupled(field, modes, p, cfg);
  const double nex0 = run.nex.nex0;
  rows.push_back(initial_row(field, p, nex0));
  for (const auto& r : run.energy) {
    const double nex = run.nex.samples[static_cast<std::size_t>(r.kick - 1)].nex;
    rows.push_back({r.kick, r.time, r.energy, nex, r.a1_sq, r.a2_sq, run.nex.cutoff_kick == r.kick});
  }
  // the cutoff kick is always written, whatever the stride
  if (run.nex.cutoff_kick && (rows.size() == 1 || rows.back().kick != *run.nex.cutoff_kick)) {
    const int k = *run.nex.cutoff_kick;
    const auto& s = run.nex.samples[static_cast<std::size_t>(k - 1)];
    SplitStepEngine probe(grid, p);
    probe.load(run.field);
    const auto rec = make_energy_record(k, probe);
    rows.push_back({k, s.time, rec.energy, s.nex, rec.a1_sq, rec.a2_sq, true});
  }
  write_timeseries(dir, config, rows, nex0);
  return run.nex.exceeded_cutoff ? kExitCutoff : kExitOk;
}

int simulate_perturbative(const RunConfig& config, const std::string& dir) {
  const PhysicalParams& p = config.params;
  std::vector<TimeRow> rows;
  PerturbationState zero = PerturbationState::zero(config.l_max);
  rows.push_back({0, 0.0, perturbative_energy(zero, p), 0.0, 0.0, 0.0, false});
  auto push = [&](int N, const PerturbationState& s) {
    if (N % config.record_stride != 0) return;
    rows.push_back({N, N * p.T, perturbative_energy(s, p), s.excited_fraction(), std::norm(s.a[1]),
                    s.l_max >= 2 ? std::norm(s.a[2]) : 0.0, false});
  };
  if (config.engine == Engine::PerturbativeMap) {
    const ModeSpectrum spectrum(p, config.l_max);
    const auto map = one_period_map(p, spectrum, config.l_max);
    PerturbationState s = zero;
    for (int N = 1; N <= config.n_kicks; ++N) {
      s = iterate_map(map, s, 1, p).final_state;
      push(N, s);
    }
  } else {
    const int L = p.kick_kind == KickKind::Single ? config.l_max : std::min(2, config.l_max);
    const ModeSpectrum spectrum(p, L);
    PerturbationState s = PerturbationState::zero(L);
    for (int N = 1; N <= config.n_kicks; ++N) {
      for (int l = 1; l <= L; ++l) s.a[static_cast<std::size_t>(l)] = closed_form_amplitude(l, N, p, spectrum).a;
      push(N, s);
    }
  }
  write_timeseries(dir, config, rows, 0.0);
  return kExitOk;
}

}  // namespace

int cmd_simulate(const RunConfig& config, const std::string& out_dir) {
  config.validate();
  if (config.engine == Engine::FullBogoliubov) return simulate_full(config, out_dir);
  return simulate_perturbative(config, out_dir);
}

int cmd_scan(const RunConfig& config, const std::string& out_dir) {
  config.validate_sweep();
  const auto rows = run_sweep(config.sweep_spec());
  {
    auto out = open_csv(out_dir, "sweep.csv", config);
    out << "param,observable,classification,rate,cutoff_kick\n";
    for (const auto& r : rows) {
      out << format_number(r.param) << ',' << format_number(r.observable) << ','
          << (r.error.empty() ? to_string(r.classification) : "error") << ',' << format_number(r.rate) << ','
          << (r.cutoff_kick ? std::to_string(*r.cutoff_kick) : "") << '\n';
    }
  }
  auto out = open_csv(out_dir, "windows.csv", config);
  out << "lo,hi,center\n";
  for (const auto& [lo, hi] : extract_windows(rows))
    out << format_number(lo) << ',' << format_number(hi) << ',' << format_number(0.5 * (lo + hi)) << '\n';
  return kExitOk;
}

std::vector<ResonancePrediction> predictions_for(const RunConfig& config) {
  if (!config.has_sweep) throw ConfigError(0, "sweep.param", "predict needs sweep.param, sweep.lo and sweep.hi");
  if (!(config.sweep.lo < config.sweep.hi))
    throw ConfigError(0, "sweep.lo", "empty range: need sweep.lo < sweep.hi");
  if (config.predict_l_max < 1) throw ConfigError(0, "predict.l_max", "must be >= 1");
  if (config.predict_order_max < 1) throw ConfigError(0, "predict.order_max", "must be >= 1");
  std::vector<ResonancePrediction> out;
  if (config.predict_modes != PredictModes::TwoMode)
    out = predict_single_mode_resonances(config.params, config.predict_l_max, config.predict_order_max,
                                         config.sweep);
  if (config.predict_modes != PredictModes::Single) {
    if (config.sweep.param != SweptParam::g) {
      if (config.predict_modes == PredictModes::TwoMode)
        throw ConfigError(0, "sweep.param", "two-mode predictions need a range in g");
    } else {
      auto pairs = config.predict_pairs;
      if (pairs.empty())
        for (int l = 1; l <= config.predict_l_max; ++l)
          for (int lp = l + 1; lp <= config.predict_l_max; ++lp) pairs.emplace_back(l, lp);
      const auto two = predict_two_mode_resonances(config.params, pairs, config.predict_order_max, config.sweep);
      out.insert(out.end(), two.begin(), two.end());
    }
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const ResonancePrediction& a, const ResonancePrediction& b) { return a.value < b.value; });
  return out;
}

int cmd_predict(const RunConfig& config, const std::string& out_dir) {
  try {
    config.params.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(0, "", e.what());
  }
  const auto rows = predictions_for(config);
  auto out = open_csv(out_dir, "resonances.csv", config);
  out << "kind,l,lprime,n_or_M,value\n";
  for (const auto& r : rows)
    out << to_string(r.kind) << ',' << r.l << ',' << r.lprime << ',' << r.order << ',' << format_number(r.value)
        << '\n';
  return kExitOk;
}

}  // namespace kickbec
