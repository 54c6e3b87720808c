#include "kickbec/scan.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <thread>

#include "kickbec/gpe.hpp"
#include "kickbec/perturbative.hpp"

namespace kickbec {

std::string to_string(Engine e) {
  switch (e) {
    case Engine::FullBogoliubov: return "full";
    case Engine::PerturbativeMap: return "map";
    case Engine::ClosedForm: return "closed";
  }
  return "?";
}

std::string to_string(Observable o) {
  switch (o) {
    case Observable::NexFinal: return "nex_final";
    case Observable::AvgEnergy: return "avg_energy";
    case Observable::GrowthRate: return "growth_rate";
  }
  return "?";
}

std::string to_string(Classification c) {
  switch (c) {
    case Classification::Stable: return "stable";
    case Classification::NearResonant: return "near_resonant";
    case Classification::Unstable: return "unstable";
  }
  return "?";
}

Engine engine_from_string(const std::string& name) {
  if (name == "full" || name == "FullBogoliubov") return Engine::FullBogoliubov;
  if (name == "map" || name == "PerturbativeMap") return Engine::PerturbativeMap;
  if (name == "closed" || name == "ClosedForm") return Engine::ClosedForm;
  throw std::invalid_argument("unknown engine '" + name + "' (full|map|closed)");
}

Observable observable_from_string(const std::string& name) {
  if (name == "nex_final" || name == "NexFinal") return Observable::NexFinal;
  if (name == "avg_energy" || name == "AvgEnergy") return Observable::AvgEnergy;
  if (name == "growth_rate" || name == "GrowthRate") return Observable::GrowthRate;
  throw std::invalid_argument("unknown observable '" + name + "' (nex_final|avg_energy|growth_rate)");
}

void SweepSpec::validate() const {
  if (!(range.lo < range.hi)) throw std::invalid_argument("sweep range: lo must be < hi");
  if (n_samples < 2) throw std::invalid_argument("sweep samples must be >= 2");
  if (n_kicks < 1) throw std::invalid_argument("n_kicks must be >= 1");
  if (l_max < 1) throw std::invalid_argument("l_max must be >= 1");
  if (!(steps_per_period >= 100.0)) throw std::invalid_argument("steps per period must be >= 100");
  if (refine_edges < 0) throw std::invalid_argument("refine_edges must be >= 0");
  if (workers < 1) throw std::invalid_argument("workers must be >= 1");
  params_at(range.lo).validate();
  params_at(range.hi).validate();
  if (engine == Engine::FullBogoliubov) RingGrid(n_points).require_resolves(l_max);
}

double SweepSpec::value_at(int i) const {
  if (i == n_samples - 1) return range.hi;
  return range.lo + (range.hi - range.lo) * i / (n_samples - 1);
}

PhysicalParams SweepSpec::params_at(double value) const {
  PhysicalParams p = fixed;
  switch (range.param) {
    case SweptParam::T: p.T = value; break;
    case SweptParam::g: p.g = value; break;
    case SweptParam::K: p.K = value; break;
  }
  return p;
}

namespace {

double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxx > 0.0 ? sxy / sxx : 0.0;
}

// angular frequency per kick of the strongest non-zero DFT line
double dominant_frequency(const std::vector<double>& e) {
  const int n = static_cast<int>(e.size());
  const double mean = std::accumulate(e.begin(), e.end(), 0.0) / n;
  double best = -1.0, best_w = 0.0;
  for (int j = 1; j <= n / 2; ++j) {
    const double w = kTwoPi * j / n;
    double re = 0.0, im = 0.0;
    for (int i = 0; i < n; ++i) {
      re += (e[static_cast<std::size_t>(i)] - mean) * std::cos(w * i);
      im -= (e[static_cast<std::size_t>(i)] - mean) * std::sin(w * i);
    }
    const double p = re * re + im * im;
    if (p > best) {
      best = p;
      best_w = w;
    }
  }
  return best_w;
}

}  // namespace

std::pair<Classification, double> classify_growth(const NexSeries& series) {
  const auto& s = series.samples;
  const int n = static_cast<int>(s.size());
  if (!series.exceeded_cutoff && n < 20)
    throw std::invalid_argument("classify_growth: need at least 20 samples, got " + std::to_string(n));
  const double floor = std::max(series.nex0, 1e-12);
  auto logx = [&](const NexSample& q) {
    return std::log(std::max(q.nex - series.nex0, 0.0) + floor);
  };

  double rate = 0.0;
  std::vector<double> y;
  if (n >= 2) {
    std::vector<double> x;
    for (int i = n / 2; i < n; ++i) {
      x.push_back(s[static_cast<std::size_t>(i)].kick);
      y.push_back(logx(s[static_cast<std::size_t>(i)]));
    }
    rate = fit_slope(x, y);
  } else if (n == 1) {
    rate = (logx(s[0]) - std::log(floor)) / std::max(s[0].kick, 1);
  }
  if (series.exceeded_cutoff) return {Classification::Unstable, rate};

  // envelope: maxima of four consecutive blocks of the last half
  constexpr int kBlocks = 4;
  const int len = static_cast<int>(y.size());
  bool monotone = len >= kBlocks;
  double prev = -1e300;
  for (int b = 0; b < kBlocks && monotone; ++b) {
    const auto lo = y.begin() + b * len / kBlocks;
    const auto hi = y.begin() + (b + 1) * len / kBlocks;
    const double m = *std::max_element(lo, hi);
    if (!(m > prev)) monotone = false;
    prev = m;
  }
  if (rate > kRateThreshold && monotone) return {Classification::Unstable, rate};

  std::vector<double> excursion(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) excursion[static_cast<std::size_t>(i)] = s[static_cast<std::size_t>(i)].nex - series.nex0;
  const auto [mn, mx] = std::minmax_element(excursion.begin(), excursion.end());
  const double peak_to_peak = *mx - *mn;
  if (peak_to_peak > 10.0 * series.nex0 && peak_to_peak > 0.0 &&
      dominant_frequency(excursion) < kPi / 4.0)
    return {Classification::NearResonant, rate};
  return {Classification::Stable, rate};
}

namespace {

NexSeries series_from(const std::vector<double>& values, double initial) {
  NexSeries ns;
  ns.nex0 = initial;
  for (std::size_t i = 0; i < values.size(); ++i)
    ns.samples.push_back({static_cast<int>(i) + 1, 0.0, values[i]});
  return ns;
}

double mean(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

// bounded-series classification for engines without exponential growth
Classification bounded_class(const NexSeries& ns) {
  const auto c = classify_growth(ns).first;
  return c == Classification::Unstable ? Classification::NearResonant : c;
}

SweepRow full_point(const SweepSpec& spec, const PhysicalParams& p, double value) {
  SweepRow row;
  row.param = value;
  const RingGrid grid(spec.n_points);
  auto cfg = EvolutionConfig::defaults_for(p, spec.n_kicks);
  cfg.dt = p.T / spec.steps_per_period;
  const auto field = init_homogeneous(grid);

  if (spec.condensate_only) {
    const auto [final_field, records] = evolve_kicked(field, p, cfg);
    std::vector<double> e;
    for (const auto& r : records) e.push_back(r.energy);
    const double e0 = condensate_energy(field, p);
    const auto ns = series_from(e, e0);
    auto [cls, rate] = classify_growth(ns);
    row.classification = cls;
    row.rate = rate;
    row.observable = spec.observable == Observable::AvgEnergy ? mean(e)
                     : spec.observable == Observable::GrowthRate ? rate
                                                                 : e.back() - e0;
    return row;
  }

  const auto modes = init_modes(p, grid, spec.l_max, ModeLayout::Mirrored, main_substep(p, cfg, grid));
  const auto run = evolve_coupled(field, modes, p, cfg);
  auto [cls, rate] = classify_growth(run.nex);
  row.classification = cls;
  row.rate = rate;
  row.cutoff_kick = run.nex.cutoff_kick;
  switch (spec.observable) {
    case Observable::NexFinal: row.observable = run.nex.samples.back().nex; break;
    case Observable::GrowthRate: row.observable = rate; break;
    case Observable::AvgEnergy: {
      std::vector<double> e;
      for (const auto& r : run.energy) e.push_back(r.energy);
      row.observable = mean(e);
      break;
    }
  }
  return row;
}

SweepRow map_point(const SweepSpec& spec, const PhysicalParams& p, double value) {
  SweepRow row;
  row.param = value;
  const ModeSpectrum spectrum(p, spec.l_max);
  const auto map = one_period_map(p, spectrum, spec.l_max);
  const double rate = floquet_growth_rate(map);
  const auto traj = iterate_map(map, PerturbationState::zero(spec.l_max), spec.n_kicks, p);
  // per-kick samples carry |a_1|^2 and |a_2|^2 only; they stand in for the
  // excited fraction when classifying
  std::vector<double> frac, e;
  for (const auto& q : traj.samples) {
    e.push_back(q.energy);
    frac.push_back(2.0 * (q.a1_sq + q.a2_sq));
  }
  row.rate = rate;
  if (rate > kRateThreshold) {
    row.classification = Classification::Unstable;
  } else {
    row.classification = spec.n_kicks >= 20 ? bounded_class(series_from(frac, 0.0)) : Classification::Stable;
  }
  switch (spec.observable) {
    case Observable::NexFinal: row.observable = traj.final_state.excited_fraction(); break;
    case Observable::GrowthRate: row.observable = rate; break;
    case Observable::AvgEnergy: row.observable = mean(e); break;
  }
  return row;
}

SweepRow closed_point(const SweepSpec& spec, const PhysicalParams& p, double value) {
  SweepRow row;
  row.param = value;
  const int L = p.kick_kind == KickKind::Single ? spec.l_max : std::min(2, spec.l_max);
  const ModeSpectrum spectrum(p, L);
  std::vector<double> frac, e;
  PerturbationState s = PerturbationState::zero(L);
  for (int N = 1; N <= spec.n_kicks; ++N) {
    for (int l = 1; l <= L; ++l) s.a[static_cast<std::size_t>(l)] = closed_form_amplitude(l, N, p, spectrum).a;
    frac.push_back(s.excited_fraction());
    e.push_back(perturbative_energy(s, p));
  }
  row.rate = 0.0;
  row.classification = spec.n_kicks >= 20 ? bounded_class(series_from(frac, 0.0)) : Classification::Stable;
  switch (spec.observable) {
    case Observable::NexFinal: row.observable = frac.back(); break;
    case Observable::GrowthRate: row.observable = 0.0; break;
    case Observable::AvgEnergy: row.observable = mean(e); break;
  }
  return row;
}

// Runs task(i) for i in [0, count) on up to `workers` threads; each result
// lands in its own slot so assembly order never depends on scheduling.
template <typename R>
std::vector<R> parallel_map(int count, int workers, const std::function<R(int)>& task) {
  std::vector<R> out(static_cast<std::size_t>(count));
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int i = next++; i < count; i = next++) out[static_cast<std::size_t>(i)] = task(i);
  };
  const int n_threads = std::max(1, std::min(workers, count));
  if (n_threads == 1) {
    worker();
    return out;
  }
  std::vector<std::thread> pool;
  for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  return out;
}

bool unstable(const SweepRow& r) { return r.error.empty() && r.classification == Classification::Unstable; }

}  // namespace

SweepRow run_point(const SweepSpec& spec, double value) {
  try {
    const PhysicalParams p = spec.params_at(value);
    p.validate();
    switch (spec.engine) {
      case Engine::FullBogoliubov: return full_point(spec, p, value);
      case Engine::PerturbativeMap: return map_point(spec, p, value);
      case Engine::ClosedForm: return closed_point(spec, p, value);
    }
  } catch (const std::exception& ex) {
    SweepRow row;
    row.param = value;
    row.observable = std::nan("");
    row.rate = std::nan("");
    row.error = ex.what();
    return row;
  }
  return {};
}

std::vector<SweepRow> run_sweep(const SweepSpec& spec) {
  spec.validate();
  auto rows = parallel_map<SweepRow>(spec.n_samples, spec.workers,
                                     [&](int i) { return run_point(spec, spec.value_at(i)); });
  if (spec.refine_edges > 0) {
    std::vector<std::pair<SweepRow, SweepRow>> edges;
    for (std::size_t i = 0; i + 1 < rows.size(); ++i)
      if (unstable(rows[i]) != unstable(rows[i + 1])) edges.emplace_back(rows[i], rows[i + 1]);
    auto refined = parallel_map<std::vector<SweepRow>>(
        static_cast<int>(edges.size()), spec.workers, [&](int e) {
          auto [a, b] = edges[static_cast<std::size_t>(e)];
          std::vector<SweepRow> added;
          for (int step = 0; step < spec.refine_edges; ++step) {
            SweepRow mid = run_point(spec, 0.5 * (a.param + b.param));
            added.push_back(mid);
            if (unstable(mid) == unstable(a)) a = mid;
            else b = mid;
          }
          return added;
        });
    for (auto& chain : refined) rows.insert(rows.end(), chain.begin(), chain.end());
    std::sort(rows.begin(), rows.end(), [](const SweepRow& x, const SweepRow& y) { return x.param < y.param; });
  }
  return rows;
}

std::vector<std::pair<double, double>> extract_windows(const std::vector<SweepRow>& rows) {
  std::vector<std::pair<double, double>> windows;
  std::size_t i = 0;
  while (i < rows.size()) {
    if (!unstable(rows[i])) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j + 1 < rows.size() && unstable(rows[j + 1])) ++j;
    // a single stable row between two runs does not split a window
    if (!windows.empty() && i >= 2 && unstable(rows[i - 2]) && windows.back().second == rows[i - 2].param)
      windows.back().second = rows[j].param;
    else
      windows.emplace_back(rows[i].param, rows[j].param);
    i = j + 1;
  }
  return windows;
}

}  // namespace kickbec
