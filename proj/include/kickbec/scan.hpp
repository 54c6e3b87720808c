#ifndef KICKBEC_SCAN_HPP
#define KICKBEC_SCAN_HPP

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "kickbec/bogoliubov.hpp"
#include "kickbec/core.hpp"

namespace kickbec {

inline constexpr double kRateThreshold = 0.02;  // per kick

enum class Engine { FullBogoliubov, PerturbativeMap, ClosedForm };
enum class Observable { NexFinal, AvgEnergy, GrowthRate };
enum class Classification { Stable, NearResonant, Unstable };

std::string to_string(Engine e);
std::string to_string(Observable o);
std::string to_string(Classification c);
// Accepts full names and the CLI short forms full|map|closed.
Engine engine_from_string(const std::string& name);
Observable observable_from_string(const std::string& name);

struct SweepSpec {
  ParamRange range;
  int n_samples = 151;
  PhysicalParams fixed;
  Engine engine = Engine::FullBogoliubov;
  int n_kicks = 200;
  Observable observable = Observable::NexFinal;
  int n_points = 256;
  int l_max = 32;
  double steps_per_period = 1000.0;  // dt = T / steps_per_period
  // Run the full engine without quasiparticle modes (condensate only).
  // Classification then uses the energy excursion E(N) - E(0) in place of N_ex.
  bool condensate_only = false;
  // Bisection steps inserted between neighbouring rows whose classification
  // differs on the Unstable boundary.
  int refine_edges = 0;
  int workers = 1;

  void validate() const;
  double value_at(int i) const;                 // i-th uniform sample
  PhysicalParams params_at(double value) const;  // fixed with the swept field set
};

struct SweepRow {
  double param = 0.0;
  double observable = 0.0;
  Classification classification = Classification::Stable;
  double rate = 0.0;
  std::optional<int> cutoff_kick;
  std::string error;  // non-empty if the engine failed at this point
};

// Least-squares slope of log(N_ex(N) - N_ex(0) + floor) over the last half of
// the series, floor = max(N_ex(0), 1e-12).  Unstable if the slope exceeds
// kRateThreshold and the envelope grows monotonically (block maxima of the
// last half strictly increase), or if the cutoff was crossed.  NearResonant
// if bounded but dominated by a slow oscillation: the strongest spectral
// line of the excursion lies below pi/4 per kick and the excursion exceeds
// the initial value.  Needs >= 20 samples unless the cutoff was crossed.
std::pair<Classification, double> classify_growth(const NexSeries& series);

// One row for a single parameter value.
SweepRow run_point(const SweepSpec& spec, double value);

// Rows in ascending parameter order; engine failures are recorded per row.
std::vector<SweepRow> run_sweep(const SweepSpec& spec);

// Maximal runs of Unstable rows as closed intervals [first, last] of the
// parameter; runs separated by a single non-Unstable row are merged.
std::vector<std::pair<double, double>> extract_windows(const std::vector<SweepRow>& rows);

}  // namespace kickbec

#endif
