#ifndef KICKBEC_GPE_HPP
#define KICKBEC_GPE_HPP

#include <functional>
#include <utility>
#include <vector>

#include "kickbec/core.hpp"
#include "kickbec/fft.hpp"

namespace kickbec {

struct CondensateField {
  RingGrid grid;
  std::vector<cplx> psi;
  double time = 0.0;

  explicit CondensateField(const RingGrid& g)
      : grid(g), psi(static_cast<std::size_t>(g.size()), cplx{}) {}

  // int |psi|^2 dtheta
  double norm() const;
  // <k|psi> with |k> = e^{ik theta}/sqrt(2 pi)
  cplx momentum_amplitude(int k) const;
};

CondensateField init_homogeneous(const RingGrid& grid);

struct EvolutionConfig {
  double dt = 0.0;        // substep between kicks
  double gap_dt = 0.0;    // substep inside the epsilon gap of a kick pair; 0 = min(T, eps)/200
  int record_stride = 1;  // kicks between records
  int n_kicks = 1;

  // dt = T/1000, the desk-scale default.
  static EvolutionConfig defaults_for(const PhysicalParams& params, int n_kicks);
  void validate(const PhysicalParams& params) const;
};

struct EnergyRecord {
  int kick = 0;
  double time = 0.0;
  double energy = 0.0;
  double a1_sq = 0.0;  // |<1|psi>|^2
  double a2_sq = 0.0;  // |<2|psi>|^2
};

// Strang split-step integrator for the kicked GPE on the ring.  Besides the
// condensate it can carry `n_pairs` companion pairs (u, v) that are advanced
// with the tangent map of each substep, i.e. the linearized dynamics around
// the current condensate
//   i hbar d/dt (u, v) = [[H + g|psi|^2, g psi^2], [-g psi*^2, -(H + g|psi|^2)*]] (u, v),
// followed by u <- Q u, v <- Q* v with Q = 1 - |psi><psi| after every kinetic
// substep.  Without the projection the pairs pick up a component along the
// condensate that the non-uniform density feeds back into the excitations
// as spurious secular growth.
// Storage is one aligned block of rows: field, u_0..u_{P-1}, v_0..v_{P-1}.
class SplitStepEngine {
 public:
  SplitStepEngine(const RingGrid& grid, const PhysicalParams& params, int n_pairs = 0);
  SplitStepEngine(const SplitStepEngine&) = delete;
  SplitStepEngine& operator=(const SplitStepEngine&) = delete;

  const RingGrid& grid() const { return grid_; }
  const PhysicalParams& params() const { return params_; }
  int pairs() const { return pairs_; }
  int n() const { return n_; }

  cplx* field() { return row(0); }
  const cplx* field() const { return row(0); }
  cplx* u(int m) { return row(1 + m); }
  const cplx* u(int m) const { return row(1 + m); }
  cplx* v(int m) { return row(1 + pairs_ + m); }
  const cplx* v(int m) const { return row(1 + pairs_ + m); }

  double time() const { return time_; }
  void set_time(double t) { time_ = t; }

  void load(const CondensateField& f);
  CondensateField snapshot() const;

  // n_steps Strang steps of size duration/n_steps; interior half-steps fused.
  void free_evolve(double duration, int n_steps);
  // psi <- exp(-i s cos(theta)/kbar) psi, u likewise, v with the conjugate phase.
  void kick(double strength);

  bool all_finite() const;
  // u <- Q u, v <- Q* v against the current field (done inside free_evolve
  // unless switched off, which leaves the bare tangent map)
  void project_pairs();
  void set_projection(bool on) { project_ = on; }

 private:
  cplx* row(int r) { return buf_.data() + static_cast<std::size_t>(r) * n_; }
  const cplx* row(int r) const { return buf_.data() + static_cast<std::size_t>(r) * n_; }
  void nonlinear(double tau);
  void kinetic(double dt);

  RingGrid grid_;
  PhysicalParams params_;
  int pairs_;
  int n_;
  int rows_;
  double time_ = 0.0;
  bool project_ = true;
  AlignedVector buf_;
  BatchedFft fft_;
  std::vector<double> k2_;
  std::vector<double> cos_theta_;
  double cached_dt_ = -1.0;
  std::vector<cplx> kin_phase_;  // exp(-i hbar k^2 dt/2) / n
  std::vector<cplx> coef_;       // per-point tangent coefficients, 4 per point
};

// Number of Strang substeps for a free interval: the smallest n with
// duration/n <= dt_max such that, for every pair of retained wavenumbers
// k, k' with |k - k'| <= 2, the summed kinetic phase hbar (k^2 + k'^2) h / 2
// (h = duration/n) stays a guard band away from a nonzero multiple of 2 pi.
// A pair inside that band is a spurious parametric instability of the
// splitting that grows from round-off.  The band is 4 g rho h / hbar with
// rho = 4/(2 pi), a bound on the peak density of a weakly modulated
// condensate.  Falls back to the best margin found if no count up to twice
// the minimum clears the band.
int stable_step_count(double duration, double dt_max, const RingGrid& grid, const PhysicalParams& params);

// Substep run_kicked uses for the free span between kicks.
double main_substep(const PhysicalParams& params, const EvolutionConfig& config, const RingGrid& grid);

// Runs n_kicks periods of the schedule of params.kick_kind:
//   Single:     free T, kick +K
//   DoublePair: free T - eps, kick -K, free eps, kick +K
// and calls on_kick(N) right after the N-th kick (N = 1..n_kicks).  Evolution
// stops early when on_kick returns false.  Throws std::runtime_error if the
// state stops being finite.
void run_kicked(SplitStepEngine& engine, const PhysicalParams& params, const EvolutionConfig& config,
                const std::function<bool(int)>& on_kick);

CondensateField strang_step(const CondensateField& field, const PhysicalParams& params, double dt);
CondensateField apply_kick_phase(const CondensateField& field, double strength, double kbar);

// E = int psi* (-hbar^2/2 d^2/dtheta^2) psi + (g/2) int |psi|^4, kinetic term spectral.
double condensate_energy(const CondensateField& field, const PhysicalParams& params);
double condensate_energy(const RingGrid& grid, const cplx* psi, const PhysicalParams& params);

EnergyRecord make_energy_record(int kick, const SplitStepEngine& engine);

std::pair<CondensateField, std::vector<EnergyRecord>> evolve_kicked(const CondensateField& field,
                                                                    const PhysicalParams& params,
                                                                    const EvolutionConfig& config);

// Mean of E(1)..E(N) over the first N records.
double average_energy(const std::vector<EnergyRecord>& records, int N);

}  // namespace kickbec

#endif
