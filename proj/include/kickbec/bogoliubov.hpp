#ifndef KICKBEC_BOGOLIUBOV_HPP
#define KICKBEC_BOGOLIUBOV_HPP

#include <optional>
#include <utility>
#include <vector>

#include "kickbec/core.hpp"
#include "kickbec/gpe.hpp"

namespace kickbec {

inline constexpr double kNexCutoff = 1e3;

// Mirrored evolves k = 1..l_max and obtains -k by parity, which is exact
// while the condensate stays even (a homogeneous start under cos-kicks).
// Full evolves k = +-1..+-l_max explicitly.
enum class ModeLayout { Mirrored, Full };

// Quasiparticle amplitudes (u_k, v_k), stored projected orthogonal to the
// condensate (u -> Q u, v -> Q* v).
struct BogoliubovModeSet {
  RingGrid grid;
  int l_max = 0;
  ModeLayout layout = ModeLayout::Mirrored;
  std::vector<int> k;
  std::vector<std::vector<cplx>> u;
  std::vector<std::vector<cplx>> v;
  double time = 0.0;

  explicit BogoliubovModeSet(const RingGrid& g) : grid(g) {}

  int count() const { return static_cast<int>(k.size()); }
  // Number of physical modes each stored mode stands for.
  double multiplicity() const { return layout == ModeLayout::Mirrored ? 2.0 : 1.0; }
  // <u_m|u_m> - <v_m|v_m>
  double symplectic_norm(int m) const;
};

struct NexSample {
  int kick = 0;
  double time = 0.0;
  double nex = 0.0;
};

struct NexSeries {
  double nex0 = 0.0;  // N_ex before the first kick
  std::vector<NexSample> samples;
  bool exceeded_cutoff = false;
  std::optional<int> cutoff_kick;  // first kick with N_ex > kNexCutoff
};

// (u_k, v_k) = (U_k, V_k) e^{ik theta}/sqrt(2 pi).  With substep > 0 the
// pair (U_k, V_k) is instead the eigenvector of one Strang step of that size
// on the homogeneous condensate, so an unkicked run is stationary to
// round-off rather than to O(substep^2).  Both have U^2 - V^2 = 1.
BogoliubovModeSet init_modes(const PhysicalParams& params, const RingGrid& grid, int l_max,
                             ModeLayout layout = ModeLayout::Mirrored, double substep = 0.0);

// N_ex = sum over all tracked quasiparticle modes of <v_k|v_k>.
double noncondensed_number(const BogoliubovModeSet& modes);

BogoliubovModeSet apply_kick_to_modes(const BogoliubovModeSet& modes, double strength, double kbar);

struct CoupledState {
  CondensateField field;
  BogoliubovModeSet modes;
};

// One Strang step of size dt for condensate and modes together.
CoupledState bogoliubov_step(const BogoliubovModeSet& modes, const CondensateField& field,
                             const PhysicalParams& params, double dt);

// Condensate plus modes on one split-step engine.  Modes follow the
// linearized equations with (u, v) -> (Q u, Q* v) after every kinetic
// substep, and again whenever they are read out.
class CoupledEvolution {
 public:
  CoupledEvolution(const CondensateField& field, const BogoliubovModeSet& modes,
                   const PhysicalParams& params);

  SplitStepEngine& engine() { return engine_; }
  const SplitStepEngine& engine() const { return engine_; }
  double noncondensed_number() const;
  BogoliubovModeSet modes() const;
  CondensateField field() const { return engine_.snapshot(); }

 private:
  BogoliubovModeSet layout_;
  SplitStepEngine engine_;
};

struct CoupledRun {
  NexSeries nex;
  std::vector<EnergyRecord> energy;
  CondensateField field;
  BogoliubovModeSet modes;
};

// Co-evolves condensate and modes, recording N_ex after every kick and
// stopping at the first kick with N_ex > kNexCutoff.
CoupledRun evolve_coupled(const CondensateField& field, const BogoliubovModeSet& modes,
                          const PhysicalParams& params, const EvolutionConfig& config);

}  // namespace kickbec

#endif
