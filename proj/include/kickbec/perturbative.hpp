#ifndef KICKBEC_PERTURBATIVE_HPP
#define KICKBEC_PERTURBATIVE_HPP

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "kickbec/core.hpp"
#include "kickbec/gpe.hpp"

namespace kickbec {

enum class AmplitudeBasis { Momentum, Bogoliubov };

// Symmetric-subspace perturbation a_l = a_{-l}, l = 0..l_max, in units where
// the condensate amplitude a_0 is pinned to 1 (psi = |0> + sum_{l != 0} a_l |l>).
// The physical norm of the excitation is 2 sum_{l>0} |a_l|^2.
struct PerturbationState {
  int l_max = 0;
  std::vector<cplx> a;  // index l; a[0] is the pinned condensate amplitude
  AmplitudeBasis basis = AmplitudeBasis::Momentum;
  int kick = 0;

  static PerturbationState zero(int l_max);
  double excited_fraction() const;  // 2 sum_{l>0} |a_l|^2
};

// b_k = U_k a_k - V_k a_k*
PerturbationState b_from_a(const PerturbationState& state, const ModeSpectrum& spectrum);
// a_k = U_k b_k + V_k b_k*
PerturbationState a_from_b(const PerturbationState& state, const ModeSpectrum& spectrum);
// b_k <- b_k exp(-i omega_k T)
PerturbationState free_ringing(const PerturbationState& state, const ModeSpectrum& spectrum, double T);

struct KickMatrix {
  enum class Kind { SingleKick, DoubleKickEffective };
  Kind kind = Kind::SingleKick;
  int l_max = 0;
  // <n|U_kick|l> for n, l in -l_max..l_max (row/column index n + l_max).
  Eigen::MatrixXcd full;

  cplx element(int n, int l) const { return full(n + l_max, l + l_max); }
  // Action on symmetric vectors, rows/columns 0..l_max:
  //   folded(n, 0) = U_{n0},  folded(n, l) = U_{nl} + U_{n,-l}  (l > 0)
  Eigen::MatrixXcd folded() const;
};

// Kick exp(-i s K cos(theta)/hbar) with s = +1 (or s = -1):
//   U_{nl} = J_{n-l}(K/hbar) i^{s (l-n)}
KickMatrix kick_matrix_single(const PhysicalParams& params, int l_max, int sign = +1);

// Effective single kick replacing the pair (-K at nT - eps, +K at nT) in the
// limit K eps << 1:
//   exp(-i (K^2 eps / 2 hbar) sin^2 theta) exp(+(K eps / 2) cos theta)
//   U_{nl} = sum_m i^m J_m(K^2 eps / 4 hbar) I_{n-l-2m}(K eps / 2)
// (global phase exp(-i K^2 eps / 4 hbar) dropped).
KickMatrix kick_matrix_double(const PhysicalParams& params, int l_max);

// Kick matrix matching params.kick_kind.
KickMatrix kick_matrix_for(const PhysicalParams& params, int l_max);

// One period (free ringing for T, then the kick) acting on the doubled
// vector x = (a_1..a_L, a_1*..a_L*):  x_{N+1} = linear x_N + drive.
// The drive is the kick column U_{n0} a_0 with a_0 = 1.
struct OnePeriodMap {
  int l_max = 0;
  Eigen::MatrixXcd linear;
  Eigen::VectorXcd drive;
};

OnePeriodMap one_period_map(const PhysicalParams& params, const ModeSpectrum& spectrum, int l_max);

// Second-order expansion of the condensate energy functional around the
// homogeneous state for a pinned-a_0 perturbation:
//   E = g/(4 pi) + sum_{l>0} [ hbar^2 l^2 |a_l|^2 + (2 g / pi) (Re a_l)^2 ]
double perturbative_energy(const PerturbationState& state, const PhysicalParams& params);

// Wavefunction psi = (|0> + sum a_l |l>) renormalized, on the grid.
CondensateField field_from_amplitudes(const PerturbationState& state, const RingGrid& grid);

struct MapSample {
  int kick = 0;
  double a1_sq = 0.0;
  double a2_sq = 0.0;
  double energy = 0.0;
};

struct MapTrajectory {
  PerturbationState final_state;
  std::vector<MapSample> samples;
  std::optional<int> validity_exceeded_at;  // first kick with excited fraction > 0.1
};

// N applications of the map starting from `state` (Momentum basis).
MapTrajectory iterate_map(const OnePeriodMap& map, const PerturbationState& state, int N,
                          const PhysicalParams& params);

// Weak-drive amplitude after N kicks from a homogeneous start:
//   b_l(N) = (U_l d_l - V_l d_l*) sum_{n=0}^{N-1} exp(-i n omega_l T)
// with d_l the kick drive into mode l.  QKR uses d_l = U_{l0} of the single
// kick; QKR2 uses the small-argument pair drive d_1 = K eps/4,
// d_2 = i K^2 eps / (8 hbar), d_{l>2} = 0.
struct ClosedFormAmplitude {
  cplx b;
  cplx a;
};
cplx closed_form_drive(int l, const PhysicalParams& params);
ClosedFormAmplitude closed_form_amplitude(int l, int N, const PhysicalParams& params,
                                          const ModeSpectrum& spectrum);

// psi(N) ~ [1 + C_1 (K eps/2) cos theta + C_2 (K^2 eps / 4 hbar) cos 2 theta] / sqrt(2 pi),
// renormalized, with w_j = omega_j T / 2,
//   C_1 = Phi(N, w_1) [cos((N-1) w_1) - i A_1^{-2} sin((N-1) w_1)]
//   C_2 = Phi(N, w_2) [A_2^2 sin((N-1) w_2) + i cos((N-1) w_2)]
struct Qkr2Coefficients {
  cplx c1;
  cplx c2;
};
Qkr2Coefficients qkr2_coefficients(int N, const PhysicalParams& params, const ModeSpectrum& spectrum);
CondensateField qkr2_closed_form_wavefunction(int N, const PhysicalParams& params,
                                              const ModeSpectrum& spectrum, const RingGrid& grid);

// log of the spectral radius of the linear part: per-kick exponential rate.
double floquet_growth_rate(const OnePeriodMap& map);

}  // namespace kickbec

#endif
