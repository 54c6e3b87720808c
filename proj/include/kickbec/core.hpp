#ifndef KICKBEC_CORE_HPP
#define KICKBEC_CORE_HPP

#include <complex>
#include <string>
#include <utility>
#include <vector>

namespace kickbec {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

enum class KickKind { Single, DoublePair };

std::string to_string(KickKind kind);
KickKind kick_kind_from_string(const std::string& name);

// Dimensionless ring units: theta in [0, 2pi), hbar^2/(m R^2) absorbed into kbar.
struct PhysicalParams {
  double g = 0.0;        // nonlinearity
  double kbar = 1.0;     // effective Planck constant
  double K = 0.0;        // kick strength
  double T = 1.0;        // kick period
  double epsilon = 0.0;  // delay between the two kicks of a pair
  KickKind kick_kind = KickKind::Single;

  // Throws std::invalid_argument naming the offending field.
  void validate() const;

  double effective_kick() const { return K * epsilon; }
};

// Uniform periodic grid on the ring.
class RingGrid {
 public:
  explicit RingGrid(int n_points);

  int size() const { return n_; }
  double d_theta() const { return dtheta_; }
  double theta(int j) const { return dtheta_ * j; }
  const std::vector<double>& thetas() const { return theta_; }

  // Signed wavenumber stored at FFT index j (0, 1, ..., n/2-1, -n/2, ..., -1).
  int wavenumber(int j) const { return j < n_ / 2 ? j : j - n_; }
  // FFT index of signed wavenumber k, |k| < n/2.
  int index_of(int k) const { return k >= 0 ? k : k + n_; }

  // Throws if the grid is too coarse for modes up to l_max (n >= 8 l_max).
  void require_resolves(int l_max) const;
  // Largest |k| kept by the split-step integrator; higher wavenumbers are
  // zeroed every step, which removes aliasing of the cubic nonlinearity.
  int dealias_cutoff() const { return n_ / 4; }

 private:
  int n_;
  double dtheta_;
  std::vector<double> theta_;
};

struct ModeCoefficients {
  double A = 1.0;
  double U = 1.0;
  double V = 0.0;
};

// Bogoliubov frequency of the homogeneous condensate,
//   hbar omega_k = sqrt(e_k (e_k + g/pi)),  e_k = hbar^2 k^2 / 2.
// omega_0 = 0; negative k uses |k|.
double mode_frequency(int k, const PhysicalParams& params);

// U_k + V_k = A_k, U_k - V_k = 1/A_k with A_k = (e_k / (e_k + g/pi))^{1/4},
// so that U_k^2 - V_k^2 = 1 and V_k -> 0 for large k.
ModeCoefficients mode_coefficients(int k, const PhysicalParams& params);

class ModeSpectrum {
 public:
  ModeSpectrum(const PhysicalParams& params, int l_max);

  int l_max() const { return l_max_; }
  double omega(int k) const;
  const ModeCoefficients& coefficients(int k) const;
  double A(int k) const { return coefficients(k).A; }
  double U(int k) const { return coefficients(k).U; }
  double V(int k) const { return coefficients(k).V; }

 private:
  int l_max_;
  std::vector<double> omega_;
  std::vector<ModeCoefficients> coeff_;
};

// sin(N x) / sin(x), continuous at x = m pi where it equals N (-1)^{m(N-1)}.
double phi_function(int N, double x);

enum class SweptParam { T, g, K };
std::string to_string(SweptParam p);
SweptParam swept_param_from_string(const std::string& name);

struct ParamRange {
  SweptParam param = SweptParam::T;
  double lo = 0.0;
  double hi = 0.0;
};

struct ResonancePrediction {
  enum class Kind { SingleMode, TwoMode };
  Kind kind = Kind::SingleMode;
  int l = 0;
  int lprime = 0;  // second mode for TwoMode, 0 otherwise
  int order = 0;   // harmonic n (single mode) or M (two mode)
  SweptParam swept = SweptParam::T;
  double value = 0.0;
};

std::string to_string(ResonancePrediction::Kind kind);

// omega_l = 2 pi n / T, solved for T (closed form) or g (closed form,
// negative roots dropped).  Results sorted by value.
std::vector<ResonancePrediction> predict_single_mode_resonances(
    const PhysicalParams& params, int l_max, int n_max, const ParamRange& range);

// (omega_l + omega_l') T = 2 pi M solved for g by grid bracketing and
// bisection.  Only SweptParam::g ranges are accepted.
std::vector<ResonancePrediction> predict_two_mode_resonances(
    const PhysicalParams& params, const std::vector<std::pair<int, int>>& pairs,
    int M_max, const ParamRange& range);

}  // namespace kickbec

#endif
