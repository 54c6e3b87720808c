#include "kickbec/core.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <stdexcept>

namespace kickbec {

std::string to_string(KickKind kind) {
  return kind == KickKind::Single ? "single" : "double";
}

KickKind kick_kind_from_string(const std::string& name) {
  if (name == "single" || name == "qkr") return KickKind::Single;
  if (name == "double" || name == "qkr2") return KickKind::DoublePair;
  throw std::invalid_argument("unknown kick_kind '" + name + "' (expected single|double)");
}

void PhysicalParams::validate() const {
  auto finite = [](double v, const char* name) {
    if (!std::isfinite(v)) throw std::invalid_argument(std::string(name) + " must be finite");
  };
  finite(g, "g");
  finite(kbar, "kbar");
  finite(K, "K");
  finite(T, "T");
  finite(epsilon, "epsilon");
  if (g < 0.0) throw std::invalid_argument("g must be >= 0");
  if (kbar <= 0.0) throw std::invalid_argument("kbar must be > 0");
  if (K < 0.0) throw std::invalid_argument("K must be >= 0");
  if (T <= 0.0) throw std::invalid_argument("T must be > 0");
  if (epsilon < 0.0) throw std::invalid_argument("epsilon must be >= 0");
  if (kick_kind == KickKind::DoublePair && !(epsilon > 0.0 && epsilon < T))
    throw std::invalid_argument("double kicks need 0 < epsilon < T");
}

RingGrid::RingGrid(int n_points) : n_(n_points) {
  if (n_points < 8 || (n_points & (n_points - 1)) != 0)
    throw std::invalid_argument("n_points must be a power of two >= 8");
  dtheta_ = kTwoPi / n_;
  theta_.resize(static_cast<std::size_t>(n_));
  for (int j = 0; j < n_; ++j) theta_[static_cast<std::size_t>(j)] = dtheta_ * j;
}

void RingGrid::require_resolves(int l_max) const {
  if (l_max < 1) throw std::invalid_argument("l_max must be >= 1");
  if (n_ < 8 * l_max)
    throw std::invalid_argument("n_points = " + std::to_string(n_) + " is below 8 * l_max = " +
                                std::to_string(8 * l_max));
}

double mode_frequency(int k, const PhysicalParams& params) {
  if (k == 0) return 0.0;
  const double hk = params.kbar * std::abs(k);
  const double e = 0.5 * hk * hk;
  return std::sqrt(e * (e + params.g / kPi)) / params.kbar;
}

ModeCoefficients mode_coefficients(int k, const PhysicalParams& params) {
  if (k == 0) throw std::invalid_argument("mode_coefficients: k = 0 is the condensate");
  const double hk = params.kbar * std::abs(k);
  const double e = 0.5 * hk * hk;
  ModeCoefficients c;
  c.A = std::pow(e / (e + params.g / kPi), 0.25);
  const double inv = 1.0 / c.A;
  c.U = 0.5 * (c.A + inv);
  c.V = 0.5 * (c.A - inv);
  return c;
}

ModeSpectrum::ModeSpectrum(const PhysicalParams& params, int l_max) : l_max_(l_max) {
  if (l_max < 1) throw std::invalid_argument("ModeSpectrum: l_max must be >= 1");
  omega_.resize(static_cast<std::size_t>(l_max) + 1, 0.0);
  coeff_.resize(static_cast<std::size_t>(l_max) + 1);
  for (int k = 1; k <= l_max; ++k) {
    omega_[static_cast<std::size_t>(k)] = mode_frequency(k, params);
    coeff_[static_cast<std::size_t>(k)] = mode_coefficients(k, params);
  }
}

double ModeSpectrum::omega(int k) const {
  const int a = std::abs(k);
  if (a > l_max_) throw std::out_of_range("ModeSpectrum::omega: |k| > l_max");
  return omega_[static_cast<std::size_t>(a)];
}

const ModeCoefficients& ModeSpectrum::coefficients(int k) const {
  const int a = std::abs(k);
  if (a < 1 || a > l_max_) throw std::out_of_range("ModeSpectrum::coefficients: k out of 1..l_max");
  return coeff_[static_cast<std::size_t>(a)];
}

double phi_function(int N, double x) {
  const double m = std::nearbyint(x / kPi);
  const double h = x - m * kPi;
  if (std::abs(h) < 1e-7) {
    const long mi = static_cast<long>(m);
    const double sign = ((mi * (N - 1)) % 2 == 0) ? 1.0 : -1.0;
    const double n = static_cast<double>(N);
    return sign * n * (1.0 - (n * n - 1.0) * h * h / 6.0);
  }
  return std::sin(N * x) / std::sin(x);
}

std::string to_string(SweptParam p) {
  switch (p) {
    case SweptParam::T: return "T";
    case SweptParam::g: return "g";
    case SweptParam::K: return "K";
  }
  return "?";
}

SweptParam swept_param_from_string(const std::string& name) {
  if (name == "T") return SweptParam::T;
  if (name == "g") return SweptParam::g;
  if (name == "K") return SweptParam::K;
  throw std::invalid_argument("unknown sweep parameter '" + name + "' (expected T|g|K)");
}

std::string to_string(ResonancePrediction::Kind kind) {
  return kind == ResonancePrediction::Kind::SingleMode ? "single" : "two_mode";
}

namespace {

void check_range(const ParamRange& range) {
  if (!(range.lo < range.hi)) throw std::invalid_argument("resonance search range is empty");
}

bool in_range(double v, const ParamRange& r) { return v >= r.lo && v <= r.hi; }

void sort_by_value(std::vector<ResonancePrediction>& out) {
  std::stable_sort(out.begin(), out.end(),
                   [](const auto& a, const auto& b) { return a.value < b.value; });
}

}  // namespace

std::vector<ResonancePrediction> predict_single_mode_resonances(
    const PhysicalParams& params, int l_max, int n_max, const ParamRange& range) {
  check_range(range);
  if (l_max < 1 || n_max < 1) throw std::invalid_argument("l_max and n_max must be >= 1");
  std::vector<ResonancePrediction> out;
  for (int l = 1; l <= l_max; ++l) {
    for (int n = 1; n <= n_max; ++n) {
      ResonancePrediction p;
      p.kind = ResonancePrediction::Kind::SingleMode;
      p.l = l;
      p.order = n;
      p.swept = range.param;
      if (range.param == SweptParam::T) {
        const double w = mode_frequency(l, params);
        if (w <= 0.0) continue;
        p.value = kTwoPi * n / w;
      } else if (range.param == SweptParam::g) {
        // hbar^2 Omega^2 = e (e + g/pi)  =>  g = pi (hbar^2 Omega^2 / e - e)
        const double target = kTwoPi * n / params.T;
        const double hk = params.kbar * l;
        const double e = 0.5 * hk * hk;
        const double hw = params.kbar * target;
        p.value = kPi * (hw * hw / e - e);
        if (p.value < 0.0) continue;
      } else {
        throw std::invalid_argument("single-mode resonances sweep T or g only");
      }
      if (in_range(p.value, range)) out.push_back(p);
    }
  }
  sort_by_value(out);
  return out;
}

std::vector<ResonancePrediction> predict_two_mode_resonances(
    const PhysicalParams& params, const std::vector<std::pair<int, int>>& pairs, int M_max,
    const ParamRange& range) {
  check_range(range);
  if (range.param != SweptParam::g) throw std::invalid_argument("two-mode resonances sweep g only");
  if (M_max < 1) throw std::invalid_argument("M_max must be >= 1");
  constexpr int kBracketPoints = 1000;
  std::vector<ResonancePrediction> out;
  for (const auto& [l, lp] : pairs) {
    if (l < 1 || lp <= l) throw std::invalid_argument("two-mode pairs need 1 <= l < l'");
    for (int M = 1; M <= M_max; ++M) {
      auto residual = [&](double g) {
        PhysicalParams p = params;
        p.g = g;
        return (mode_frequency(l, p) + mode_frequency(lp, p)) * params.T - kTwoPi * M;
      };
      double g0 = range.lo;
      double f0 = residual(g0);
      for (int i = 1; i <= kBracketPoints; ++i) {
        const double g1 = range.lo + (range.hi - range.lo) * i / kBracketPoints;
        const double f1 = residual(g1);
        double root = 0.0;
        bool found = false;
        if (f0 == 0.0) {
          root = g0;
          found = true;
        } else if (f0 * f1 < 0.0) {
          double a = g0, b = g1, fa = f0;
          for (int it = 0; it < 200; ++it) {
            root = 0.5 * (a + b);
            const double fr = residual(root);
            if (std::abs(fr) < 1e-12 || b - a < 1e-15) break;
            if (fa * fr < 0.0) {
              b = root;
            } else {
              a = root;
              fa = fr;
            }
          }
          found = true;
        }
        if (found) {
          ResonancePrediction p;
          p.kind = ResonancePrediction::Kind::TwoMode;
          p.l = l;
          p.lprime = lp;
          p.order = M;
          p.swept = SweptParam::g;
          p.value = root;
          out.push_back(p);
        }
        g0 = g1;
        f0 = f1;
      }
      if (f0 == 0.0) {
        ResonancePrediction p{ResonancePrediction::Kind::TwoMode, l, lp, M, SweptParam::g, g0};
        out.push_back(p);
      }
    }
  }
  sort_by_value(out);
  return out;
}

}  // namespace kickbec
