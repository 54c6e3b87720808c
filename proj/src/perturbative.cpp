#include "kickbec/perturbative.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "kickbec/special_functions.hpp"

namespace kickbec {

namespace {

const cplx kI(0.0, 1.0);

// i^p for integer p
cplx ipow(int p) {
  switch (((p % 4) + 4) % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

void require_basis(const PerturbationState& s, AmplitudeBasis b, const char* op) {
  if (s.basis != b) throw std::invalid_argument(std::string(op) + ": wrong amplitude basis");
}

void require_spectrum(const PerturbationState& s, const ModeSpectrum& spec) {
  if (spec.l_max() < s.l_max) throw std::invalid_argument("spectrum l_max smaller than state l_max");
}

}  // namespace

PerturbationState PerturbationState::zero(int l_max) {
  if (l_max < 1) throw std::invalid_argument("PerturbationState: l_max must be >= 1");
  PerturbationState s;
  s.l_max = l_max;
  s.a.assign(static_cast<std::size_t>(l_max) + 1, cplx{});
  s.a[0] = 1.0;
  return s;
}

double PerturbationState::excited_fraction() const {
  double s = 0.0;
  for (int l = 1; l <= l_max; ++l) s += std::norm(a[static_cast<std::size_t>(l)]);
  return 2.0 * s;
}

PerturbationState b_from_a(const PerturbationState& state, const ModeSpectrum& spectrum) {
  require_basis(state, AmplitudeBasis::Momentum, "b_from_a");
  require_spectrum(state, spectrum);
  PerturbationState out = state;
  out.basis = AmplitudeBasis::Bogoliubov;
  for (int k = 1; k <= state.l_max; ++k) {
    const cplx a = state.a[static_cast<std::size_t>(k)];
    out.a[static_cast<std::size_t>(k)] = spectrum.U(k) * a - spectrum.V(k) * std::conj(a);
  }
  return out;
}

PerturbationState a_from_b(const PerturbationState& state, const ModeSpectrum& spectrum) {
  require_basis(state, AmplitudeBasis::Bogoliubov, "a_from_b");
  require_spectrum(state, spectrum);
  PerturbationState out = state;
  out.basis = AmplitudeBasis::Momentum;
  for (int k = 1; k <= state.l_max; ++k) {
    const cplx b = state.a[static_cast<std::size_t>(k)];
    out.a[static_cast<std::size_t>(k)] = spectrum.U(k) * b + spectrum.V(k) * std::conj(b);
  }
  return out;
}

PerturbationState free_ringing(const PerturbationState& state, const ModeSpectrum& spectrum, double T) {
  require_basis(state, AmplitudeBasis::Bogoliubov, "free_ringing");
  require_spectrum(state, spectrum);
  PerturbationState out = state;
  for (int k = 1; k <= state.l_max; ++k)
    out.a[static_cast<std::size_t>(k)] *= std::polar(1.0, -spectrum.omega(k) * T);
  return out;
}

Eigen::MatrixXcd KickMatrix::folded() const {
  Eigen::MatrixXcd f(l_max + 1, l_max + 1);
  for (int n = 0; n <= l_max; ++n) {
    f(n, 0) = element(n, 0);
    for (int l = 1; l <= l_max; ++l) f(n, l) = element(n, l) + element(n, -l);
  }
  return f;
}

KickMatrix kick_matrix_single(const PhysicalParams& params, int l_max, int sign) {
  if (l_max < 1) throw std::invalid_argument("kick_matrix_single: l_max must be >= 1");
  if (sign != 1 && sign != -1) throw std::invalid_argument("kick_matrix_single: sign must be +-1");
  const int dim = 2 * l_max + 1;
  const auto J = bessel_j_table(2 * l_max, params.K / params.kbar);
  auto bj = [&](int m) {
    const double v = J[static_cast<std::size_t>(std::abs(m))];
    return (m < 0 && (std::abs(m) % 2 == 1)) ? -v : v;
  };
  KickMatrix km;
  km.kind = KickMatrix::Kind::SingleKick;
  km.l_max = l_max;
  km.full.resize(dim, dim);
  for (int n = -l_max; n <= l_max; ++n)
    for (int l = -l_max; l <= l_max; ++l)
      km.full(n + l_max, l + l_max) = bj(n - l) * ipow(sign * (l - n));
  return km;
}

KickMatrix kick_matrix_double(const PhysicalParams& params, int l_max) {
  if (l_max < 1) throw std::invalid_argument("kick_matrix_double: l_max must be >= 1");
  const double w = params.K * params.K * params.epsilon / (4.0 * params.kbar);
  const double x = 0.5 * params.K * params.epsilon;
  const int span = 2 * l_max;
  // m-sum: |m| <= m_max with |J_m(w)| below 1e-17 beyond
  constexpr int kMaxOrder = 60;
  const auto J = bessel_j_table(kMaxOrder, w);
  int m_max = 0;
  for (int m = 0; m <= kMaxOrder; ++m)
    if (std::abs(J[static_cast<std::size_t>(m)]) > 1e-17) m_max = m;
  const auto Itab = bessel_i_table(span + 2 * m_max, x);
  auto bj = [&](int m) {
    const double v = J[static_cast<std::size_t>(std::abs(m))];
    return (m < 0 && (std::abs(m) % 2 == 1)) ? -v : v;
  };
  auto bi = [&](int j) { return Itab[static_cast<std::size_t>(std::abs(j))]; };
  // coefficient of e^{i d theta} in the effective kick, d = n - l
  std::vector<cplx> coeff(static_cast<std::size_t>(2 * span + 1));
  for (int d = -span; d <= span; ++d) {
    cplx s{};
    for (int m = -m_max; m <= m_max; ++m) s += ipow(m) * bj(m) * bi(d - 2 * m);
    coeff[static_cast<std::size_t>(d + span)] = s;
  }
  KickMatrix km;
  km.kind = KickMatrix::Kind::DoubleKickEffective;
  km.l_max = l_max;
  const int dim = 2 * l_max + 1;
  km.full.resize(dim, dim);
  for (int n = -l_max; n <= l_max; ++n)
    for (int l = -l_max; l <= l_max; ++l)
      km.full(n + l_max, l + l_max) = coeff[static_cast<std::size_t>(n - l + span)];
  return km;
}

KickMatrix kick_matrix_for(const PhysicalParams& params, int l_max) {
  return params.kick_kind == KickKind::Single ? kick_matrix_single(params, l_max)
                                              : kick_matrix_double(params, l_max);
}

OnePeriodMap one_period_map(const PhysicalParams& params, const ModeSpectrum& spectrum, int l_max) {
  if (spectrum.l_max() < l_max) throw std::invalid_argument("one_period_map: spectrum too short");
  const int L = l_max;
  const Eigen::MatrixXcd F = kick_matrix_for(params, L).folded();
  const Eigen::MatrixXcd M = F.block(1, 1, L, L);

  // free ringing in the momentum basis: a' = alpha a + beta a*
  Eigen::MatrixXcd free = Eigen::MatrixXcd::Zero(2 * L, 2 * L);
  for (int k = 1; k <= L; ++k) {
    const double U = spectrum.U(k), V = spectrum.V(k);
    const double ph = spectrum.omega(k) * params.T;
    const cplx alpha = U * U * std::polar(1.0, -ph) - V * V * std::polar(1.0, ph);
    const cplx beta = 2.0 * kI * U * V * std::sin(ph);
    free(k - 1, k - 1) = alpha;
    free(k - 1, L + k - 1) = beta;
    free(L + k - 1, k - 1) = std::conj(beta);
    free(L + k - 1, L + k - 1) = std::conj(alpha);
  }
  Eigen::MatrixXcd kick = Eigen::MatrixXcd::Zero(2 * L, 2 * L);
  kick.block(0, 0, L, L) = M;
  kick.block(L, L, L, L) = M.conjugate();

  OnePeriodMap map;
  map.l_max = L;
  map.linear = kick * free;
  map.drive.resize(2 * L);
  for (int n = 1; n <= L; ++n) {
    map.drive(n - 1) = F(n, 0);
    map.drive(L + n - 1) = std::conj(F(n, 0));
  }
  return map;
}

double perturbative_energy(const PerturbationState& state, const PhysicalParams& params) {
  require_basis(state, AmplitudeBasis::Momentum, "perturbative_energy");
  const double h2 = params.kbar * params.kbar;
  double e = params.g / (4.0 * kPi);
  for (int l = 1; l <= state.l_max; ++l) {
    const cplx a = state.a[static_cast<std::size_t>(l)];
    e += h2 * l * l * std::norm(a) + (2.0 * params.g / kPi) * a.real() * a.real();
  }
  return e;
}

CondensateField field_from_amplitudes(const PerturbationState& state, const RingGrid& grid) {
  require_basis(state, AmplitudeBasis::Momentum, "field_from_amplitudes");
  CondensateField f(grid);
  const double amp = 1.0 / std::sqrt(kTwoPi);
  for (int j = 0; j < grid.size(); ++j) {
    const double th = grid.theta(j);
    cplx s = state.a[0];
    for (int l = 1; l <= state.l_max; ++l) s += 2.0 * state.a[static_cast<std::size_t>(l)] * std::cos(l * th);
    f.psi[static_cast<std::size_t>(j)] = amp * s;
  }
  const double scale = 1.0 / std::sqrt(f.norm());
  for (auto& z : f.psi) z *= scale;
  return f;
}

MapTrajectory iterate_map(const OnePeriodMap& map, const PerturbationState& state, int N,
                          const PhysicalParams& params) {
  if (N < 1) throw std::invalid_argument("iterate_map: N must be >= 1");
  require_basis(state, AmplitudeBasis::Momentum, "iterate_map");
  if (state.l_max != map.l_max) throw std::invalid_argument("iterate_map: l_max mismatch");
  const int L = map.l_max;
  Eigen::VectorXcd x(2 * L);
  for (int l = 1; l <= L; ++l) {
    x(l - 1) = state.a[static_cast<std::size_t>(l)];
    x(L + l - 1) = std::conj(state.a[static_cast<std::size_t>(l)]);
  }
  MapTrajectory traj;
  traj.final_state = state;
  traj.samples.reserve(static_cast<std::size_t>(N));
  for (int step = 1; step <= N; ++step) {
    x = map.linear * x + map.drive;
    PerturbationState& s = traj.final_state;
    for (int l = 1; l <= L; ++l) s.a[static_cast<std::size_t>(l)] = x(l - 1);
    s.kick = state.kick + step;
    MapSample sample;
    sample.kick = s.kick;
    sample.a1_sq = std::norm(x(0));
    sample.a2_sq = L >= 2 ? std::norm(x(1)) : 0.0;
    sample.energy = perturbative_energy(s, params);
    traj.samples.push_back(sample);
    if (!traj.validity_exceeded_at && s.excited_fraction() > 0.1) traj.validity_exceeded_at = s.kick;
  }
  return traj;
}

cplx closed_form_drive(int l, const PhysicalParams& params) {
  if (l < 1) throw std::invalid_argument("closed_form_drive: l must be >= 1");
  if (params.kick_kind == KickKind::Single) {
    // U_{l0} = J_l(K/hbar) i^{-l}
    return bessel_j(l, params.K / params.kbar) * ipow(-l);
  }
  if (l == 1) return {0.25 * params.K * params.epsilon, 0.0};
  if (l == 2) return {0.0, params.K * params.K * params.epsilon / (8.0 * params.kbar)};
  return {};
}

ClosedFormAmplitude closed_form_amplitude(int l, int N, const PhysicalParams& params,
                                          const ModeSpectrum& spectrum) {
  if (N < 1) throw std::invalid_argument("closed_form_amplitude: N must be >= 1");
  const cplx d = closed_form_drive(l, params);
  const double U = spectrum.U(l), V = spectrum.V(l);
  const cplx beta = U * d - V * std::conj(d);
  const double half = 0.5 * spectrum.omega(l) * params.T;
  // sum_{n<N} e^{-2 i n half} = e^{-i (N-1) half} Phi(N, half)
  const cplx sum = std::polar(phi_function(N, half), -(N - 1) * half);
  ClosedFormAmplitude out;
  out.b = beta * sum;
  out.a = U * out.b + V * std::conj(out.b);
  return out;
}

Qkr2Coefficients qkr2_coefficients(int N, const PhysicalParams& params, const ModeSpectrum& spectrum) {
  if (N < 1) throw std::invalid_argument("qkr2_coefficients: N must be >= 1");
  const double w1 = 0.5 * spectrum.omega(1) * params.T;
  const double w2 = 0.5 * spectrum.omega(2) * params.T;
  const double A1 = spectrum.A(1), A2 = spectrum.A(2);
  Qkr2Coefficients c;
  c.c1 = phi_function(N, w1) * cplx(std::cos((N - 1) * w1), -std::sin((N - 1) * w1) / (A1 * A1));
  c.c2 = phi_function(N, w2) * cplx(A2 * A2 * std::sin((N - 1) * w2), std::cos((N - 1) * w2));
  return c;
}

CondensateField qkr2_closed_form_wavefunction(int N, const PhysicalParams& params,
                                              const ModeSpectrum& spectrum, const RingGrid& grid) {
  const auto c = qkr2_coefficients(N, params, spectrum);
  const double s1 = 0.5 * params.K * params.epsilon;
  const double s2 = params.K * params.K * params.epsilon / (4.0 * params.kbar);
  CondensateField f(grid);
  const double amp = 1.0 / std::sqrt(kTwoPi);
  for (int j = 0; j < grid.size(); ++j) {
    const double th = grid.theta(j);
    f.psi[static_cast<std::size_t>(j)] =
        amp * (1.0 + c.c1 * s1 * std::cos(th) + c.c2 * s2 * std::cos(2.0 * th));
  }
  const double scale = 1.0 / std::sqrt(f.norm());
  for (auto& z : f.psi) z *= scale;
  return f;
}

double floquet_growth_rate(const OnePeriodMap& map) {
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(map.linear, false);
  if (solver.info() != Eigen::Success) throw std::runtime_error("floquet_growth_rate: eigensolver failed");
  double radius = 0.0;
  for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i)
    radius = std::max(radius, std::abs(solver.eigenvalues()(i)));
  return std::log(radius);
}

}  // namespace kickbec
