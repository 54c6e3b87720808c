#include "kickbec/gpe.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace kickbec {

double CondensateField::norm() const {
  double s = 0.0;
  for (const auto& z : psi) s += std::norm(z);
  return s * grid.d_theta();
}

cplx CondensateField::momentum_amplitude(int k) const {
  cplx s{};
  for (int j = 0; j < grid.size(); ++j)
    s += psi[static_cast<std::size_t>(j)] * std::polar(1.0, -k * grid.theta(j));
  return s * (grid.d_theta() / std::sqrt(kTwoPi));
}

CondensateField init_homogeneous(const RingGrid& grid) {
  CondensateField f(grid);
  const cplx c(1.0 / std::sqrt(kTwoPi), 0.0);
  for (auto& z : f.psi) z = c;
  return f;
}

EvolutionConfig EvolutionConfig::defaults_for(const PhysicalParams& params, int n_kicks) {
  EvolutionConfig c;
  c.dt = params.T / 1000.0;
  c.n_kicks = n_kicks;
  return c;
}

void EvolutionConfig::validate(const PhysicalParams& params) const {
  if (!(dt > 0.0)) throw std::invalid_argument("dt must be > 0");
  if (dt > params.T / 100.0 * (1.0 + 1e-12))
    throw std::invalid_argument("dt must be <= T/100");
  if (gap_dt < 0.0) throw std::invalid_argument("gap_dt must be >= 0");
  if (n_kicks < 1) throw std::invalid_argument("n_kicks must be >= 1");
  if (record_stride < 1) throw std::invalid_argument("record_stride must be >= 1");
}

SplitStepEngine::SplitStepEngine(const RingGrid& grid, const PhysicalParams& params, int n_pairs)
    : grid_(grid),
      params_(params),
      pairs_(n_pairs),
      n_(grid.size()),
      rows_(1 + 2 * n_pairs),
      buf_(static_cast<std::size_t>(rows_) * static_cast<std::size_t>(grid.size())),
      fft_(grid.size(), 1 + 2 * n_pairs, buf_.data()) {
  if (n_pairs < 0) throw std::invalid_argument("SplitStepEngine: negative pair count");
  params_.validate();
  k2_.resize(static_cast<std::size_t>(n_));
  cos_theta_.resize(static_cast<std::size_t>(n_));
  for (int j = 0; j < n_; ++j) {
    const double k = grid_.wavenumber(j);
    k2_[static_cast<std::size_t>(j)] = k * k;
    cos_theta_[static_cast<std::size_t>(j)] = std::cos(grid_.theta(j));
  }
  kin_phase_.resize(static_cast<std::size_t>(n_));
  coef_.resize(4 * static_cast<std::size_t>(n_));
}

void SplitStepEngine::load(const CondensateField& f) {
  if (f.grid.size() != n_) throw std::invalid_argument("SplitStepEngine::load: grid mismatch");
  std::copy(f.psi.begin(), f.psi.end(), field());
  time_ = f.time;
}

CondensateField SplitStepEngine::snapshot() const {
  CondensateField f(grid_);
  std::copy(field(), field() + n_, f.psi.begin());
  f.time = time_;
  return f;
}

void SplitStepEngine::nonlinear(double tau) {
  const double s = params_.g * tau / params_.kbar;
  cplx* f = field();
  if (pairs_ == 0) {
    for (int j = 0; j < n_; ++j) f[j] *= std::polar(1.0, -s * std::norm(f[j]));
    return;
  }
  const cplx I(0.0, 1.0);
  for (int j = 0; j < n_; ++j) {
    const cplx phi = f[j];
    const double alpha = s * std::norm(phi);
    const cplx p = std::polar(1.0, -alpha);
    const cplx beta = s * phi * phi;
    cplx* c = coef_.data() + 4 * static_cast<std::size_t>(j);
    c[0] = p * cplx(1.0, -alpha);
    c[1] = -I * p * beta;
    c[2] = I * std::conj(p) * std::conj(beta);
    c[3] = std::conj(p) * cplx(1.0, alpha);
    f[j] = p * phi;
  }
  for (int m = 0; m < pairs_; ++m) {
    cplx* uu = u(m);
    cplx* vv = v(m);
    for (int j = 0; j < n_; ++j) {
      const cplx* c = coef_.data() + 4 * static_cast<std::size_t>(j);
      const cplx a = uu[j];
      const cplx b = vv[j];
      uu[j] = c[0] * a + c[1] * b;
      vv[j] = c[2] * a + c[3] * b;
    }
  }
}

void SplitStepEngine::kinetic(double dt) {
  if (dt != cached_dt_) {
    const double scale = 1.0 / n_;
    const double kc = grid_.dealias_cutoff();
    for (int j = 0; j < n_; ++j) {
      const double k2 = k2_[static_cast<std::size_t>(j)];
      kin_phase_[static_cast<std::size_t>(j)] =
          k2 > kc * kc ? cplx{} : std::polar(scale, -0.5 * params_.kbar * k2 * dt);
    }
    cached_dt_ = dt;
  }
  fft_.forward();
  for (int r = 0; r <= pairs_; ++r) {
    cplx* x = row(r);
    for (int j = 0; j < n_; ++j) x[j] *= kin_phase_[static_cast<std::size_t>(j)];
  }
  for (int r = pairs_ + 1; r < rows_; ++r) {
    cplx* x = row(r);
    for (int j = 0; j < n_; ++j) x[j] *= std::conj(kin_phase_[static_cast<std::size_t>(j)]);
  }
  fft_.backward();
}

void SplitStepEngine::free_evolve(double duration, int n_steps) {
  if (n_steps < 1) throw std::invalid_argument("free_evolve: n_steps < 1");
  const double h = duration / n_steps;
  nonlinear(0.5 * h);
  for (int s = 0; s < n_steps; ++s) {
    kinetic(h);
    if (project_) project_pairs();
    nonlinear(s + 1 == n_steps ? 0.5 * h : h);
  }
  time_ += duration;
}

void SplitStepEngine::project_pairs() {
  if (pairs_ == 0) return;
  const cplx* psi = row(0);
  double nrm = 0.0;
  for (int j = 0; j < n_; ++j) nrm += std::norm(psi[j]);
  const double inv = 1.0 / nrm;  // the grid weight cancels
  for (int m = 0; m < pairs_; ++m) {
    cplx* a = u(m);
    cplx* b = v(m);
    cplx cu{}, cv{};
    for (int j = 0; j < n_; ++j) {
      cu += std::conj(psi[j]) * a[j];
      cv += psi[j] * b[j];
    }
    cu *= inv;
    cv *= inv;
    for (int j = 0; j < n_; ++j) {
      a[j] -= cu * psi[j];
      b[j] -= cv * std::conj(psi[j]);
    }
  }
}

void SplitStepEngine::kick(double strength) {
  if (strength == 0.0) return;
  const double z = strength / params_.kbar;
  std::vector<cplx> ph(static_cast<std::size_t>(n_));
  for (int j = 0; j < n_; ++j) ph[static_cast<std::size_t>(j)] = std::polar(1.0, -z * cos_theta_[static_cast<std::size_t>(j)]);
  for (int r = 0; r <= pairs_; ++r) {
    cplx* x = row(r);
    for (int j = 0; j < n_; ++j) x[j] *= ph[static_cast<std::size_t>(j)];
  }
  for (int r = pairs_ + 1; r < rows_; ++r) {
    cplx* x = row(r);
    for (int j = 0; j < n_; ++j) x[j] *= std::conj(ph[static_cast<std::size_t>(j)]);
  }
}

bool SplitStepEngine::all_finite() const {
  for (const auto& z : buf_)
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  return true;
}

namespace {

int steps_for(double duration, double dt) {
  return std::max(1, static_cast<int>(std::ceil(duration / dt - 1e-9)));
}

// Smallest distance of theta_k + theta_k' from a nonzero multiple of 2 pi,
// theta_k = hbar k^2 h / 2, over retained wavenumbers with |k - k'| <= 2
// (pairs coupled through the low harmonics of the condensate density).
double resonance_margin(double h, int k_max, double kbar) {
  double margin = kTwoPi;
  for (int k = 1; k <= k_max; ++k) {
    for (int d = 0; d <= 2 && k + d <= k_max; ++d) {
      const int kp = k + d;
      const double sigma = 0.5 * kbar * (k * k + kp * kp) * h;
      const double m = std::round(sigma / kTwoPi);
      if (m < 1.0) continue;
      margin = std::min(margin, std::abs(sigma - m * kTwoPi));
    }
  }
  return margin;
}

}  // namespace

int stable_step_count(double duration, double dt_max, const RingGrid& grid, const PhysicalParams& params) {
  if (!(duration > 0.0) || !(dt_max > 0.0))
    throw std::invalid_argument("stable_step_count: duration and dt_max must be > 0");
  const int n0 = steps_for(duration, dt_max);
  const double rho = 4.0 / kTwoPi;
  int best = n0;
  double best_excess = -1e300;
  for (int n = n0; n <= 2 * n0; ++n) {
    const double h = duration / n;
    const double band = 4.0 * params.g * rho * h / params.kbar;
    const double excess = resonance_margin(h, grid.dealias_cutoff(), params.kbar) - band;
    if (excess > 0.0) return n;
    if (excess > best_excess) {
      best_excess = excess;
      best = n;
    }
  }
  return best;
}

double main_substep(const PhysicalParams& params, const EvolutionConfig& config, const RingGrid& grid) {
  const double span = params.kick_kind == KickKind::DoublePair ? params.T - params.epsilon : params.T;
  return span / stable_step_count(span, config.dt, grid, params);
}

void run_kicked(SplitStepEngine& engine, const PhysicalParams& params, const EvolutionConfig& config,
                const std::function<bool(int)>& on_kick) {
  params.validate();
  config.validate(params);
  const bool pair = params.kick_kind == KickKind::DoublePair;
  const double main_span = pair ? params.T - params.epsilon : params.T;
  const RingGrid& grid = engine.grid();
  const int main_steps = stable_step_count(main_span, config.dt, grid, params);
  int gap_steps = 0;
  if (pair) {
    const double gap_dt =
        config.gap_dt > 0.0 ? config.gap_dt : std::min(params.T, params.epsilon) / 200.0;
    gap_steps = stable_step_count(params.epsilon, std::min(gap_dt, config.dt), grid, params);
  }
  for (int N = 1; N <= config.n_kicks; ++N) {
    engine.free_evolve(main_span, main_steps);
    if (pair) {
      engine.kick(-params.K);
      engine.free_evolve(params.epsilon, gap_steps);
    }
    engine.kick(params.K);
    if (!engine.all_finite())
      throw std::runtime_error("non-finite state after kick " + std::to_string(N) +
                               " (dt too large?)");
    if (!on_kick(N)) break;
  }
}

CondensateField strang_step(const CondensateField& field, const PhysicalParams& params, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("strang_step: dt must be > 0");
  SplitStepEngine engine(field.grid, params);
  engine.load(field);
  engine.free_evolve(dt, 1);
  return engine.snapshot();
}

CondensateField apply_kick_phase(const CondensateField& field, double strength, double kbar) {
  CondensateField out = field;
  const double z = strength / kbar;
  for (int j = 0; j < field.grid.size(); ++j)
    out.psi[static_cast<std::size_t>(j)] *= std::polar(1.0, -z * std::cos(field.grid.theta(j)));
  return out;
}

double condensate_energy(const RingGrid& grid, const cplx* psi, const PhysicalParams& params) {
  const int n = grid.size();
  std::vector<cplx> x(psi, psi + n);
  const auto hat = dft(x);
  // <k|psi> = hat_k * dtheta / sqrt(2 pi)
  const double amp = grid.d_theta() / std::sqrt(kTwoPi);
  double kinetic = 0.0;
  for (int j = 0; j < n; ++j) {
    const double k = grid.wavenumber(j);
    kinetic += 0.5 * params.kbar * params.kbar * k * k * std::norm(hat[static_cast<std::size_t>(j)] * amp);
  }
  double quartic = 0.0;
  for (int j = 0; j < n; ++j) {
    const double r = std::norm(psi[j]);
    quartic += r * r;
  }
  return kinetic + 0.5 * params.g * quartic * grid.d_theta();
}

double condensate_energy(const CondensateField& field, const PhysicalParams& params) {
  return condensate_energy(field.grid, field.psi.data(), params);
}

EnergyRecord make_energy_record(int kick, const SplitStepEngine& engine) {
  EnergyRecord r;
  r.kick = kick;
  r.time = engine.time();
  r.energy = condensate_energy(engine.grid(), engine.field(), engine.params());
  const RingGrid& grid = engine.grid();
  const cplx* psi = engine.field();
  cplx a1{}, a2{};
  for (int j = 0; j < grid.size(); ++j) {
    const double th = grid.theta(j);
    a1 += psi[j] * std::polar(1.0, -th);
    a2 += psi[j] * std::polar(1.0, -2.0 * th);
  }
  const double amp = grid.d_theta() / std::sqrt(kTwoPi);
  r.a1_sq = std::norm(a1 * amp);
  r.a2_sq = std::norm(a2 * amp);
  return r;
}

std::pair<CondensateField, std::vector<EnergyRecord>> evolve_kicked(const CondensateField& field,
                                                                    const PhysicalParams& params,
                                                                    const EvolutionConfig& config) {
  SplitStepEngine engine(field.grid, params);
  engine.load(field);
  std::vector<EnergyRecord> records;
  records.reserve(static_cast<std::size_t>(config.n_kicks / config.record_stride + 1));
  run_kicked(engine, params, config, [&](int N) {
    if (N % config.record_stride == 0) records.push_back(make_energy_record(N, engine));
    return true;
  });
  return {engine.snapshot(), std::move(records)};
}

double average_energy(const std::vector<EnergyRecord>& records, int N) {
  if (N < 1) throw std::invalid_argument("average_energy: N must be >= 1");
  if (static_cast<int>(records.size()) < N)
    throw std::invalid_argument("average_energy: fewer than N records");
  double s = 0.0;
  for (int i = 0; i < N; ++i) s += records[static_cast<std::size_t>(i)].energy;
  return s / N;
}

}  // namespace kickbec
