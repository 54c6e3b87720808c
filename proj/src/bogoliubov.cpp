#include "kickbec/bogoliubov.hpp"

#include <cmath>
#include <tuple>

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace kickbec {

namespace {

double row_norm(const cplx* x, int n, double dtheta) {
  double s = 0.0;
  for (int j = 0; j < n; ++j) s += std::norm(x[j]);
  return s * dtheta;
}

// int a(theta) b(theta) dtheta  (no conjugation)
cplx plain_overlap(const cplx* a, const cplx* b, int n, double dtheta) {
  cplx s{};
  for (int j = 0; j < n; ++j) s += a[j] * b[j];
  return s * dtheta;
}

// <a|b>
cplx inner(const cplx* a, const cplx* b, int n, double dtheta) {
  cplx s{};
  for (int j = 0; j < n; ++j) s += std::conj(a[j]) * b[j];
  return s * dtheta;
}

// ||Q* v||^2 = ||v||^2 - |<psi*|v>|^2 for normalized psi
double projected_v_norm(const cplx* psi, const cplx* v, int n, double dtheta) {
  return row_norm(v, n, dtheta) - std::norm(plain_overlap(psi, v, n, dtheta));
}

bool is_even(const CondensateField& f) {
  const int n = f.grid.size();
  double scale = 0.0, diff = 0.0;
  for (int j = 0; j < n; ++j) {
    const auto& a = f.psi[static_cast<std::size_t>(j)];
    const auto& b = f.psi[static_cast<std::size_t>((n - j) % n)];
    scale = std::max(scale, std::abs(a));
    diff = std::max(diff, std::abs(a - b));
  }
  return diff <= 1e-12 * std::max(scale, 1e-300);
}

}  // namespace

double BogoliubovModeSet::symplectic_norm(int m) const {
  const auto& uu = u[static_cast<std::size_t>(m)];
  const auto& vv = v[static_cast<std::size_t>(m)];
  return row_norm(uu.data(), grid.size(), grid.d_theta()) -
         row_norm(vv.data(), grid.size(), grid.d_theta());
}

namespace {

// Eigenvector (U, V) of one Strang step for momentum k, in the frame
// co-rotating with the condensate phase.  The 2x2 step matrix is read off
// the engine itself.
std::pair<cplx, cplx> discrete_mode(int k, const PhysicalParams& params, const RingGrid& grid, double h) {
  const int n = grid.size();
  const double amp = 1.0 / std::sqrt(kTwoPi);
  SplitStepEngine e(grid, params, 2);
  e.set_projection(false);
  e.load(init_homogeneous(grid));
  for (int j = 0; j < n; ++j) {
    const cplx w = std::polar(amp, k * grid.theta(j));
    e.u(0)[j] = w;
    e.v(0)[j] = 0.0;
    e.u(1)[j] = 0.0;
    e.v(1)[j] = w;
  }
  e.free_evolve(h, 1);
  const cplx phase = e.field()[0] / std::abs(e.field()[0]);
  auto coef = [&](const cplx* row) {
    cplx s{};
    for (int j = 0; j < n; ++j) s += std::polar(amp, -k * grid.theta(j)) * row[j];
    return s * grid.d_theta();
  };
  Eigen::Matrix2cd m;
  m << coef(e.u(0)) * std::conj(phase), coef(e.u(1)) * std::conj(phase),
      coef(e.v(0)) * phase, coef(e.v(1)) * phase;
  Eigen::ComplexEigenSolver<Eigen::Matrix2cd> es(m);
  int best = 0;
  double best_norm = -1e300;
  for (int c = 0; c < 2; ++c) {
    const double s = std::norm(es.eigenvectors()(0, c)) - std::norm(es.eigenvectors()(1, c));
    if (s > best_norm) best_norm = s, best = c;
  }
  if (!(best_norm > 0.0)) throw std::runtime_error("init_modes: no positive-norm step eigenvector");
  cplx U = es.eigenvectors()(0, best), V = es.eigenvectors()(1, best);
  const cplx fix = std::conj(U) / std::abs(U) / std::sqrt(best_norm);
  return {U * fix, V * fix};
}

}  // namespace

BogoliubovModeSet init_modes(const PhysicalParams& params, const RingGrid& grid, int l_max,
                             ModeLayout layout, double substep) {
  params.validate();
  grid.require_resolves(l_max);
  BogoliubovModeSet set(grid);
  set.l_max = l_max;
  set.layout = layout;
  for (int k = 1; k <= l_max; ++k) {
    set.k.push_back(k);
    if (layout == ModeLayout::Full) set.k.push_back(-k);
  }
  const double amp = 1.0 / std::sqrt(kTwoPi);
  const int n = grid.size();
  for (int k : set.k) {
    const auto c = mode_coefficients(k, params);
    cplx U = c.U, V = c.V;
    if (substep > 0.0 && params.g > 0.0) std::tie(U, V) = discrete_mode(k, params, grid, substep);
    std::vector<cplx> uu(static_cast<std::size_t>(n)), vv(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
      const cplx e = std::polar(amp, k * grid.theta(j));
      uu[static_cast<std::size_t>(j)] = U * e;
      vv[static_cast<std::size_t>(j)] = V * e;
    }
    set.u.push_back(std::move(uu));
    set.v.push_back(std::move(vv));
  }
  return set;
}

double noncondensed_number(const BogoliubovModeSet& modes) {
  double s = 0.0;
  for (int m = 0; m < modes.count(); ++m)
    s += row_norm(modes.v[static_cast<std::size_t>(m)].data(), modes.grid.size(), modes.grid.d_theta());
  return modes.multiplicity() * s;
}

BogoliubovModeSet apply_kick_to_modes(const BogoliubovModeSet& modes, double strength, double kbar) {
  BogoliubovModeSet out = modes;
  const double z = strength / kbar;
  for (int j = 0; j < modes.grid.size(); ++j) {
    const cplx ph = std::polar(1.0, -z * std::cos(modes.grid.theta(j)));
    for (int m = 0; m < modes.count(); ++m) {
      out.u[static_cast<std::size_t>(m)][static_cast<std::size_t>(j)] *= ph;
      out.v[static_cast<std::size_t>(m)][static_cast<std::size_t>(j)] *= std::conj(ph);
    }
  }
  return out;
}

CoupledEvolution::CoupledEvolution(const CondensateField& field, const BogoliubovModeSet& modes,
                                   const PhysicalParams& params)
    : layout_(modes.grid), engine_(field.grid, params, modes.count()) {
  if (modes.grid.size() != field.grid.size())
    throw std::invalid_argument("CoupledEvolution: field and modes on different grids");
  if (modes.layout == ModeLayout::Mirrored && !is_even(field))
    throw std::invalid_argument(
        "CoupledEvolution: mirrored mode layout needs a parity-even condensate");
  layout_.l_max = modes.l_max;
  layout_.layout = modes.layout;
  layout_.k = modes.k;
  engine_.load(field);
  for (int m = 0; m < modes.count(); ++m) {
    std::copy(modes.u[static_cast<std::size_t>(m)].begin(), modes.u[static_cast<std::size_t>(m)].end(), engine_.u(m));
    std::copy(modes.v[static_cast<std::size_t>(m)].begin(), modes.v[static_cast<std::size_t>(m)].end(), engine_.v(m));
  }
}

double CoupledEvolution::noncondensed_number() const {
  const int n = engine_.n();
  const double dth = engine_.grid().d_theta();
  double s = 0.0;
  for (int m = 0; m < engine_.pairs(); ++m) s += projected_v_norm(engine_.field(), engine_.v(m), n, dth);
  return layout_.multiplicity() * s;
}

BogoliubovModeSet CoupledEvolution::modes() const {
  BogoliubovModeSet out = layout_;
  out.time = engine_.time();
  const int n = engine_.n();
  const double dth = engine_.grid().d_theta();
  const cplx* psi = engine_.field();
  out.u.clear();
  out.v.clear();
  for (int m = 0; m < engine_.pairs(); ++m) {
    const cplx* uu = engine_.u(m);
    const cplx* vv = engine_.v(m);
    const cplx cu = inner(psi, uu, n, dth);          // <psi|u>
    const cplx cv = plain_overlap(psi, vv, n, dth);  // <psi*|v>
    std::vector<cplx> pu(static_cast<std::size_t>(n)), pv(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
      pu[static_cast<std::size_t>(j)] = uu[j] - psi[j] * cu;
      pv[static_cast<std::size_t>(j)] = vv[j] - std::conj(psi[j]) * cv;
    }
    out.u.push_back(std::move(pu));
    out.v.push_back(std::move(pv));
  }
  return out;
}

CoupledState bogoliubov_step(const BogoliubovModeSet& modes, const CondensateField& field,
                             const PhysicalParams& params, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("bogoliubov_step: dt must be > 0");
  CoupledEvolution evo(field, modes, params);
  evo.engine().free_evolve(dt, 1);
  if (!evo.engine().all_finite()) throw std::runtime_error("bogoliubov_step: non-finite state");
  return {evo.field(), evo.modes()};
}

CoupledRun evolve_coupled(const CondensateField& field, const BogoliubovModeSet& modes,
                          const PhysicalParams& params, const EvolutionConfig& config) {
  CoupledEvolution evo(field, modes, params);
  CoupledRun run{NexSeries{}, {}, field, modes};
  run.nex.nex0 = evo.noncondensed_number();
  run.nex.samples.reserve(static_cast<std::size_t>(config.n_kicks));
  run_kicked(evo.engine(), params, config, [&](int N) {
    const double nex = evo.noncondensed_number();
    run.nex.samples.push_back({N, evo.engine().time(), nex});
    if (N % config.record_stride == 0) run.energy.push_back(make_energy_record(N, evo.engine()));
    if (nex > kNexCutoff || !std::isfinite(nex)) {
      run.nex.exceeded_cutoff = true;
      run.nex.cutoff_kick = N;
      return false;
    }
    return true;
  });
  run.field = evo.field();
  run.modes = evo.modes();
  return run;
}

}  // namespace kickbec
