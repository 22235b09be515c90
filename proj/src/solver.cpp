#include "diffwave/solver.hpp"

#include <algorithm>
#include <boost/math/constants/constants.hpp>
#include <boost/math/interpolators/pchip.hpp>
#include <cmath>
#include <sstream>

#include "diffwave/errors.hpp"

namespace diffwave {

namespace {

constexpr int kGhost = 2;
constexpr double kPi = boost::math::constants::pi<double>();

double minmod(double a, double b) {
  if (a * b <= 0.0) return 0.0;
  return std::abs(a) < std::abs(b) ? a : b;
}

// Time average of e^{-alpha s} over [t, t + dt].
double mean_decay(double alpha, double t, double dt) {
  const double a = 0.5 * alpha * dt;
  const double ratio = a < 1e-8 ? 1.0 + a * a / 6.0 : std::sinh(a) / a;
  return std::exp(-alpha * (t + 0.5 * dt)) * ratio;
}

// e * exp(-1/(1 - s^2)) on (-1, 1); peak 1 at s = 0.
double unit_bump(double s) {
  if (s <= -1.0 || s >= 1.0) return 0.0;
  return std::exp(1.0 - 1.0 / (1.0 - s * s));
}

}  // namespace

double cfl_dt(const SimState& state, double cfl) {
  if (!(cfl > 0.0)) throw ArgumentError("cfl_dt: cfl must be > 0");
  double speed = 0.0;
  for (std::size_t i = 0; i < state.v.size(); ++i) {
    speed = std::max(speed, spectral_radius(state.closure, state.v[i], state.u[i]));
  }
  if (!(speed > 0.0)) throw DegenerateInputError("cfl_dt: all characteristic speeds vanish");
  return cfl * state.grid.dx() / speed;
}

void Stepper::fill_ghosts(const SimState& s, double t_ghost) {
  const int n = s.grid.n_cells;
  const int last = n + kGhost - 1;
  switch (s.boundary) {
    case Boundary::far_field: {
      const double decay = std::exp(-s.closure.alpha() * t_ghost);
      for (int g = 0; g < kGhost; ++g) {
        v_[g] = s.far.v_minus;
        u_[g] = s.far.u_minus * decay;
        v_[last + 1 + g] = s.far.v_plus;
        u_[last + 1 + g] = s.far.u_plus * decay;
      }
      break;
    }
    case Boundary::periodic:
      for (int g = 0; g < kGhost; ++g) {
        v_[g] = v_[n + g];
        u_[g] = u_[n + g];
        v_[last + 1 + g] = v_[kGhost + g];
        u_[last + 1 + g] = u_[kGhost + g];
      }
      break;
    case Boundary::extrapolate:
      for (int g = 1; g <= kGhost; ++g) {
        v_[kGhost - g] = v_[kGhost] - g * (v_[kGhost + 1] - v_[kGhost]);
        u_[kGhost - g] = u_[kGhost] - g * (u_[kGhost + 1] - u_[kGhost]);
        v_[last + g] = v_[last] + g * (v_[last] - v_[last - 1]);
        u_[last + g] = u_[last] + g * (u_[last] - u_[last - 1]);
      }
      break;
  }
}

void Stepper::advance(SimState& s, double dt) {
  const int n = s.grid.n_cells;
  if (static_cast<int>(s.v.size()) != n || static_cast<int>(s.u.size()) != n) {
    throw ArgumentError("step: field sizes do not match the grid");
  }
  if (!(dt > 0.0)) throw ArgumentError("step: dt must be > 0");
  const ModelClosure& c = s.closure;
  const double alpha = c.alpha();
  const double half_damp = std::exp(-0.5 * alpha * dt);
  const double dx = s.grid.dx();
  const double r = dt / dx;
  const std::size_t total = static_cast<std::size_t>(n + 2 * kGhost);

  v_.resize(total);
  u_.resize(total);
  vl_.resize(total);
  vr_.resize(total);
  ul_.resize(total);
  ur_.resize(total);
  fv_.resize(static_cast<std::size_t>(n + 1));
  fu_.resize(static_cast<std::size_t>(n + 1));

  for (int i = 0; i < n; ++i) {
    if (!(s.v[i] > 0.0) || !std::isfinite(s.v[i]) || !std::isfinite(s.u[i])) {
      std::ostringstream msg;
      msg << "step: non-physical input state at cell " << i << " (v = " << s.v[i]
          << ", u = " << s.u[i] << ") at t = " << s.t;
      throw BlowUpError(msg.str(), i, s.t);
    }
    v_[i + kGhost] = s.v[i];
    u_[i + kGhost] = s.u[i] * half_damp;
  }
  fill_ghosts(s, s.t + 0.5 * dt);

  // Hancock predictor on cells 1 .. n+2 (every cell adjacent to a face).
  for (std::size_t j = 1; j + 1 < total; ++j) {
    const double sv = minmod(v_[j] - v_[j - 1], v_[j + 1] - v_[j]);
    const double su = minmod(u_[j] - u_[j - 1], u_[j + 1] - u_[j]);
    const double vL = v_[j] - 0.5 * sv, vR = v_[j] + 0.5 * sv;
    const double uL = u_[j] - 0.5 * su, uR = u_[j] + 0.5 * su;
    // F = (-u, P(v, u)); predictor U +- dt/(2dx) (F(U_L) - F(U_R)).
    const double dfv = -uL + uR;
    const double dfu = c.momentum_flux(vL, uL) - c.momentum_flux(vR, uR);
    vl_[j] = vL + 0.5 * r * dfv;
    vr_[j] = vR + 0.5 * r * dfv;
    ul_[j] = uL + 0.5 * r * dfu;
    ur_[j] = uR + 0.5 * r * dfu;
  }

  // Local Lax-Friedrichs flux at face k between cells k+1 and k+2. The
  // velocity in the volume flux is the time average of the damped velocity
  // over the step, mid-step value times sinh(a)/a; this keeps the interior
  // faces consistent with the prescribed far-field flux.
  const double a_half = 0.5 * alpha * dt;
  const double kappa = a_half < 1e-8 ? 1.0 + a_half * a_half / 6.0 : std::sinh(a_half) / a_half;
  for (int k = 0; k <= n; ++k) {
    const std::size_t a = static_cast<std::size_t>(k + kGhost - 1);
    const std::size_t b = a + 1;
    const double vA = vr_[a], uA = ur_[a], vB = vl_[b], uB = ul_[b];
    const double speed = std::max(spectral_radius(c, vA, uA), spectral_radius(c, vB, uB));
    fv_[k] = -0.5 * kappa * (uA + uB) - 0.5 * speed * (vB - vA);
    fu_[k] = 0.5 * (c.momentum_flux(vA, uA) + c.momentum_flux(vB, uB)) - 0.5 * speed * (uB - uA);
  }

  if (s.boundary == Boundary::far_field) {
    // The far-field velocity is prescribed, so the volume flux through the
    // outer faces is its exact time average over the step.
    const double decay = mean_decay(alpha, s.t, dt);
    fv_[0] = -s.far.u_minus * decay;
    fv_[n] = -s.far.u_plus * decay;
  }
  boundary_flux_ = dt * (fv_[0] - fv_[n]);

  for (int i = 0; i < n; ++i) {
    const double v = s.v[i] - r * (fv_[i + 1] - fv_[i]);
    const double u = (u_[i + kGhost] - r * (fu_[i + 1] - fu_[i])) * half_damp;
    if (!(v > 0.0) || !std::isfinite(v) || !std::isfinite(u)) {
      std::ostringstream msg;
      msg << "step: non-physical state at cell " << i << " (v = " << v << ", u = " << u
          << ") at t = " << s.t + dt;
      throw BlowUpError(msg.str(), i, s.t + dt);
    }
    s.v[i] = v;
    s.u[i] = u;
  }
  s.t += dt;
}

SimState step(const SimState& state, double dt) {
  SimState next = state;
  Stepper stepper;
  stepper.advance(next, dt);
  return next;
}

long advance_to(SimState& state, double t_end, double cfl, Stepper& stepper) {
  long steps = 0;
  while (state.t < t_end) {
    double dt = cfl_dt(state, cfl);
    // Avoid a sliver step at the end.
    if (state.t + dt >= t_end || state.t + 1.5 * dt > t_end) dt = std::min(dt, t_end - state.t);
    stepper.advance(state, dt);
    if (t_end - state.t < 1e-12 * std::max(1.0, t_end)) state.t = t_end;
    ++steps;
  }
  return steps;
}

double Perturbation::shape(double x) const {
  return amplitude * unit_bump((x - center) / width);
}

double ScenarioSpec::wave_strength() const {
  return std::abs(v_plus - v_minus) + std::abs(u_plus - u_minus);
}

double ScenarioSpec::max_speed() const {
  const double lo = std::min(v_minus, v_plus), hi = std::max(v_minus, v_plus);
  const double umax = std::max(std::abs(u_minus), std::abs(u_plus));
  double speed = 0.0;
  for (int k = 0; k <= 16; ++k) {
    const double v = lo + (hi - lo) * k / 16.0;
    for (double u : {-umax, 0.0, umax}) speed = std::max(speed, spectral_radius(closure, v, u));
  }
  return speed;
}

double ScenarioSpec::resolved_x_max() const {
  if (x_max > 0.0) return x_max;
  const double support =
      std::max(std::abs(perturbation.center) + perturbation.width,
               std::abs(mollifier_center) + mollifier_half_width);
  // Ten diffusion lengths of margin on top of the wave-speed bound.
  const double diffusion = 10.0 * std::sqrt(1.0 + end_time);
  return 10.0 * std::sqrt(1.0 + end_time) * max_speed() + support + diffusion;
}

Grid ScenarioSpec::grid() const {
  const double L = resolved_x_max();
  return Grid{-L, L, n_cells};
}

CorrectionField ScenarioSpec::corrections() const {
  return CorrectionField{u_minus, u_plus, alpha(),
                         make_mollifier(mollifier_shape, mollifier_center, mollifier_half_width)};
}

std::vector<double> ScenarioSpec::sample_times() const {
  std::vector<double> times{0.0};
  if (end_time <= 0.0) return times;
  const int n = std::max(n_samples, 2);
  if (end_time <= 1.0) {
    for (int k = 1; k <= n; ++k) times.push_back(end_time * k / n);
    return times;
  }
  const double log_end = std::log(end_time);
  for (int k = 0; k < n; ++k) times.push_back(std::exp(log_end * k / (n - 1)));
  times.back() = end_time;
  return times;
}

SimState build_initial_data(const ScenarioSpec& spec, const WaveProfile& profile,
                            const CorrectionField& corr) {
  if (spec.n_cells < 8) throw ArgumentError("build_initial_data: n_cells must be >= 8");
  if (!(spec.v_minus > 0.0) || !(spec.v_plus > 0.0)) {
    throw ArgumentError("build_initial_data: end states must have v > 0");
  }
  const Grid grid = spec.grid();
  const Perturbation& pert = spec.perturbation;
  if (pert.amplitude != 0.0 || pert.u_amplitude != 0.0) {
    if (!(pert.width > 0.0)) throw ArgumentError("build_initial_data: perturbation width must be > 0");
    if (pert.center - pert.width <= grid.x_left || pert.center + pert.width >= grid.x_right) {
      throw ArgumentError("build_initial_data: perturbation support is not inside the domain");
    }
  }

  SimState s;
  s.grid = grid;
  s.closure = spec.closure;
  s.boundary = Boundary::far_field;
  s.far = spec.far_field();
  s.v.resize(static_cast<std::size_t>(grid.n_cells));
  s.u.resize(static_cast<std::size_t>(grid.n_cells));
  const Interval& vr = spec.closure.v_range();
  const Interval& ur = spec.closure.u_range();
  for (int i = 0; i < grid.n_cells; ++i) {
    const double x = grid.center(i);
    const double bump = unit_bump((x - pert.center) / pert.width);
    const double vhat = corr.vhat_average(x - 0.5 * grid.dx(), x + 0.5 * grid.dx(), 0.0);
    const double v = eval_vbar(profile, x, 0.0) + vhat + pert.amplitude * bump;
    const double u = eval_ubar(profile, x, 0.0) + corr.uhat(x, 0.0) + pert.u_amplitude * bump;
    if (!vr.contains(v) || !ur.contains(u)) {
      std::ostringstream msg;
      msg << "build_initial_data: initial state (v = " << v << ", u = " << u << ") at x = " << x
          << " leaves the admissible box of the " << spec.closure.name() << " closure";
      throw ArgumentError(msg.str());
    }
    s.v[i] = v;
    s.u[i] = u;
  }
  return s;
}

double heat_kernel(double x, double t, double dp_plus) {
  if (!(t > 0.0)) throw DomainError("heat_kernel: t must be > 0");
  if (!(dp_plus < 0.0)) throw DomainError("heat_kernel: p'(v+) must be < 0");
  return std::exp(x * x / (4.0 * dp_plus * t)) / std::sqrt(-4.0 * kPi * dp_plus * t);
}

LagrangianData lagrangian_transform(std::span<const double> x, std::span<const double> rho0,
                                    std::span<const double> u0) {
  const std::size_t n = x.size();
  if (n < 4 || rho0.size() != n || u0.size() != n) {
    throw ArgumentError("lagrangian_transform: need >= 4 points and equal-length fields");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!(rho0[i] > 0.0)) throw DomainError("lagrangian_transform: density must be > 0");
    if (i > 0 && !(x[i] > x[i - 1])) {
      throw ArgumentError("lagrangian_transform: x must be strictly increasing");
    }
  }
  // m(x) = integral_0^x rho by the trapezoid rule, anchored at x = 0.
  std::vector<double> m(n, 0.0);
  for (std::size_t i = 1; i < n; ++i) m[i] = m[i - 1] + 0.5 * (rho0[i] + rho0[i - 1]) * (x[i] - x[i - 1]);
  double m_at_zero = 0.0;
  if (x.front() >= 0.0) {
    m_at_zero = -rho0.front() * x.front();
  } else if (x.back() <= 0.0) {
    m_at_zero = m.back() - rho0.back() * x.back();
  } else {
    const std::size_t k = static_cast<std::size_t>(std::upper_bound(x.begin(), x.end(), 0.0) - x.begin()) - 1;
    const double s = (0.0 - x[k]) / (x[k + 1] - x[k]);
    m_at_zero = m[k] + s * (m[k + 1] - m[k]);
  }
  for (double& mi : m) mi -= m_at_zero;

  using boost::math::interpolators::pchip;
  std::vector<double> vs(n), us(u0.begin(), u0.end()), xs(x.begin(), x.end());
  for (std::size_t i = 0; i < n; ++i) vs[i] = 1.0 / rho0[i];
  auto v_of_m = pchip(std::vector<double>(m), std::move(vs));
  auto u_of_m = pchip(std::vector<double>(m), std::move(us));
  auto x_of_m = pchip(std::vector<double>(m), std::move(xs));

  LagrangianData out;
  out.m.resize(n);
  out.v.resize(n);
  out.u.resize(n);
  out.x.resize(n);
  const double dm = (m.back() - m.front()) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    const double mi = i + 1 == n ? m.back() : m.front() + dm * static_cast<double>(i);
    out.m[i] = mi;
    out.v[i] = v_of_m(mi);
    out.u[i] = u_of_m(mi);
    out.x[i] = x_of_m(mi);
  }
  return out;
}

EulerianData eulerian_from_lagrangian(const LagrangianData& lag, double x_first) {
  const std::size_t n = lag.m.size();
  if (n < 2 || lag.v.size() != n || lag.u.size() != n) {
    throw ArgumentError("eulerian_from_lagrangian: need >= 2 points and equal-length fields");
  }
  EulerianData out;
  out.x.resize(n);
  out.rho.resize(n);
  out.u = lag.u;
  out.x[0] = x_first;
  for (std::size_t i = 0; i < n; ++i) {
    if (!(lag.v[i] > 0.0)) throw DomainError("eulerian_from_lagrangian: v must be > 0");
    out.rho[i] = 1.0 / lag.v[i];
    if (i > 0) out.x[i] = out.x[i - 1] + 0.5 * (lag.v[i] + lag.v[i - 1]) * (lag.m[i] - lag.m[i - 1]);
  }
  return out;
}

}  // namespace diffwave
