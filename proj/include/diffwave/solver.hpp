#pragma once

#include <span>
#include <vector>

#include "diffwave/closures.hpp"
#include "diffwave/corrections.hpp"
#include "diffwave/diffusion_wave.hpp"
#include "diffwave/grid.hpp"

namespace diffwave {

enum class Boundary {
  /// Ghost cells hold (v-, u- e^{-alpha t}) and (v+, u+ e^{-alpha t}).
  far_field,
  periodic,
  /// Linear extrapolation of the two outermost cells.
  extrapolate,
};

struct FarField {
  double v_minus = 1.0;
  double v_plus = 1.0;
  double u_minus = 0.0;
  double u_plus = 0.0;
};

/// Cell averages of (v, u) in Lagrangian mass coordinates.
struct SimState {
  Grid grid;
  std::vector<double> v;
  std::vector<double> u;
  double t = 0.0;
  ModelClosure closure = ModelClosure::m1(1.0);
  Boundary boundary = Boundary::far_field;
  FarField far;
};

/// cfl * dx / max_i spectral_radius(v_i, u_i).
double cfl_dt(const SimState& state, double cfl);

/// Strang-split finite-volume update: exact half-step damping, one
/// MUSCL-Hancock step (minmod slopes, local Lax-Friedrichs flux) for the flux
/// (-u, p(v) - g(u) f(v)), exact half-step damping. Keeps its scratch
/// buffers between calls.
class Stepper {
 public:
  /// Advances `state` in place by dt. Throws BlowUpError on NaN or v <= 0.
  void advance(SimState& state, double dt);

  /// Net volume flux u(right face) - u(left face) integrated over the last
  /// step, i.e. the change of sum(v) dx that boundaries allow.
  double last_boundary_flux() const { return boundary_flux_; }

 private:
  void fill_ghosts(const SimState& s, double t_ghost);

  std::vector<double> v_, u_;            // with two ghost cells per side
  std::vector<double> vl_, vr_, ul_, ur_;  // predicted face states per cell
  std::vector<double> fv_, fu_;          // face fluxes
  double boundary_flux_ = 0.0;
};

/// Value-semantics wrapper around Stepper::advance.
SimState step(const SimState& state, double dt);

/// Steps until state.t == t_end, with dt = min(cfl_dt, t_end - t).
/// Returns the number of steps taken.
long advance_to(SimState& state, double t_end, double cfl, Stepper& stepper);

struct Perturbation {
  /// Peak of the bump added to v.
  double amplitude = 0.01;
  /// Peak of the bump added to u.
  double u_amplitude = 0.0;
  double center = 0.0;
  /// Half-width of the support.
  double width = 2.0;

  /// amplitude * e * exp(-1/(1 - s^2)), s = (x - center)/width; peak = amplitude.
  double shape(double x) const;
  bool operator==(const Perturbation&) const = default;
};

struct ScenarioSpec {
  ModelClosure closure = ModelClosure::m1(1.0);
  double v_minus = 1.0;
  double v_plus = 1.1;
  double u_minus = 0.0;
  double u_plus = 0.0;
  Perturbation perturbation;
  MollifierShape mollifier_shape = MollifierShape::bump;
  double mollifier_center = 0.0;
  double mollifier_half_width = 1.0;
  int n_cells = 4096;
  /// Half-width of the domain; zero selects it from end_time and the speeds.
  double x_max = 0.0;
  double end_time = 500.0;
  double cfl = 0.45;
  ProfileOptions profile;
  /// Number of log-spaced sample times in [1, end_time] (plus t = 0).
  int n_samples = 80;
  /// Wall-clock limit in seconds for run(); zero means unlimited.
  double wall_clock_budget = 0.0;

  double alpha() const { return closure.alpha(); }
  /// |v+ - v-| + |u+ - u-|.
  double wave_strength() const;
  /// Largest characteristic speed over the end-state box.
  double max_speed() const;
  /// L >= 10 sqrt(1 + end_time) max|lambda| plus the perturbation support.
  double resolved_x_max() const;
  Grid grid() const;
  CorrectionField corrections() const;
  std::vector<double> sample_times() const;
  FarField far_field() const { return {v_minus, v_plus, u_minus, u_plus}; }

  bool operator==(const ScenarioSpec&) const = default;
};

/// v0 = vbar(x,0) + vhat(x,0) + bump, u0 = ubar(x,0) + uhat(x,0) + u-bump,
/// sampled at the cell centres (vhat as cell averages). Throws ArgumentError
/// if the data leaves the admissible box or the perturbation is not inside
/// the domain.
SimState build_initial_data(const ScenarioSpec& spec, const WaveProfile& profile,
                            const CorrectionField& corr);

/// G(x, t) = exp(x^2 / (4 p'(v+) t)) / sqrt(-4 pi p'(v+) t).
double heat_kernel(double x, double t, double dp_plus);

struct LagrangianData {
  std::vector<double> m;  ///< uniform mass coordinates
  std::vector<double> v;  ///< specific volume 1/rho at m
  std::vector<double> u;
  std::vector<double> x;  ///< Eulerian position of each mass coordinate
};

/// Mass coordinate m(x) = integral_0^x rho0, v0 = 1/rho0, resampled onto a
/// uniform m grid (same point count) by monotone cubic interpolation.
LagrangianData lagrangian_transform(std::span<const double> x, std::span<const double> rho0,
                                    std::span<const double> u0);

/// Inverse map: x(m) = x_first + integral v dm and rho = 1/v.
struct EulerianData {
  std::vector<double> x;
  std::vector<double> rho;
  std::vector<double> u;
};
EulerianData eulerian_from_lagrangian(const LagrangianData& lag, double x_first);

}  // namespace diffwave
