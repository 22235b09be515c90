#pragma once

#include <array>
#include <vector>

#include "diffwave/closures.hpp"

namespace diffwave {

struct ProfileOptions {
  /// Half-width of the truncated similarity domain. Zero selects
  /// 12 * max(1, sqrt(D)) / sqrt(alpha), D = max |p'| on the end-state range.
  double xi_max = 0.0;
  int n_cells = 8192;
  /// Max-norm tolerance on the discrete residual of the Newton solve.
  double tol = 1.0e-10;
  int max_iterations = 60;
  /// Combine the n and 2n solutions by Richardson extrapolation.
  bool extrapolate = true;

  bool operator==(const ProfileOptions&) const = default;
};

/// Self-similar profile phi(xi) of the Darcy-limit equation
/// v_t = -(1/alpha) p(v)_xx connecting v_minus to v_plus, sampled on a
/// uniform grid together with its first four derivatives.
///
/// In the far tails, where |phi'| drops below 1e-6 |v+ - v-|, phi' is
/// rebuilt from the integrated form of the ODE so that the Gaussian tails
/// keep full relative precision; `tail_deficit` stores |phi - v_end| with
/// the same precision.
struct WaveProfile {
  std::vector<double> xi;
  std::vector<double> phi;
  std::vector<double> dphi;
  std::vector<double> d2phi;
  std::vector<double> d3phi;
  std::vector<double> d4phi;
  std::vector<double> tail_deficit;
  double v_minus = 1.0;
  double v_plus = 1.0;
  double alpha = 1.0;
  ModelClosure closure = ModelClosure::m1(1.0);
  /// Max-norm discrete residual of the final Newton iterate(s).
  double newton_residual = 0.0;
  int newton_iterations = 0;

  bool is_constant() const { return v_minus == v_plus; }
  double xi_max() const { return xi.back(); }
  double spacing() const { return xi[1] - xi[0]; }

  /// (phi, phi', phi'', phi''', phi'''') at an arbitrary xi. Outside the
  /// grid the end states with zero derivatives are returned.
  std::array<double, 5> derivatives_at(double xi_value) const;
};

WaveProfile solve_profile(const ModelClosure& closure, double v_minus, double v_plus,
                          double alpha, const ProfileOptions& options = {});

/// Relative mismatch of phi'(xi1) against the integrated flux relation
/// anchored at xi0. Zero for a constant profile or xi0 == xi1.
double flux_relation_check(const WaveProfile& profile, double xi0, double xi1);

/// Diffusion wave v(x, t) = phi(x / sqrt(1 + t)) and its mixed partials
/// d^k/dx^k d^j/dt^j for k + j <= 4, j <= 3.
double eval_vbar(const WaveProfile& profile, double x, double t, int dx_order = 0,
                 int dt_order = 0);

/// Darcy velocity u = -p(v)_x / alpha.
double eval_ubar(const WaveProfile& profile, double x, double t);

/// d/dt of the Darcy velocity, -p(v)_xt / alpha.
double eval_ubar_t(const WaveProfile& profile, double x, double t);

/// p(v)_xt = p''(v) v_x v_t + p'(v) v_xt.
double eval_pressure_xt(const WaveProfile& profile, double x, double t);

struct TailFit {
  /// Gaussian rate c (smaller of the two sides).
  double c_decay = 0.0;
  /// C in C |v+ - v-| |xi|^m exp(-c xi^2) on the side that sets c_decay.
  double prefactor = 0.0;
  /// Polynomial power m on that side.
  double power = 0.0;
  double c_left = 0.0;
  double c_right = 0.0;
  double max_rel_residual = 0.0;
};

/// Least-squares fit of log(|phi - v_end| + sum_k |phi^(k)|) against
/// (1, xi^2, log|xi|) on |xi| in [xi_max/2, 3 xi_max/4], each side separately.
TailFit verify_gaussian_tail(const WaveProfile& profile);

}  // namespace diffwave
