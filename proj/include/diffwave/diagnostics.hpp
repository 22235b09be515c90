#pragma once

#include <span>
#include <string>
#include <vector>

#include "diffwave/corrections.hpp"
#include "diffwave/diffusion_wave.hpp"
#include "diffwave/solver.hpp"

namespace diffwave {

/// Anti-derivative perturbation V and velocity perturbation z on the cell
/// centres of a snapshot, with spatial derivatives.
struct PerturbationFields {
  double t = 0.0;
  double x0 = 0.0;
  double dx = 1.0;
  std::vector<double> x;
  /// V(x) = integral from x_left of v - vbar(. + x0, t) - vhat(., t), with
  /// vhat as cell averages.
  std::vector<double> V, Vx, Vxx, Vxxx;
  /// z = u - ubar(. + x0, t) - uhat(., t).
  std::vector<double> z, zx, zxx;
};

/// V by the cumulative trapezoid rule (V = 0 at the first centre); Vx is the
/// integrand itself, higher derivatives use fourth-order stencils.
PerturbationFields build_fields(const SimState& state, const WaveProfile& profile, double x0,
                                const CorrectionField& corr);

/// integral of v - vbar(. + x0) - vhat over the domain, i.e. V at the right end.
double conserved_mass(const PerturbationFields& fields);

/// Column order of series.csv after t.
inline const std::vector<std::string>& norm_columns() {
  static const std::vector<std::string> cols{"l2_V",  "l2_Vx", "l2_Vxx", "l2_Vxxx",
                                             "l2_z",  "l2_zx", "l2_zxx", "linf_V",
                                             "linf_z", "mass_residual"};
  return cols;
}

struct NormRecord {
  double t = 0.0;
  double l2_V = 0.0, l2_Vx = 0.0, l2_Vxx = 0.0, l2_Vxxx = 0.0;
  double l2_z = 0.0, l2_zx = 0.0, l2_zxx = 0.0;
  double linf_V = 0.0, linf_z = 0.0;
  double mass_residual = 0.0;

  /// Values in norm_columns() order.
  std::vector<double> values() const;
  /// Value of a column by name; throws ArgumentError for unknown names.
  double get(const std::string& column) const;
  static NormRecord from_values(double t, std::span<const double> values);
};

/// L2 norms by the trapezoid rule, sup norms by max.
NormRecord field_norms(const PerturbationFields& fields);

/// L2 norms of z_t, z_xt and z_tt, with the time derivatives of the state
/// taken from the equations of motion (no time differencing).
struct TimeDerivativeNorms {
  double t = 0.0;
  double l2_zt = 0.0, l2_zxt = 0.0, l2_ztt = 0.0;
};
TimeDerivativeNorms time_derivative_norms(const SimState& state, const WaveProfile& profile,
                                          double x0, const CorrectionField& corr);

struct DiagnosticsSeries {
  std::vector<NormRecord> records;
  std::vector<TimeDerivativeNorms> time_records;
  double x0 = 0.0;
  double wave_strength = 0.0;
  /// Largest |u| seen at a sample time.
  double max_abs_u = 0.0;
  /// Smallest v seen at a sample time.
  double min_v = 0.0;
  long steps = 0;
  /// False when the wall-clock budget ran out before end_time.
  bool complete = true;

  std::vector<double> times() const;
  std::vector<double> column(const std::string& name) const;
};

struct RateFit {
  double exponent = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  double t_lo = 0.0, t_hi = 0.0;
  double target_exponent = 0.0;
  double tolerance = 0.0;
  double r_squared_min = 0.98;
  /// One-sided test: exponent <= target + tolerance.
  bool upper_bound = false;
  int n_points = 0;
  bool pass = false;
};

/// Least squares of log(value) against log(1 + t) over samples with t in
/// [t_lo, t_hi]. Needs at least 8 samples; FitError on non-positive values.
RateFit fit_decay_rate(std::span<const double> t, std::span<const double> values, double t_lo,
                       double t_hi, double target, double tolerance, bool upper_bound = false,
                       double r_squared_min = 0.98);

struct ResidualReport {
  std::vector<double> x;
  std::vector<double> F1, F2;
  /// V_tt + (p'(vbar) V_x)_x + alpha V_t - F1 - F2.
  std::vector<double> residual;
  double max_abs_residual = 0.0;
  double max_abs_F2 = 0.0;
};

/// Residual of the V equation on three snapshots a uniform dt apart.
ResidualReport residual_check(const SimState& prev, const SimState& cur, const SimState& next,
                              const WaveProfile& profile, double x0, const CorrectionField& corr);

enum class Targets { improved, base };
Targets parse_targets(const std::string& name);

struct TheoremRow {
  std::string quantity;
  RateFit fit;
  /// Rows that decide the overall verdict.
  bool gated = true;
};

struct TheoremReport {
  Targets targets = Targets::improved;
  std::vector<TheoremRow> rows;
  bool pass = false;
};

/// Decay fits of every norm in the series against the decay theorem:
/// ||d^k V|| ~ (1+t)^(-k/2) and ||d^k z|| ~ (1+t)^(-k/2-1), each improved by
/// -1/4 when V0 + z0/alpha is integrable. Improved targets for V, Vx and z
/// are two-sided; everything else is an upper bound.
TheoremReport theorem_report(const DiagnosticsSeries& series, Targets targets, double t_lo,
                             double t_hi);

}  // namespace diffwave
