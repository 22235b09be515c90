#pragma once

#include <string>
#include <utility>

namespace diffwave {

/// Closed interval [lo, hi].
struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  bool contains(double x) const { return x >= lo && x <= hi; }
  bool contains(const Interval& other) const {
    return other.lo >= lo && other.hi <= hi;
  }
  double width() const { return hi - lo; }
  bool operator==(const Interval&) const = default;
};

/// Constitutive functions of the damped system
///
///   v_t - u_x = 0,
///   u_t + p(v)_x = -alpha u + (g(u) f(v))_x,
///
/// together with the damping constant and the admissible state box.
/// Instances are immutable values; every evaluator is a pure function.
class ModelClosure {
 public:
  enum class Kind { m1, gamma_law, linear };

  static ModelClosure m1(double sigma);
  static ModelClosure gamma_law(double gamma, double alpha);
  static ModelClosure linear(double slope, double alpha);

  Kind kind() const { return kind_; }
  const std::string& name() const { return name_; }
  double alpha() const { return alpha_; }
  /// gamma for the gamma-law, slope for the linear pressure, unused for M1.
  double parameter() const { return param_; }
  const Interval& v_range() const { return v_range_; }
  const Interval& u_range() const { return u_range_; }
  /// True when g vanishes identically.
  bool g_vanishes() const { return kind_ != Kind::m1; }

  double p(double v) const;
  double dp(double v) const;
  double d2p(double v) const;
  double d3p(double v) const;
  double d4p(double v) const;

  double g(double u) const;
  double dg(double u) const;
  double d2g(double u) const;

  double f(double v) const;
  double df(double v) const;

  /// Second flux component p(v) - g(u) f(v).
  double momentum_flux(double v, double u) const { return p(v) - g(u) * f(v); }

  /// Copy with different admissible ranges.
  ModelClosure with_ranges(Interval v_range, Interval u_range) const;

  bool operator==(const ModelClosure& o) const {
    return kind_ == o.kind_ && alpha_ == o.alpha_ && param_ == o.param_ &&
           v_range_ == o.v_range_ && u_range_ == o.u_range_;
  }

 private:
  ModelClosure(Kind kind, std::string name, double alpha, double param,
               Interval v_range, Interval u_range)
      : kind_(kind), name_(std::move(name)), alpha_(alpha), param_(param),
        v_range_(v_range), u_range_(u_range) {}

  Kind kind_;
  std::string name_;
  double alpha_;
  double param_;
  Interval v_range_;
  Interval u_range_;
};

/// M1 closure: p = 1/(3v), g = u^2 s/(2+s) with s = sqrt(4-3u^2), f = 1/v,
/// alpha = sigma. Default box v in [0.05, 20], u in [-0.99, 0.99].
ModelClosure m1_closure(double sigma);

/// Isentropic gas with linear damping: p = v^-gamma, g = 0, f = 1.
ModelClosure gamma_law_closure(double gamma, double alpha);

/// p(v) = -slope * v, g = 0, f = 1. Used for the closed-form erf profile.
ModelClosure linear_closure(double slope, double alpha);

/// Eddington factor chi(u) = (3 + 4u^2) / (5 + 2 sqrt(4 - 3u^2)), |u| <= 1.
double eddington_factor(double u);

/// One-dimensional radiative pressure chi(u) * rho.
double radiative_pressure_1d(double rho, double u);

struct AssumptionReport {
  bool hyperbolic_ok = false;
  bool sign_ok = false;
  bool smoothness_ok = false;
  double min_discriminant = 0.0;
  double min_gfprime_minus_pprime = 0.0;
  /// Largest sampled p'(v); must be negative.
  double max_dp = 0.0;
};

/// Dense-sampling check of the structural assumptions on a state box.
/// The minima are sampled, not rigorous bounds.
AssumptionReport check_assumptions(const ModelClosure& c, Interval v_box,
                                   Interval u_box, int n_samples = 256);

/// Box on which the sign condition is checked for end states v-/+, u-/+:
/// v between the end states, |u| <= max(|u-|, |u+|).
std::pair<Interval, Interval> assumption_box(double v_minus, double v_plus,
                                             double u_minus, double u_plus);

/// Discriminant (g'(u) f(v))^2 - 4 (p'(v) - g(u) f'(v)) of the flux Jacobian.
double characteristic_discriminant(const ModelClosure& c, double v, double u);

/// Ordered eigenvalues (lambda_minus, lambda_plus) of the flux Jacobian.
/// Throws HyperbolicityError if they are complex.
std::pair<double, double> characteristic_speeds(const ModelClosure& c, double v,
                                                double u);

/// max(|lambda_-|, |lambda_+|).
double spectral_radius(const ModelClosure& c, double v, double u);

}  // namespace diffwave
