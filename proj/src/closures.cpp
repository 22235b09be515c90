#include "diffwave/closures.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "diffwave/errors.hpp"

namespace diffwave {

namespace {

constexpr double kBigRange = 1.0e6;

// sqrt(4 - 3u^2), the radical shared by g and the Eddington factor.
double m1_radical(double u) { return std::sqrt(4.0 - 3.0 * u * u); }

}  // namespace

ModelClosure ModelClosure::m1(double sigma) {
  if (!(sigma > 0.0)) throw ArgumentError("m1 closure: sigma must be > 0");
  return ModelClosure(Kind::m1, "m1", sigma, 0.0, {0.05, 20.0}, {-0.99, 0.99});
}

ModelClosure ModelClosure::gamma_law(double gamma, double alpha) {
  if (!(gamma >= 1.0)) throw ArgumentError("gamma-law closure: gamma must be >= 1");
  if (!(alpha > 0.0)) throw ArgumentError("gamma-law closure: alpha must be > 0");
  return ModelClosure(Kind::gamma_law, "gamma_law", alpha, gamma, {0.05, 20.0},
                      {-kBigRange, kBigRange});
}

ModelClosure ModelClosure::linear(double slope, double alpha) {
  if (!(slope > 0.0)) throw ArgumentError("linear closure: slope must be > 0");
  if (!(alpha > 0.0)) throw ArgumentError("linear closure: alpha must be > 0");
  return ModelClosure(Kind::linear, "linear", alpha, slope, {1.0e-6, kBigRange},
                      {-kBigRange, kBigRange});
}

ModelClosure ModelClosure::with_ranges(Interval v_range, Interval u_range) const {
  ModelClosure c = *this;
  c.v_range_ = v_range;
  c.u_range_ = u_range;
  return c;
}

double ModelClosure::p(double v) const {
  switch (kind_) {
    case Kind::m1: return 1.0 / (3.0 * v);
    case Kind::gamma_law: return std::pow(v, -param_);
    case Kind::linear: return -param_ * v;
  }
  return 0.0;
}

double ModelClosure::dp(double v) const {
  switch (kind_) {
    case Kind::m1: return -1.0 / (3.0 * v * v);
    case Kind::gamma_law: return -param_ * std::pow(v, -param_ - 1.0);
    case Kind::linear: return -param_;
  }
  return 0.0;
}

double ModelClosure::d2p(double v) const {
  switch (kind_) {
    case Kind::m1: return 2.0 / (3.0 * v * v * v);
    case Kind::gamma_law: return param_ * (param_ + 1.0) * std::pow(v, -param_ - 2.0);
    case Kind::linear: return 0.0;
  }
  return 0.0;
}

double ModelClosure::d3p(double v) const {
  switch (kind_) {
    case Kind::m1: return -2.0 / (v * v * v * v);
    case Kind::gamma_law:
      return -param_ * (param_ + 1.0) * (param_ + 2.0) * std::pow(v, -param_ - 3.0);
    case Kind::linear: return 0.0;
  }
  return 0.0;
}

double ModelClosure::d4p(double v) const {
  switch (kind_) {
    case Kind::m1: return 8.0 / (v * v * v * v * v);
    case Kind::gamma_law:
      return param_ * (param_ + 1.0) * (param_ + 2.0) * (param_ + 3.0) *
             std::pow(v, -param_ - 4.0);
    case Kind::linear: return 0.0;
  }
  return 0.0;
}

double ModelClosure::g(double u) const {
  if (kind_ != Kind::m1) return 0.0;
  const double s = m1_radical(u);
  return u * u * s / (2.0 + s);
}

// With s = sqrt(4 - 3u^2) one has s/(2+s) = (2s - s^2)/(3u^2), so
// g = (2s - 4 + 3u^2)/3 and the derivatives below follow from s' = -3u/s.
double ModelClosure::dg(double u) const {
  if (kind_ != Kind::m1) return 0.0;
  const double s = m1_radical(u);
  return 2.0 * u * (1.0 - 1.0 / s);
}

double ModelClosure::d2g(double u) const {
  if (kind_ != Kind::m1) return 0.0;
  const double s = m1_radical(u);
  return 2.0 * (1.0 - 1.0 / s) - 6.0 * u * u / (s * s * s);
}

double ModelClosure::f(double v) const {
  if (kind_ != Kind::m1) return 1.0;
  return 1.0 / v;
}

double ModelClosure::df(double v) const {
  if (kind_ != Kind::m1) return 0.0;
  return -1.0 / (v * v);
}

ModelClosure m1_closure(double sigma) { return ModelClosure::m1(sigma); }

ModelClosure gamma_law_closure(double gamma, double alpha) {
  return ModelClosure::gamma_law(gamma, alpha);
}

ModelClosure linear_closure(double slope, double alpha) {
  return ModelClosure::linear(slope, alpha);
}

double eddington_factor(double u) {
  if (!(std::abs(u) <= 1.0)) {
    std::ostringstream msg;
    msg << "eddington_factor: |u| must be <= 1, got u = " << u;
    throw DomainError(msg.str());
  }
  return (3.0 + 4.0 * u * u) / (5.0 + 2.0 * m1_radical(u));
}

double radiative_pressure_1d(double rho, double u) {
  if (!(rho >= 0.0)) throw DomainError("radiative_pressure_1d: rho must be >= 0");
  // In one dimension u (x) u / |u|^2 = 1, so the tensor collapses to
  // ((1 - chi) + (3 chi - 1)) rho / 2 = chi rho.
  return eddington_factor(u) * rho;
}

double characteristic_discriminant(const ModelClosure& c, double v, double u) {
  const double b = c.dg(u) * c.f(v);
  const double q = c.dp(v) - c.g(u) * c.df(v);
  return b * b - 4.0 * q;
}

std::pair<double, double> characteristic_speeds(const ModelClosure& c, double v,
                                                double u) {
  // lambda^2 + g'(u) f(v) lambda + p'(v) - g(u) f'(v) = 0
  const double b = c.dg(u) * c.f(v);
  const double q = c.dp(v) - c.g(u) * c.df(v);
  const double disc = b * b - 4.0 * q;
  if (!(disc >= 0.0)) {
    std::ostringstream msg;
    msg << "loss of hyperbolicity at state (v, u) = (" << v << ", " << u
        << "): discriminant " << disc;
    throw HyperbolicityError(msg.str(), v, u);
  }
  const double r = std::sqrt(disc);
  return {0.5 * (-b - r), 0.5 * (-b + r)};
}

double spectral_radius(const ModelClosure& c, double v, double u) {
  const auto [lm, lp] = characteristic_speeds(c, v, u);
  return std::max(std::abs(lm), std::abs(lp));
}

std::pair<Interval, Interval> assumption_box(double v_minus, double v_plus,
                                             double u_minus, double u_plus) {
  const double umax = std::max(std::abs(u_minus), std::abs(u_plus));
  return {Interval{std::min(v_minus, v_plus), std::max(v_minus, v_plus)},
          Interval{-umax, umax}};
}

AssumptionReport check_assumptions(const ModelClosure& c, Interval v_box,
                                   Interval u_box, int n_samples) {
  if (v_box.lo > v_box.hi || u_box.lo > u_box.hi) {
    throw ArgumentError("check_assumptions: empty box");
  }
  if (n_samples < 2) throw ArgumentError("check_assumptions: n_samples must be >= 2");
  if (!c.v_range().contains(v_box) || !c.u_range().contains(u_box)) {
    throw ArgumentError("check_assumptions: box outside the admissible state range");
  }

  auto sample = [n_samples](const Interval& box, int i) {
    if (i == n_samples - 1) return box.hi;
    return box.lo + box.width() * static_cast<double>(i) / (n_samples - 1);
  };

  AssumptionReport r;
  r.min_discriminant = std::numeric_limits<double>::infinity();
  r.min_gfprime_minus_pprime = std::numeric_limits<double>::infinity();
  r.max_dp = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < n_samples; ++i) {
    const double v = sample(v_box, i);
    const double dpv = c.dp(v);
    r.max_dp = std::max(r.max_dp, dpv);
    for (int j = 0; j < n_samples; ++j) {
      const double u = sample(u_box, j);
      r.min_gfprime_minus_pprime =
          std::min(r.min_gfprime_minus_pprime, c.g(u) * c.df(v) - dpv);
      r.min_discriminant = std::min(r.min_discriminant, characteristic_discriminant(c, v, u));
    }
  }
  r.hyperbolic_ok = r.min_discriminant > 0.0;
  r.sign_ok = r.min_gfprime_minus_pprime > 0.0;
  r.smoothness_ok = r.max_dp < 0.0 && c.g(0.0) == 0.0 && c.dg(0.0) == 0.0;
  return r;
}

}  // namespace diffwave
