#include "diffwave/corrections.hpp"

#include <algorithm>
#include <boost/math/constants/constants.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>

#include "diffwave/errors.hpp"
#include "numerics.hpp"

namespace diffwave {

namespace {

constexpr int kTableIntervals = 4096;
constexpr double kPi = boost::math::constants::pi<double>();

double bump_raw(double s) {
  if (s <= -1.0 || s >= 1.0) return 0.0;
  return std::exp(-1.0 / (1.0 - s * s));
}

}  // namespace

MollifierShape parse_mollifier_shape(const std::string& name) {
  if (name == "bump") return MollifierShape::bump;
  if (name == "cosine") return MollifierShape::cosine;
  throw ArgumentError("unknown mollifier shape '" + name + "' (expected bump or cosine)");
}

std::string to_string(MollifierShape shape) {
  return shape == MollifierShape::bump ? "bump" : "cosine";
}

double bump_integral() {
  static const double value = [] {
    using boost::math::quadrature::gauss_kronrod;
    double err = 0.0;
    return gauss_kronrod<double, 61>::integrate(bump_raw, -1.0, 1.0, 20, 1e-15, &err);
  }();
  return value;
}

Mollifier::Mollifier(MollifierShape shape, double center, double half_width)
    : shape_(shape), center_(center), half_width_(half_width) {
  if (!(half_width > 0.0)) throw ArgumentError("mollifier: half_width must be > 0");
  const double raw_integral = shape == MollifierShape::bump ? bump_integral() : 1.0;
  normalization_ = 1.0 / (raw_integral * half_width);

  // Cumulative integral in the scaled variable s, normalised to end at 1.
  using boost::math::quadrature::gauss_kronrod;
  auto table = std::make_shared<std::vector<double>>(kTableIntervals + 1, 0.0);
  const double hs = 2.0 / kTableIntervals;
  auto f = [this](double s) { return raw(s); };
  for (int k = 0; k < kTableIntervals; ++k) {
    const double a = -1.0 + k * hs;
    (*table)[k + 1] = (*table)[k] + gauss_kronrod<double, 15>::integrate(f, a, a + hs);
  }
  const double total = table->back();
  for (double& v : *table) v /= total;
  table_ = std::move(table);
}

double Mollifier::raw(double s) const {
  if (shape_ == MollifierShape::bump) return bump_raw(s);
  if (s <= -1.0 || s >= 1.0) return 0.0;
  const double c = std::cos(0.5 * kPi * s);
  return c * c;
}

double Mollifier::raw_derivative(double s) const {
  if (s <= -1.0 || s >= 1.0) return 0.0;
  if (shape_ == MollifierShape::bump) {
    const double q = 1.0 - s * s;
    return bump_raw(s) * (-2.0 * s / (q * q));
  }
  return -0.5 * kPi * std::sin(kPi * s);
}

double Mollifier::operator()(double x) const {
  return normalization_ * raw((x - center_) / half_width_);
}

double Mollifier::derivative(double x) const {
  return normalization_ * raw_derivative((x - center_) / half_width_) / half_width_;
}

double Mollifier::cumulative(double x) const {
  const double s = (x - center_) / half_width_;
  if (s <= -1.0) return 0.0;
  if (s >= 1.0) return 1.0;
  const double hs = 2.0 / kTableIntervals;
  const auto& tab = *table_;
  int k = std::min(static_cast<int>((s + 1.0) / hs), kTableIntervals - 1);
  const double a = -1.0 + k * hs;
  const double r = (s - a) / hs;
  // dM/ds = raw(s) * half_width * normalization
  const double scale = hs * half_width_ * normalization_;
  return detail::hermite(r, tab[k], scale * raw(a), tab[k + 1], scale * raw(a + hs));
}

Mollifier make_mollifier(MollifierShape shape, double center, double half_width) {
  return Mollifier(shape, center, half_width);
}

double CorrectionField::vhat(double x, double t) const {
  return (u_plus - u_minus) / (-alpha) * std::exp(-alpha * t) * mollifier(x);
}

double CorrectionField::vhat_x(double x, double t) const {
  return (u_plus - u_minus) / (-alpha) * std::exp(-alpha * t) * mollifier.derivative(x);
}

double CorrectionField::vhat_t(double x, double t) const {
  return (u_plus - u_minus) * std::exp(-alpha * t) * mollifier(x);
}

double CorrectionField::vhat_average(double a, double b, double t) const {
  if (u_plus == u_minus) return 0.0;
  if (!(b > a)) return vhat(a, t);
  const double mass = mollifier.cumulative(b) - mollifier.cumulative(a);
  return (u_plus - u_minus) / (-alpha) * std::exp(-alpha * t) * mass / (b - a);
}

double CorrectionField::uhat(double x, double t) const {
  return std::exp(-alpha * t) * (u_minus + (u_plus - u_minus) * mollifier.cumulative(x));
}

double CorrectionField::uhat_x(double x, double t) const {
  return std::exp(-alpha * t) * (u_plus - u_minus) * mollifier(x);
}

double CorrectionField::uhat_t(double x, double t) const {
  return -alpha * std::exp(-alpha * t) *
         (u_minus + (u_plus - u_minus) * mollifier.cumulative(x));
}

double eval_vhat(const CorrectionField& corr, double x, double t) { return corr.vhat(x, t); }

double eval_uhat(const CorrectionField& corr, double x, double t) { return corr.uhat(x, t); }

std::vector<double> Grid::centers() const {
  std::vector<double> xs(static_cast<std::size_t>(n_cells));
  for (int i = 0; i < n_cells; ++i) xs[i] = center(i);
  return xs;
}

double compute_shift_x0(const Grid& grid, std::span<const double> v0,
                        const WaveProfile& profile, const CorrectionField& corr) {
  if (profile.v_plus == profile.v_minus) {
    throw ArgumentError(
        "compute_shift_x0: v+ == v- makes the shift undefined; the constant-state "
        "scenario needs no shift");
  }
  if (v0.size() != static_cast<std::size_t>(grid.n_cells)) {
    throw ArgumentError("compute_shift_x0: field size does not match the grid");
  }
  std::vector<double> w(v0.size());
  for (int i = 0; i < grid.n_cells; ++i) {
    const double x = grid.center(i);
    const double h = 0.5 * grid.dx();
    w[i] = v0[i] - eval_vbar(profile, x, 0.0) - corr.vhat_average(x - h, x + h, 0.0);
  }
  return detail::trapezoid(w, grid.dx()) / (profile.v_plus - profile.v_minus);
}

double verify_correction_system(const CorrectionField& corr, std::span<const double> xs,
                                double t) {
  double worst = 0.0;
  for (double x : xs) {
    worst = std::max(worst, std::abs(corr.vhat_t(x, t) - corr.uhat_x(x, t)));
    worst = std::max(worst, std::abs(corr.uhat_t(x, t) + corr.alpha * corr.uhat(x, t)));
  }
  return worst;
}

}  // namespace diffwave
