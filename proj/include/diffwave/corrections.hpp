#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "diffwave/closures.hpp"
#include "diffwave/diffusion_wave.hpp"
#include "diffwave/grid.hpp"

namespace diffwave {

enum class MollifierShape { bump, cosine };

MollifierShape parse_mollifier_shape(const std::string& name);
std::string to_string(MollifierShape shape);

/// Nonnegative, compactly supported weight m0 with unit integral.
///
/// `bump` is the C-infinity function exp(-1/(1-s^2)); `cosine` is
/// cos^2(pi s / 2), only C^1, kept for checking that the shift does not
/// depend on the mollifier. s = (x - center) / half_width.
class Mollifier {
 public:
  Mollifier(MollifierShape shape, double center, double half_width);

  MollifierShape shape() const { return shape_; }
  double center() const { return center_; }
  double half_width() const { return half_width_; }
  Interval support() const { return {center_ - half_width_, center_ + half_width_}; }
  /// 1 / raw integral.
  double normalization() const { return normalization_; }

  double operator()(double x) const;
  double derivative(double x) const;
  /// M0(x) = integral of m0 from -infinity to x.
  double cumulative(double x) const;

 private:
  double raw(double s) const;
  double raw_derivative(double s) const;

  MollifierShape shape_;
  double center_;
  double half_width_;
  double normalization_;
  // Cumulative table on a uniform grid of the support (shared between copies).
  std::shared_ptr<const std::vector<double>> table_;
};

Mollifier make_mollifier(MollifierShape shape, double center, double half_width);

/// Raw integral of exp(-1/(1-s^2)) over [-1, 1] by adaptive quadrature.
double bump_integral();

/// Exponentially decaying correction pair
///   vhat = (u+ - u-)/(-alpha) e^{-alpha t} m0(x),
///   uhat = e^{-alpha t} [u- + (u+ - u-) M0(x)].
struct CorrectionField {
  double u_minus = 0.0;
  double u_plus = 0.0;
  double alpha = 1.0;
  Mollifier mollifier{MollifierShape::bump, 0.0, 1.0};

  double vhat(double x, double t) const;
  double vhat_x(double x, double t) const;
  double vhat_t(double x, double t) const;
  /// Mean of vhat over [a, b], exact through M0; the cell averages of a grid
  /// telescope to the exact integral of vhat.
  double vhat_average(double a, double b, double t) const;
  double uhat(double x, double t) const;
  double uhat_x(double x, double t) const;
  double uhat_t(double x, double t) const;
};

double eval_vhat(const CorrectionField& corr, double x, double t);
double eval_uhat(const CorrectionField& corr, double x, double t);

/// Shift x0 making the integrated initial perturbation vanish:
///   x0 = (1/(v+ - v-)) * integral [v0 - vbar(x, 0) - vhat(x, 0)] dx,
/// by the trapezoid rule over the cell centres of `grid`, with vhat taken as
/// cell averages.
double compute_shift_x0(const Grid& grid, std::span<const double> v0,
                        const WaveProfile& profile, const CorrectionField& corr);

/// Max over the grid of |vhat_t - uhat_x| and |uhat_t + alpha uhat|.
double verify_correction_system(const CorrectionField& corr, std::span<const double> xs,
                                double t);

}  // namespace diffwave
