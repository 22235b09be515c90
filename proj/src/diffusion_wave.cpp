#include "diffwave/diffusion_wave.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "diffwave/errors.hpp"
#include "numerics.hpp"

namespace diffwave {

namespace {

// Relative size of |phi'| below which the tails are rebuilt from the
// integrated flux relation instead of finite differences.
constexpr double kTailThreshold = 1.0e-6;

double default_xi_max(const ModelClosure& c, double v_minus, double v_plus, double alpha) {
  double diffusivity = 0.0;
  const double lo = std::min(v_minus, v_plus);
  const double hi = std::max(v_minus, v_plus);
  for (int i = 0; i <= 32; ++i) {
    const double v = lo + (hi - lo) * i / 32.0;
    diffusivity = std::max(diffusivity, -c.dp(v));
  }
  return 12.0 * std::max(1.0, std::sqrt(diffusivity)) / std::sqrt(alpha);
}

struct NewtonResult {
  std::vector<double> phi;
  double residual = 0.0;
  int iterations = 0;
};

// Residual of the conservative stencil for (p(phi))'' = (alpha/2) xi phi'.
double stencil_residual(const ModelClosure& c, double alpha, double xi0, double h,
                        const std::vector<double>& phi, std::vector<double>& res) {
  const std::size_t n = phi.size() - 1;
  double worst = 0.0;
  double p_prev = c.p(phi[0]);
  double p_cur = c.p(phi[1]);
  for (std::size_t i = 1; i < n; ++i) {
    const double p_next = c.p(phi[i + 1]);
    const double xi = xi0 + h * static_cast<double>(i);
    res[i] = (p_next - 2.0 * p_cur + p_prev) / (h * h) -
             0.5 * alpha * xi * (phi[i + 1] - phi[i - 1]) / (2.0 * h);
    worst = std::max(worst, std::abs(res[i]));
    p_prev = p_cur;
    p_cur = p_next;
  }
  return worst;
}

NewtonResult newton_solve(const ModelClosure& c, double v_minus, double v_plus,
                          double alpha, double xi_max, int n_cells,
                          std::vector<double> guess, const ProfileOptions& opt) {
  const std::size_t n = static_cast<std::size_t>(n_cells);
  const double h = 2.0 * xi_max / n_cells;
  const double xi0 = -xi_max;
  const double lo = std::min(v_minus, v_plus);
  const double hi = std::max(v_minus, v_plus);

  NewtonResult out;
  out.phi = std::move(guess);
  out.phi.front() = v_minus;
  out.phi.back() = v_plus;

  std::vector<double> res(n + 1, 0.0), trial_res(n + 1, 0.0);
  std::vector<double> sub(n - 1), diag(n - 1), sup(n - 1), rhs(n - 1);
  std::vector<double> trial(n + 1);

  double norm = stencil_residual(c, alpha, xi0, h, out.phi, res);
  for (int it = 0; it < opt.max_iterations; ++it) {
    if (norm <= opt.tol) {
      out.residual = norm;
      out.iterations = it;
      return out;
    }
    for (std::size_t i = 1; i < n; ++i) {
      const double xi = xi0 + h * static_cast<double>(i);
      const double adv = 0.25 * alpha * xi / h;
      sub[i - 1] = c.dp(out.phi[i - 1]) / (h * h) + adv;
      diag[i - 1] = -2.0 * c.dp(out.phi[i]) / (h * h);
      sup[i - 1] = c.dp(out.phi[i + 1]) / (h * h) - adv;
      rhs[i - 1] = -res[i];
    }
    detail::solve_tridiagonal(sub, diag, sup, rhs);

    double max_step = 0.0;
    for (double d : rhs) max_step = std::max(max_step, std::abs(d));

    // Damped update: halve until the residual decreases and phi stays
    // between the end states.
    double lambda = 1.0;
    double trial_norm = std::numeric_limits<double>::infinity();
    for (int k = 0; k < 30; ++k) {
      trial = out.phi;
      bool inside = true;
      for (std::size_t i = 1; i < n; ++i) {
        trial[i] += lambda * rhs[i - 1];
        if (trial[i] < lo - 1e-12 * hi || trial[i] > hi + 1e-12 * hi) inside = false;
      }
      if (inside) {
        trial_norm = stencil_residual(c, alpha, xi0, h, trial, trial_res);
        if (trial_norm < (1.0 - 0.25 * lambda) * norm || lambda * max_step < 1e-15 * hi) {
          break;
        }
      }
      lambda *= 0.5;
    }
    if (!std::isfinite(trial_norm)) {
      throw SolverError("profile Newton iteration left the admissible range", norm);
    }
    out.phi.swap(trial);
    res.swap(trial_res);
    norm = trial_norm;
    // Updates at rounding level: the residual has reached its floor.
    if (lambda * max_step <= 1e-14 * hi) {
      out.residual = norm;
      out.iterations = it + 1;
      return out;
    }
  }
  if (norm <= opt.tol) {
    out.residual = norm;
    out.iterations = opt.max_iterations;
    return out;
  }
  std::ostringstream msg;
  msg << "profile Newton iteration did not converge after " << opt.max_iterations
      << " iterations (residual " << norm << ")";
  throw SolverError(msg.str(), norm);
}

// phi'' .. phi'''' from the ODE a phi'' + b phi'^2 = (alpha/2) xi phi' and its
// derivatives, with a..d = p'..p''''.
void ode_derivatives(const ModelClosure& c, double alpha, double xi, double phi,
                     double d1, double& d2, double& d3, double& d4) {
  const double a = c.dp(phi);
  const double b = c.d2p(phi);
  const double cc = c.d3p(phi);
  const double dd = c.d4p(phi);
  const double k = 0.5 * alpha;
  d2 = (k * xi * d1 - b * d1 * d1) / a;
  d3 = (k * (d1 + xi * d2) - 3.0 * b * d1 * d2 - cc * d1 * d1 * d1) / a;
  d4 = (k * (2.0 * d2 + xi * d3) - 4.0 * b * d1 * d3 - 3.0 * b * d2 * d2 -
        6.0 * cc * d1 * d1 * d2 - dd * d1 * d1 * d1 * d1) /
       a;
}

}  // namespace

WaveProfile solve_profile(const ModelClosure& closure, double v_minus, double v_plus,
                          double alpha, const ProfileOptions& options) {
  if (!(alpha > 0.0)) throw ArgumentError("solve_profile: alpha must be > 0");
  if (!closure.v_range().contains(v_minus) || !closure.v_range().contains(v_plus)) {
    throw ArgumentError("solve_profile: end states outside the closure's v range");
  }
  if (options.n_cells < 64) throw ArgumentError("solve_profile: n_cells must be >= 64");
  if (!(options.tol > 0.0)) throw ArgumentError("solve_profile: tol must be > 0");
  const double xi_max = options.xi_max > 0.0
                            ? options.xi_max
                            : default_xi_max(closure, v_minus, v_plus, alpha);
  if (xi_max < 8.0 / std::sqrt(alpha) * (1.0 - 1e-12)) {
    throw ArgumentError("solve_profile: xi_max must be >= 8/sqrt(alpha)");
  }
  for (double v : {v_minus, v_plus}) {
    if (!(closure.dp(v) < 0.0)) throw ArgumentError("solve_profile: p' must be negative");
  }

  const int n = options.n_cells;
  const double h = 2.0 * xi_max / n;

  WaveProfile prof;
  prof.v_minus = v_minus;
  prof.v_plus = v_plus;
  prof.alpha = alpha;
  prof.closure = closure;
  prof.xi.resize(n + 1);
  for (int i = 0; i <= n; ++i) prof.xi[i] = -xi_max + h * i;
  prof.xi[n] = xi_max;

  const std::size_t m = prof.xi.size();
  if (v_minus == v_plus) {
    prof.phi.assign(m, v_minus);
    prof.dphi.assign(m, 0.0);
    prof.d2phi.assign(m, 0.0);
    prof.d3phi.assign(m, 0.0);
    prof.d4phi.assign(m, 0.0);
    prof.tail_deficit.assign(m, 0.0);
    return prof;
  }

  const double dv = v_plus - v_minus;
  const double lo = std::min(v_minus, v_plus);
  const double hi = std::max(v_minus, v_plus);
  const double diff = -closure.dp(0.5 * (v_minus + v_plus)) / alpha;

  auto erf_ramp = [&](int cells) {
    std::vector<double> g(static_cast<std::size_t>(cells) + 1);
    const double hh = 2.0 * xi_max / cells;
    for (int i = 0; i <= cells; ++i) {
      const double xi = -xi_max + hh * i;
      g[i] = v_minus + dv * 0.5 * (1.0 + std::erf(xi / (2.0 * std::sqrt(diff))));
    }
    return g;
  };

  NewtonResult coarse =
      newton_solve(closure, v_minus, v_plus, alpha, xi_max, n, erf_ramp(n), options);
  prof.newton_residual = coarse.residual;
  prof.newton_iterations = coarse.iterations;
  std::vector<double> phi = coarse.phi;

  if (options.extrapolate) {
    std::vector<double> guess(2 * static_cast<std::size_t>(n) + 1);
    for (int i = 0; i < n; ++i) {
      guess[2 * i] = coarse.phi[i];
      guess[2 * i + 1] = 0.5 * (coarse.phi[i] + coarse.phi[i + 1]);
    }
    guess[2 * n] = coarse.phi[n];
    NewtonResult fine = newton_solve(closure, v_minus, v_plus, alpha, xi_max, 2 * n,
                                     std::move(guess), options);
    prof.newton_residual = std::max(prof.newton_residual, fine.residual);
    prof.newton_iterations += fine.iterations;
    // The centred stencil has an even error expansion in h.
    for (int i = 0; i <= n; ++i) {
      phi[i] = (4.0 * fine.phi[2 * i] - coarse.phi[i]) / 3.0;
    }
  }
  for (double& v : phi) v = std::clamp(v, lo, hi);
  prof.phi = phi;

  // phi' in the core by finite differences.
  std::vector<double> d1 = detail::derivative4(phi, h);
  const double threshold = kTailThreshold * std::abs(dv);
  std::size_t peak = 0;
  for (std::size_t i = 0; i < m; ++i) {
    if (std::abs(d1[i]) > std::abs(d1[peak])) peak = i;
  }
  std::size_t left = peak;
  while (left > 0 && std::abs(d1[left - 1]) >= threshold) --left;
  std::size_t right = peak;
  while (right + 1 < m && std::abs(d1[right + 1]) >= threshold) ++right;

  // Integrand alpha*xi/(2 p'(phi)) of the flux relation and its derivative.
  auto kernel = [&](std::size_t i) { return alpha * prof.xi[i] / (2.0 * closure.dp(phi[i])); };
  auto kernel_slope = [&](std::size_t i) {
    const double a = closure.dp(phi[i]);
    return alpha / (2.0 * a) -
           alpha * prof.xi[i] * closure.d2p(phi[i]) * d1[i] / (2.0 * a * a);
  };
  // Corrected trapezoid on [i, j] (adjacent nodes, j = i +- 1), oriented.
  auto kernel_step = [&](std::size_t i, std::size_t j) {
    const double hs = prof.xi[j] - prof.xi[i];
    return 0.5 * hs * (kernel(i) + kernel(j)) -
           hs * hs / 12.0 * (kernel_slope(j) - kernel_slope(i));
  };

  {
    double integral = 0.0;
    const double anchor = d1[left] * closure.dp(phi[left]);
    for (std::size_t i = left; i-- > 0;) {
      integral += kernel_step(i + 1, i);
      d1[i] = anchor / closure.dp(phi[i]) * std::exp(integral);
    }
  }
  {
    double integral = 0.0;
    const double anchor = d1[right] * closure.dp(phi[right]);
    for (std::size_t i = right + 1; i < m; ++i) {
      integral += kernel_step(i - 1, i);
      d1[i] = anchor / closure.dp(phi[i]) * std::exp(integral);
    }
  }
  prof.dphi = d1;
  prof.d2phi.resize(m);
  prof.d3phi.resize(m);
  prof.d4phi.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    ode_derivatives(closure, alpha, prof.xi[i], phi[i], d1[i], prof.d2phi[i],
                    prof.d3phi[i], prof.d4phi[i]);
  }

  // Distance to the end state: direct in the core, integrated phi' in the
  // tails (with the Gaussian remainder beyond the truncation point).
  prof.tail_deficit.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    prof.tail_deficit[i] = std::abs(phi[i] - (prof.xi[i] < 0.0 ? v_minus : v_plus));
  }
  {
    double acc = std::abs(prof.dphi[0]) * (-2.0 * closure.dp(v_minus)) / (alpha * xi_max);
    for (std::size_t i = 0; i < left; ++i) {
      prof.tail_deficit[i] = acc;
      acc += 0.5 * h * (std::abs(d1[i]) + std::abs(d1[i + 1])) -
             h * h / 12.0 * (std::abs(prof.d2phi[i + 1]) - std::abs(prof.d2phi[i]));
    }
  }
  {
    double acc =
        std::abs(prof.dphi[m - 1]) * (-2.0 * closure.dp(v_plus)) / (alpha * xi_max);
    for (std::size_t i = m - 1; i > right; --i) {
      prof.tail_deficit[i] = acc;
      acc += 0.5 * h * (std::abs(d1[i]) + std::abs(d1[i - 1])) -
             h * h / 12.0 * (std::abs(prof.d2phi[i - 1]) - std::abs(prof.d2phi[i]));
    }
  }
  // Tail values from the deficit, which is monotone where phi itself only
  // carries round-off.
  const double sign = dv > 0.0 ? 1.0 : -1.0;
  for (std::size_t i = 0; i < left; ++i) prof.phi[i] = v_minus + sign * prof.tail_deficit[i];
  for (std::size_t i = right + 1; i < m; ++i) prof.phi[i] = v_plus - sign * prof.tail_deficit[i];
  return prof;
}

std::array<double, 5> WaveProfile::derivatives_at(double xi_value) const {
  const double xm = xi.back();
  if (xi_value <= -xm) {
    if (xi_value == -xm) return {phi.front(), dphi.front(), d2phi.front(), d3phi.front(), d4phi.front()};
    return {v_minus, 0.0, 0.0, 0.0, 0.0};
  }
  if (xi_value >= xm) {
    if (xi_value == xm) return {phi.back(), dphi.back(), d2phi.back(), d3phi.back(), d4phi.back()};
    return {v_plus, 0.0, 0.0, 0.0, 0.0};
  }
  const double h = spacing();
  const std::size_t last = xi.size() - 2;
  std::size_t i = static_cast<std::size_t>((xi_value - xi.front()) / h);
  i = std::min(i, last);
  const double s = (xi_value - xi[i]) / h;
  std::array<double, 5> out{};
  out[0] = detail::hermite(s, phi[i], h * dphi[i], phi[i + 1], h * dphi[i + 1]);
  out[1] = detail::hermite(s, dphi[i], h * d2phi[i], dphi[i + 1], h * d2phi[i + 1]);
  out[2] = detail::hermite(s, d2phi[i], h * d3phi[i], d2phi[i + 1], h * d3phi[i + 1]);
  out[3] = detail::hermite(s, d3phi[i], h * d4phi[i], d3phi[i + 1], h * d4phi[i + 1]);
  auto slope4 = [&](std::size_t j) {
    if (j == 0) return d4phi[1] - d4phi[0];
    if (j + 1 == xi.size()) return d4phi[j] - d4phi[j - 1];
    return 0.5 * (d4phi[j + 1] - d4phi[j - 1]);
  };
  out[4] = detail::hermite(s, d4phi[i], slope4(i), d4phi[i + 1], slope4(i + 1));
  return out;
}

double flux_relation_check(const WaveProfile& profile, double xi0, double xi1) {
  if (profile.is_constant() || xi0 == xi1) return 0.0;
  const double xm = profile.xi_max();
  if (std::abs(xi0) > xm || std::abs(xi1) > xm) {
    throw ArgumentError("flux_relation_check: points outside the profile grid");
  }
  const auto& c = profile.closure;
  const double alpha = profile.alpha;
  int intervals = static_cast<int>(std::ceil(std::abs(xi1 - xi0) / profile.spacing()));
  intervals = std::max(2, intervals + (intervals % 2));
  const double hs = (xi1 - xi0) / intervals;
  auto integrand = [&](double eta) {
    const double ph = profile.derivatives_at(eta)[0];
    return alpha * eta / (2.0 * c.dp(ph));
  };
  double sum = integrand(xi0) + integrand(xi1);
  for (int k = 1; k < intervals; ++k) {
    sum += (k % 2 == 1 ? 4.0 : 2.0) * integrand(xi0 + k * hs);
  }
  const double integral = sum * hs / 3.0;
  const auto s0 = profile.derivatives_at(xi0);
  const auto s1 = profile.derivatives_at(xi1);
  const double rhs = s0[1] * c.dp(s0[0]) / c.dp(s1[0]) * std::exp(integral);
  const double lhs = s1[1];
  const double scale = std::max(std::abs(lhs), std::numeric_limits<double>::min());
  return std::abs(lhs - rhs) / scale;
}

double eval_vbar(const WaveProfile& profile, double x, double t, int dx_order, int dt_order) {
  if (dx_order < 0 || dt_order < 0 || dx_order + dt_order > 4 || dt_order > 3) {
    throw ArgumentError("eval_vbar: unsupported derivative order");
  }
  if (!(t >= 0.0)) throw ArgumentError("eval_vbar: t must be >= 0");
  const double s = 1.0 + t;
  const double rs = std::sqrt(s);
  const double xi = x / rs;
  const auto d = profile.derivatives_at(xi);
  const double p1 = d[1], p2 = d[2], p3 = d[3], p4 = d[4];
  const double x2 = xi * xi;
  const double x3 = x2 * xi;
  switch (dx_order * 10 + dt_order) {
    case 0: return d[0];
    case 10: return p1 / rs;
    case 1: return -xi * p1 / (2.0 * s);
    case 20: return p2 / s;
    case 11: return -(p1 + xi * p2) / (2.0 * s * rs);
    case 30: return p3 / (s * rs);
    case 2: return (x2 * p2 + 3.0 * xi * p1) / (4.0 * s * s);
    case 21: return -(xi * p3 + 2.0 * p2) / (2.0 * s * s);
    case 12: return (x2 * p3 + 3.0 * p1 + 5.0 * xi * p2) / (4.0 * s * s * rs);
    case 3: return -(9.0 * x2 * p2 + 15.0 * xi * p1 + x3 * p3) / (8.0 * s * s * s);
    case 40: return p4 / (s * s);
    case 31: return -(xi * p4 + 3.0 * p3) / (2.0 * s * s * rs);
    case 13:
      return -(12.0 * x2 * p3 + x3 * p4 + 15.0 * p1 + 33.0 * xi * p2) /
             (8.0 * s * s * s * rs);
    case 22: return (8.0 * p2 + 7.0 * xi * p3 + x2 * p4) / (4.0 * s * s * s);
    default: break;
  }
  throw ArgumentError("eval_vbar: unsupported derivative order");
}

double eval_ubar(const WaveProfile& profile, double x, double t) {
  if (profile.is_constant()) return 0.0;
  const double rs = std::sqrt(1.0 + t);
  const auto d = profile.derivatives_at(x / rs);
  return -profile.closure.dp(d[0]) * d[1] / (profile.alpha * rs);
}

double eval_pressure_xt(const WaveProfile& profile, double x, double t) {
  if (profile.is_constant()) return 0.0;
  const double v = eval_vbar(profile, x, t);
  const double vx = eval_vbar(profile, x, t, 1, 0);
  const double vt = eval_vbar(profile, x, t, 0, 1);
  const double vxt = eval_vbar(profile, x, t, 1, 1);
  const auto& c = profile.closure;
  return c.d2p(v) * vx * vt + c.dp(v) * vxt;
}

double eval_ubar_t(const WaveProfile& profile, double x, double t) {
  return -eval_pressure_xt(profile, x, t) / profile.alpha;
}

TailFit verify_gaussian_tail(const WaveProfile& profile) {
  if (profile.is_constant()) {
    throw DegenerateInputError("verify_gaussian_tail: constant profile has no tail");
  }
  const double xm = profile.xi_max();
  const double dv = std::abs(profile.v_plus - profile.v_minus);

  struct SideFit {
    double c, log_prefactor, power, max_rel;
  };
  auto fit_side = [&](int sign) {
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < profile.xi.size(); ++i) {
      const double a = std::abs(profile.xi[i]);
      if (profile.xi[i] * sign <= 0.0 || a < 0.5 * xm || a > 0.75 * xm) continue;
      const double deficit = profile.tail_deficit[i] + std::abs(profile.dphi[i]) +
                             std::abs(profile.d2phi[i]) + std::abs(profile.d3phi[i]) +
                             std::abs(profile.d4phi[i]);
      if (!(deficit > 0.0) || !std::isfinite(deficit)) continue;
      xs.push_back(a);
      ys.push_back(std::log(deficit / dv));
    }
    if (xs.size() < 8) {
      throw DegenerateInputError("verify_gaussian_tail: too few resolvable tail samples");
    }
    Eigen::MatrixXd A(xs.size(), 3);
    Eigen::VectorXd y(xs.size());
    for (std::size_t k = 0; k < xs.size(); ++k) {
      A(k, 0) = 1.0;
      A(k, 1) = -xs[k] * xs[k];
      A(k, 2) = std::log(xs[k]);
      y(k) = ys[k];
    }
    const Eigen::Vector3d coef = A.colPivHouseholderQr().solve(y);
    const Eigen::VectorXd r = A * coef - y;
    double max_rel = 0.0;
    for (Eigen::Index k = 0; k < r.size(); ++k) {
      max_rel = std::max(max_rel, std::abs(std::expm1(r(k))));
    }
    return SideFit{coef(1), coef(0), coef(2), max_rel};
  };

  const SideFit l = fit_side(-1);
  const SideFit r = fit_side(+1);
  const SideFit& s = l.c <= r.c ? l : r;
  TailFit out;
  out.c_decay = s.c;
  out.prefactor = std::exp(s.log_prefactor);
  out.power = s.power;
  out.c_left = l.c;
  out.c_right = r.c;
  out.max_rel_residual = std::max(l.max_rel, r.max_rel);
  return out;
}

}  // namespace diffwave
