#include <doctest.h>

#include <cmath>
#include <functional>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "diffwave/errors.hpp"
#include "diffwave/simulation.hpp"

using namespace diffwave;
using doctest::Approx;

namespace {

std::vector<double> log_times(int n, double t_max) {
  std::vector<double> t{0.0};
  for (int i = 0; i < n; ++i) t.push_back(std::pow(t_max, static_cast<double>(i) / (n - 1)));
  return t;
}

// Fields on a uniform grid from closed-form f and f'.
PerturbationFields synthetic(const std::function<double(double)>& f,
                             const std::function<double(double)>& df, double L, int n) {
  PerturbationFields p;
  p.dx = 2.0 * L / (n - 1);
  for (int i = 0; i < n; ++i) {
    const double x = -L + i * p.dx;
    p.x.push_back(x);
    p.V.push_back(f(x));
    p.Vx.push_back(df(x));
  }
  p.Vxx = p.Vxxx = p.z = p.zx = p.zxx = std::vector<double>(n, 0.0);
  return p;
}

}  // namespace

TEST_CASE("decay fit is exact on power laws") {
  const auto t = log_times(40, 500.0);
  std::vector<double> a, b;
  for (double s : t) {
    a.push_back(std::pow(1.0 + s, -0.75));
    b.push_back(5.0 * std::pow(1.0 + s, -1.25));
  }
  const auto fa = fit_decay_rate(t, a, 50.0, 500.0, -0.75, 0.1);
  CHECK(fa.exponent == Approx(-0.75).epsilon(1e-12));
  CHECK(fa.r_squared == Approx(1.0).epsilon(1e-12));
  CHECK(fa.pass);
  const auto fb = fit_decay_rate(t, b, 50.0, 500.0, -1.25, 0.1);
  CHECK(fb.exponent == Approx(-1.25).epsilon(1e-12));
  CHECK(fb.intercept == Approx(std::log(5.0)).epsilon(1e-12));

  SUBCASE("rescaling shifts only the intercept") {
    std::vector<double> c;
    for (double v : b) c.push_back(7.0 * v);
    const auto fc = fit_decay_rate(t, c, 50.0, 500.0, -1.25, 0.1);
    CHECK(fc.exponent == Approx(fb.exponent).epsilon(1e-12));
    CHECK(fc.intercept - fb.intercept == Approx(std::log(7.0)).epsilon(1e-12));
  }
  SUBCASE("one-sided and two-sided tests") {
    CHECK(fit_decay_rate(t, a, 50.0, 500.0, -0.5, 0.1, true).pass);
    CHECK_FALSE(fit_decay_rate(t, a, 50.0, 500.0, -0.5, 0.1, false).pass);
    CHECK_FALSE(fit_decay_rate(t, a, 50.0, 500.0, -1.0, 0.1, true).pass);
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(fit_decay_rate(t, a, 400.0, 500.0, -0.75, 0.1), FitError);
    auto bad = a;
    bad[35] = 0.0;
    CHECK_THROWS_AS(fit_decay_rate(t, bad, 50.0, 500.0, -0.75, 0.1), FitError);
    CHECK_THROWS_AS(fit_decay_rate(t, a, 500.0, 50.0, -0.75, 0.1), ArgumentError);
  }
}

TEST_CASE("norms of closed-form fields") {
  const auto zero = synthetic([](double) { return 0.0; }, [](double) { return 0.0; }, 5.0, 101);
  for (double v : field_norms(zero).values()) CHECK(v == 0.0);

  const auto g = synthetic([](double x) { return std::exp(-x * x); },
                           [](double x) { return -2.0 * x * std::exp(-x * x); }, 10.0, 4001);
  const auto r = field_norms(g);
  CHECK(r.l2_V == Approx(std::pow(M_PI / 2.0, 0.25)).epsilon(1e-10));
  CHECK(r.l2_V == Approx(1.11951).epsilon(1e-5));
  CHECK(r.linf_V == Approx(1.0));
}

TEST_CASE("Sobolev inequality on smooth fields") {
  const std::vector<std::pair<std::function<double(double)>, std::function<double(double)>>> cases{
      {[](double x) { return std::exp(-x * x); },
       [](double x) { return -2.0 * x * std::exp(-x * x); }},
      {[](double x) { return 1.0 / std::cosh(x); },
       [](double x) { return -std::tanh(x) / std::cosh(x); }},
      {[](double x) { return x * std::exp(-x * x / 2); },
       [](double x) { return (1 - x * x) * std::exp(-x * x / 2); }},
  };
  for (const auto& [f, df] : cases) {
    const auto p = synthetic(f, df, 30.0, 6001);
    const auto r = field_norms(p);
    CHECK(r.linf_V <= std::sqrt(2.0) * std::sqrt(r.l2_V * r.l2_Vx) * 1.01);
  }
}

TEST_CASE("norm record columns") {
  NormRecord r;
  r.l2_Vx = 2.0;
  r.mass_residual = -1.0;
  CHECK(r.get("l2_Vx") == 2.0);
  CHECK(r.get("mass_residual") == -1.0);
  CHECK_THROWS_AS(r.get("l2_q"), ArgumentError);
  const auto back = NormRecord::from_values(3.0, r.values());
  CHECK(back.t == 3.0);
  CHECK(back.values() == r.values());
  CHECK_THROWS_AS(NormRecord::from_values(0.0, std::vector<double>{1.0}), ArgumentError);
  CHECK(parse_targets("base") == Targets::base);
  CHECK_THROWS_AS(parse_targets("better"), ArgumentError);
}

TEST_CASE("fields of exact wave data vanish") {
  const auto p = solve_profile(ModelClosure::m1(1.0), 1.0, 1.1, 1.0);
  ScenarioSpec spec;
  spec.u_plus = 0.05;
  spec.perturbation.amplitude = 0.0;
  spec.n_cells = 1024;
  spec.x_max = 30.0;
  const auto corr = spec.corrections();
  const auto s = build_initial_data(spec, p, corr);
  const auto f = build_fields(s, p, 0.0, corr);
  for (int i = 0; i < spec.n_cells; ++i) {
    CHECK(std::abs(f.V[i]) < 1e-12);
    CHECK(std::abs(f.z[i]) < 1e-12);
  }
  CHECK(f.V.front() == 0.0);
  CHECK(std::abs(conserved_mass(f)) < 1e-12);
}

TEST_CASE("translated wave is cancelled by the shift") {
  const auto p = solve_profile(ModelClosure::gamma_law(2.0, 1.0), 1.0, 1.1, 1.0);
  CorrectionField corr;
  const double a = 0.37;
  for (int n : {512, 1024, 2048}) {
    SimState s;
    s.grid = Grid{-30.0, 30.0, n};
    s.closure = p.closure;
    for (double x : s.grid.centers()) {
      s.v.push_back(eval_vbar(p, x - a, 0.0));
      s.u.push_back(eval_ubar(p, x - a, 0.0));
    }
    const double x0 = compute_shift_x0(s.grid, s.v, p, corr);
    CHECK(x0 == Approx(-a).epsilon(1e-9));
    const auto r = field_norms(build_fields(s, p, x0, corr));
    CHECK(r.l2_V < 1e-8);
    CHECK(r.l2_z < 1e-8);
    CHECK(std::abs(r.mass_residual) < 1e-10);
    CHECK(r.l2_Vx < 1e-8);
  }
}

TEST_CASE("initial anti-derivative of the bump") {
  const auto p = solve_profile(ModelClosure::gamma_law(2.0, 1.0), 1.0, 1.1, 1.0);
  ScenarioSpec spec;
  spec.closure = ModelClosure::gamma_law(2.0, 1.0);
  spec.n_cells = 8192;
  spec.x_max = 20.0;
  const auto corr = spec.corrections();
  const auto s = build_initial_data(spec, p, corr);
  const auto r = field_norms(build_fields(s, p, 0.0, corr));

  using boost::math::quadrature::gauss_kronrod;
  const Perturbation& b = spec.perturbation;
  auto B = [&](double x) {
    return gauss_kronrod<double, 31>::integrate([&](double y) { return b.shape(y); },
                                                b.center - b.width, x, 10, 1e-14);
  };
  const double total = B(b.center + b.width);
  const double inside = gauss_kronrod<double, 31>::integrate(
      [&](double x) { return B(x) * B(x); }, b.center - b.width, b.center + b.width, 10, 1e-13);
  // Beyond the support V is the constant bump mass; the grid ends at the
  // centre of the last cell.
  const double last = s.grid.center(spec.n_cells - 1);
  const double outside = total * total * (last - (b.center + b.width));
  CHECK(r.l2_V == Approx(std::sqrt(inside + outside)).epsilon(1e-6));
}

TEST_CASE("residual and time derivatives on a constant state") {
  const auto p = solve_profile(ModelClosure::m1(1.0), 1.0, 1.0, 1.0);
  CorrectionField corr;
  SimState s;
  s.grid = Grid{-10.0, 10.0, 64};
  s.v.assign(64, 1.0);
  s.u.assign(64, 0.0);
  s.far = {1.0, 1.0, 0.0, 0.0};
  Stepper st;
  const double dt = 0.05;
  const SimState a = s;
  st.advance(s, dt);
  const SimState b = s;
  st.advance(s, dt);
  const auto rep = residual_check(a, b, s, p, 0.0, corr);
  CHECK(rep.max_abs_residual < 1e-10);
  const auto td = time_derivative_norms(b, p, 0.0, corr);
  CHECK(td.l2_zt < 1e-12);
  CHECK(td.l2_ztt < 1e-12);
  CHECK_THROWS_AS(residual_check(a, a, s, p, 0.0, corr), ArgumentError);
}

TEST_CASE("F2 vanishes without the flux correction") {
  ScenarioSpec spec;
  spec.closure = ModelClosure::gamma_law(2.0, 1.0);
  spec.n_cells = 256;
  spec.x_max = 20.0;
  const auto p = solve_profile(spec.closure, 1.0, 1.1, 1.0);
  const auto corr = spec.corrections();
  SimState s = build_initial_data(spec, p, corr);
  Stepper st;
  const double dt = cfl_dt(s, 0.3);
  const SimState a = s;
  st.advance(s, dt);
  const SimState b = s;
  st.advance(s, dt);
  const auto rep = residual_check(a, b, s, p, initial_shift(a, p, corr), corr);
  for (double f2 : rep.F2) CHECK(f2 == 0.0);
  CHECK(rep.max_abs_F2 == 0.0);
}

TEST_CASE("theorem report on exact-rate series") {
  DiagnosticsSeries series;
  const auto t = log_times(40, 500.0);
  const double shift = -0.25;
  for (double s : t) {
    NormRecord r;
    r.t = s;
    auto rate = [&](double e) { return std::pow(1.0 + s, e); };
    r.l2_V = rate(0.0 + shift);
    r.l2_Vx = rate(-0.5 + shift);
    r.l2_Vxx = rate(-1.0 + shift);
    r.l2_Vxxx = rate(-1.5 + shift);
    r.l2_z = rate(-1.0 + shift);
    r.l2_zx = rate(-1.5 + shift);
    r.l2_zxx = rate(-2.0 + shift);
    series.records.push_back(r);
    series.time_records.push_back({s, rate(-2.0 + shift), rate(-2.5 + shift), rate(-2.5 + shift)});
  }
  const auto improved = theorem_report(series, Targets::improved, 50.0, 500.0);
  CHECK(improved.pass);
  for (const auto& row : improved.rows) CHECK(row.fit.pass);
  const auto find = [&](const TheoremReport& rep, const char* q) {
    for (const auto& row : rep.rows) {
      if (row.quantity == q) return row.fit;
    }
    return RateFit{};
  };
  CHECK(find(improved, "l2_z").target_exponent == Approx(-1.25));
  CHECK(find(improved, "l2_Vx").target_exponent == Approx(-0.75));
  CHECK_FALSE(find(improved, "l2_V").upper_bound);
  CHECK(improved.rows.size() == 10);

  const auto base = theorem_report(series, Targets::base, 50.0, 500.0);
  CHECK(base.pass);
  CHECK(find(base, "l2_z").target_exponent == Approx(-1.0));
  CHECK(find(base, "l2_z").upper_bound);
}
