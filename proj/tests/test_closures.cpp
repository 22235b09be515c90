#include <doctest.h>

#include <cmath>
#include <functional>

#include "diffwave/closures.hpp"
#include "diffwave/errors.hpp"

using namespace diffwave;
using doctest::Approx;

TEST_CASE("m1 closure point values") {
  const auto c = ModelClosure::m1(1.0);
  CHECK(c.p(1.0) == Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(c.g(0.0) == 0.0);
  CHECK(c.dg(0.0) == 0.0);
  CHECK(c.g(1.0) == Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(c.g(0.3) == Approx(0.044213861055197722572).epsilon(1e-14));
  CHECK(c.dg(0.3) == Approx(0.2893317761529013538).epsilon(1e-14));
  CHECK(c.alpha() == 1.0);
  CHECK(ModelClosure::m1(2.5).alpha() == 2.5);
}

TEST_CASE("gamma-law and linear closures") {
  const auto c = ModelClosure::gamma_law(2.0, 1.0);
  CHECK(c.p(1.0) == Approx(1.0));
  CHECK(c.dp(1.0) == Approx(-2.0));
  CHECK(c.g(0.5) == 0.0);
  CHECK(c.g_vanishes());
  const auto lin = ModelClosure::linear(1.0, 1.0);
  CHECK(lin.p(1.2) == Approx(-1.2));
  CHECK(lin.dp(3.0) == Approx(-1.0));
  CHECK(lin.d2p(3.0) == 0.0);
}

TEST_CASE("eddington factor") {
  CHECK(eddington_factor(0.0) == Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(eddington_factor(1.0) == Approx(1.0).epsilon(1e-15));
  CHECK(eddington_factor(-1.0) == Approx(1.0).epsilon(1e-15));
  CHECK(eddington_factor(0.5) == Approx(0.46481624151200356896).epsilon(1e-15));
  CHECK_THROWS_AS(eddington_factor(1.0001), DomainError);

  SUBCASE("even and nondecreasing in |u|") {
    double prev = eddington_factor(0.0);
    for (int i = 1; i <= 1000; ++i) {
      const double u = i / 1000.0;
      const double chi = eddington_factor(u);
      CHECK(chi == eddington_factor(-u));
      CHECK(chi >= prev);
      prev = chi;
    }
  }
}

TEST_CASE("radiative pressure") {
  CHECK(radiative_pressure_1d(3.0, 0.0) == Approx(1.0));
  CHECK(radiative_pressure_1d(1.0, 1.0) == Approx(1.0));
  CHECK(radiative_pressure_1d(2.0, 0.5) == Approx(2.0 * 0.46481624151200356896).epsilon(1e-15));
}

TEST_CASE("characteristic speeds") {
  const auto gam = ModelClosure::gamma_law(2.0, 1.0);
  auto [lm, lp] = characteristic_speeds(gam, 1.0, 0.0);
  CHECK(lm == Approx(-std::sqrt(2.0)));
  CHECK(lp == Approx(std::sqrt(2.0)));

  const auto m1 = ModelClosure::m1(1.0);
  std::tie(lm, lp) = characteristic_speeds(m1, 1.0, 0.0);
  CHECK(lm == Approx(-1.0 / std::sqrt(3.0)).epsilon(1e-15));
  CHECK(lp == Approx(1.0 / std::sqrt(3.0)).epsilon(1e-15));

  std::tie(lm, lp) = characteristic_speeds(m1, 1.0, 0.3);
  CHECK(lm == Approx(-0.7014851508997511469).epsilon(1e-14));
  CHECK(lp == Approx(0.41215337474684979309).epsilon(1e-14));
  CHECK(spectral_radius(m1, 1.0, 0.3) == Approx(0.7014851508997511469).epsilon(1e-14));
}

TEST_CASE("assumption scan") {
  const auto gam = ModelClosure::gamma_law(2.0, 1.0);
  const auto r = check_assumptions(gam, {0.5, 2.0}, {-0.5, 0.5});
  CHECK(r.hyperbolic_ok);
  CHECK(r.sign_ok);
  CHECK(r.smoothness_ok);
  CHECK(r.min_gfprime_minus_pprime == Approx(-gam.dp(2.0)));

  const auto point = check_assumptions(gam, {1.0, 1.0}, {0.0, 0.0});
  CHECK(point.min_gfprime_minus_pprime == Approx(2.0));

  const auto m1 = ModelClosure::m1(1.0);
  const auto rm = check_assumptions(m1, {0.8, 1.2}, {-0.3, 0.3});
  CHECK(rm.sign_ok);
  CHECK(rm.hyperbolic_ok);
  CHECK(rm.min_gfprime_minus_pprime == Approx(0.20077741130426083).epsilon(1e-12));
  CHECK(rm.min_discriminant == Approx(0.8612435873641215).epsilon(1e-12));

  CHECK_THROWS_AS(check_assumptions(m1, {1.2, 0.8}, {0.0, 0.0}), ArgumentError);
}

TEST_CASE("sign condition implies real distinct speeds") {
  for (const auto& c : {ModelClosure::m1(1.0), ModelClosure::gamma_law(1.4, 1.0),
                        ModelClosure::gamma_law(3.0, 2.0)}) {
    for (double v = 0.3; v <= 3.0; v += 0.05) {
      for (double u = -0.9; u <= 0.9; u += 0.05) {
        if (c.g(u) * c.df(v) - c.dp(v) > 0.0 && c.dp(v) < 0.0) {
          CHECK(characteristic_discriminant(c, v, u) > 0.0);
        }
      }
    }
  }
}

TEST_CASE("m1 flux correction bounded by u^2") {
  const auto c = ModelClosure::m1(1.0);
  for (int i = -100; i <= 100; ++i) {
    const double u = i / 100.0;
    CHECK(std::abs(c.g(u)) <= u * u + 1e-16);
  }
}

namespace {

// Observed order of the centred difference against an analytic derivative.
double fd_order(const std::function<double(double)>& f, const std::function<double(double)>& df,
                double x) {
  auto err = [&](double h) { return std::abs((f(x + h) - f(x - h)) / (2 * h) - df(x)); };
  return std::log2(err(1e-2) / err(5e-3));
}

}  // namespace

TEST_CASE("analytic derivatives match centred differences at second order") {
  for (const auto& c : {ModelClosure::m1(1.0), ModelClosure::gamma_law(2.0, 1.0)}) {
    for (double v : {0.7, 1.0, 1.6}) {
      CHECK(fd_order([&](double x) { return c.p(x); }, [&](double x) { return c.dp(x); }, v) ==
            Approx(2.0).epsilon(0.05));
      CHECK(fd_order([&](double x) { return c.dp(x); }, [&](double x) { return c.d2p(x); }, v) ==
            Approx(2.0).epsilon(0.05));
      CHECK(fd_order([&](double x) { return c.d2p(x); }, [&](double x) { return c.d3p(x); }, v) ==
            Approx(2.0).epsilon(0.05));
      CHECK(fd_order([&](double x) { return c.d3p(x); }, [&](double x) { return c.d4p(x); }, v) ==
            Approx(2.0).epsilon(0.05));
    }
  }
  const auto eddington = ModelClosure::m1(1.0);
  for (double v : {0.7, 1.0, 1.6}) {
    CHECK(fd_order([&](double x) { return eddington.f(x); },
                   [&](double x) { return eddington.df(x); }, v) == Approx(2.0).epsilon(0.05));
  }
  const auto m1 = ModelClosure::m1(1.0);
  for (double u : {-0.6, 0.2, 0.7}) {
    CHECK(fd_order([&](double x) { return m1.g(x); }, [&](double x) { return m1.dg(x); }, u) ==
          Approx(2.0).epsilon(0.05));
    CHECK(fd_order([&](double x) { return m1.dg(x); }, [&](double x) { return m1.d2g(x); }, u) ==
          Approx(2.0).epsilon(0.05));
  }
}
