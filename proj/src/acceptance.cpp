#include "diffwave/acceptance.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <random>
#include <thread>
#include <utility>

#include <json.hpp>

#include "diffwave/config.hpp"
#include "diffwave/errors.hpp"
#include "diffwave/io.hpp"
#include "diffwave/simulation.hpp"

namespace diffwave {

namespace {

using Artifacts = std::vector<std::pair<std::string, std::string>>;

constexpr double kWindowLo = 50.0;
constexpr double kWindowHi = 500.0;

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", x);
  return buf;
}

Check below(std::string name, double value, double limit) {
  return {std::move(name), value, "< " + num(limit), value < limit};
}

Check at_most(std::string name, double value, double limit) {
  return {std::move(name), value, "<= " + num(limit), value <= limit};
}

Check at_least(std::string name, double value, double limit) {
  return {std::move(name), value, ">= " + num(limit), value >= limit};
}

Check within(std::string name, double value, double lo, double hi) {
  return {std::move(name), value, "in [" + num(lo) + ", " + num(hi) + "]",
          value >= lo && value <= hi};
}

Check note(std::string name, double value) {
  return {std::move(name), value, "reported", true, true};
}

Check from_fit(const std::string& label, const RateFit& fit) {
  std::string bound;
  if (fit.upper_bound) {
    bound = "<= " + num(fit.target_exponent + fit.tolerance);
  } else {
    bound = num(fit.target_exponent) + " +/- " + num(fit.tolerance);
  }
  bound += ", r2 >= " + num(fit.r_squared_min) + " (r2 " + num(fit.r_squared) + ")";
  return {label, fit.exponent, bound, fit.pass};
}

const TheoremRow& row_of(const TheoremReport& rep, const std::string& quantity) {
  for (const auto& r : rep.rows) {
    if (r.quantity == quantity) return r;
  }
  throw ArgumentError("no fit for " + quantity);
}

/// Runs a task, turning any exception into a message.
struct Outcome {
  std::string error;
  bool blow_up = false;
};

std::function<void()> guarded(Outcome& out, std::function<void()> fn) {
  return [&out, fn = std::move(fn)] {
    try {
      fn();
    } catch (const BlowUpError& e) {
      out = {e.what(), true};
    } catch (const std::exception& e) {
      out = {e.what(), false};
    }
  };
}

CriterionResult criterion(std::string id, std::string title) {
  CriterionResult c;
  c.id = std::move(id);
  c.title = std::move(title);
  return c;
}

Check error_check(const Outcome& o) {
  return {"error: " + o.error, std::nan(""), "no error", false};
}

void run_parallel(std::vector<std::function<void()>>& tasks, unsigned threads) {
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next++) < tasks.size();) tasks[i]();
  };
  const unsigned extra =
      static_cast<unsigned>(std::min<std::size_t>(std::max(threads, 1u), tasks.size())) - 1;
  std::vector<std::thread> pool;
  for (unsigned k = 0; k < extra; ++k) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
}

// P1 -----------------------------------------------------------------------

void check_profile_shape(const WaveProfile& p, const std::string& label,
                         std::vector<Check>& checks) {
  const double lo = std::min(p.v_minus, p.v_plus);
  const double hi = std::max(p.v_minus, p.v_plus);
  const double sign = p.v_plus > p.v_minus ? 1.0 : -1.0;
  int monotone_bad = 0;
  int bound_bad = 0;
  for (std::size_t i = 0; i < p.phi.size(); ++i) {
    if (sign * p.dphi[i] < 0.0) ++monotone_bad;
    if (i > 0 && sign * (p.phi[i] - p.phi[i - 1]) < 0.0) ++monotone_bad;
    if (p.phi[i] < lo || p.phi[i] > hi) ++bound_bad;
  }
  checks.push_back(at_most(label + " monotonicity violations", monotone_bad, 0));
  checks.push_back(at_most(label + " bound violations", bound_bad, 0));
}

CriterionResult p1_profiles(const AcceptanceOptions& opt, Artifacts& artifacts) {
  CriterionResult res{"P1", "profile correctness", false, {}};
  ProfileOptions po;
  po.n_cells = 8192;
  po.tol = opt.profile_tol;

  const auto linear = solve_profile(ModelClosure::linear(1.0, 1.0), 1.0, 1.2, 1.0, po);
  double err = 0.0;
  for (std::size_t i = 0; i < linear.xi.size(); ++i) {
    const double exact = 1.0 + 0.1 * (1.0 + std::erf(linear.xi[i] / 2.0));
    err = std::max(err, std::abs(linear.phi[i] - exact));
  }
  res.checks.push_back(below("linear profile max error vs erf", err, 1e-8));
  check_profile_shape(linear, "linear", res.checks);
  const auto tail = verify_gaussian_tail(linear);
  res.checks.push_back(within("linear tail rate c", tail.c_decay, 0.23, 0.27));

  const auto m1 = solve_profile(ModelClosure::m1(1.0), 1.0, 1.2, 1.0, po);
  res.checks.push_back(below("m1 profile ODE residual", m1.newton_residual, 1e-8));
  check_profile_shape(m1, "m1", res.checks);
  res.checks.push_back(note("m1 phi(0)", m1.derivatives_at(0.0)[0]));

  artifacts.emplace_back("profile_m1.csv", format_profile_csv(m1));
  return res;
}

// P2 -----------------------------------------------------------------------

CriterionResult p2_corrections(const AcceptanceOptions& opt) {
  CriterionResult res{"P2", "correction identities", false, {}};

  std::mt19937_64 rng(opt.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto draw = [&](double lo, double hi) { return lo + (hi - lo) * unit(rng); };
  double worst = 0.0;
  for (int k = 0; k < 100; ++k) {
    CorrectionField c;
    c.u_minus = draw(-0.5, 0.5);
    c.u_plus = draw(-0.5, 0.5);
    c.alpha = draw(0.2, 5.0);
    const double center = draw(-5.0, 5.0);
    const double half_width = draw(0.3, 3.0);
    const auto shape = unit(rng) < 0.5 ? MollifierShape::bump : MollifierShape::cosine;
    c.mollifier = make_mollifier(shape, center, half_width);
    const double t = draw(0.0, 10.0);
    std::vector<double> xs(401);
    for (std::size_t i = 0; i < xs.size(); ++i) {
      xs[i] = center - 2.0 * half_width + 4.0 * half_width * static_cast<double>(i) / 400.0;
    }
    worst = std::max(worst, verify_correction_system(c, xs, t));
  }
  res.checks.push_back(below("correction system residual, 100 draws", worst, 1e-12));

  ScenarioSpec spec = preset_config("m1-default").scenario;
  spec.x_max = 40.0;
  spec.n_cells = 4096;
  const auto profile = solve_profile(spec.closure, spec.v_minus, spec.v_plus, spec.alpha());
  double shift[2];
  for (int s = 0; s < 2; ++s) {
    spec.mollifier_shape = s == 0 ? MollifierShape::bump : MollifierShape::cosine;
    const auto corr = spec.corrections();
    shift[s] = initial_shift(build_initial_data(spec, profile, corr), profile, corr);
  }
  res.checks.push_back(
      below("shift difference bump vs cosine", std::abs(shift[0] - shift[1]), 1e-8));

  spec.mollifier_shape = MollifierShape::bump;
  const auto corr = spec.corrections();
  const Grid grid = spec.grid();
  const double dx = grid.dx();
  double translation = 0.0;
  for (double a : {-1.3, 0.75, 2.5}) {
    std::vector<double> v0(static_cast<std::size_t>(grid.n_cells));
    for (int i = 0; i < grid.n_cells; ++i) {
      const double x = grid.center(i);
      v0[i] = eval_vbar(profile, x - a, 0.0) + corr.vhat_average(x - dx / 2, x + dx / 2, 0.0);
    }
    translation = std::max(translation, std::abs(compute_shift_x0(grid, v0, profile, corr) + a));
  }
  res.checks.push_back(below("translated profile |x0 + a|", translation, 1e-8));
  return res;
}

// P3 -----------------------------------------------------------------------

double constant_state_drift() {
  SimState s;
  s.grid = Grid{-10.0, 10.0, 256};
  s.closure = ModelClosure::m1(1.0);
  s.v.assign(256, 1.05);
  s.u.assign(256, 0.0);
  s.far = {1.05, 1.05, 0.0, 0.0};
  Stepper stepper;
  const double dt = cfl_dt(s, 0.45);
  for (int k = 0; k < 10000; ++k) stepper.advance(s, dt);
  double drift = 0.0;
  for (int i = 0; i < 256; ++i) {
    drift = std::max({drift, std::abs(s.v[i] - 1.05), std::abs(s.u[i])});
  }
  return drift;
}

/// Error of u at t = 2 for u_t = F - alpha u, driven by a linear pressure
/// gradient, with a uniform step dt.
double uniform_damping_error(double dt) {
  const double alpha = 1.0;
  const double slope = 0.01;
  const int n = 64;
  SimState s;
  s.grid = Grid{-10.0, 10.0, n};
  s.closure = ModelClosure::linear(1.0, alpha);
  s.boundary = Boundary::extrapolate;
  s.v.resize(n);
  for (int i = 0; i < n; ++i) s.v[i] = 1.0 + slope * s.grid.center(i);
  s.u.assign(n, 0.1);
  Stepper stepper;
  const int steps = static_cast<int>(std::lround(2.0 / dt));
  for (int k = 0; k < steps; ++k) stepper.advance(s, dt);
  const double f = slope;  // -p(v)_x
  const double exact = f / alpha + (0.1 - f / alpha) * std::exp(-alpha * s.t);
  double err = 0.0;
  for (double u : s.u) err = std::max(err, std::abs(u - exact));
  return err;
}

/// L2 error at t = 5 of a periodic small-amplitude gamma-law mode against the
/// exact linearised solution, in cell averages.
double linear_mode_error(int n) {
  const double alpha = 1.0, length = 20.0, amp = 1e-6, t_end = 5.0;
  const auto closure = ModelClosure::gamma_law(2.0, alpha);
  const double c2 = -closure.dp(1.0);
  const double k = 2.0 * M_PI / length;
  using cd = std::complex<double>;
  const cd root = std::sqrt(cd(alpha * alpha - 4.0 * c2 * k * k));
  const cd l1 = (-alpha + root) / 2.0, l2 = (-alpha - root) / 2.0;
  const cd a1 = amp * l2 / (l2 - l1), a2 = -amp * l1 / (l2 - l1);
  const cd I(0.0, 1.0);

  SimState s;
  s.grid = Grid{0.0, length, n};
  s.closure = closure;
  s.boundary = Boundary::periodic;
  s.v.resize(n);
  s.u.assign(n, 0.0);
  const double h = length / n;
  for (int i = 0; i < n; ++i) {
    const double xl = i * h, xr = xl + h;
    s.v[i] = 1.0 + amp * (std::sin(k * xr) - std::sin(k * xl)) / (k * h);
  }
  Stepper stepper;
  advance_to(s, t_end, 0.45, stepper);

  const cd a = a1 * std::exp(l1 * t_end) + a2 * std::exp(l2 * t_end);
  const cd da = a1 * l1 * std::exp(l1 * t_end) + a2 * l2 * std::exp(l2 * t_end);
  double err = 0.0;
  for (int i = 0; i < n; ++i) {
    const double xl = i * h, xr = xl + h;
    const cd avg = (std::exp(I * k * xr) - std::exp(I * k * xl)) / (I * k * h);
    const double ve = 1.0 + std::real(a * avg);
    const double ue = std::real(da / (I * k) * avg);
    err += (std::pow(s.v[i] - ve, 2) + std::pow(s.u[i] - ue, 2)) * h;
  }
  return std::sqrt(err);
}

CriterionResult p3_solver(Artifacts& artifacts) {
  CriterionResult res{"P3", "solver baseline", false, {}};
  res.checks.push_back(below("constant state drift, 1e4 steps", constant_state_drift(), 1e-12));

  const double e1 = uniform_damping_error(0.1);
  const double e2 = uniform_damping_error(0.05);
  const double e3 = uniform_damping_error(0.025);
  res.checks.push_back(within("splitting order dt 0.1 -> 0.05", std::log2(e1 / e2), 1.9, 2.1));
  res.checks.push_back(within("splitting order dt 0.05 -> 0.025", std::log2(e2 / e3), 1.9, 2.1));

  std::string csv = "n_cells,l2_error,order\n";
  double prev = 0.0;
  for (int n : {512, 1024, 2048}) {
    const double err = linear_mode_error(n);
    const double order = prev > 0.0 ? std::log2(prev / err) : 0.0;
    char line[96];
    std::snprintf(line, sizeof line, "%d,%.17g,%.17g\n", n, err, order);
    csv += line;
    if (prev > 0.0) {
      res.checks.push_back(at_least("grid order " + std::to_string(n / 2) + " -> " +
                                        std::to_string(n),
                                    order, 1.5));
    }
    prev = err;
  }
  artifacts.emplace_back("convergence.csv", csv);
  return res;
}

// Long runs ----------------------------------------------------------------

struct LongRun {
  std::string name;
  ScenarioSpec spec;
  DiagnosticsSeries series;
  TheoremReport improved, base;
};

void long_run(LongRun& r, Artifacts& artifacts) {
  const auto profile =
      solve_profile(r.spec.closure, r.spec.v_minus, r.spec.v_plus, r.spec.alpha(), r.spec.profile);
  const auto corr = r.spec.corrections();
  r.series = run(r.spec, profile, corr);
  r.improved = theorem_report(r.series, Targets::improved, kWindowLo, kWindowHi);
  r.base = theorem_report(r.series, Targets::base, kWindowLo, kWindowHi);
  artifacts.emplace_back(r.name + "_series.csv", format_series_csv(r.series));
  artifacts.emplace_back(r.name + "_series_time.csv", format_time_series_csv(r.series));
  artifacts.emplace_back(r.name + "_rates.csv", format_rates_csv(r.improved));
  artifacts.emplace_back(r.name + "_rates_base.csv", format_rates_csv(r.base));
  artifacts.emplace_back(
      r.name + "_rates.svg",
      loglog_svg(r.series, {"l2_V", "l2_Vx", "l2_Vxx", "l2_z", "l2_zx"}, r.name + " decay"));
}

/// Largest (next - prev) / prev between consecutive samples with t >= t_min.
double largest_rise(const DiagnosticsSeries& series, const std::string& column, double t_min) {
  const auto t = series.times();
  const auto v = series.column(column);
  double worst = 0.0;
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (t[i - 1] >= t_min && v[i - 1] > 0.0) worst = std::max(worst, (v[i] - v[i - 1]) / v[i - 1]);
  }
  return worst;
}

struct ResidualLevel {
  int n_cells = 0;
  double max_abs = 0.0;
  double l2 = 0.0;
};

/// Residual of the V equation at t = 10 on the default M1 scenario with a
/// fixed dt proportional to dx.
ResidualLevel residual_level(int n_cells) {
  ScenarioSpec spec = preset_config("m1-default").scenario;
  spec.x_max = 40.0;
  spec.n_cells = n_cells;
  const double t_end = 10.0;
  const auto profile = solve_profile(spec.closure, spec.v_minus, spec.v_plus, spec.alpha());
  const auto corr = spec.corrections();
  SimState s = build_initial_data(spec, profile, corr);
  const double x0 = initial_shift(s, profile, corr);
  const double dt0 = spec.cfl * spec.grid().dx() / spec.max_speed();
  const long steps = static_cast<long>(std::ceil(t_end / dt0));
  const double dt = t_end / static_cast<double>(steps);
  Stepper stepper;
  for (long k = 0; k + 1 < steps; ++k) stepper.advance(s, dt);
  const SimState prev = s;
  stepper.advance(s, dt);
  const SimState cur = s;
  stepper.advance(s, dt);
  const auto rep = residual_check(prev, cur, s, profile, x0, corr);
  double l2 = 0.0;
  for (double r : rep.residual) l2 += r * r;
  return {n_cells, rep.max_abs_residual, std::sqrt(l2 * spec.grid().dx())};
}

// P9 -----------------------------------------------------------------------

std::string short_run_csv() {
  ScenarioSpec spec = preset_config("m1-default").scenario;
  spec.n_cells = 512;
  spec.end_time = 5.0;
  spec.n_samples = 16;
  const auto profile = solve_profile(spec.closure, spec.v_minus, spec.v_plus, spec.alpha());
  const auto series = run(spec, profile, spec.corrections());
  return format_series_csv(series) + format_time_series_csv(series);
}

nlohmann::ordered_json options_json(const AcceptanceOptions& o) {
  nlohmann::ordered_json j;
  j["fast"] = o.fast;
  j["profile_tol"] = o.profile_tol;
  j["seed"] = o.seed;
  return j;
}

/// Compares fresh artifacts with the ones a previous verify left in `dir`,
/// when that run used the same options. Returns {compared, mismatched}.
std::pair<int, int> compare_previous(const std::string& dir, const Artifacts& artifacts,
                                     const AcceptanceOptions& opt) {
  namespace fs = std::filesystem;
  const fs::path report = fs::path(dir) / "verify.json";
  if (dir.empty() || !fs::exists(report)) return {0, 0};
  try {
    const auto prev = nlohmann::ordered_json::parse(read_text_file(report.string()));
    if (prev.at("options") != options_json(opt)) return {0, 0};
  } catch (const std::exception&) {
    return {0, 0};
  }
  int compared = 0, mismatched = 0;
  for (const auto& [name, content] : artifacts) {
    const fs::path p = fs::path(dir) / name;
    if (!fs::exists(p)) continue;
    ++compared;
    if (read_text_file(p.string()) != content) ++mismatched;
  }
  return {compared, mismatched};
}

}  // namespace

bool CriterionResult::pass() const {
  if (skipped) return true;
  return std::all_of(checks.begin(), checks.end(),
                     [](const Check& c) { return c.informational || c.pass; });
}

std::string CriterionResult::summary_line() const {
  std::string line = id + (skipped ? " SKIP  " : pass() ? " PASS  " : " FAIL  ") + title;
  if (skipped) return line;
  int gated = 0, ok = 0;
  std::string failed;
  for (const auto& c : checks) {
    if (c.informational) continue;
    ++gated;
    if (c.pass) {
      ++ok;
    } else {
      failed += "; " + c.name + " = " + num(c.value) + " (want " + c.bound + ")";
    }
  }
  line += "  (" + std::to_string(ok) + "/" + std::to_string(gated) + " checks)";
  return line + failed;
}

bool AcceptanceReport::pass() const {
  return std::all_of(criteria.begin(), criteria.end(),
                     [](const CriterionResult& c) { return c.pass(); });
}

unsigned default_thread_count() {
  if (const char* env = std::getenv("DIFFWAVE_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return static_cast<unsigned>(n);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

AcceptanceReport run_acceptance(const AcceptanceOptions& opt) {
  const unsigned threads = opt.threads > 0 ? opt.threads : default_thread_count();

  enum Slot { kGamma, kM1, kRes1, kRes2, kP1, kP2, kP3, kP9a, kP9b, kSlots };
  std::vector<Outcome> outcome(kSlots);
  std::vector<Artifacts> artifacts(kSlots);
  LongRun gamma{"gamma", preset_config("gamma-default").scenario, {}, {}, {}};
  LongRun m1{"m1", preset_config("m1-default").scenario, {}, {}, {}};
  ResidualLevel res_coarse, res_fine;
  CriterionResult p1, p2, p3;
  std::string rerun[2];

  std::vector<std::function<void()>> tasks;
  if (!opt.fast) {
    tasks.push_back(guarded(outcome[kGamma], [&] { long_run(gamma, artifacts[kGamma]); }));
    tasks.push_back(guarded(outcome[kM1], [&] { long_run(m1, artifacts[kM1]); }));
    tasks.push_back(guarded(outcome[kRes1], [&] { res_coarse = residual_level(1024); }));
    tasks.push_back(guarded(outcome[kRes2], [&] { res_fine = residual_level(2048); }));
  }
  tasks.push_back(guarded(outcome[kP1], [&] { p1 = p1_profiles(opt, artifacts[kP1]); }));
  tasks.push_back(guarded(outcome[kP2], [&] { p2 = p2_corrections(opt); }));
  tasks.push_back(guarded(outcome[kP3], [&] { p3 = p3_solver(artifacts[kP3]); }));
  tasks.push_back(guarded(outcome[kP9a], [&] { rerun[0] = short_run_csv(); }));
  tasks.push_back(guarded(outcome[kP9b], [&] { rerun[1] = short_run_csv(); }));
  run_parallel(tasks, threads);

  AcceptanceReport rep;
  rep.fast = opt.fast;
  for (const auto& o : outcome) rep.blow_up = rep.blow_up || o.blow_up;

  auto finish = [&](CriterionResult c, std::initializer_list<Slot> slots) {
    for (Slot s : slots) {
      if (!outcome[s].error.empty()) c.checks.push_back(error_check(outcome[s]));
    }
    rep.criteria.push_back(std::move(c));
  };
  finish(outcome[kP1].error.empty() ? p1 : criterion("P1", "profile correctness"),
         {kP1});
  finish(outcome[kP2].error.empty() ? p2 : criterion("P2", "correction identities"),
         {kP2});
  finish(outcome[kP3].error.empty() ? p3 : criterion("P3", "solver baseline"), {kP3});

  const bool gamma_ok = outcome[kGamma].error.empty();
  const bool m1_ok = outcome[kM1].error.empty();
  auto skipped = [](const char* id, const char* title) {
    return CriterionResult{id, title, true, {}};
  };
  if (opt.fast) {
    rep.criteria.push_back(skipped("P4", "conservation"));
    rep.criteria.push_back(skipped("P5", "base decay rates, gamma-law"));
    rep.criteria.push_back(skipped("P6", "improved decay rates, gamma-law"));
    rep.criteria.push_back(skipped("P7", "improved decay rates, M1"));
    rep.criteria.push_back(skipped("P8", "higher-derivative trend"));
  } else {
    CriterionResult p4 = criterion("P4", "conservation");
    for (const LongRun* r : {&gamma, &m1}) {
      if (!outcome[r == &gamma ? kGamma : kM1].error.empty()) continue;
      double worst = 0.0;
      for (const auto& rec : r->series.records) worst = std::max(worst, std::abs(rec.mass_residual));
      p4.checks.push_back(below(r->name + " max |mass residual|", worst, 1e-6));
      p4.checks.push_back(at_least(r->name + " run complete", r->series.complete ? 1 : 0, 1));
    }
    finish(p4, {kGamma, kM1});

    CriterionResult p5 = criterion("P5", "base decay rates, gamma-law");
    if (gamma_ok) {
      p5.checks.push_back(from_fit("gamma l2_Vx", row_of(gamma.base, "l2_Vx").fit));
      p5.checks.push_back(from_fit("gamma l2_z", row_of(gamma.base, "l2_z").fit));
    }
    finish(p5, {kGamma});

    CriterionResult p6 = criterion("P6", "improved decay rates, gamma-law");
    if (gamma_ok) {
      for (const char* q : {"l2_V", "l2_Vx", "l2_z"}) {
        p6.checks.push_back(from_fit(std::string("gamma ") + q, row_of(gamma.improved, q).fit));
      }
    }
    finish(p6, {kGamma});

    CriterionResult p7 = criterion("P7", "improved decay rates, M1");
    if (m1_ok) {
      for (const char* q : {"l2_V", "l2_Vx", "l2_z"}) {
        p7.checks.push_back(from_fit(std::string("m1 ") + q, row_of(m1.improved, q).fit));
      }
      p7.checks.push_back(below("m1 max |u| over all steps", m1.series.max_abs_u, 1.0));
      p7.checks.push_back(at_least("m1 min v over all steps", m1.series.min_v,
                                   0.5 * std::min(m1.spec.v_minus, m1.spec.v_plus)));
    }
    if (outcome[kRes1].error.empty() && outcome[kRes2].error.empty()) {
      p7.checks.push_back(at_least("residual ratio (max norm) n 1024 -> 2048",
                                   res_coarse.max_abs / res_fine.max_abs, 3.5));
      p7.checks.push_back(note("residual ratio (L2) n 1024 -> 2048", res_coarse.l2 / res_fine.l2));
      char csv[256];
      std::snprintf(csv, sizeof csv, "n_cells,max_abs_residual,l2_residual\n%d,%.17g,%.17g\n%d,%.17g,%.17g\n",
                    res_coarse.n_cells, res_coarse.max_abs, res_coarse.l2, res_fine.n_cells,
                    res_fine.max_abs, res_fine.l2);
      artifacts[kRes1].emplace_back("residual_refinement.csv", csv);
    }
    finish(p7, {kM1, kRes1, kRes2});

    CriterionResult p8 = criterion("P8", "higher-derivative trend");
    for (const LongRun* r : {&gamma, &m1}) {
      if (!outcome[r == &gamma ? kGamma : kM1].error.empty()) continue;
      p8.checks.push_back(from_fit(r->name + " l2_Vxx", row_of(r->improved, "l2_Vxx").fit));
      p8.checks.push_back(note(r->name + " largest relative rise of l2_V for t >= 10",
                               largest_rise(r->series, "l2_V", 10.0)));
      for (const char* q : {"l2_zt", "l2_zxt", "l2_ztt"}) {
        const auto& fit = row_of(r->improved, q).fit;
        p8.checks.push_back(note(r->name + " " + q + " exponent", fit.exponent));
      }
    }
    finish(p8, {});
  }

  Artifacts all;
  for (const auto& a : artifacts) all.insert(all.end(), a.begin(), a.end());
  if (outcome[kP9a].error.empty()) all.emplace_back("rerun.csv", rerun[0]);

  CriterionResult p9 = criterion("P9", "determinism");
  if (outcome[kP9a].error.empty() && outcome[kP9b].error.empty()) {
    p9.checks.push_back(at_least("in-process rerun byte-identical", rerun[0] == rerun[1] ? 1 : 0, 1));
  }
  const auto [compared, mismatched] = compare_previous(opt.out_dir, all, opt);
  if (compared > 0) {
    p9.checks.push_back(at_most("artifacts differing from previous verify", mismatched, 0));
  } else {
    p9.checks.push_back(note("artifacts compared with previous verify", 0));
  }
  finish(p9, {kP9a, kP9b});

  if (!opt.out_dir.empty()) {
    for (const auto& [name, content] : all) write_text_file(opt.out_dir + "/" + name, content);
    write_text_file(opt.out_dir + "/verify.json", format_report_json(rep, opt));
  }
  return rep;
}

std::string format_report_json(const AcceptanceReport& report, const AcceptanceOptions& options) {
  nlohmann::ordered_json j;
  j["options"] = options_json(options);
  j["pass"] = report.pass();
  j["blow_up"] = report.blow_up;
  auto& list = j["criteria"] = nlohmann::ordered_json::array();
  for (const auto& c : report.criteria) {
    nlohmann::ordered_json cj;
    cj["id"] = c.id;
    cj["title"] = c.title;
    cj["status"] = c.skipped ? "skip" : c.pass() ? "pass" : "fail";
    auto& checks = cj["checks"] = nlohmann::ordered_json::array();
    for (const auto& k : c.checks) {
      nlohmann::ordered_json kj;
      kj["name"] = k.name;
      kj["value"] = k.value;
      kj["bound"] = k.bound;
      kj["pass"] = k.pass;
      kj["gated"] = !k.informational;
      checks.push_back(kj);
    }
    list.push_back(cj);
  }
  return j.dump(2) + "\n";
}

}  // namespace diffwave
