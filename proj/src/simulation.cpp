#include "diffwave/simulation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "diffwave/errors.hpp"

namespace diffwave {

double initial_shift(const SimState& initial, const WaveProfile& profile,
                     const CorrectionField& corr) {
  if (profile.is_constant()) return 0.0;
  return compute_shift_x0(initial.grid, initial.v, profile, corr);
}

DiagnosticsSeries run(const ScenarioSpec& spec, const WaveProfile& profile,
                      const CorrectionField& corr, const std::vector<double>& sample_times) {
  for (std::size_t k = 0; k < sample_times.size(); ++k) {
    if (!(sample_times[k] >= 0.0) || (k > 0 && sample_times[k] < sample_times[k - 1])) {
      throw ArgumentError("run: sample times must be non-negative and non-decreasing");
    }
  }
  using clock = std::chrono::steady_clock;
  const auto started = clock::now();
  auto out_of_time = [&] {
    if (spec.wall_clock_budget <= 0.0) return false;
    return std::chrono::duration<double>(clock::now() - started).count() > spec.wall_clock_budget;
  };

  SimState state = build_initial_data(spec, profile, corr);
  DiagnosticsSeries series;
  series.x0 = initial_shift(state, profile, corr);
  series.wave_strength = spec.wave_strength();
  series.min_v = *std::min_element(state.v.begin(), state.v.end());
  for (double u : state.u) series.max_abs_u = std::max(series.max_abs_u, std::abs(u));

  Stepper stepper;
  for (double target : sample_times) {
    while (state.t < target) {
      double dt = cfl_dt(state, spec.cfl);
      if (state.t + 1.5 * dt > target) dt = std::min(dt, target - state.t);
      stepper.advance(state, dt);
      if (target - state.t < 1e-12 * std::max(1.0, target)) state.t = target;
      ++series.steps;
      for (std::size_t i = 0; i < state.v.size(); ++i) {
        series.min_v = std::min(series.min_v, state.v[i]);
        series.max_abs_u = std::max(series.max_abs_u, std::abs(state.u[i]));
      }
      if (out_of_time()) break;
    }
    if (state.t < target) {
      series.complete = false;
      break;
    }
    const auto fields = build_fields(state, profile, series.x0, corr);
    series.records.push_back(field_norms(fields));
    series.time_records.push_back(time_derivative_norms(state, profile, series.x0, corr));
  }
  return series;
}

DiagnosticsSeries run(const ScenarioSpec& spec, const WaveProfile& profile,
                      const CorrectionField& corr) {
  return run(spec, profile, corr, spec.sample_times());
}

}  // namespace diffwave
