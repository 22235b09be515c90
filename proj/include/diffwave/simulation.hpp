#pragma once

#include <vector>

#include "diffwave/corrections.hpp"
#include "diffwave/diagnostics.hpp"
#include "diffwave/diffusion_wave.hpp"
#include "diffwave/solver.hpp"

namespace diffwave {

/// Builds the initial data, picks the shift x0 and integrates to each sample
/// time in turn, recording the perturbation norms there. Sample times must be
/// non-decreasing and non-negative. Stops early, with `complete = false`,
/// once spec.wall_clock_budget seconds have elapsed.
DiagnosticsSeries run(const ScenarioSpec& spec, const WaveProfile& profile,
                      const CorrectionField& corr, const std::vector<double>& sample_times);

/// run() with spec.sample_times().
DiagnosticsSeries run(const ScenarioSpec& spec, const WaveProfile& profile,
                      const CorrectionField& corr);

/// Shift for the given initial state; zero when v+ == v-.
double initial_shift(const SimState& initial, const WaveProfile& profile,
                     const CorrectionField& corr);

}  // namespace diffwave
