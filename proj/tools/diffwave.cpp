// diffwave: profile | simulate | rates | verify

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "diffwave/acceptance.hpp"
#include "diffwave/config.hpp"
#include "diffwave/errors.hpp"
#include "diffwave/io.hpp"
#include "diffwave/simulation.hpp"

namespace fs = std::filesystem;
using namespace diffwave;

namespace {

enum Exit { kPass = 0, kFail = 1, kUsage = 2, kBlowUp = 3 };

const std::vector<std::string> kChartColumns{"l2_V", "l2_Vx", "l2_Vxx", "l2_z", "l2_zx"};

void print_rates(const TheoremReport& rep) {
  std::printf("%-10s %10s %10s %8s %6s\n", "quantity", "exponent", "target", "r2", "pass");
  for (const auto& row : rep.rows) {
    const auto& f = row.fit;
    std::printf("%-10s %10.4f %10.3f %8.5f %6s%s\n", row.quantity.c_str(), f.exponent,
                f.target_exponent, f.r_squared, f.pass ? "yes" : "no",
                row.gated ? "" : "  (reported)");
  }
  std::printf("overall: %s\n", rep.pass ? "PASS" : "FAIL");
}

// An unreadable config file is a usage problem, not a run failure.
RunConfig read_config(const std::string& path) {
  try {
    return load_config(path);
  } catch (const IoError& e) {
    throw ConfigError({e.what()});
  }
}

int cmd_profile(const std::string& config_path, const std::string& out) {
  const RunConfig cfg = read_config(config_path);
  const auto& s = cfg.scenario;
  const auto profile = solve_profile(s.closure, s.v_minus, s.v_plus, s.alpha(), s.profile);
  const std::string dir = out.empty() ? cfg.output_dir : out;
  write_text_file(dir + "/profile.csv", format_profile_csv(profile));
  std::printf("profile: %zu points on [%g, %g], newton residual %.3g\n", profile.xi.size(),
              profile.xi.front(), profile.xi.back(), profile.newton_residual);
  return kPass;
}

int cmd_simulate(const std::string& config_path, const std::string& out) {
  const RunConfig cfg = read_config(config_path);
  const auto& s = cfg.scenario;
  const std::string dir = out.empty() ? cfg.output_dir : out;
  const auto profile = solve_profile(s.closure, s.v_minus, s.v_plus, s.alpha(), s.profile);
  const auto corr = s.corrections();
  const auto series = run(s, profile, corr);

  write_text_file(dir + "/config.ini", serialize_config(cfg));
  write_series_csv(dir + "/series.csv", series);
  write_text_file(dir + "/series_time.csv", format_time_series_csv(series));
  const double t_end = series.records.empty() ? 0.0 : series.records.back().t;
  std::printf("simulated to t = %g in %ld steps, x0 = %.6g, max|u| = %.4g%s\n", t_end,
              series.steps, series.x0, series.max_abs_u,
              series.complete ? "" : " (wall-clock budget reached)");
  if (series.records.size() < 8) return series.complete ? kPass : kFail;

  const auto rep = theorem_report(series, Targets::improved, t_end / 10.0, t_end);
  write_rates_csv(dir + "/rates.csv", rep);
  emit_loglog_svg(dir + "/rates.svg", series, kChartColumns, "perturbation norms");
  print_rates(rep);
  return series.complete ? kPass : kFail;
}

int cmd_rates(const std::string& series_path, const std::string& targets, const std::string& out,
              double t_lo, double t_hi) {
  const std::string time_path = (fs::path(series_path).parent_path() / "series_time.csv").string();
  const auto series = read_series_csv(series_path, time_path);
  if (series.records.empty()) throw ArgumentError("series has no rows: " + series_path);
  const double t_end = series.records.back().t;
  if (t_hi <= 0.0) t_hi = t_end;
  if (t_lo < 0.0) t_lo = t_hi / 10.0;
  const auto rep = theorem_report(series, parse_targets(targets), t_lo, t_hi);
  write_rates_csv(out + "/rates.csv", rep);
  emit_loglog_svg(out + "/rates.svg", series, kChartColumns, "perturbation norms");
  print_rates(rep);
  return rep.pass ? kPass : kFail;
}

int cmd_verify(const AcceptanceOptions& opt) {
  const auto rep = run_acceptance(opt);
  for (const auto& c : rep.criteria) std::printf("%s\n", c.summary_line().c_str());
  std::printf("overall: %s%s\n", rep.pass() ? "PASS" : "FAIL", rep.fast ? " (fast)" : "");
  if (!opt.out_dir.empty()) std::printf("report: %s/verify.json\n", opt.out_dir.c_str());
  if (rep.blow_up) return kBlowUp;
  return rep.pass() ? kPass : kFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Diffusion-wave decay experiments for the damped p-system"};
  app.require_subcommand(1);

  std::string config_path, out_dir, series_path, targets = "improved";
  double t_lo = -1.0, t_hi = 0.0;
  AcceptanceOptions verify_opt;

  auto* profile = app.add_subcommand("profile", "Solve the self-similar profile, write profile.csv");
  profile->add_option("--config", config_path, "Configuration file")->required();
  profile->add_option("--out", out_dir, "Output directory (default: output.dir)");

  auto* simulate = app.add_subcommand("simulate", "Run a scenario, write series and rates");
  simulate->add_option("--config", config_path, "Configuration file")->required();
  simulate->add_option("--out", out_dir, "Output directory (default: output.dir)");

  auto* rates = app.add_subcommand("rates", "Fit decay exponents to a series.csv");
  rates->add_option("--series", series_path, "series.csv from simulate")->required();
  rates->add_option("--targets", targets, "improved or base")
      ->check(CLI::IsMember({"improved", "base"}));
  rates->add_option("--out", out_dir, "Output directory")->required();
  rates->add_option("--t-lo", t_lo, "Fit window start (default: t_end / 10)");
  rates->add_option("--t-hi", t_hi, "Fit window end (default: t_end)");

  auto* verify = app.add_subcommand("verify", "Run the acceptance suite");
  verify->add_flag("--fast", verify_opt.fast, "Skip the long runs");
  verify->add_option("--profile-tol", verify_opt.profile_tol, "Newton tolerance for the profiles")
      ->check(CLI::PositiveNumber);
  verify->add_option("--out", verify_opt.out_dir, "Report directory")->capture_default_str();
  verify->add_option("--threads", verify_opt.threads, "Worker threads (default: DIFFWAVE_THREADS)");
  verify->add_option("--seed", verify_opt.seed, "Seed for randomized checks")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kPass : kUsage;
  }

  try {
    if (*profile) return cmd_profile(config_path, out_dir);
    if (*simulate) return cmd_simulate(config_path, out_dir);
    if (*rates) return cmd_rates(series_path, targets, out_dir, t_lo, t_hi);
    if (*verify) return cmd_verify(verify_opt);
  } catch (const ConfigError& e) {
    for (const auto& m : e.messages()) std::cerr << "config: " << m << "\n";
    return kUsage;
  } catch (const BlowUpError& e) {
    std::cerr << "blow-up: " << e.what() << "\n";
    return kBlowUp;
  } catch (const ArgumentError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFail;
  }
  return kUsage;
}
