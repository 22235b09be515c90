#pragma once

#include <string>
#include <vector>

#include "diffwave/diagnostics.hpp"
#include "diffwave/diffusion_wave.hpp"

namespace diffwave {

/// Header "t,<norm_columns()>", one row per record, %.17g throughout.
std::string format_series_csv(const DiagnosticsSeries& series);
/// Header "t,l2_zt,l2_zxt,l2_ztt".
std::string format_time_series_csv(const DiagnosticsSeries& series);
/// Header "quantity,exponent,target,tolerance,pass,r_squared,bound,gated".
std::string format_rates_csv(const TheoremReport& report);
/// Header "xi,phi,dphi,d2phi,d3phi,d4phi".
std::string format_profile_csv(const WaveProfile& profile);

/// Writes `content` to `path`, creating parent directories. IoError on failure.
void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

void write_series_csv(const std::string& path, const DiagnosticsSeries& series);
void write_rates_csv(const std::string& path, const TheoremReport& report);

/// Parses a file written by write_series_csv. If `time_path` names a readable
/// file in the format_time_series_csv layout, its rows are attached too.
DiagnosticsSeries read_series_csv(const std::string& path, const std::string& time_path = "");
DiagnosticsSeries parse_series_csv(const std::string& text);

/// Log-log polyline chart of the named columns against 1 + t, one line per
/// column, with axis labels and decade ticks. Non-positive values are skipped.
std::string loglog_svg(const DiagnosticsSeries& series, const std::vector<std::string>& columns,
                       const std::string& title);
void emit_loglog_svg(const std::string& path, const DiagnosticsSeries& series,
                     const std::vector<std::string>& columns, const std::string& title);

}  // namespace diffwave
