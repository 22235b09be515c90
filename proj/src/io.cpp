#include "diffwave/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "diffwave/errors.hpp"

namespace diffwave {

namespace {

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, sep)) out.push_back(cell);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};

}  // namespace

std::string format_series_csv(const DiagnosticsSeries& series) {
  std::string out = "t";
  for (const auto& c : norm_columns()) out += "," + c;
  out += "\n";
  for (const auto& r : series.records) {
    out += fmt(r.t);
    for (double v : r.values()) out += "," + fmt(v);
    out += "\n";
  }
  return out;
}

std::string format_time_series_csv(const DiagnosticsSeries& series) {
  std::string out = "t,l2_zt,l2_zxt,l2_ztt\n";
  for (const auto& r : series.time_records) {
    out += fmt(r.t) + "," + fmt(r.l2_zt) + "," + fmt(r.l2_zxt) + "," + fmt(r.l2_ztt) + "\n";
  }
  return out;
}

std::string format_rates_csv(const TheoremReport& report) {
  std::string out = "quantity,exponent,target,tolerance,pass,r_squared,bound,gated\n";
  for (const auto& row : report.rows) {
    const RateFit& f = row.fit;
    out += row.quantity + "," + fmt(f.exponent) + "," + fmt(f.target_exponent) + "," +
           fmt(f.tolerance) + "," + (f.pass ? "1" : "0") + "," + fmt(f.r_squared) + "," +
           (f.upper_bound ? "upper" : "two-sided") + "," + (row.gated ? "1" : "0") + "\n";
  }
  return out;
}

std::string format_profile_csv(const WaveProfile& p) {
  std::string out = "xi,phi,dphi,d2phi,d3phi,d4phi\n";
  for (std::size_t i = 0; i < p.xi.size(); ++i) {
    out += fmt(p.xi[i]) + "," + fmt(p.phi[i]) + "," + fmt(p.dphi[i]) + "," + fmt(p.d2phi[i]) +
           "," + fmt(p.d3phi[i]) + "," + fmt(p.d4phi[i]) + "\n";
  }
  return out;
}

void write_text_file(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  std::error_code ec;
  const fs::path parent = fs::path(path).parent_path();
  if (!parent.empty()) fs::create_directories(parent, ec);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << content;
  out.close();
  if (!out) throw IoError("write to '" + path + "' failed");
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_series_csv(const std::string& path, const DiagnosticsSeries& series) {
  write_text_file(path, format_series_csv(series));
}

void write_rates_csv(const std::string& path, const TheoremReport& report) {
  write_text_file(path, format_rates_csv(report));
}

DiagnosticsSeries parse_series_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw IoError("series csv: empty input");
  const auto header = split(line, ',');
  std::vector<std::string> expected{"t"};
  for (const auto& c : norm_columns()) expected.push_back(c);
  if (header != expected) throw IoError("series csv: unexpected header '" + line + "'");

  DiagnosticsSeries series;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto cells = split(line, ',');
    if (cells.size() != expected.size()) {
      throw IoError("series csv: line " + std::to_string(line_no) + " has " +
                    std::to_string(cells.size()) + " fields");
    }
    std::vector<double> vals(cells.size());
    try {
      for (std::size_t k = 0; k < cells.size(); ++k) vals[k] = std::stod(cells[k]);
    } catch (const std::exception&) {
      throw IoError("series csv: bad number on line " + std::to_string(line_no));
    }
    series.records.push_back(
        NormRecord::from_values(vals[0], std::span<const double>(vals).subspan(1)));
  }
  return series;
}

DiagnosticsSeries read_series_csv(const std::string& path, const std::string& time_path) {
  DiagnosticsSeries series = parse_series_csv(read_text_file(path));
  if (time_path.empty() || !std::filesystem::exists(time_path)) return series;
  std::istringstream in(read_text_file(time_path));
  std::string line;
  std::getline(in, line);
  if (line != "t,l2_zt,l2_zxt,l2_ztt") throw IoError("time series csv: unexpected header");
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = split(line, ',');
    if (cells.size() != 4) throw IoError("time series csv: expected 4 fields");
    series.time_records.push_back(
        {std::stod(cells[0]), std::stod(cells[1]), std::stod(cells[2]), std::stod(cells[3])});
  }
  return series;
}

std::string loglog_svg(const DiagnosticsSeries& series, const std::vector<std::string>& columns,
                       const std::string& title) {
  const double W = 720, H = 480, ml = 70, mr = 150, mt = 40, mb = 55;
  const auto t = series.times();
  double xmin = INFINITY, xmax = -INFINITY, ymin = INFINITY, ymax = -INFINITY;
  std::vector<std::vector<double>> cols;
  for (const auto& name : columns) {
    cols.push_back(series.column(name));
    const auto& c = cols.back();
    for (std::size_t i = 0; i < c.size() && i < t.size(); ++i) {
      if (!(c[i] > 0.0)) continue;
      xmin = std::min(xmin, std::log10(1.0 + t[i]));
      xmax = std::max(xmax, std::log10(1.0 + t[i]));
      ymin = std::min(ymin, std::log10(c[i]));
      ymax = std::max(ymax, std::log10(c[i]));
    }
  }
  if (!(xmax > xmin)) { xmin = 0.0; xmax = 1.0; }
  if (!(ymax > ymin)) { ymin = std::isfinite(ymin) ? ymin - 1.0 : 0.0; ymax = ymin + 2.0; }
  xmin = std::floor(xmin);
  xmax = std::ceil(xmax);
  ymin = std::floor(ymin);
  ymax = std::ceil(ymax);
  auto px = [&](double lx) { return ml + (lx - xmin) / (xmax - xmin) * (W - ml - mr); };
  auto py = [&](double ly) { return H - mb - (ly - ymin) / (ymax - ymin) * (H - mt - mb); };

  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
    << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  s << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s << "<text x=\"" << W / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">" << title
    << "</text>\n";
  s << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << W - ml - mr << "\" height=\""
    << H - mt - mb << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (double d = xmin; d <= xmax + 1e-9; d += 1.0) {
    s << "<line x1=\"" << px(d) << "\" y1=\"" << H - mb << "\" x2=\"" << px(d) << "\" y2=\""
      << H - mb + 5 << "\" stroke=\"black\"/>";
    s << "<text x=\"" << px(d) << "\" y=\"" << H - mb + 18 << "\" text-anchor=\"middle\">1e"
      << static_cast<int>(d) << "</text>\n";
  }
  for (double d = ymin; d <= ymax + 1e-9; d += 1.0) {
    s << "<line x1=\"" << ml - 5 << "\" y1=\"" << py(d) << "\" x2=\"" << ml << "\" y2=\""
      << py(d) << "\" stroke=\"black\"/>";
    s << "<text x=\"" << ml - 8 << "\" y=\"" << py(d) + 4 << "\" text-anchor=\"end\">1e"
      << static_cast<int>(d) << "</text>\n";
  }
  s << "<text x=\"" << (ml + W - mr) / 2 << "\" y=\"" << H - 12
    << "\" text-anchor=\"middle\">1 + t</text>\n";
  s << "<text x=\"16\" y=\"" << (mt + H - mb) / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
    << (mt + H - mb) / 2 << ")\">norm</text>\n";
  for (std::size_t k = 0; k < cols.size(); ++k) {
    const char* colour = kPalette[k % 8];
    s << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < cols[k].size() && i < t.size(); ++i) {
      if (!(cols[k][i] > 0.0)) continue;
      s << px(std::log10(1.0 + t[i])) << "," << py(std::log10(cols[k][i])) << " ";
    }
    s << "\"/>\n";
    const double ly = mt + 16 + 18 * static_cast<double>(k);
    s << "<line x1=\"" << W - mr + 12 << "\" y1=\"" << ly << "\" x2=\"" << W - mr + 36
      << "\" y2=\"" << ly << "\" stroke=\"" << colour << "\" stroke-width=\"2\"/>";
    s << "<text x=\"" << W - mr + 42 << "\" y=\"" << ly + 4 << "\">" << columns[k] << "</text>\n";
  }
  s << "</svg>\n";
  return s.str();
}

void emit_loglog_svg(const std::string& path, const DiagnosticsSeries& series,
                     const std::vector<std::string>& columns, const std::string& title) {
  write_text_file(path, loglog_svg(series, columns, title));
}

}  // namespace diffwave
