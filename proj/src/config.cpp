#include "diffwave/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "diffwave/errors.hpp"

namespace diffwave {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::string unquote(const std::string& s) {
  if (s.size() >= 2 && (s.front() == '"' || s.front() == '\'') && s.back() == s.front()) {
    return s.substr(1, s.size() - 2);
  }
  return s;
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

struct Entry {
  std::string value;
  int line = 0;
};

// Typed access to the parsed key table; problems go to `errors`.
class Reader {
 public:
  Reader(std::map<std::string, Entry> entries, std::vector<std::string>& errors)
      : entries_(std::move(entries)), errors_(errors) {}

  bool has(const std::string& key) const { return entries_.count(key) != 0; }

  void number(const std::string& key, double& out) {
    auto it = entries_.find(key);
    if (it == entries_.end()) return;
    const std::string& v = it->second.value;
    try {
      std::size_t used = 0;
      const double x = std::stod(v, &used);
      if (used != v.size() || !std::isfinite(x)) throw std::invalid_argument(v);
      out = x;
    } catch (const std::exception&) {
      errors_.push_back(where(it) + key + ": expected a number, got '" + v + "'");
    }
  }

  template <class Int>
  void integer(const std::string& key, Int& out) {
    auto it = entries_.find(key);
    if (it == entries_.end()) return;
    const std::string& v = it->second.value;
    try {
      std::size_t used = 0;
      const long long x = std::stoll(v, &used);
      if (used != v.size()) throw std::invalid_argument(v);
      out = static_cast<Int>(x);
    } catch (const std::exception&) {
      errors_.push_back(where(it) + key + ": expected an integer, got '" + v + "'");
    }
  }

  void text(const std::string& key, std::string& out) {
    auto it = entries_.find(key);
    if (it != entries_.end()) out = it->second.value;
  }

 private:
  static std::string where(std::map<std::string, Entry>::const_iterator it) {
    return "line " + std::to_string(it->second.line) + ": ";
  }
  std::map<std::string, Entry> entries_;
  std::vector<std::string>& errors_;
};

// Flat view of the closure so that keys can be applied one at a time.
struct ClosureFields {
  std::string kind;
  double alpha = 1.0;
  double gamma = 2.0;
  double slope = 1.0;
};

ClosureFields closure_fields(const ModelClosure& c) {
  ClosureFields f;
  f.alpha = c.alpha();
  switch (c.kind()) {
    case ModelClosure::Kind::m1:
      f.kind = "m1";
      break;
    case ModelClosure::Kind::gamma_law:
      f.kind = "gamma";
      f.gamma = c.parameter();
      break;
    case ModelClosure::Kind::linear:
      f.kind = "linear";
      f.slope = c.parameter();
      break;
  }
  return f;
}

std::string nearest_key(const std::string& key) {
  std::string best;
  std::size_t best_d = std::string::npos;
  for (const auto& k : config_keys()) {
    const std::size_t d = edit_distance(key, k);
    if (d < best_d) {
      best_d = d;
      best = k;
    }
  }
  return best;
}

}  // namespace

std::size_t edit_distance(const std::string& a, const std::string& b) {
  std::vector<std::size_t> row(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) row[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diag = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t up = row[j];
      row[j] = std::min({row[j] + 1, row[j - 1] + 1, diag + (a[i - 1] == b[j - 1] ? 0 : 1)});
      diag = up;
    }
  }
  return row[b.size()];
}

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys{
      "closure.kind",      "closure.alpha",     "closure.sigma",       "closure.gamma",
      "closure.slope",     "scenario.preset",   "scenario.v_minus",    "scenario.v_plus",
      "scenario.u_minus",  "scenario.u_plus",   "scenario.amplitude",  "scenario.u_amplitude",
      "scenario.center",   "scenario.width",    "mollifier.shape",     "mollifier.center",
      "mollifier.half_width", "grid.n_cells",   "grid.x_max",          "time.end",
      "time.cfl",          "time.samples",      "time.budget",         "profile.n_cells",
      "profile.xi_max",    "profile.tol",       "output.dir",          "output.seed",
  };
  return keys;
}

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names{"m1-default", "gamma-default", "constant"};
  return names;
}

RunConfig preset_config(const std::string& name) {
  RunConfig c;
  c.preset = name;
  ScenarioSpec& s = c.scenario;
  if (name == "m1-default") {
    s.closure = ModelClosure::m1(1.0);
    s.v_minus = 1.0;
    s.v_plus = 1.1;
    s.u_minus = 0.0;
    s.u_plus = 0.05;
    s.perturbation.amplitude = 0.01;
    s.n_cells = 8192;
    s.end_time = 500.0;
    s.cfl = 0.15;
  } else if (name == "gamma-default") {
    s.closure = ModelClosure::gamma_law(2.0, 1.0);
    s.v_minus = 1.0;
    s.v_plus = 1.1;
    s.perturbation.amplitude = 0.01;
    s.n_cells = 8192;
    s.end_time = 500.0;
    s.cfl = 0.15;
  } else if (name == "constant") {
    s.closure = ModelClosure::m1(1.0);
    s.v_minus = 1.0;
    s.v_plus = 1.0;
    s.perturbation.amplitude = 0.0;
    s.n_cells = 1024;
    s.end_time = 10.0;
  } else {
    std::string known;
    for (const auto& n : preset_names()) known += (known.empty() ? "" : ", ") + n;
    throw ConfigError({"unknown scenario preset '" + name + "' (known: " + known + ")"});
  }
  return c;
}

RunConfig parse_config(const std::string& text) {
  std::vector<std::string> errors;
  std::map<std::string, Entry> entries;
  std::istringstream in(text);
  std::string raw;
  std::string section;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto cut = raw.find_first_of("#;");
    const std::string line = trim(cut == std::string::npos ? raw : raw.substr(0, cut));
    if (line.empty()) continue;
    const std::string at = "line " + std::to_string(line_no) + ": ";
    if (line.front() == '[') {
      if (line.back() != ']') {
        errors.push_back(at + "malformed section header '" + line + "'");
        continue;
      }
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      errors.push_back(at + "expected 'key = value', got '" + line + "'");
      continue;
    }
    const std::string name = trim(line.substr(0, eq));
    const std::string value = unquote(trim(line.substr(eq + 1)));
    std::string key;
    if (section.empty()) {
      // Top-level shortcuts.
      if (name == "closure") key = "closure.kind";
      else if (name == "scenario") key = "scenario.preset";
      else key = name;
    } else {
      key = section + "." + name;
    }
    if (std::find(config_keys().begin(), config_keys().end(), key) == config_keys().end()) {
      errors.push_back(at + "unknown key '" + key + "' (did you mean '" + nearest_key(key) +
                       "'?)");
      continue;
    }
    if (entries.count(key)) {
      errors.push_back(at + "duplicate key '" + key + "' (first set on line " +
                       std::to_string(entries[key].line) + ")");
      continue;
    }
    entries[key] = Entry{value, line_no};
  }

  RunConfig cfg;
  if (entries.count("scenario.preset")) {
    try {
      cfg = preset_config(entries["scenario.preset"].value);
    } catch (const ConfigError& e) {
      errors.push_back("line " + std::to_string(entries["scenario.preset"].line) + ": " +
                       e.messages().front());
    }
  }
  const bool have_kind = entries.count("closure.kind") != 0;
  if (!have_kind && cfg.preset.empty()) {
    errors.push_back("missing required key 'closure.kind' (or a 'scenario' preset)");
  }

  Reader r(std::move(entries), errors);
  ScenarioSpec& s = cfg.scenario;
  ClosureFields cf = closure_fields(s.closure);
  r.text("closure.kind", cf.kind);
  if (cf.kind == "gamma_law") cf.kind = "gamma";
  r.number("closure.alpha", cf.alpha);
  r.number("closure.sigma", cf.alpha);
  r.number("closure.gamma", cf.gamma);
  r.number("closure.slope", cf.slope);
  if (r.has("closure.alpha") && r.has("closure.sigma")) {
    errors.push_back("closure.sigma and closure.alpha both set; they name the same damping");
  }

  r.number("scenario.v_minus", s.v_minus);
  r.number("scenario.v_plus", s.v_plus);
  r.number("scenario.u_minus", s.u_minus);
  r.number("scenario.u_plus", s.u_plus);
  r.number("scenario.amplitude", s.perturbation.amplitude);
  r.number("scenario.u_amplitude", s.perturbation.u_amplitude);
  r.number("scenario.center", s.perturbation.center);
  r.number("scenario.width", s.perturbation.width);

  std::string shape = to_string(s.mollifier_shape);
  r.text("mollifier.shape", shape);
  r.number("mollifier.center", s.mollifier_center);
  r.number("mollifier.half_width", s.mollifier_half_width);

  r.integer("grid.n_cells", s.n_cells);
  std::string x_max = s.x_max > 0.0 ? fmt(s.x_max) : "auto";
  r.text("grid.x_max", x_max);
  r.number("time.end", s.end_time);
  r.number("time.cfl", s.cfl);
  r.integer("time.samples", s.n_samples);
  r.number("time.budget", s.wall_clock_budget);
  r.integer("profile.n_cells", s.profile.n_cells);
  r.number("profile.xi_max", s.profile.xi_max);
  r.number("profile.tol", s.profile.tol);
  r.text("output.dir", cfg.output_dir);
  r.integer("output.seed", cfg.seed);

  // Range checks, each independent so that all problems are reported.
  if (x_max == "auto") {
    s.x_max = 0.0;
  } else {
    try {
      std::size_t used = 0;
      s.x_max = std::stod(x_max, &used);
      if (used != x_max.size()) throw std::invalid_argument(x_max);
      if (!(s.x_max > 0.0)) errors.push_back("grid.x_max must be > 0 or 'auto'");
    } catch (const std::invalid_argument&) {
      errors.push_back("grid.x_max: expected a number or 'auto', got '" + x_max + "'");
    }
  }
  try {
    s.mollifier_shape = parse_mollifier_shape(shape);
  } catch (const ArgumentError& e) {
    errors.push_back(std::string("mollifier.shape: ") + e.what());
  }
  if (!(s.cfl > 0.0 && s.cfl < 1.0)) errors.push_back("cfl must lie in (0,1)");
  if (s.n_cells < 16) errors.push_back("grid.n_cells must be >= 16");
  if (s.profile.n_cells < 64) errors.push_back("profile.n_cells must be >= 64");
  if (!(s.profile.tol > 0.0)) errors.push_back("profile.tol must be > 0");
  if (s.profile.xi_max < 0.0) errors.push_back("profile.xi_max must be >= 0 (0 = auto)");
  if (!(s.end_time >= 0.0)) errors.push_back("time.end must be >= 0");
  if (s.n_samples < 8) errors.push_back("time.samples must be >= 8");
  if (s.wall_clock_budget < 0.0) errors.push_back("time.budget must be >= 0");
  if (!(s.perturbation.width > 0.0)) errors.push_back("scenario.width must be > 0");
  if (!(s.mollifier_half_width > 0.0)) errors.push_back("mollifier.half_width must be > 0");
  if (!(s.v_minus > 0.0) || !(s.v_plus > 0.0)) errors.push_back("scenario.v_minus and v_plus must be > 0");
  if (std::abs(s.perturbation.amplitude) > 0.1 || std::abs(s.perturbation.u_amplitude) > 0.1) {
    errors.push_back("perturbation amplitudes must not exceed 0.1 in magnitude");
  }
  if (s.wave_strength() > 0.5) {
    errors.push_back("wave strength |v+ - v-| + |u+ - u-| = " + fmt(s.wave_strength()) +
                     " exceeds the smallness cap 0.5");
  }
  if (!(cf.alpha > 0.0)) errors.push_back("closure.alpha must be > 0");

  bool closure_ok = cf.alpha > 0.0;
  if (cf.kind == "m1") {
    if (closure_ok) s.closure = ModelClosure::m1(cf.alpha);
  } else if (cf.kind == "gamma") {
    if (!(cf.gamma > 0.0)) {
      errors.push_back("closure.gamma must be > 0");
      closure_ok = false;
    }
    if (closure_ok) s.closure = ModelClosure::gamma_law(cf.gamma, cf.alpha);
  } else if (cf.kind == "linear") {
    if (!(cf.slope > 0.0)) {
      errors.push_back("closure.slope must be > 0");
      closure_ok = false;
    }
    if (closure_ok) s.closure = ModelClosure::linear(cf.slope, cf.alpha);
  } else if (have_kind || !cfg.preset.empty()) {
    errors.push_back("closure.kind must be m1, gamma or linear, got '" + cf.kind + "'");
    closure_ok = false;
  }

  if (closure_ok && s.v_minus > 0.0 && s.v_plus > 0.0) {
    try {
      const auto [vb, ub] = assumption_box(s.v_minus, s.v_plus, s.u_minus, s.u_plus);
      const auto rep = check_assumptions(s.closure, vb, ub);
      if (!rep.hyperbolic_ok) errors.push_back("closure is not strictly hyperbolic between the end states");
      if (!rep.sign_ok) errors.push_back("inf (g f' - p') over the end-state box is not positive");
      if (!rep.smoothness_ok) errors.push_back("closure violates p' < 0 or g(0) = g'(0) = 0");
    } catch (const Error& e) {
      errors.push_back(std::string("end states: ") + e.what());
    }
  }

  if (!errors.empty()) throw ConfigError(std::move(errors));
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string serialize_config(const RunConfig& cfg) {
  const ScenarioSpec& s = cfg.scenario;
  const ClosureFields cf = closure_fields(s.closure);
  std::ostringstream out;
  out << "[closure]\n";
  out << "kind = " << cf.kind << "\n";
  out << "alpha = " << fmt(cf.alpha) << "\n";
  if (cf.kind == "gamma") out << "gamma = " << fmt(cf.gamma) << "\n";
  if (cf.kind == "linear") out << "slope = " << fmt(cf.slope) << "\n";
  out << "\n[scenario]\n";
  out << "v_minus = " << fmt(s.v_minus) << "\n";
  out << "v_plus = " << fmt(s.v_plus) << "\n";
  out << "u_minus = " << fmt(s.u_minus) << "\n";
  out << "u_plus = " << fmt(s.u_plus) << "\n";
  out << "amplitude = " << fmt(s.perturbation.amplitude) << "\n";
  out << "u_amplitude = " << fmt(s.perturbation.u_amplitude) << "\n";
  out << "center = " << fmt(s.perturbation.center) << "\n";
  out << "width = " << fmt(s.perturbation.width) << "\n";
  out << "\n[mollifier]\n";
  out << "shape = " << to_string(s.mollifier_shape) << "\n";
  out << "center = " << fmt(s.mollifier_center) << "\n";
  out << "half_width = " << fmt(s.mollifier_half_width) << "\n";
  out << "\n[grid]\n";
  out << "n_cells = " << s.n_cells << "\n";
  out << "x_max = " << (s.x_max > 0.0 ? fmt(s.x_max) : "auto") << "\n";
  out << "\n[time]\n";
  out << "end = " << fmt(s.end_time) << "\n";
  out << "cfl = " << fmt(s.cfl) << "\n";
  out << "samples = " << s.n_samples << "\n";
  out << "budget = " << fmt(s.wall_clock_budget) << "\n";
  out << "\n[profile]\n";
  out << "n_cells = " << s.profile.n_cells << "\n";
  out << "xi_max = " << fmt(s.profile.xi_max) << "\n";
  out << "tol = " << fmt(s.profile.tol) << "\n";
  out << "\n[output]\n";
  out << "dir = " << cfg.output_dir << "\n";
  out << "seed = " << cfg.seed << "\n";
  return out.str();
}

}  // namespace diffwave
