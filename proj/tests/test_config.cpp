#include <doctest.h>

#include <algorithm>

#include "diffwave/config.hpp"
#include "diffwave/errors.hpp"

using namespace diffwave;

namespace {

std::vector<std::string> errors_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.messages();
  }
  return {};
}

bool mentions(const std::vector<std::string>& errors, const std::string& needle) {
  return std::any_of(errors.begin(), errors.end(),
                     [&](const std::string& e) { return e.find(needle) != std::string::npos; });
}

}  // namespace

TEST_CASE("minimal config gets the documented defaults") {
  const auto cfg = parse_config("[closure]\nkind = m1\n");
  CHECK(cfg.scenario.cfl == 0.45);
  CHECK(cfg.scenario.n_cells == 4096);
  CHECK(cfg.scenario.x_max == 0.0);
  CHECK(cfg.scenario.closure.kind() == ModelClosure::Kind::m1);
  CHECK(cfg.output_dir == "out");

  const auto shortcut = parse_config("closure = gamma  # top-level form\n[closure]\ngamma = 1.4\n");
  CHECK(shortcut.scenario.closure.kind() == ModelClosure::Kind::gamma_law);
  CHECK(shortcut.scenario.closure.parameter() == 1.4);
  const auto alias = parse_config("[closure]\nkind = gamma_law\ngamma = 1.4\n");
  CHECK(alias.scenario == shortcut.scenario);
}

TEST_CASE("validation errors are collected") {
  CHECK(mentions(errors_of("[closure]\nkind = m1\n[time]\ncfl = 1.5\n"), "cfl must lie in (0,1)"));

  const auto errs = errors_of("[closure]\nkind = m1\n[grid]\nn_cell = 10\n[time]\ncfl = -1\nend = x\n");
  CHECK(errs.size() >= 3);
  CHECK(mentions(errs, "unknown key 'grid.n_cell'"));
  CHECK(mentions(errs, "did you mean 'grid.n_cells'"));
  CHECK(mentions(errs, "cfl must lie in (0,1)"));
  CHECK(mentions(errs, "time.end: expected a number"));

  CHECK(mentions(errors_of("[grid]\nn_cells = 64\n"), "missing required key 'closure.kind'"));
  CHECK(mentions(errors_of("[closure]\nkind = m1\nkind = gamma\n"), "duplicate key"));
  CHECK(mentions(errors_of("[closure]\nkind = plasma\n"), "closure.kind must be"));
  CHECK(mentions(errors_of("scenario = m2-default\n"), "unknown scenario preset"));
  CHECK(mentions(errors_of("[closure\nkind = m1\n"), "malformed section header"));
  CHECK(mentions(errors_of("[closure]\nkind = m1\n[scenario]\nv_plus = 2.0\n"), "smallness cap"));
}

TEST_CASE("presets expand to the acceptance scenarios") {
  const auto m1 = parse_config("scenario = \"m1-default\"\n");
  const auto& s = m1.scenario;
  CHECK(m1.preset == "m1-default");
  CHECK(s.closure.kind() == ModelClosure::Kind::m1);
  CHECK(s.alpha() == 1.0);
  CHECK(s.v_minus == 1.0);
  CHECK(s.v_plus == 1.1);
  CHECK(s.u_minus == 0.0);
  CHECK(s.u_plus == 0.05);
  CHECK(s.perturbation.amplitude == 0.01);
  CHECK(s.n_cells == 8192);
  CHECK(s.end_time == 500.0);
  CHECK(s.cfl == 0.15);
  CHECK(s.wave_strength() == doctest::Approx(0.15));

  const auto g = parse_config("scenario = gamma-default\n").scenario;
  CHECK(g.closure.kind() == ModelClosure::Kind::gamma_law);
  CHECK(g.closure.parameter() == 2.0);
  CHECK(g.u_plus == 0.0);
  CHECK(g.n_cells == 8192);

  const auto over = parse_config("scenario = m1-default\n[grid]\nn_cells = 512\n");
  CHECK(over.scenario.n_cells == 512);
  CHECK(over.scenario.u_plus == 0.05);
}

TEST_CASE("serialised configs parse back to an equal config") {
  for (const std::string text :
       {"scenario = m1-default\n", "scenario = gamma-default\n[output]\ndir = runs/g\nseed = 42\n",
        "scenario = constant\n",
        "[closure]\nkind = linear\nslope = 0.5\nalpha = 2\n[scenario]\nv_plus = 1.2\n"
        "[grid]\nx_max = 55.5\n[mollifier]\nshape = cosine\nhalf_width = 0.75\n"}) {
    const auto cfg = parse_config(text);
    const auto again = parse_config(serialize_config(cfg));
    CHECK(again == cfg);
    CHECK(serialize_config(again) == serialize_config(cfg));
  }
}

TEST_CASE("config files") {
  CHECK_THROWS_AS(load_config("/nonexistent/diffwave.ini"), IoError);
  CHECK(edit_distance("kitten", "sitting") == 3);
  CHECK(edit_distance("", "abc") == 3);
  const auto& keys = config_keys();
  CHECK(std::find(keys.begin(), keys.end(), "time.cfl") != keys.end());
}
