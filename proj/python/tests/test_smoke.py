import math

import pytest

import diffwave as dw


def test_linear_profile_is_erf():
    p = dw.solve_profile(dw.ModelClosure.linear(1.0, 1.0), 1.0, 1.2, 1.0)
    assert p.newton_residual < 1e-8
    for xi in (-3.0, -0.5, 0.0, 1.25):
        exact = 1.1 + 0.1 * math.erf(xi / 2.0)
        assert p.derivatives_at(xi)[0] == pytest.approx(exact, abs=1e-8)
    assert p.vbar(0.0, 3.0) == pytest.approx(1.1, abs=1e-12)


def test_m1_profile_is_monotone():
    p = dw.solve_profile(dw.ModelClosure.m1(1.0), 1.0, 1.2, 1.0)
    assert all(b >= a for a, b in zip(p.phi, p.phi[1:]))
    assert p.phi[0] == pytest.approx(1.0, abs=1e-10)
    assert p.phi[-1] == pytest.approx(1.2, abs=1e-10)


def test_config_round_trip_and_errors():
    cfg = dw.parse_config("scenario = m1-default\n[grid]\nn_cells = 256\n")
    assert cfg.preset == "m1-default"
    assert cfg.scenario.n_cells == 256
    again = dw.parse_config(dw.serialize_config(cfg))
    assert again.scenario.n_cells == 256
    with pytest.raises(dw.ConfigError, match="cfl"):
        dw.parse_config("[closure]\nkind = m1\n[time]\ncfl = 1.5\n")


def test_short_simulation_conserves_mass():
    spec = dw.preset_config("m1-default").scenario
    spec.n_cells = 256
    spec.end_time = 2.0
    spec.n_samples = 8
    series = dw.simulate(spec)
    assert series.complete
    assert series.steps > 0
    assert max(abs(m) for m in series.column("mass_residual")) < 1e-10
    assert series.to_csv().startswith("t,l2_V,")


def test_fit_recovers_power_law():
    t = [float(k) for k in range(1, 40)]
    values = [3.0 * (1.0 + s) ** -0.75 for s in t]
    fit = dw.fit_decay_rate(t, values, 1.0, 40.0, -0.75, 0.01)
    assert fit.exponent == pytest.approx(-0.75, abs=1e-12)
    assert fit.passed


def test_fast_verify():
    result = dw.verify(fast=True)
    assert result["P1"] and result["P2"] and result["P3"] and result["P9"]
    assert result["P5"] is None
