"""Hardness profiles, the composite ratio machinery, and config files."""

import math

import numpy as np
import pytest

from minsumvc import (
    CONFIG_MAGIC,
    ConfigFormatError,
    CoverProfile,
    HardnessConfig,
    OptimizeResult,
    completeness_limit,
    completeness_profile,
    composite_ratio,
    copula_diag_integral,
    figure1_config,
    format_hardness_config,
    load_hardness_config,
    optimize_config,
    parse_hardness_config,
    save_hardness_config,
    single_ratio,
    soundness_profile,
)

TAU = 2.0 * math.pi


def _single_ratio_oracle(rho):
    return (3.0 - rho) * (0.25 + math.asin((1.0 + rho) / 2.0) / TAU)


def test_single_ratio_matches_closed_form():
    for rho in (-0.99, -0.75, -0.52, -0.3, -0.1, 0.0):
        assert single_ratio(rho) == pytest.approx(_single_ratio_oracle(rho), abs=1e-6)


def test_single_ratio_peak_location_and_value():
    grid = np.arange(-0.60, -0.40, 0.001)
    vals = [_single_ratio_oracle(float(r)) for r in grid]
    best = float(grid[int(np.argmax(vals))])
    assert abs(best - (-0.513)) < 0.01
    assert single_ratio(best) == pytest.approx(1.015780, abs=5e-5)
    assert single_ratio(-0.52) == pytest.approx(1.01578, abs=2e-4)


def test_single_ratio_boundaries():
    assert single_ratio(0.0) == pytest.approx(1.0, abs=1e-5)
    assert single_ratio(-1.0) == pytest.approx(1.0, abs=1e-5)
    with pytest.raises(ValueError):
        single_ratio(0.1)
    with pytest.raises(ValueError):
        single_ratio(-1.01)


def test_completeness_limit_closed_form():
    for rho in (0.0, -0.3, -0.52, -0.9, -0.999):
        assert completeness_limit(rho) == pytest.approx(1.0 / (3.0 - rho), abs=1e-10)


def test_completeness_limit_with_gamma_is_a_fixed_point():
    for rho, gamma in ((-0.5, 0.01), (-0.2, 0.1), (0.0, 0.05)):
        x = completeness_limit(rho, gamma)
        image = 0.25 + (1.0 + rho) / 4.0 * x + (1.0 - rho) / 4.0 * gamma
        assert x == pytest.approx(image, abs=1e-10)
    with pytest.raises(ValueError):
        completeness_limit(-0.5, -0.1)
    with pytest.raises(ValueError):
        completeness_limit(0.5)


def test_cover_profile_validation():
    good = np.linspace(0.0, 1.0, (1 << 10) + 1)
    CoverProfile(good, "completeness-c")
    with pytest.raises(ValueError):
        CoverProfile(good, "other")
    with pytest.raises(ValueError):
        CoverProfile(np.linspace(0.0, 1.0, 100), "completeness-c")
    with pytest.raises(ValueError):
        CoverProfile(good[::-1].copy(), "completeness-c")
    with pytest.raises(ValueError):
        CoverProfile(good * 1.5, "completeness-c")


def test_cover_profile_evaluate_and_area():
    grid = np.linspace(0.0, 1.0, (1 << 10) + 1)
    p = CoverProfile(grid, "completeness-c")
    assert p(0.5) == pytest.approx(0.5, abs=1e-12)
    assert p.evaluate(0.0) == 0.0
    assert p.uncovered_area() == pytest.approx(0.5, abs=1e-12)


def test_completeness_profile_area_matches_limit():
    for rho in (0.0, -0.3, -0.52, -0.9):
        profile = completeness_profile(rho)
        assert profile.uncovered_area() == pytest.approx(
            completeness_limit(rho), abs=1e-3
        )


def test_completeness_profile_is_monotone_and_bounded():
    p = completeness_profile(-0.52)
    assert p.grid[0] >= 0.0 and p.grid[-1] <= 1.0
    assert np.all(np.diff(p.grid) >= -1e-12)
    with pytest.raises(ValueError):
        completeness_profile(-0.5, g=8)
    with pytest.raises(ValueError):
        completeness_profile(-0.5, depth=0)


def test_soundness_profile_area_is_diagonal_integral():
    # integral of (1 - s(t)) dt with s(t) = 1 - C(1-t, 1-t) is the diagonal mass
    for rho in (-0.75, -0.52, -0.2):
        p = soundness_profile(rho)
        assert p.uncovered_area() == pytest.approx(copula_diag_integral(rho), abs=1e-5)
    with pytest.raises(ValueError):
        soundness_profile(-0.5, eps=-0.1)


def test_config_validation_and_properties():
    cfg = HardnessConfig(((1.0, -0.5), (2.0, -0.3)))
    assert cfg.k == 2
    assert list(cfg.alphas) == [1.0, 2.0]
    assert list(cfg.rhos) == [-0.5, -0.3]
    with pytest.raises(ValueError):
        HardnessConfig(())
    with pytest.raises(ValueError):
        HardnessConfig(((0.0, -0.5),))
    with pytest.raises(ValueError):
        HardnessConfig(((1.0, 0.5),))


def test_config_io_round_trip(tmp_path):
    cfg = HardnessConfig(((1.0, -0.5), (2.5, -0.125)))
    text = format_hardness_config(cfg)
    assert text.startswith(CONFIG_MAGIC + "\n2\n")
    assert parse_hardness_config(text).pairs == cfg.pairs
    path = tmp_path / "c.cfg"
    save_hardness_config(cfg, path)
    assert load_hardness_config(path).pairs == cfg.pairs


def test_config_format_errors_carry_line_numbers():
    with pytest.raises(ConfigFormatError, match="line 1"):
        parse_hardness_config("bogus\n1\n1 -0.5\n")
    with pytest.raises(ConfigFormatError, match="line 2"):
        parse_hardness_config(CONFIG_MAGIC + "\n")
    with pytest.raises(ConfigFormatError, match="line 4"):
        parse_hardness_config(CONFIG_MAGIC + "\n2\n1 -0.5\n")
    with pytest.raises(ConfigFormatError, match="line 3"):
        parse_hardness_config(CONFIG_MAGIC + "\n1\n1 -0.5 9\n")
    with pytest.raises(ConfigFormatError, match="line 3"):
        parse_hardness_config(CONFIG_MAGIC + "\n1\nx y\n")


def test_figure1_config_shape_and_endpoints():
    cfg = figure1_config()
    assert cfg.k == 60
    assert cfg.pairs[0] == pytest.approx((1.0, -0.979))
    assert cfg.pairs[-1] == pytest.approx((608.43, -0.917))
    assert np.all(cfg.alphas > 0)
    assert np.all((cfg.rhos > -1.0) & (cfg.rhos <= 0.0))


def test_composite_single_pair_collapses_to_single_ratio():
    for rho in (-0.75, -0.52, -0.3):
        rep = composite_ratio(HardnessConfig(((1.0, rho),)), steps=20000)
        assert rep.ratio == pytest.approx(single_ratio(rho), abs=2e-3)
        assert rep.completeness_value == pytest.approx(completeness_limit(rho), abs=2e-3)


def test_composite_ratio_fields_and_alpha_scaling():
    cfg = HardnessConfig(((1.0, -0.6), (3.0, -0.4)))
    rep = composite_ratio(cfg, steps=4000)
    assert rep.ratio == pytest.approx(rep.soundness_value / rep.completeness_value)
    assert rep.steps == rep.completeness_schedule.size == rep.soundness_schedule.size
    assert rep.steps_per_graph == 2000
    scaled = HardnessConfig(tuple((7.0 * a, r) for a, r in cfg.pairs))
    rep2 = composite_ratio(scaled, steps=4000)
    assert rep2.ratio == pytest.approx(rep.ratio, rel=1e-12)
    with pytest.raises(ValueError):
        composite_ratio(cfg, steps=500)


def test_composite_ratio_is_stable_under_step_doubling():
    cfg = HardnessConfig(((1.0, -0.7), (2.0, -0.5), (4.0, -0.3)))
    a = composite_ratio(cfg, steps=20000).ratio
    b = composite_ratio(cfg, steps=40000).ratio
    assert abs(a - b) <= 2e-3


def test_composite_beats_best_single_on_figure_config():
    cfg = figure1_config()
    rep = composite_ratio(cfg, steps=20000)
    assert rep.ratio > 1.07
    assert rep.ratio > max(single_ratio(float(r)) for r in cfg.rhos)


def test_optimize_config_improves_and_respects_budget():
    seed_cfg = HardnessConfig(((1.0, -0.3),))
    base = composite_ratio(seed_cfg, steps=4000).ratio
    res = optimize_config(seed_cfg, budget=60, steps=4000)
    assert isinstance(res, OptimizeResult)
    assert res.evaluations <= 60
    assert res.ratio >= base - 1e-12
    assert res.config.k == 1
    # the single-pair optimum sits near the single-ratio peak
    assert abs(res.config.rhos[0] - (-0.513)) < 0.02
    check = composite_ratio(res.config, steps=4000).ratio
    assert res.ratio == pytest.approx(check, abs=1e-9)


def test_optimize_config_deterministic():
    seed_cfg = HardnessConfig(((1.0, -0.45), (2.0, -0.6)))
    a = optimize_config(seed_cfg, budget=25, steps=2000)
    b = optimize_config(seed_cfg, budget=25, steps=2000)
    assert a.config.pairs == b.config.pairs
    assert a.ratio == b.ratio and a.evaluations == b.evaluations
