import math
from pathlib import Path

import pytest

from mjspec.config import (
    FIG2_DEFAULTS,
    FIG3_DEFAULTS,
    FIG4_DEFAULTS,
    REQUIRED_KEYS,
    ConfigError,
    RunConfig,
    parse_config,
)

ROOT = Path(__file__).resolve().parents[1]


def test_documented_example_parses():
    cfg = parse_config((ROOT / "configs" / "fig3.cfg").read_text(), env={})
    assert (cfg.delta0, cfg.mu, cfg.rashba_alpha) == (0.25, 0.5, 20.0)
    assert (cfg.length_sc, cfg.length_normal, cfg.lattice_spacing) == (2000.0, 10.0, 10.0)
    assert cfg.eta == (0.6, 0.7, 0.8, 0.9, 1.0)
    assert cfg.b_mev()[1] == pytest.approx(0.6 * 0.5590169943749475)
    assert cfg.threads == 0


def test_empty_file_lists_required_keys():
    with pytest.raises(ConfigError) as info:
        parse_config("", env={})
    text = "\n".join(info.value.errors)
    for key in REQUIRED_KEYS:
        assert f"'{key}'" in text
    assert len(info.value.errors) == len(REQUIRED_KEYS)


def test_eta_out_of_range():
    with pytest.raises(ConfigError) as info:
        parse_config("eta = 1.5\n", env={}, base=FIG3_DEFAULTS)
    assert info.value.errors == ["line 1: eta: eta must lie in (0, 1]"]


def test_errors_name_lines():
    text = "# header\nmu = 0.5\nfoo = 3\n\nk = two\nk = 3\nnonsense\n"
    with pytest.raises(ConfigError) as info:
        parse_config(text, env={}, base=FIG3_DEFAULTS)
    errs = info.value.errors
    assert "line 3: unknown key 'foo'" in errs
    assert any(e.startswith("line 5: k: cannot parse 'two'") for e in errs)
    assert any(e.startswith("line 7: expected 'key = value'") for e in errs)


def test_constraint_violations():
    for text, frag in [
        ("phi_count = 1", "phi_count"),
        ("phi_stop = 3.0", "cover [0, 2*pi]"),
        ("k = 0", "k must be"),
        ("threads = -1", "threads"),
        ("lattice_spacing = 0", "lattice_spacing must be positive"),
        ("length_normal = 15", "not commensurate"),
        ("b_units = tesla", "one of"),
        ("s_topo = 0.9\ns_triv = 0.5", "s_topo"),
        ("gap_mode = odd", "one of"),
    ]:
        with pytest.raises(ConfigError) as info:
            parse_config(text, env={}, base=FIG3_DEFAULTS)
        assert any(frag in e for e in info.value.errors), (text, info.value.errors)


@pytest.mark.parametrize("cfg", [FIG2_DEFAULTS, FIG3_DEFAULTS, FIG4_DEFAULTS])
def test_round_trip(cfg):
    assert parse_config(cfg.to_text(), env={}) == cfg


def test_round_trip_awkward_floats():
    cfg = FIG3_DEFAULTS.replace(mu=0.1 + 0.2, eta=(1 / 3, 0.7), phi_stop=2 * math.pi + 1e-3, input="a b/c.csv")
    assert parse_config(cfg.to_text(), env={}) == cfg


def test_env_overrides_file():
    cfg = parse_config("k = 3\nthreads = 2\n", env={"MJSPEC_K": "6", "MJSPEC_OUT": "x", "OTHER_K": "9"}, base=FIG3_DEFAULTS)
    assert cfg.k == 6 and cfg.threads == 2


def test_env_errors_are_labelled():
    with pytest.raises(ConfigError) as info:
        parse_config("", env={"MJSPEC_ETA": "0"}, base=FIG3_DEFAULTS)
    assert info.value.errors == ["env MJSPEC_ETA: eta: eta must lie in (0, 1]"]


def test_b_units():
    cfg = FIG4_DEFAULTS
    assert cfg.b_mev() == tuple(x * cfg.critical_field for x in cfg.b)
    mev = cfg.replace(b_units="mev", b=(0.3,))
    assert mev.b_mev() == (0.3,)


def test_fig_defaults():
    assert FIG3_DEFAULTS.b == (0.0, 0.6, 0.8, 0.9)
    assert FIG4_DEFAULTS.b == (1.2, 1.4, 1.6, 1.8)
    assert FIG2_DEFAULTS.transmissions == (0.2, 0.4, 0.6, 0.8, 1.0)
    assert FIG2_DEFAULTS.g12 == FIG2_DEFAULTS.g34 == FIG2_DEFAULTS.delta_eff / 20
    assert isinstance(FIG3_DEFAULTS, RunConfig)
