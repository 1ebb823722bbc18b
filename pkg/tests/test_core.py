import math

import numpy as np
import pytest

from mjspec.core import (
    HBAR2_OVER_2ME,
    JunctionGeometry,
    MaterialParams,
    PhaseGrid,
    critical_field,
    hopping_energy,
    site_counts,
    validate,
)


def test_critical_field_examples():
    assert critical_field(0.25, 0.0) == 0.25
    assert critical_field(0.25, 0.5) == pytest.approx(0.559017, abs=5e-7)
    assert critical_field(0.0, 0.0) == 0.0


def test_critical_field_rejects_negative_gap():
    with pytest.raises(ValueError):
        critical_field(-0.1, 0.5)


def test_critical_field_monotone():
    rng = np.random.default_rng(3)
    for _ in range(200):
        d, m, dd, dm = rng.uniform(0, 2, 4)
        assert critical_field(d + dd, m) >= critical_field(d, m)
        assert critical_field(d, m + dm) >= critical_field(d, m)
        assert critical_field(d, m) >= max(d, m)


def test_hopping_examples():
    p = MaterialParams()
    assert hopping_energy(p, JunctionGeometry()) == pytest.approx(25.4, abs=0.01)
    assert hopping_energy(p, JunctionGeometry(lattice_spacing=5.0)) == pytest.approx(101.6, abs=0.03)
    one = MaterialParams(effective_mass_ratio=1.0)
    t1 = hopping_energy(one, JunctionGeometry())
    t2 = hopping_energy(one, JunctionGeometry(length_sc=2000, length_normal=20, lattice_spacing=20))
    assert t2 == pytest.approx(t1 / 4, rel=1e-15)
    assert t1 == pytest.approx(HBAR2_OVER_2ME / 100, rel=1e-15)


def test_hopping_times_a2_constant():
    p = MaterialParams()
    ref = hopping_energy(p, JunctionGeometry()) * 100
    for a in (1.0, 2.0, 2.5, 5.0, 10.0):
        g = JunctionGeometry(length_sc=2000, length_normal=10, lattice_spacing=a)
        assert abs(hopping_energy(p, g) * a * a - ref) <= 1e-14 * ref


def test_validate_reference_set_is_clean():
    assert validate(MaterialParams(), JunctionGeometry()) == []


def test_validate_diagnostics():
    msgs = validate(MaterialParams(), JunctionGeometry(lattice_spacing=0.0))
    assert "lattice_spacing must be positive" in msgs
    msgs = validate(MaterialParams(), JunctionGeometry(length_normal=15.0))
    assert any("normal length not commensurate" in m for m in msgs)
    msgs = validate(MaterialParams(), JunctionGeometry(eta=1.5))
    assert any("eta" in m for m in msgs)
    coarse = validate(MaterialParams(zeeman_b=2.0), JunctionGeometry())
    assert any("coarse" in m for m in coarse)


def test_validate_is_pure():
    args = (MaterialParams(mu=3.0), JunctionGeometry(length_normal=15.0))
    assert validate(*args) == validate(*args)


def test_parameter_invariants_reported():
    g = JunctionGeometry()
    assert "effective_mass_ratio must be positive" in validate(MaterialParams(effective_mass_ratio=0.0), g)
    assert "delta0 must be non-negative" in validate(MaterialParams(delta0=-1.0), g)
    assert "zeeman_b must be non-negative" in validate(MaterialParams(zeeman_b=-0.1), g)


def test_site_counts():
    assert site_counts(JunctionGeometry()) == (200, 1)
    with pytest.raises(ValueError, match="superconducting length 2005"):
        site_counts(JunctionGeometry(length_sc=2005.0))


def test_long_normal_section_warns():
    with pytest.warns(UserWarning):
        validate(MaterialParams(), JunctionGeometry(length_sc=50, length_normal=10))


def test_phase_grid():
    g = PhaseGrid()
    v = g.phi_values
    assert len(v) == 101 and v[0] == 0.0 and v[-1] == pytest.approx(2 * math.pi)
    assert np.all(np.diff(v) > 0)
    with pytest.raises(ValueError):
        PhaseGrid(0.0, math.pi, 11)
    with pytest.raises(ValueError):
        PhaseGrid(0.0, 2 * math.pi, 1)
