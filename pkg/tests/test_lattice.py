import io
import math

import numpy as np
import pytest

import oracles
from mjspec.core import JunctionGeometry, MaterialParams, hopping_energy
from mjspec.lattice import (
    MAX_SITES,
    BdGMatrix,
    Region,
    RegionProfile,
    build_bdg,
    build_profile,
    particle_hole_conjugate,
)

TOL = 1e-9


def dense(params, geom, phi):
    return build_bdg(params, geom, build_profile(geom, params.delta0, phi)).to_dense()


def profile(regions, gaps):
    return RegionProfile(np.array(regions, dtype=np.int8), np.array(gaps, dtype=complex), 0.0)


def spectrum(params, geom, phi):
    return np.linalg.eigvalsh(dense(params, geom, phi))


def test_profile_reference_geometry():
    prof = build_profile(JunctionGeometry(), 0.25, 0.0)
    assert prof.n_sites == 401
    assert np.count_nonzero(prof.regions == Region.NORMAL) == 1
    sc = prof.regions != Region.NORMAL
    assert np.all(prof.gap[sc] == 0.25)
    assert np.all(prof.gap[~sc] == 0)


def test_profile_gauge():
    phi = 1.1
    prof = build_profile(JunctionGeometry(length_sc=50), 0.3, phi)
    left = prof.gap[prof.regions == Region.LEFT_SC]
    right = prof.gap[prof.regions == Region.RIGHT_SC]
    assert np.allclose(left, 0.3 * np.exp(-0.5j * phi), atol=0, rtol=1e-15)
    assert np.allclose(right, 0.3 * np.exp(0.5j * phi), atol=0, rtol=1e-15)
    two_pi = build_profile(JunctionGeometry(length_sc=50), 0.3, 2 * math.pi)
    sc = two_pi.regions != Region.NORMAL
    assert np.allclose(two_pi.gap[sc], -0.3, atol=1e-15)


def test_profile_incommensurate():
    with pytest.raises(ValueError, match="normal length"):
        build_profile(JunctionGeometry(length_normal=15.0), 0.25, 0.0)


def test_matches_elementwise_oracle():
    p = MaterialParams(zeeman_b=0.37)
    g = JunctionGeometry(length_sc=60, length_normal=20, eta=0.65)
    h = dense(p, g, 2.2)
    ref = oracles.junction_bdg(0.015, 20, 0.5, 0.25, 0.37, 60, 20, 10, 0.65, 2.2)
    assert np.abs(h - ref).max() <= 1e-13 * np.abs(ref).max()


def test_two_site_oracle_spectrum():
    rng = np.random.default_rng(11)
    for _ in range(20):
        mass, alpha, mu, d0, b = rng.uniform(0.01, 0.05), rng.uniform(0, 40), rng.uniform(-1, 2), rng.uniform(0, 1), rng.uniform(0, 2)
        phi = rng.uniform(0, 2 * math.pi)
        p = MaterialParams(mass, alpha, mu, d0, b)
        g = JunctionGeometry(lattice_spacing=10, eta=1.0)
        gaps = [d0 * np.exp(-0.5j * phi), d0 * np.exp(0.5j * phi)]
        h = build_bdg(p, g, profile([Region.LEFT_SC, Region.RIGHT_SC], gaps))
        assert h.dim == 8
        t = oracles.hopping(mass, 10)
        ref = oracles.chain_bdg(t, mu, b, alpha / 20, gaps)
        assert np.allclose(np.linalg.eigvalsh(h.to_dense()), np.linalg.eigvalsh(ref), atol=1e-12)


def _one_site(gap):
    g = JunctionGeometry()
    t = hopping_energy(MaterialParams(), g)
    p = MaterialParams(mu=2 * t, zeeman_b=0.0)
    return build_bdg(p, g, profile([Region.LEFT_SC], [gap])).to_dense()


def test_one_site_zero():
    h = _one_site(0.0)
    assert h.shape == (4, 4)
    assert np.allclose(np.linalg.eigvalsh(h), 0.0, atol=1e-13)


def test_one_site_pairing():
    w = np.linalg.eigvalsh(_one_site(0.3))
    assert np.allclose(w, [-0.3, -0.3, 0.3, 0.3], atol=1e-13)


def test_hermitian_and_particle_hole_random():
    rng = np.random.default_rng(5)
    for _ in range(25):
        p = MaterialParams(rng.uniform(0.01, 0.05), rng.uniform(0, 40), rng.uniform(-1, 2), rng.uniform(0, 1), rng.uniform(0, 2))
        g = JunctionGeometry(length_sc=rng.integers(1, 8) * 10.0, length_normal=rng.integers(1, 4) * 10.0, eta=rng.uniform(0.01, 1))
        h = dense(p, g, rng.uniform(-7, 7))
        scale = np.abs(h).max()
        assert np.abs(h - h.conj().T).max() <= 1e-12 * scale
        assert np.abs(particle_hole_conjugate(h) + h).max() <= 1e-10 * scale


def test_phase_reflection_and_periodicity(short_geom):
    p = MaterialParams(zeeman_b=0.4)
    for phi in (0.3, 1.7, 2.9):
        base = spectrum(p, short_geom, phi)
        assert np.abs(spectrum(p, short_geom, -phi) - base).max() <= TOL
        assert np.abs(spectrum(p, short_geom, phi + 2 * math.pi) - base).max() <= TOL


def test_eta_zero_decouples():
    p = MaterialParams(zeeman_b=0.3)
    g = JunctionGeometry(length_sc=100, length_normal=30, eta=0.0)
    phi = 0.9
    full = spectrum(p, g, phi)
    t = hopping_energy(p, g)
    lam = p.rashba_alpha / 20
    parts = [
        oracles.chain_bdg(t, p.mu, p.zeeman_b, lam, [p.delta0 * np.exp(-0.5j * phi)] * 10),
        oracles.chain_bdg(t, p.mu, p.zeeman_b, lam, [0.0] * 3),
        oracles.chain_bdg(t, p.mu, p.zeeman_b, lam, [p.delta0 * np.exp(0.5j * phi)] * 10),
    ]
    union = np.sort(np.concatenate([np.linalg.eigvalsh(x) for x in parts]))
    assert np.abs(full - union).max() <= TOL


def test_zero_field_spin_degeneracy(short_geom):
    for alpha in (0.0, 20.0):
        p = MaterialParams(rashba_alpha=alpha, zeeman_b=0.0)
        w = spectrum(p, short_geom, 1.3)
        assert np.abs(w[0::2] - w[1::2]).max() <= TOL


def test_banded_matches_dense(short_geom):
    h = build_bdg(MaterialParams(zeeman_b=0.5), short_geom, build_profile(short_geom, 0.25, 2.0))
    d = h.to_dense()
    ab = h.to_banded()
    u = ab.shape[0] - 1
    for i in range(h.dim):
        for j in range(i, min(i + u + 1, h.dim)):
            assert ab[u + i - j, j] == d[i, j]
    assert np.all(d[np.triu_indices(h.dim, u + 1)] == 0)


def test_triplet_dump_roundtrip(short_geom):
    h = build_bdg(MaterialParams(zeeman_b=0.5), short_geom, build_profile(short_geom, 0.25, 2.0))
    buf = io.StringIO()
    count = h.write_triplets(buf)
    back = np.zeros((h.dim, h.dim), dtype=complex)
    lines = buf.getvalue().splitlines()
    assert len(lines) == count
    for line in lines:
        i, j, re, im = line.split()
        back[int(i), int(j)] = float(re) + 1j * float(im)
    assert np.array_equal(back, h.to_dense())


def test_site_limit():
    g = JunctionGeometry()
    with pytest.raises(ValueError, match="exceeds"):
        build_bdg(MaterialParams(), g, _FakeProfile(2 * MAX_SITES + 1))


class _FakeProfile:
    def __init__(self, n):
        self.n_sites = n
