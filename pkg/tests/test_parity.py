import numpy as np
import pytest

import oracles
from mjspec import _fallback, kernels
from mjspec.core import JunctionGeometry, MaterialParams
from mjspec.lattice import BdGMatrix, build_bdg, build_profile
from mjspec.parity import (
    _SINGULAR_RTOL,
    ground_state_parity,
    majorana_blocks,
    majorana_dense,
    pfaffian_sign_dense,
)


def _random_chain(rng, n):
    t, mu, b, lam = rng.uniform(0.5, 2), rng.uniform(-1, 3), rng.uniform(0, 3), rng.uniform(-1, 1)
    gaps = rng.normal(size=n) + 1j * rng.normal(size=n)
    h = oracles.chain_bdg(t, mu, b, lam, gaps, rng.uniform(0.1, 1, n - 1))
    on = np.stack([h[4 * j : 4 * j + 4, 4 * j : 4 * j + 4] for j in range(n)])
    hop = np.stack([h[4 * j : 4 * j + 4, 4 * j + 4 : 4 * j + 8] for j in range(n - 1)]) if n > 1 else np.zeros((0, 4, 4))
    return h, BdGMatrix(on, hop)


@pytest.mark.parametrize("n", [1, 2])
def test_parity_matches_fock_space(n):
    rng = np.random.default_rng(20 + n)
    seen = set()
    for _ in range(40):
        h, bdg = _random_chain(rng, n)
        _, expected = oracles.fock_bdg_ground(h)
        assert ground_state_parity(bdg) == expected
        seen.add(expected)
    assert seen == {1, -1}


def test_majorana_form_is_real_antisymmetric(short_geom):
    h = build_bdg(MaterialParams(zeeman_b=0.7), short_geom, build_profile(short_geom, 0.25, 1.0))
    x = majorana_dense(h)
    assert np.abs(x + x.T).max() < 1e-12
    # the basis change is unitary, so i X has the BdG spectrum
    w = np.linalg.eigvalsh(1j * x)
    assert np.allclose(w, np.linalg.eigvalsh(h.to_dense()), atol=1e-9)


def test_dense_pfaffian_sign_against_expansion():
    rng = np.random.default_rng(2)
    for n in (2, 4, 6, 8, 10):
        for _ in range(10):
            a = rng.normal(size=(n, n))
            a = a - a.T
            assert pfaffian_sign_dense(a) == int(np.sign(oracles.pfaffian_bruteforce(a)))


def test_chain_sign_matches_dense(short_geom):
    bc = MaterialParams().critical_field
    for b in (0.0, 0.5 * bc, 1.3 * bc, 1.7 * bc):
        for phi in (0.0, 1.0, np.pi):
            h = build_bdg(MaterialParams(zeeman_b=b), short_geom, build_profile(short_geom, 0.25, phi))
            diag, off = majorana_blocks(h)
            for impl in (kernels, _fallback):
                assert impl.chain_pfaffian_sign(diag, off, _SINGULAR_RTOL) == pfaffian_sign_dense(majorana_dense(h))


def test_singular_chain_reports_zero():
    diag = np.zeros((3, 4, 4))
    off = np.zeros((2, 4, 4))
    assert kernels.chain_pfaffian_sign(diag, off, _SINGULAR_RTOL) == 0
    assert _fallback.chain_pfaffian_sign(diag, off, _SINGULAR_RTOL) == 0


def test_zero_field_ground_state_is_even():
    h = build_bdg(MaterialParams(), JunctionGeometry(length_sc=100), build_profile(JunctionGeometry(length_sc=100), 0.25, 1.0))
    assert ground_state_parity(h) == 1
