"""Low-energy effective models of the junction.

Trivial phase at zero field: a spin-degenerate Andreev level
``E = Delta0 sqrt(1 - T sin^2(phi/2))``. Topological phase: four Majorana
modes gamma_1..gamma_4 on a chain with couplings g12, g23(phi), g34, where
``g23 = Delta_eff sqrt(T) cos(phi/2)``. Both are compared with the lattice
numerics through the even-parity transition energy ``E+ - E-``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
from scipy import optimize

__all__ = [
    "EffectiveModelParams",
    "MajoranaCoupling",
    "FitError",
    "abs_energy",
    "abs_gap",
    "mbs_energy",
    "mbs_gap",
    "g23",
    "many_body_hamiltonian",
    "even_sector_hamiltonian",
    "fit_abs",
    "fit_mbs",
    "FIT_TOL",
]

FIT_TOL = 1e-9
# fixed multi-start points for fit_mbs, as (amplitude, offset) fractions of
# the curve half-maximum
_MBS_STARTS = ((1.0, 0.1), (0.5, 0.5), (1.0, 0.0), (0.1, 1.0), (2.0, 0.05))


class FitError(ValueError):
    pass


@dataclass(frozen=True)
class EffectiveModelParams:
    transmission_t: float = 1.0
    delta_eff: float = 1.0
    g12: float = 0.05
    g34: float = 0.05

    def __post_init__(self):
        if not 0.0 <= self.transmission_t <= 1.0:
            raise ValueError("transmission_t must lie in [0, 1]")
        if self.delta_eff < 0:
            raise ValueError("delta_eff must be non-negative")

    @classmethod
    def reference(cls, transmission_t: float, delta_eff: float = 1.0) -> "EffectiveModelParams":
        """Couplings g12 = g34 = delta_eff / 20, the Fig. 2 configuration."""
        return cls(transmission_t, delta_eff, delta_eff / 20, delta_eff / 20)


def g23(params: EffectiveModelParams, phi):
    return params.delta_eff * np.sqrt(params.transmission_t) * np.cos(np.asarray(phi) / 2)


@dataclass(frozen=True)
class MajoranaCoupling:
    """Nearest-neighbour couplings of four Majorana modes,
    ``H = i g12 g1 g2 + i g23 g2 g3 + i g34 g3 g4``."""

    g12: float
    g23: float
    g34: float

    @classmethod
    def from_params(cls, params: EffectiveModelParams, phi: float) -> "MajoranaCoupling":
        return cls(params.g12, float(g23(params, phi)), params.g34)

    @property
    def matrix(self) -> np.ndarray:
        a = np.zeros((4, 4))
        a[0, 1], a[1, 2], a[2, 3] = self.g12, self.g23, self.g34
        return a - a.T

    def quasiparticle_energies(self) -> np.ndarray:
        """The two non-negative single-particle energies, ascending.

        With ``H = (i/4) gamma^T (2A) gamma`` they are the singular values of
        2A, each of which occurs twice.
        """
        s = np.linalg.svd(2.0 * self.matrix, compute_uv=False)
        return np.sort(s[::2])


def abs_energy(t: float, phi, delta0: float):
    """Andreev level pair (E-, E+) at transmission ``t``."""
    if not 0.0 <= t <= 1.0:
        raise ValueError("transmission must lie in [0, 1]")
    e = delta0 * np.sqrt(1.0 - t * np.sin(np.asarray(phi) / 2) ** 2)
    return -e, e


def abs_gap(t: float, phi, delta0: float):
    lo, hi = abs_energy(t, phi, delta0)
    return hi - lo


def mbs_energy(params: EffectiveModelParams, phi):
    """Even-parity many-body energies (E_m-, E_m+) of the Majorana chain."""
    e = np.hypot(g23(params, phi), params.g12 + params.g34)
    return -e, e


def mbs_gap(params: EffectiveModelParams, phi):
    lo, hi = mbs_energy(params, phi)
    return hi - lo


def _fock_operators():
    # modes ordered (a, b); basis index 2 n_a + n_b
    c = np.array([[0, 1], [0, 0]], dtype=complex)
    z = np.diag([1.0, -1.0]).astype(complex)
    one = np.eye(2)
    a = np.kron(c, one)
    b = np.kron(z, c)
    return a, b


def many_body_hamiltonian(coupling: MajoranaCoupling) -> np.ndarray:
    """The 4x4 Fock-space matrix of the Majorana chain in the basis
    |n_a n_b>, with a = (g2 + i g3)/2 and b = (g1 + i g4)/2."""
    a, b = _fock_operators()
    ad, bd = a.conj().T, b.conj().T
    g1 = b + bd
    g4 = -1j * (b - bd)
    g2 = a + ad
    g3 = -1j * (a - ad)
    return (
        1j * coupling.g12 * g1 @ g2
        + 1j * coupling.g23 * g2 @ g3
        + 1j * coupling.g34 * g3 @ g4
    )


_EVEN = [0, 3]  # |00>, |11>


def even_sector_hamiltonian(params: EffectiveModelParams, phi: float) -> np.ndarray:
    """Restriction of the chain Hamiltonian to the even sector {|00>, |11>}."""
    h = many_body_hamiltonian(MajoranaCoupling.from_params(params, phi))
    return h[np.ix_(_EVEN, _EVEN)]


def _prepare_curve(curve) -> tuple[np.ndarray, np.ndarray]:
    data = np.asarray(curve, dtype=float)
    if data.ndim != 2 or data.shape[1] != 2:
        raise ValueError("curve must be a sequence of (phi, delta_e) pairs")
    phi, de = data[:, 0], data[:, 1]
    if len(phi) < 10:
        raise ValueError("curve needs at least 10 points")
    if phi.min() > 1e-9 or phi.max() < 2 * math.pi - 1e-9:
        raise ValueError("curve must span [0, 2*pi]")
    if np.ptp(de) <= 1e-12:
        raise FitError("uninformative curve")
    return phi, de


def fit_abs(curve: Iterable[Sequence[float]], delta0: float) -> tuple[float, float]:
    """Fit the transmission of ``delta_e = 2 delta0 sqrt(1 - T sin^2(phi/2))``.

    Returns ``(T, rms_residual)`` with T in [0, 1]. Bounded Brent search
    polished by a bounded Gauss-Newton step; the endpoints are checked
    explicitly since Brent never evaluates them.
    """
    phi, de = _prepare_curve(curve)
    s2 = np.sin(phi / 2) ** 2

    def ssr(t):
        r = 2.0 * delta0 * np.sqrt(np.clip(1.0 - t * s2, 0.0, None)) - de
        return float(r @ r)

    res = optimize.minimize_scalar(
        ssr, bounds=(0.0, 1.0), method="bounded", options={"xatol": FIT_TOL * 0.1}
    )
    best_t, best = float(res.x), float(res.fun)
    # Brent stops on bracket width; a bounded Gauss-Newton polish from there
    # removes the leftover few-1e-9 error in T
    polish = optimize.least_squares(
        lambda x: 2.0 * delta0 * np.sqrt(np.clip(1.0 - x[0] * s2, 0.0, None)) - de,
        [best_t],
        bounds=([0.0], [1.0]),
        method="trf",
        xtol=1e-15,
        ftol=1e-15,
        gtol=1e-15,
    )
    if 2.0 * polish.cost <= best:
        best_t, best = float(polish.x[0]), 2.0 * float(polish.cost)
    for edge in (0.0, 1.0):
        v = ssr(edge)
        if v < best:
            best_t, best = edge, v
    return best_t, math.sqrt(best / len(phi))


def fit_mbs(curve: Iterable[Sequence[float]]) -> tuple[float, float, float]:
    """Fit ``delta_e = 2 sqrt(A^2 cos^2(phi/2) + o^2)``.

    Returns ``(A, o, rms_residual)`` with ``A = Delta_eff sqrt(T)`` and
    ``o = g12 + g34``, both non-negative. Bounded trust-region least squares
    from five fixed starting points; the best one wins.
    """
    phi, de = _prepare_curve(curve)
    c2 = np.cos(phi / 2) ** 2
    scale = 0.5 * float(np.max(np.abs(de)))

    def resid(x):
        return 2.0 * np.sqrt(x[0] ** 2 * c2 + x[1] ** 2) - de

    best = None
    for fa, fo in _MBS_STARTS:
        x0 = np.array([fa * scale, max(fo * scale, 1e-6 * scale)])
        r = optimize.least_squares(
            resid,
            x0,
            bounds=([0.0, 0.0], [np.inf, np.inf]),
            method="trf",
            xtol=1e-15,
            ftol=1e-15,
            gtol=1e-15,
            x_scale=scale,
        )
        if best is None or r.cost < best.cost:
            best = r
    amp, off = (float(v) for v in best.x)
    rms = math.sqrt(2.0 * best.cost / len(phi))
    return amp, off, rms
