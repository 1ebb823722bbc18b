"""Tight-binding BdG Hamiltonian of the SNS nanowire.

Basis is site-major; within a site the four Nambu components are ordered
(psi_up, psi_dn, psi_dn^dag, -psi_up^dag), i.e. ``kron(tau, sigma)``.
The matrix is block tridiagonal, so it is stored as on-site blocks plus
nearest-neighbour blocks and only expanded to dense or LAPACK band storage
on request.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import TextIO

import numpy as np

from .core import JunctionGeometry, MaterialParams, hopping_energy, site_counts

__all__ = [
    "Region",
    "RegionProfile",
    "BdGMatrix",
    "build_profile",
    "build_bdg",
    "particle_hole_conjugate",
    "MAX_SITES",
]

MAX_SITES = 1_000_000

S0 = np.eye(2, dtype=complex)
SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
SZ = np.array([[1, 0], [0, -1]], dtype=complex)

TZ_S0 = np.kron(SZ, S0)
TX_S0 = np.kron(SX, S0)
TY_S0 = np.kron(SY, S0)
T0_SX = np.kron(S0, SX)
TZ_SY = np.kron(SZ, SY)
# unitary part of the particle-hole operator P = (tau_y sigma_y) K
TY_SY = np.kron(SY, SY)

BANDWIDTH = 7


class Region(enum.IntEnum):
    LEFT_SC = 0
    NORMAL = 1
    RIGHT_SC = 2


@dataclass(frozen=True)
class RegionProfile:
    regions: np.ndarray  # Region per site
    gap: np.ndarray  # complex pairing per site
    phi: float

    @property
    def n_sites(self) -> int:
        return len(self.regions)

    @property
    def interface_bonds(self) -> np.ndarray:
        """Indices j of the bonds (j, j+1) that cross a region boundary."""
        return np.flatnonzero(np.diff(self.regions) != 0)


def build_profile(geom: JunctionGeometry, delta0: float, phi: float) -> RegionProfile:
    """Piecewise pairing profile, gauge fixed as phi_L = -phi/2, phi_R = +phi/2."""
    n_sc, n_n = site_counts(geom)
    regions = np.concatenate(
        [
            np.full(n_sc, Region.LEFT_SC),
            np.full(n_n, Region.NORMAL),
            np.full(n_sc, Region.RIGHT_SC),
        ]
    ).astype(np.int8)
    gap = np.zeros(len(regions), dtype=complex)
    gap[regions == Region.LEFT_SC] = delta0 * np.exp(-0.5j * phi)
    gap[regions == Region.RIGHT_SC] = delta0 * np.exp(0.5j * phi)
    regions.setflags(write=False)
    gap.setflags(write=False)
    return RegionProfile(regions, gap, float(phi))


@dataclass(frozen=True)
class BdGMatrix:
    """Block-tridiagonal Hermitian BdG matrix.

    ``onsite[j]`` is the 4x4 diagonal block of site j and ``hopping[j]`` the
    block H[j, j+1]; H[j+1, j] is its conjugate transpose.
    """

    onsite: np.ndarray  # (N, 4, 4)
    hopping: np.ndarray  # (N - 1, 4, 4)

    @property
    def n_sites(self) -> int:
        return self.onsite.shape[0]

    @property
    def dim(self) -> int:
        return 4 * self.n_sites

    def to_dense(self) -> np.ndarray:
        n = self.n_sites
        h = np.zeros((n, 4, n, 4), dtype=complex)
        idx = np.arange(n)
        h[idx, :, idx, :] = self.onsite
        if n > 1:
            j = idx[:-1]
            h[j, :, j + 1, :] = self.hopping
            h[j + 1, :, j, :] = self.hopping.conj().transpose(0, 2, 1)
        return h.reshape(4 * n, 4 * n)

    def to_banded(self) -> np.ndarray:
        """Upper band storage as used by LAPACK ``zhbevx``:
        ``ab[u + i - j, j] = H[i, j]`` for ``i <= j`` with ``u = 7``."""
        n = self.n_sites
        dim = 4 * n
        u = BANDWIDTH
        ab = np.zeros((u + 1, dim), dtype=complex)
        for r in range(4):
            for c in range(r, 4):
                # on-site entries, column offset c - r
                ab[u - (c - r), c::4] = self.onsite[:, r, c]
        for r in range(4):
            for c in range(4):
                # H[4j + r, 4(j+1) + c], offset 4 + c - r in [1, 7]
                ab[u - (4 + c - r), 4 + c :: 4] = self.hopping[:, r, c]
        return ab

    def write_triplets(self, stream: TextIO, tol: float = 0.0) -> int:
        """Write nonzero entries as ``row col re im`` lines; returns the count."""
        h = self.to_dense()
        rows, cols = np.nonzero(np.abs(h) > tol)
        for i, j in zip(rows, cols):
            v = h[i, j]
            stream.write(f"{i} {j} {v.real:.17g} {v.imag:.17g}\n")
        return len(rows)


def build_bdg(
    params: MaterialParams, geom: JunctionGeometry, profile: RegionProfile
) -> BdGMatrix:
    """Assemble the discretized BdG Hamiltonian.

    On-site block ``(2t - mu) tau_z + B sigma_x + Re(D) tau_x - Im(D) tau_y``
    (chemical potential measured from the band bottom); hopping block
    ``-t tau_z + i lambda sigma_y tau_z`` with ``lambda = alpha_R / 2a``.
    Bonds crossing an SC/N interface are scaled by ``geom.eta``. Open
    boundaries at both ends.
    """
    n = profile.n_sites
    if n > MAX_SITES:
        raise ValueError(f"{n} sites exceeds the limit of {MAX_SITES}")
    t = hopping_energy(params, geom)
    lam = params.rashba_alpha / (2.0 * geom.lattice_spacing)

    base = (2.0 * t - params.mu) * TZ_S0 + params.zeeman_b * T0_SX
    gap = profile.gap
    onsite = (
        base[None, :, :]
        + gap.real[:, None, None] * TX_S0[None, :, :]
        - gap.imag[:, None, None] * TY_S0[None, :, :]
    )

    hop = -t * TZ_S0 + 1j * lam * TZ_SY
    scale = np.ones(max(n - 1, 0))
    scale[profile.interface_bonds] = geom.eta
    hopping = scale[:, None, None] * hop[None, :, :]
    return BdGMatrix(onsite, hopping)


def particle_hole_conjugate(h: np.ndarray) -> np.ndarray:
    """Return P H P^-1 for P = (1_N x tau_y sigma_y) K on a dense matrix."""
    n = h.shape[0] // 4
    u = np.kron(np.eye(n), TY_SY)
    return u @ h.conj() @ u.conj().T
