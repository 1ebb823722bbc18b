"""Physical constants, parameter records and derived energy scales.

Units are fixed throughout the package: energies in meV, lengths in nm,
phases in radians. The Zeeman energy ``B`` is taken as an input directly;
no conversion from magnetic field is done here.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "HBAR2_OVER_2ME",
    "PhysicalConstants",
    "MaterialParams",
    "JunctionGeometry",
    "PhaseGrid",
    "critical_field",
    "hopping_energy",
    "validate",
    "site_counts",
    "CONTINUUM_FACTOR",
]

# hbar^2 / (2 m_e) in meV nm^2
HBAR2_OVER_2ME = 38.09982

# validate() demands t >= CONTINUUM_FACTOR * max(delta0, |mu|, B)
CONTINUUM_FACTOR = 20.0


@dataclass(frozen=True)
class PhysicalConstants:
    hbar2_over_2me: float = HBAR2_OVER_2ME


CONSTANTS = PhysicalConstants()


@dataclass(frozen=True)
class MaterialParams:
    """Material inputs of the nanowire.

    Defaults are the InSb values used for the junction figures
    (m* = 0.015 m_e, alpha_R = 20 meV nm, mu = 0.5 meV, Delta0 = 0.25 meV).
    """

    effective_mass_ratio: float = 0.015
    rashba_alpha: float = 20.0
    mu: float = 0.5
    delta0: float = 0.25
    zeeman_b: float = 0.0

    def with_zeeman(self, zeeman_b: float) -> "MaterialParams":
        return MaterialParams(
            self.effective_mass_ratio, self.rashba_alpha, self.mu, self.delta0, zeeman_b
        )

    @property
    def critical_field(self) -> float:
        return critical_field(self.delta0, self.mu)


@dataclass(frozen=True)
class JunctionGeometry:
    """Three-part SNS geometry: two superconducting sections of length
    ``length_sc`` around a normal section of length ``length_normal``."""

    length_sc: float = 2000.0
    length_normal: float = 10.0
    lattice_spacing: float = 10.0
    eta: float = 1.0

    def with_eta(self, eta: float) -> "JunctionGeometry":
        return JunctionGeometry(self.length_sc, self.length_normal, self.lattice_spacing, eta)

    def with_spacing(self, lattice_spacing: float) -> "JunctionGeometry":
        return JunctionGeometry(self.length_sc, self.length_normal, lattice_spacing, self.eta)


@dataclass(frozen=True)
class PhaseGrid:
    """Uniform grid of phase differences, by default one full period."""

    start: float = 0.0
    stop: float = 2.0 * math.pi
    count: int = 101
    phi_values: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.count < 2:
            raise ValueError("phase grid needs at least 2 points")
        if not self.stop > self.start:
            raise ValueError("phase grid must be strictly increasing")
        if self.start > 0.0 or self.stop < 2.0 * math.pi - 1e-12:
            raise ValueError("phase grid must cover [0, 2*pi]")
        values = np.linspace(self.start, self.stop, self.count)
        values.setflags(write=False)
        object.__setattr__(self, "phi_values", values)

    def __len__(self):
        return self.count

    def __iter__(self):
        return iter(self.phi_values)


def critical_field(delta0: float, mu: float) -> float:
    """Zeeman energy of the topological transition, sqrt(delta0^2 + mu^2)."""
    if delta0 < 0:
        raise ValueError("delta0 must be non-negative")
    return math.hypot(delta0, mu)


def hopping_energy(params: MaterialParams, geom: JunctionGeometry) -> float:
    """Tight-binding hopping t = hbar^2 / (2 m* a^2) in meV."""
    a = geom.lattice_spacing
    if a <= 0:
        raise ValueError("lattice_spacing must be positive")
    return CONSTANTS.hbar2_over_2me / (params.effective_mass_ratio * a * a)


def _ratio_is_integer(length: float, a: float) -> bool:
    r = length / a
    return r >= 1 - 1e-9 and abs(r - round(r)) <= 1e-9 * max(1.0, abs(r))


def site_counts(geom: JunctionGeometry) -> tuple[int, int]:
    """Number of sites per superconducting section and in the normal section.

    Raises
    ------
    ValueError
        If either length is not a positive integer multiple of the spacing.
    """
    a = geom.lattice_spacing
    if a <= 0:
        raise ValueError("lattice_spacing must be positive")
    if not _ratio_is_integer(geom.length_sc, a):
        raise ValueError(
            f"superconducting length {geom.length_sc} nm not commensurate with a = {a} nm"
        )
    if not _ratio_is_integer(geom.length_normal, a):
        raise ValueError(
            f"normal length {geom.length_normal} nm not commensurate with a = {a} nm"
        )
    return round(geom.length_sc / a), round(geom.length_normal / a)


def validate(params: MaterialParams, geom: JunctionGeometry) -> list[str]:
    """Return a list of violated conditions; empty means the inputs are usable.

    Besides the record invariants this checks that the lattice is fine enough
    for the continuum model, t >= 20 * max(delta0, |mu|, B). A normal section
    longer than a tenth of the superconducting one only triggers a warning.
    """
    diag = []
    if not params.effective_mass_ratio > 0:
        diag.append("effective_mass_ratio must be positive")
    if params.delta0 < 0:
        diag.append("delta0 must be non-negative")
    if params.zeeman_b < 0:
        diag.append("zeeman_b must be non-negative")
    if not 0 < geom.eta <= 1:
        diag.append("eta must lie in (0, 1]")

    a = geom.lattice_spacing
    if not a > 0:
        diag.append("lattice_spacing must be positive")
        return diag
    if not _ratio_is_integer(geom.length_normal, a):
        diag.append("normal length not commensurate with lattice_spacing")
    if not _ratio_is_integer(geom.length_sc, a):
        diag.append("superconducting length not commensurate with lattice_spacing")
    if geom.length_normal > geom.length_sc / 10:
        warnings.warn("normal section is not short compared with the superconducting sections")

    if params.effective_mass_ratio > 0:
        t = hopping_energy(params, geom)
        scale = max(params.delta0, abs(params.mu), params.zeeman_b)
        if t < CONTINUUM_FACTOR * scale:
            diag.append(
                f"lattice too coarse: t = {t:.4g} meV < {CONTINUUM_FACTOR:g} * {scale:.4g} meV"
            )
    return diag
