"""Microwave many-body spectra of nanowire SNS junctions: Majorana vs Andreev."""

__version__ = "0.1.0"

from .core import (  # noqa: E402
    JunctionGeometry,
    MaterialParams,
    PhaseGrid,
    critical_field,
    hopping_energy,
    validate,
)
from .lattice import build_bdg, build_profile  # noqa: E402
from .spectrum import lowest_spectrum, many_body_gap, sweep  # noqa: E402

__all__ = [
    "JunctionGeometry",
    "MaterialParams",
    "PhaseGrid",
    "critical_field",
    "hopping_energy",
    "validate",
    "build_bdg",
    "build_profile",
    "lowest_spectrum",
    "many_body_gap",
    "sweep",
]
