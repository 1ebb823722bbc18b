"""Full-size sweeps shared by the slow tests, each computed once per session.

Parameters are the junction figures' set: Delta0 = 0.25 meV, mu = 0.5 meV,
alpha_R = 20 meV nm, L = 2 um, l = 10 nm, a = 10 nm (dim 1604), 101 phases.
"""

import functools

from mjspec.core import JunctionGeometry, MaterialParams, PhaseGrid
from mjspec.spectrum import sweep

PARAMS = MaterialParams(effective_mass_ratio=0.015, rashba_alpha=20.0, mu=0.5, delta0=0.25)
GEOM = JunctionGeometry(length_sc=2000.0, length_normal=10.0, lattice_spacing=10.0)
PHASES = PhaseGrid(count=101)
ETAS = (0.6, 0.7, 0.8, 0.9, 1.0)
BC = PARAMS.critical_field
TRIVIAL_B = (0.6, 0.8, 0.9)
TOPO_B = (1.2, 1.4, 1.6, 1.8)


@functools.lru_cache(maxsize=None)
def zero_field():
    return sweep(PARAMS, GEOM, PHASES, ETAS, [0.0], threads=0)


@functools.lru_cache(maxsize=None)
def trivial_field():
    return sweep(PARAMS, GEOM, PHASES, ETAS, [x * BC for x in TRIVIAL_B], threads=0)


@functools.lru_cache(maxsize=None)
def topological():
    return sweep(PARAMS, GEOM, PHASES, ETAS, [x * BC for x in TOPO_B], threads=0)
