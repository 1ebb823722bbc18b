"""Phase diagnostics from many-body gap curves.

Two signatures separate Majorana from Andreev physics: the shape of
delta_e(phi) at the optimal spot phi = pi (a dip that survives any
transmission and field in the topological phase), and how strongly
delta_e(pi) depends on the interpart hopping eta at fixed field.
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .core import JunctionGeometry, MaterialParams, PhaseGrid, critical_field
from .effective import fit_abs
from .spectrum import SweepResult, sweep

__all__ = [
    "Extremum",
    "Phase",
    "Verdict",
    "Classification",
    "ClassificationError",
    "classify_extremum",
    "transmission_sensitivity",
    "calibrate_transmission",
    "verdict",
    "WINDOW",
    "MIN_POINTS",
    "S_TOPO",
    "S_TRIV",
]

WINDOW = 0.3
MIN_POINTS = 41
SYMMETRY_TOL = 0.05
# default thresholds on transmission_sensitivity, see README for calibration
S_TOPO = 0.10
S_TRIV = 0.50


class ClassificationError(ValueError):
    pass


class Extremum(str, enum.Enum):
    DIP = "Dip"
    PEAK = "Peak"
    PEAK_IN_DIP = "PeakInDip"


class Phase(str, enum.Enum):
    TRIVIAL = "Trivial"
    TOPOLOGICAL = "Topological"


class Verdict(str, enum.Enum):
    ABS_LIKE = "ABS-like"
    MBS_LIKE = "MBS-like"
    INCONCLUSIVE = "Inconclusive"


@dataclass(frozen=True)
class Classification:
    zeeman_b: float
    eta: float
    extremum_label: Extremum
    phase_label: Phase
    delta_e_at_pi: float
    sensitivity: float


def _check_curve(curve) -> tuple[np.ndarray, np.ndarray]:
    data = np.asarray(curve, dtype=float)
    if data.ndim != 2 or data.shape[1] != 2:
        raise ClassificationError("curve must be a sequence of (phi, delta_e) pairs")
    phi, de = data[:, 0], data[:, 1]
    n = len(phi)
    if n < MIN_POINTS:
        raise ClassificationError(f"too coarse: {n} points, need at least {MIN_POINTS}")
    step = np.diff(phi)
    if np.any(step <= 0) or np.ptp(step) > 1e-9 * max(abs(step[0]), 1e-300):
        raise ClassificationError("phase grid is not uniformly spaced")
    if abs(phi[0]) > 1e-9 or abs(phi[-1] - 2 * math.pi) > 1e-9:
        raise ClassificationError("curve must span exactly [0, 2*pi]")
    if n % 2 == 0:
        raise ClassificationError("phase grid does not contain phi = pi")
    scale = float(np.max(np.abs(de)))
    if np.max(np.abs(de - de[::-1])) > SYMMETRY_TOL * scale:
        raise ClassificationError("curve is not mirror symmetric about phi = pi")
    return phi, de


def classify_extremum(curve: Sequence[Sequence[float]]) -> Extremum:
    """Label the shape of delta_e(phi) at phi = pi.

    ``Dip`` if pi is the minimum of the curve over the window
    |phi - pi| <= 0.3; otherwise ``PeakInDip`` if the window holds a discrete
    local minimum away from pi, else ``Peak``. The curve is symmetrized
    about pi first, so only one half of the window is searched.
    """
    phi, de = _check_curve(curve)
    de = 0.5 * (de + de[::-1])
    c = len(phi) // 2
    tol = 1e-12 * float(np.max(np.abs(de)))
    offsets = np.abs(phi - phi[c])
    inside = offsets <= WINDOW + 1e-12
    if de[c] <= float(np.min(de[inside])) + tol:
        return Extremum.DIP
    for i in range(c + 1, len(phi) - 1):
        if not inside[i]:
            break
        if de[i] < de[i - 1] - tol and de[i] <= de[i + 1] + tol:
            return Extremum.PEAK_IN_DIP
    return Extremum.PEAK


def transmission_sensitivity(values_at_pi: Sequence[float]) -> float:
    """Spread of delta_e(pi) across eta at fixed field: (max - min) / mean."""
    v = np.asarray(values_at_pi, dtype=float)
    if len(v) < 2:
        raise ValueError("need delta_e(pi) for at least 2 eta values")
    mean = float(np.mean(v))
    if not mean > 0:
        raise ValueError("gapless at optimal spot")
    return float((np.max(v) - np.min(v)) / mean)


@dataclass(frozen=True)
class CalibrationRow:
    eta: float
    transmission: float
    rms_residual: float


def calibrate_transmission(
    params: MaterialParams,
    geom: JunctionGeometry,
    eta_values: Sequence[float],
    phases: PhaseGrid | None = None,
    threads: int = 1,
    result: SweepResult | None = None,
) -> list[CalibrationRow]:
    """Map eta to an effective transmission by fitting zero-field phase sweeps
    to the Andreev formula. Pass ``result`` to reuse an existing B = 0 sweep."""
    if params.zeeman_b != 0:
        raise ValueError("calibration requires zeeman_b = 0")
    if result is None:
        result = sweep(params, geom, phases or PhaseGrid(), eta_values, [0.0], threads=threads)
    elif np.any(result.b_values != 0):
        raise ValueError("calibration requires a zero-field sweep")
    rows = []
    for ie, eta in enumerate(result.eta_values):
        try:
            t, rms = fit_abs(result.curve(0, ie), params.delta0)
        except ValueError as exc:
            raise type(exc)(f"{exc} (eta={eta})") from exc
        rows.append(CalibrationRow(float(eta), t, rms))
    ts = [r.transmission for r in rows]
    if any(b < a for a, b in zip(ts, ts[1:])):
        warnings.warn("fitted transmission is not monotone in eta")
    return rows


def _pi_index(phi_values: np.ndarray) -> int:
    i = int(np.argmin(np.abs(phi_values - math.pi)))
    if abs(phi_values[i] - math.pi) > 1e-9:
        raise ClassificationError("phase grid does not contain phi = pi")
    return i


def classify_sweep(
    delta_e: np.ndarray,
    phi_values: np.ndarray,
    eta_values: np.ndarray,
    b_values: np.ndarray,
    delta0: float,
    mu: float,
) -> list[Classification]:
    """Classify every (B, eta) line of a delta_e[b, eta, phi] array."""
    bc = critical_field(delta0, mu)
    ip = _pi_index(phi_values)
    rows = []
    for ib, b in enumerate(b_values):
        sens = transmission_sensitivity(delta_e[ib, :, ip])
        phase = Phase.TOPOLOGICAL if b > bc else Phase.TRIVIAL
        for ie, eta in enumerate(eta_values):
            label = classify_extremum(np.column_stack([phi_values, delta_e[ib, ie]]))
            rows.append(
                Classification(float(b), float(eta), label, phase, float(delta_e[ib, ie, ip]), sens)
            )
    return rows


def combine(rows: Sequence[Classification], s_topo: float = S_TOPO, s_triv: float = S_TRIV) -> Verdict:
    if any(r.extremum_label != Extremum.DIP for r in rows) or any(
        r.sensitivity >= s_triv for r in rows
    ):
        return Verdict.ABS_LIKE
    if all(r.sensitivity <= s_topo for r in rows):
        return Verdict.MBS_LIKE
    return Verdict.INCONCLUSIVE


def verdict(
    result: SweepResult,
    params: MaterialParams | None = None,
    geom: JunctionGeometry | None = None,
    s_topo: float = S_TOPO,
    s_triv: float = S_TRIV,
) -> tuple[list[Classification], Verdict]:
    """Per-(B, eta) classification table and the overall verdict.

    MBS-like needs a dip everywhere and sensitivity <= ``s_topo`` at every
    field; any peak, peak-in-dip or sensitivity >= ``s_triv`` makes it
    ABS-like; anything else is inconclusive.
    """
    params = params or result.params
    if len(result.eta_values) < 3:
        raise ValueError("verdict needs at least 3 eta values")
    rows = classify_sweep(
        result.delta_e(),
        result.phi_values,
        result.eta_values,
        result.b_values,
        params.delta0,
        params.mu,
    )
    return rows, combine(rows, s_topo, s_triv)
