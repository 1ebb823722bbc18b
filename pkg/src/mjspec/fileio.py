"""Readers and writers for sweep CSVs, curve files and verdict documents.

Every file starts with ``#`` provenance lines. Floats are written with
``repr`` so that reading a file back reproduces the exact values, and so
that identical runs produce identical bytes.
"""

from __future__ import annotations

import csv
import datetime
import math
from dataclasses import dataclass
from typing import Iterable, Sequence, TextIO

import numpy as np

from . import __version__, kernels
from .classify import Classification, Verdict
from .spectrum import EIG_ABSTOL, SweepResult

__all__ = [
    "SWEEP_HEADER",
    "provenance_lines",
    "write_sweep_csv",
    "read_sweep_csv",
    "read_curve",
    "write_table",
    "write_verdict",
    "SweepTable",
]

SWEEP_HEADER = (
    "phi_rad,eta,b_over_bc,delta_e_mev,delta_e_over_delta0,"
    "eps1_mev,eps2_mev,eps3_mev,eps4_mev"
)
_N_EPS = 4


def _fmt(x) -> str:
    if isinstance(x, (float, np.floating)):
        return repr(float(x))
    return str(x)


def provenance_lines(
    command: str,
    config_text: str,
    extra: dict | None = None,
    timestamp: bool = True,
) -> list[str]:
    lines = [
        f"# mjspec {__version__}",
        f"# command = {command}",
        f"# kernels = {'compiled' if kernels.COMPILED else 'python'}",
        f"# eig_abstol_mev = {EIG_ABSTOL!r}",
    ]
    if timestamp:
        now = datetime.datetime.now(datetime.timezone.utc).isoformat(timespec="seconds")
        lines.append(f"# timestamp = {now}")
    for key, value in (extra or {}).items():
        lines.append(f"# {key} = {_fmt(value)}")
    lines.extend(f"# config: {line}" for line in config_text.splitlines() if line.strip())
    return lines


def _write_header(stream: TextIO, provenance: Sequence[str]) -> None:
    for line in provenance:
        stream.write(line if line.startswith("#") else "# " + line)
        stream.write("\n")


def write_sweep_csv(
    stream: TextIO, result: SweepResult, critical_field: float, provenance: Sequence[str] = ()
) -> None:
    """One row per grid node, ordered by (B, eta, phi). Levels beyond the
    computed ``k`` are written as ``nan``."""
    _write_header(stream, provenance)
    stream.write(SWEEP_HEADER + "\n")
    delta0 = result.params.delta0
    for key in sorted(result.points):
        ib, ie, ip = key
        p = result.points[key]
        eps = list(p.quasiparticle_energies[:_N_EPS])
        eps += [math.nan] * (_N_EPS - len(eps))
        b_over_bc = result.b_values[ib] / critical_field if critical_field > 0 else math.nan
        row = [
            result.phi_values[ip],
            result.eta_values[ie],
            b_over_bc,
            p.delta_e,
            p.delta_e / delta0 if delta0 > 0 else math.nan,
            *eps,
        ]
        stream.write(",".join(_fmt(float(v)) for v in row) + "\n")


@dataclass
class SweepTable:
    phi_values: np.ndarray
    eta_values: np.ndarray
    b_over_bc: np.ndarray
    # indexed [b, eta, phi]
    delta_e: np.ndarray
    provenance: list[str]


def _data_lines(lines: Iterable[str]) -> tuple[list[str], list[str]]:
    prov, data = [], []
    for line in lines:
        line = line.rstrip("\r\n")
        if line.startswith("#"):
            if not data:
                prov.append(line)
            continue
        if line.strip():
            data.append(line)
    return prov, data


def read_sweep_csv(stream: TextIO) -> SweepTable:
    """Parse a sweep CSV back into a dense [b, eta, phi] grid."""
    prov, data = _data_lines(stream)
    if not data or data[0].strip() != SWEEP_HEADER:
        raise ValueError("not a sweep CSV: header mismatch")
    rows = np.array([[float(v) for v in r] for r in csv.reader(data[1:])], dtype=float)
    if rows.ndim != 2 or rows.shape[1] != SWEEP_HEADER.count(",") + 1:
        raise ValueError("sweep CSV has malformed rows")
    phi = np.unique(rows[:, 0])
    eta = np.unique(rows[:, 1])
    b = np.unique(rows[:, 2])
    if len(rows) != len(phi) * len(eta) * len(b):
        raise ValueError("sweep CSV does not cover a complete grid")
    grid = rows[:, 3].reshape(len(b), len(eta), len(phi))
    # rows are required to be in (b, eta, phi) order
    expect = np.stack(np.meshgrid(b, eta, phi, indexing="ij"), axis=-1).reshape(-1, 3)
    if not np.array_equal(expect, rows[:, [2, 1, 0]]):
        raise ValueError("sweep CSV rows are not in (b, eta, phi) order")
    return SweepTable(phi, eta, b, grid, prov)


_PHI_NAMES = ("phi", "phi_rad")
_DE_NAMES = ("delta_e", "delta_e_mev")


def read_curve(stream: TextIO) -> np.ndarray:
    """Read a ``phi,delta_e`` curve; returns an (n, 2) array."""
    _, data = _data_lines(stream)
    if not data:
        raise ValueError("empty curve file")
    header = [h.strip() for h in data[0].split(",")]
    try:
        i = next(header.index(n) for n in _PHI_NAMES if n in header)
        j = next(header.index(n) for n in _DE_NAMES if n in header)
    except StopIteration:
        raise ValueError("curve file needs 'phi' and 'delta_e' columns") from None
    out = []
    for lineno, row in enumerate(csv.reader(data[1:]), start=2):
        try:
            out.append((float(row[i]), float(row[j])))
        except (ValueError, IndexError):
            raise ValueError(f"bad curve row {lineno}: {','.join(row)}") from None
    return np.array(out, dtype=float)


def write_table(
    stream: TextIO, header: Sequence[str], rows: Iterable[Sequence], provenance: Sequence[str] = ()
) -> None:
    _write_header(stream, provenance)
    stream.write(",".join(header) + "\n")
    for row in rows:
        stream.write(",".join(_fmt(v) for v in row) + "\n")


def write_verdict(
    stream: TextIO,
    rows: Sequence[Classification],
    result: Verdict,
    critical_field: float,
    s_topo: float,
    s_triv: float,
    provenance: Sequence[str] = (),
) -> None:
    """Key-value verdict document, one classification per line."""
    _write_header(stream, provenance)
    stream.write("# thresholds are calibration constants, not measured quantities\n")
    stream.write(f"verdict = {result.value}\n")
    stream.write(f"s_topo = {s_topo!r}\n")
    stream.write(f"s_triv = {s_triv!r}\n")
    for r in rows:
        b = r.zeeman_b / critical_field if critical_field > 0 else math.nan
        stream.write(
            "classification = "
            f"b_over_bc={_fmt(b)} eta={_fmt(r.eta)} extremum={r.extremum_label.value} "
            f"phase={r.phase_label.value} delta_e_pi_mev={_fmt(r.delta_e_at_pi)} "
            f"sensitivity={_fmt(r.sensitivity)}\n"
        )
