"""Flat ``key = value`` run configuration.

One setting per line, ``#`` starts a comment, lists are comma separated.
Every error carries the line it came from so a bad file can be fixed in
one pass.
"""

from __future__ import annotations

import dataclasses
import math
import os
from dataclasses import dataclass
from typing import Callable, Mapping

from .core import JunctionGeometry, MaterialParams, PhaseGrid, critical_field, validate
from .spectrum import DEFAULT_K, GAP_MODES

__all__ = ["RunConfig", "ConfigError", "parse_config", "ENV_PREFIX", "REQUIRED_KEYS"]

ENV_PREFIX = "MJSPEC_"


class ConfigError(ValueError):
    def __init__(self, errors: list[str]):
        super().__init__("\n".join(errors))
        self.errors = list(errors)


def _float(text: str) -> float:
    v = float(text)
    if not math.isfinite(v):
        raise ValueError("must be finite")
    return v


def _int(text: str) -> int:
    return int(text)


def _floats(text: str) -> tuple[float, ...]:
    items = [s.strip() for s in text.split(",")]
    if not items or any(not s for s in items):
        raise ValueError("expected a comma separated list of numbers")
    return tuple(_float(s) for s in items)


def _choice(*options: str) -> Callable[[str], str]:
    def parse(text: str) -> str:
        if text not in options:
            raise ValueError(f"must be one of {', '.join(options)}")
        return text

    parse.__name__ = "one of " + "|".join(options)
    return parse


def _text(text: str) -> str:
    return text


@dataclass(frozen=True)
class RunConfig:
    effective_mass_ratio: float
    rashba_alpha: float
    mu: float
    delta0: float
    length_sc: float
    length_normal: float
    lattice_spacing: float
    eta: tuple[float, ...]
    b: tuple[float, ...]
    b_units: str = "bc"
    phi_start: float = 0.0
    phi_stop: float = 2 * math.pi
    phi_count: int = 101
    k: int = DEFAULT_K
    gap_mode: str = "fixed"
    threads: int = 1
    # analytic / fig2
    transmissions: tuple[float, ...] = (0.2, 0.4, 0.6, 0.8, 1.0)
    delta_eff: float = 0.25
    g12: float = 0.0125
    g34: float = 0.0125
    # classify
    s_topo: float = 0.10
    s_triv: float = 0.50
    input: str = ""
    # optional outputs
    svg: int = 0
    # phase at which to dump the B = b[0], eta = eta[0] matrix; < 0 disables
    dump_phi: float = -1.0

    def material(self, zeeman_b: float = 0.0) -> MaterialParams:
        return MaterialParams(
            effective_mass_ratio=self.effective_mass_ratio,
            rashba_alpha=self.rashba_alpha,
            mu=self.mu,
            delta0=self.delta0,
            zeeman_b=zeeman_b,
        )

    def geometry(self, eta: float | None = None) -> JunctionGeometry:
        return JunctionGeometry(
            length_sc=self.length_sc,
            length_normal=self.length_normal,
            lattice_spacing=self.lattice_spacing,
            eta=self.eta[0] if eta is None else eta,
        )

    def phases(self) -> PhaseGrid:
        return PhaseGrid(self.phi_start, self.phi_stop, self.phi_count)

    @property
    def critical_field(self) -> float:
        return critical_field(self.delta0, self.mu)

    def b_mev(self) -> tuple[float, ...]:
        if self.b_units == "mev":
            return self.b
        bc = self.critical_field
        return tuple(x * bc for x in self.b)

    def replace(self, **changes) -> "RunConfig":
        return dataclasses.replace(self, **changes)

    def to_text(self) -> str:
        """Serialize; ``parse_config(cfg.to_text()) == cfg``."""
        lines = []
        for f in dataclasses.fields(self):
            lines.append(f"{f.name} = {_format(getattr(self, f.name))}")
        return "\n".join(lines) + "\n"


def _format(value) -> str:
    if isinstance(value, tuple):
        return ", ".join(_format(v) for v in value)
    if isinstance(value, float):
        return repr(value)
    return str(value)


_PARSERS: dict[str, Callable[[str], object]] = {
    "effective_mass_ratio": _float,
    "rashba_alpha": _float,
    "mu": _float,
    "delta0": _float,
    "length_sc": _float,
    "length_normal": _float,
    "lattice_spacing": _float,
    "eta": _floats,
    "b": _floats,
    "b_units": _choice("bc", "mev"),
    "phi_start": _float,
    "phi_stop": _float,
    "phi_count": _int,
    "k": _int,
    "gap_mode": _choice(*GAP_MODES),
    "threads": _int,
    "transmissions": _floats,
    "delta_eff": _float,
    "g12": _float,
    "g34": _float,
    "s_topo": _float,
    "s_triv": _float,
    "input": _text,
    "svg": _int,
    "dump_phi": _float,
}

REQUIRED_KEYS = tuple(
    f.name
    for f in dataclasses.fields(RunConfig)
    if f.default is dataclasses.MISSING and f.default_factory is dataclasses.MISSING
)


def _check(values: dict, where: Mapping[str, str]) -> list[str]:
    errors = []

    def err(key, msg):
        errors.append(f"{where.get(key, 'default')}: {key}: {msg}")

    for key in ("effective_mass_ratio", "length_sc", "length_normal", "lattice_spacing"):
        if key in values and values[key] <= 0:
            err(key, f"{key} must be positive")
    if "delta0" in values and values["delta0"] < 0:
        err("delta0", "delta0 must be non-negative")
    if "eta" in values and any(not (0 < e <= 1) for e in values["eta"]):
        err("eta", "eta must lie in (0, 1]")
    if "b" in values and any(x < 0 for x in values["b"]):
        err("b", "b must be non-negative")
    if "transmissions" in values and any(not (0 <= t <= 1) for t in values["transmissions"]):
        err("transmissions", "transmissions must lie in [0, 1]")
    if values.get("phi_count", 2) < 2:
        err("phi_count", "phi_count must be at least 2")
    if "phi_start" in values or "phi_stop" in values:
        lo, hi = values.get("phi_start", 0.0), values.get("phi_stop", 2 * math.pi)
        if lo > 1e-12 or hi < 2 * math.pi - 1e-12:
            err("phi_stop" if "phi_stop" in values else "phi_start", "phase grid must cover [0, 2*pi]")
    if values.get("k", 1) < 1:
        err("k", "k must be >= 1")
    if values.get("threads", 0) < 0:
        err("threads", "threads must be >= 0 (0 = auto)")
    for key in ("delta_eff", "g12", "g34", "s_topo", "s_triv"):
        if key in values and values[key] < 0:
            err(key, f"{key} must be non-negative")
    if values.get("s_topo", 0) > values.get("s_triv", math.inf):
        err("s_topo", "s_topo must not exceed s_triv")
    return errors


def parse_config(
    text: str,
    env: Mapping[str, str] | None = None,
    base: RunConfig | None = None,
) -> RunConfig:
    """Parse the flat format into a validated :class:`RunConfig`.

    ``base`` supplies values for keys the text omits (the figure commands
    use it for their built-in defaults). ``env`` entries named
    ``MJSPEC_<KEY>`` override the text. Raises :class:`ConfigError` with one
    message per problem, each naming its line.
    """
    values: dict[str, object] = {}
    where: dict[str, str] = {}
    errors: list[str] = []

    def take(key: str, raw: str, origin: str):
        parser = _PARSERS.get(key)
        if parser is None:
            errors.append(f"{origin}: unknown key '{key}'")
            return
        try:
            values[key] = parser(raw)
            where[key] = origin
        except ValueError as exc:
            kind = getattr(parser, "__name__", "value").lstrip("_")
            errors.append(f"{origin}: {key}: cannot parse '{raw}' as {kind} ({exc})")

    for lineno, line in enumerate(text.splitlines(), start=1):
        body = line.split("#", 1)[0].strip()
        if not body:
            continue
        origin = f"line {lineno}"
        if "=" not in body:
            errors.append(f"{origin}: expected 'key = value', got '{body}'")
            continue
        key, raw = (s.strip() for s in body.split("=", 1))
        if key in where and where[key].startswith("line"):
            errors.append(f"{origin}: duplicate key '{key}' (first set on {where[key]})")
            continue
        take(key, raw, origin)

    for name, raw in sorted((env or {}).items()):
        if name.startswith(ENV_PREFIX) and name[len(ENV_PREFIX):].lower() in _PARSERS:
            take(name[len(ENV_PREFIX):].lower(), raw.strip(), f"env {name}")

    if base is not None:
        for f in dataclasses.fields(RunConfig):
            values.setdefault(f.name, getattr(base, f.name))
    missing = [k for k in REQUIRED_KEYS if k not in values]
    for key in missing:
        errors.append(f"missing required key '{key}'")
    errors.extend(_check(values, where))
    if errors:
        raise ConfigError(errors)

    cfg = RunConfig(**values)
    try:
        diagnostics = [d for eta in cfg.eta for d in validate(cfg.material(max(cfg.b_mev())), cfg.geometry(eta))]
    except ValueError as exc:
        diagnostics = [str(exc)]
    if diagnostics:
        raise ConfigError(sorted(set(diagnostics)))
    return cfg


def environment() -> dict[str, str]:
    return {k: v for k, v in os.environ.items() if k.startswith(ENV_PREFIX)}


def _fig3_defaults() -> RunConfig:
    return RunConfig(
        effective_mass_ratio=0.015,
        rashba_alpha=20.0,
        mu=0.5,
        delta0=0.25,
        length_sc=2000.0,
        length_normal=10.0,
        lattice_spacing=10.0,
        eta=(0.6, 0.7, 0.8, 0.9, 1.0),
        b=(0.0, 0.6, 0.8, 0.9),
    )


FIG3_DEFAULTS = _fig3_defaults()
FIG4_DEFAULTS = FIG3_DEFAULTS.replace(b=(1.2, 1.4, 1.6, 1.8))
FIG2_DEFAULTS = FIG3_DEFAULTS.replace(b=(0.0,), eta=(1.0,))
