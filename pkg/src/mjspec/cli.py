"""Command-line front end.

    mjspec COMMAND [--config PATH] [--out DIR] [--k INT] [--threads INT]
                   [--no-timestamp]

Commands: analytic, sweep, calibrate, classify, fig2, fig3, fig4. The
figure commands need no configuration; a config file only overrides their
built-in parameter sets. Any config key can also be set through an
environment variable ``MJSPEC_<KEY>``; command-line flags win over both.

Exit status: 0 on success, 1 for invalid input, 2 for numerical failure.
"""

from __future__ import annotations

import argparse
import dataclasses
import io
import math
import os
import sys
from pathlib import Path
from typing import Callable

import numpy as np

from . import __version__
from .classify import ClassificationError, calibrate_transmission, classify_sweep, combine
from .config import (
    ENV_PREFIX,
    FIG2_DEFAULTS,
    FIG3_DEFAULTS,
    FIG4_DEFAULTS,
    ConfigError,
    RunConfig,
    environment,
    parse_config,
)
from .effective import EffectiveModelParams, FitError, abs_energy, mbs_energy
from .fileio import (
    provenance_lines,
    read_sweep_csv,
    write_sweep_csv,
    write_table,
    write_verdict,
)
from .lattice import build_bdg, build_profile
from .spectrum import SolverError, sweep
from .svg import write_line_plot

__all__ = ["main", "run", "COMMANDS"]

EXIT_OK, EXIT_INVALID, EXIT_NUMERIC = 0, 1, 2

_DEFAULTS = {"fig2": FIG2_DEFAULTS, "fig3": FIG3_DEFAULTS, "fig4": FIG4_DEFAULTS}


@dataclasses.dataclass
class Context:
    command: str
    config: RunConfig
    out: Path
    timestamp: bool = True
    # filename -> contents, written only once the command has finished
    files: dict[str, str] = dataclasses.field(default_factory=dict)

    def provenance(self, **extra) -> list[str]:
        # the thread count cannot change results, so it stays out of the files
        text = "".join(
            line for line in self.config.to_text().splitlines(keepends=True) if not line.startswith("threads ")
        )
        return provenance_lines(self.command, text, extra, self.timestamp)

    def emit(self, name: str, writer: Callable, *args, **kwargs) -> None:
        buf = io.StringIO()
        writer(buf, *args, **kwargs)
        self.files[name] = buf.getvalue()


def _tag(x: float) -> str:
    return f"{x:g}"


def _analytic(ctx: Context, prefix: str) -> None:
    cfg = ctx.config
    phi = cfg.phases().phi_values
    header = ("phi_rad", "e_minus_mev", "e_plus_mev", "delta_e_mev")
    for t in cfg.transmissions:
        lo, hi = abs_energy(t, phi, cfg.delta0)
        ctx.emit(
            f"{prefix}_abs_T{_tag(t)}.csv",
            write_table,
            header,
            zip(phi, lo, hi, hi - lo),
            ctx.provenance(model="abs", transmission=t),
        )
    for t in cfg.transmissions:
        p = EffectiveModelParams(t, cfg.delta_eff, cfg.g12, cfg.g34)
        lo, hi = mbs_energy(p, phi)
        ctx.emit(
            f"{prefix}_mbs_T{_tag(t)}.csv",
            write_table,
            header,
            zip(phi, lo, hi, hi - lo),
            ctx.provenance(model="mbs", transmission=t),
        )


def _run_sweep(ctx: Context, name: str) -> None:
    cfg = ctx.config
    result = sweep(
        cfg.material(),
        cfg.geometry(),
        cfg.phases(),
        cfg.eta,
        cfg.b_mev(),
        k=cfg.k,
        gap_mode=cfg.gap_mode,
        threads=cfg.threads,
    )
    bc = cfg.critical_field
    ctx.emit(f"{name}.csv", write_sweep_csv, result, bc, ctx.provenance())
    if cfg.svg:
        de = result.delta_e()
        top = float(np.max(de)) * 1.05 or 1.0
        for ib, b in enumerate(cfg.b):
            series = [(f"eta={_tag(e)}", de[ib, ie]) for ie, e in enumerate(cfg.eta)]
            unit = "B_c" if cfg.b_units == "bc" else "meV"
            ctx.emit(
                f"{name}_b{_tag(b)}.svg",
                write_line_plot,
                result.phi_values,
                series,
                (0.0, 2 * math.pi),
                (0.0, top),
                title=f"B = {_tag(b)} {unit}",
                xlabel="phi (rad)",
                ylabel="delta_e (meV)",
            )
    if cfg.dump_phi >= 0:
        b0 = cfg.b_mev()[0]
        h = build_bdg(
            cfg.material(b0), cfg.geometry(), build_profile(cfg.geometry(), cfg.delta0, cfg.dump_phi)
        )

        def dump(stream):
            for line in ctx.provenance(dump_phi=cfg.dump_phi, dump_b_mev=b0, dump_eta=cfg.eta[0]):
                stream.write(line + "\n")
            stream.write("# row col re im\n")
            h.write_triplets(stream)

        ctx.emit(f"{name}_matrix.txt", dump)


def _calibrate(ctx: Context) -> None:
    cfg = ctx.config
    rows = calibrate_transmission(
        cfg.material(0.0), cfg.geometry(), cfg.eta, cfg.phases(), threads=cfg.threads
    )
    ctx.emit(
        "calibrate.csv",
        write_table,
        ("eta", "transmission", "rms_residual_mev"),
        [(r.eta, r.transmission, r.rms_residual) for r in rows],
        ctx.provenance(zeeman_b_mev=0.0),
    )


def _classify(ctx: Context) -> None:
    cfg = ctx.config
    if not cfg.input:
        raise ConfigError(["classify needs 'input' (path to a sweep CSV)"])
    with open(cfg.input, encoding="utf-8") as fh:
        table = read_sweep_csv(fh)
    if len(table.eta_values) < 3:
        raise ClassificationError("verdict needs at least 3 eta values")
    bc = cfg.critical_field
    rows = classify_sweep(
        table.delta_e, table.phi_values, table.eta_values, table.b_over_bc * bc, cfg.delta0, cfg.mu
    )
    result = combine(rows, cfg.s_topo, cfg.s_triv)
    ctx.emit(
        "verdict.txt",
        write_verdict,
        rows,
        result,
        bc,
        cfg.s_topo,
        cfg.s_triv,
        ctx.provenance(input=cfg.input),
    )


COMMANDS: dict[str, Callable[[Context], None]] = {
    "analytic": lambda ctx: _analytic(ctx, "analytic"),
    "sweep": lambda ctx: _run_sweep(ctx, "sweep"),
    "calibrate": _calibrate,
    "classify": _classify,
    "fig2": lambda ctx: _analytic(ctx, "fig2"),
    "fig3": lambda ctx: _run_sweep(ctx, "fig3"),
    "fig4": lambda ctx: _run_sweep(ctx, "fig4"),
}


def load_config(command: str, path: str | None, env: dict[str, str] | None = None, **overrides) -> RunConfig:
    text = ""
    if path is not None:
        text = Path(path).read_text(encoding="utf-8")
    cfg = parse_config(text, env=environment() if env is None else env, base=_DEFAULTS.get(command))
    changes = {k: v for k, v in overrides.items() if v is not None}
    if changes:
        cfg = parse_config(cfg.replace(**changes).to_text())
    if command == "fig2" and (cfg.g12 != cfg.delta_eff / 20 or cfg.g34 != cfg.delta_eff / 20):
        cfg = cfg.replace(g12=cfg.delta_eff / 20, g34=cfg.delta_eff / 20)
    return cfg


def run(command: str, config: RunConfig, out: str | os.PathLike = "out", timestamp: bool = True) -> dict[str, Path]:
    """Run one command and write its files into ``out``; returns name -> path.

    Exceptions propagate; :func:`main` maps them to exit codes.
    """
    if command not in COMMANDS:
        raise ConfigError([f"unknown command '{command}'"])
    ctx = Context(command, config, Path(out), timestamp)
    COMMANDS[command](ctx)
    ctx.out.mkdir(parents=True, exist_ok=True)
    written = {}
    for name, content in ctx.files.items():
        path = ctx.out / name
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(content)
        written[name] = path
    return written


def _parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="mjspec", description=__doc__.split("\n\n")[0])
    ap.add_argument("command", choices=sorted(COMMANDS))
    ap.add_argument("--config", metavar="PATH")
    ap.add_argument("--out", metavar="DIR", default=os.environ.get(ENV_PREFIX + "OUT", "out"))
    ap.add_argument("--k", type=int)
    ap.add_argument("--threads", type=int, help="worker threads, 0 = auto")
    ap.add_argument("--no-timestamp", action="store_true")
    ap.add_argument("--version", action="version", version=f"mjspec {__version__}")
    return ap


def main(argv: list[str] | None = None) -> int:
    args = _parser().parse_args(argv)
    try:
        cfg = load_config(args.command, args.config, k=args.k, threads=args.threads)
        no_ts = args.no_timestamp or os.environ.get(ENV_PREFIX + "NO_TIMESTAMP", "0") not in ("", "0")
        written = run(args.command, cfg, args.out, timestamp=not no_ts)
    except ConfigError as exc:
        for e in exc.errors:
            print(f"mjspec: {e}", file=sys.stderr)
        return EXIT_INVALID
    except (SolverError, FitError, np.linalg.LinAlgError, FloatingPointError, ArithmeticError) as exc:
        print(f"mjspec: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (ValueError, OSError) as exc:
        print(f"mjspec: {exc}", file=sys.stderr)
        return EXIT_INVALID
    for path in written.values():
        print(path)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
