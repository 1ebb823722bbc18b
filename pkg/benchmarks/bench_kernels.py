"""Compare the compiled kernels with the pure-Python fallback.

    python benchmarks/bench_kernels.py [--repeat N]

Times the eigenvalue window and the parity sign on the default junction
(401 sites, dim 1604) and checks that both paths agree.
"""

import argparse
import math
import time

import numpy as np

from mjspec import _fallback, kernels
from mjspec.core import JunctionGeometry, MaterialParams
from mjspec.lattice import build_bdg, build_profile
from mjspec.parity import _SINGULAR_RTOL, majorana_blocks
from mjspec.spectrum import DEFAULT_K, EIG_ABSTOL


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    if not kernels.COMPILED:
        raise SystemExit("compiled extension not built; run pip install -e . first")

    params = MaterialParams()
    geom = JunctionGeometry(eta=0.8)
    cases = [(0.0, 1.0), (0.9 * params.critical_field, 2.0), (1.4 * params.critical_field, math.pi)]
    print(f"{'case':<22}{'kernel':<16}{'compiled s':>12}{'fallback s':>12}{'speedup':>9}{'max |diff|':>12}")
    for b, phi in cases:
        h = build_bdg(params.with_zeeman(b), geom, build_profile(geom, params.delta0, phi))
        ab = h.to_banded()
        half = h.dim // 2
        lo, hi = half, half + DEFAULT_K - 1
        tc, wc = best_of(lambda: kernels.impl.band_eigvals(ab, lo, hi, EIG_ABSTOL / 4), args.repeat)
        tf, wf = best_of(lambda: _fallback.band_eigvals(ab, lo, hi, EIG_ABSTOL / 4), args.repeat)
        label = f"B={b:.3f} phi={phi:.2f}"
        diff = float(np.max(np.abs(wc - wf)))
        print(f"{label:<22}{'band_eigvals':<16}{tc:>12.4f}{tf:>12.4f}{tf / tc:>9.1f}{diff:>12.1e}")
        diag, off = majorana_blocks(h)
        tc, sc = best_of(lambda: kernels.impl.chain_pfaffian_sign(diag, off, _SINGULAR_RTOL), args.repeat)
        tf, sf = best_of(lambda: _fallback.chain_pfaffian_sign(diag, off, _SINGULAR_RTOL), args.repeat)
        print(f"{'':<22}{'parity sign':<16}{tc:>12.4f}{tf:>12.4f}{tf / tc:>9.1f}{abs(sc - sf):>12d}")


if __name__ == "__main__":
    main()
