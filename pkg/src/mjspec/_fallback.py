"""Pure-Python versions of the compiled kernels in ``_kernels.pyx``.

``band_eigvals`` delegates to LAPACK's banded solver instead of bisecting;
``sturm_count`` is kept as a readable reference for the compiled count.
"""

import numpy as np
import scipy.linalg


def sturm_count(ab, x):
    ab = np.asarray(ab)
    kd = ab.shape[0] - 1
    n = ab.shape[1]
    w = ab.copy()
    w[kd] -= x
    pivmin = np.finfo(float).tiny * max(1.0, float(np.abs(ab).sum(axis=0).max()))
    neg = 0
    for i in range(n):
        d = w[kd, i].real
        if abs(d) < pivmin:
            d = -pivmin
        if d < 0:
            neg += 1
        m = min(kd, n - 1 - i)
        for p in range(1, m + 1):
            aip = np.conj(w[kd - p, i + p]) / d
            q = np.arange(p, m + 1)
            w[kd - (q - p), i + q] -= aip * w[kd - q, i + q]
    return neg


def band_eigvals(ab, il, iu, abstol):
    return scipy.linalg.eig_banded(
        np.asarray(ab),
        lower=False,
        eigvals_only=True,
        select="i",
        select_range=(il, iu),
        check_finite=False,
    )


def _pf4(a):
    return a[0, 1] * a[2, 3] - a[0, 2] * a[1, 3] + a[0, 3] * a[1, 2]


def chain_pfaffian_sign(diag, off, rtol):
    sign = 1
    s = np.array(diag[0])
    n = len(diag)
    for j in range(n):
        p = _pf4(s)
        mx = np.abs(s).max()
        if mx == 0 or abs(p) <= rtol * mx * mx:
            return 0
        if p < 0:
            sign = -sign
        if j == n - 1:
            break
        c = off[j]
        s = diag[j + 1] + c.T @ np.linalg.solve(s, c)
        s = 0.5 * (s - s.T)
    return sign
