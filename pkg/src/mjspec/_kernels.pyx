# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled kernels: Sturm-count bisection on Hermitian band matrices and
the chain Pfaffian sign. Same interface as ``_fallback``."""

import numpy as np

from libc.math cimport exp, fabs, log, sqrt
from libc.float cimport DBL_EPSILON, DBL_MIN

ctypedef double complex cplx


cdef inline double _abs2(cplx z) noexcept nogil:
    return z.real * z.real + z.imag * z.imag


cdef Py_ssize_t _count(const cplx[:, ::1] ab, cplx[:, ::1] w, double x,
                       double pivmin, double* logdet) noexcept nogil:
    # number of eigenvalues below x, from the signs of the pivots of an
    # LDL^H factorization of A - x without pivoting; upper band storage
    # ab[kd + i - j, j] = A[i, j] for i <= j
    cdef Py_ssize_t kd = ab.shape[0] - 1
    cdef Py_ssize_t n = ab.shape[1]
    cdef Py_ssize_t i, p, q, r, m, neg = 0
    cdef double d, ld = 0.0
    cdef cplx aip
    for r in range(kd + 1):
        for i in range(n):
            w[r, i] = ab[r, i]
    for i in range(n):
        w[kd, i] = w[kd, i] - x
    for i in range(n):
        d = w[kd, i].real
        if fabs(d) < pivmin:
            d = -pivmin
        if d < 0:
            neg += 1
        if logdet != NULL:
            ld += log(fabs(d))
        m = kd if i + kd < n else n - 1 - i
        for p in range(1, m + 1):
            # A[i, i+p]
            aip = w[kd - p, i + p]
            if aip.real == 0 and aip.imag == 0:
                continue
            aip = aip.conjugate() / d
            for q in range(p, m + 1):
                # A[i+p, i+q] -= conj(A[i, i+p]) A[i, i+q] / d
                w[kd - (q - p), i + q] = w[kd - (q - p), i + q] - aip * w[kd - q, i + q]
    if logdet != NULL:
        logdet[0] = ld
    return neg


cdef void _gershgorin(const cplx[:, ::1] ab, double* lo, double* hi) noexcept nogil:
    cdef Py_ssize_t kd = ab.shape[0] - 1
    cdef Py_ssize_t n = ab.shape[1]
    cdef Py_ssize_t i, j
    cdef double rad, c, a
    cdef double glo = 1e300, ghi = -1e300
    for i in range(n):
        c = ab[kd, i].real
        rad = 0.0
        # row i, columns j > i: ab[kd + i - j, j]
        for j in range(i + 1, min(i + kd + 1, n)):
            rad += sqrt(_abs2(ab[kd + i - j, j]))
        # row i, columns j < i: conj of A[j, i] = ab[kd + j - i, i]
        for j in range(max(i - kd, 0), i):
            rad += sqrt(_abs2(ab[kd + j - i, i]))
        if c - rad < glo:
            glo = c - rad
        if c + rad > ghi:
            ghi = c + rad
    a = fabs(glo) if fabs(glo) > fabs(ghi) else fabs(ghi)
    lo[0] = glo - 2 * DBL_EPSILON * a * n - 1e-300
    hi[0] = ghi + 2 * DBL_EPSILON * a * n + 1e-300


def sturm_count(const cplx[:, ::1] ab, double x):
    """Number of eigenvalues of the band matrix strictly below ``x``."""
    cdef cplx[:, ::1] w = np.empty_like(np.asarray(ab))
    cdef double lo, hi, pivmin
    _gershgorin(ab, &lo, &hi)
    pivmin = DBL_MIN * max(fabs(lo), fabs(hi), 1.0)
    return _count(ab, w, x, pivmin, NULL)


cdef inline double _signed(Py_ssize_t c, double ld, double ref) noexcept nogil:
    # det(A - x) = (-1)^c exp(ld), rescaled by exp(-ref)
    cdef double v = exp(ld - ref)
    return -v if c % 2 else v


cdef double _refine(const cplx[:, ::1] ab, cplx[:, ::1] w, Py_ssize_t idx,
                    double a, double b, double abstol, double pivmin) noexcept nogil:
    # [a, b] holds exactly eigenvalue ``idx``; det(A - x) has a single sign
    # change there. Illinois regula falsi on the determinant, with a
    # bisection step whenever the bracket fails to halve.
    cdef double la, lb, lx, fa, fb, fx, x, ref, tol, width
    cdef Py_ssize_t c, side = 0, it = 0
    _count(ab, w, a, pivmin, &la)
    _count(ab, w, b, pivmin, &lb)
    ref = la if la > lb else lb
    fa = _signed(idx, la, ref)
    fb = _signed(idx + 1, lb, ref)
    width = b - a
    while True:
        tol = abstol + 2 * DBL_EPSILON * max(fabs(a), fabs(b))
        if b - a <= tol:
            break
        it += 1
        if it % 3 == 0 and b - a > 0.5 * width:
            x = 0.5 * (a + b)
        else:
            x = (a * fb - b * fa) / (fb - fa)
            if not (x > a + 0.25 * tol and x < b - 0.25 * tol):
                x = 0.5 * (a + b)
        if it % 3 == 0:
            width = b - a
        c = _count(ab, w, x, pivmin, &lx)
        fx = _signed(c, lx, ref)
        if c > idx:
            b = x
            fb = fx
            if side == 1:
                fa *= 0.5
            side = 1
        else:
            a = x
            fa = fx
            if side == -1:
                fb *= 0.5
            side = -1
    return 0.5 * (a + b)


def band_eigvals(const cplx[:, ::1] ab, Py_ssize_t il, Py_ssize_t iu, double abstol):
    """Eigenvalues with (0-based, inclusive) indices ``il..iu``, ascending.

    Sturm-count bisection isolates each eigenvalue, then a safeguarded
    regula falsi on det(A - x) converges it to ``abstol``.
    """
    cdef Py_ssize_t n = ab.shape[1]
    if il < 0 or iu >= n or il > iu:
        raise ValueError("index range out of bounds")
    cdef Py_ssize_t m = iu - il + 1
    cdef cplx[:, ::1] w = np.empty_like(np.asarray(ab))
    out_arr = np.empty(m)
    cdef double[::1] out = out_arr
    low_arr = np.empty(m)
    up_arr = np.empty(m)
    clow_arr = np.zeros(m, dtype=np.intp)
    cup_arr = np.zeros(m, dtype=np.intp)
    cdef double[::1] low = low_arr
    cdef double[::1] up = up_arr
    cdef Py_ssize_t[::1] clow = clow_arr
    cdef Py_ssize_t[::1] cup = cup_arr
    cdef double glo, ghi, pivmin, a, b, mid, tol
    cdef Py_ssize_t j, jj, c, idx
    _gershgorin(ab, &glo, &ghi)
    pivmin = DBL_MIN * max(fabs(glo), fabs(ghi), 1.0)
    with nogil:
        for j in range(m):
            low[j] = glo
            up[j] = ghi
            clow[j] = 0
            cup[j] = n
        for j in range(m):
            idx = il + j
            while True:
                a = low[j]
                b = up[j]
                tol = abstol + 2 * DBL_EPSILON * max(fabs(a), fabs(b))
                if b - a <= tol:
                    out[j] = 0.5 * (a + b)
                    break
                if clow[j] == idx and cup[j] == idx + 1:
                    out[j] = _refine(ab, w, idx, a, b, abstol, pivmin)
                    break
                mid = 0.5 * (a + b)
                c = _count(ab, w, mid, pivmin, NULL)
                # eigenvalue index il + jj lies below mid iff c > il + jj
                for jj in range(j, m):
                    if c > il + jj:
                        if mid < up[jj]:
                            up[jj] = mid
                            cup[jj] = c
                    else:
                        if mid > low[jj]:
                            low[jj] = mid
                            clow[jj] = c
    return out_arr


cdef inline double _pf4(double[:, ::1] s) noexcept nogil:
    return s[0, 1] * s[2, 3] - s[0, 2] * s[1, 3] + s[0, 3] * s[1, 2]


cdef int _solve4(double[:, ::1] a, double[:, ::1] b) noexcept nogil:
    # in-place solve a x = b for 4x4 a, partial pivoting; b overwritten by x
    cdef int i, j, k, piv
    cdef double t, mx
    for k in range(4):
        piv = k
        mx = fabs(a[k, k])
        for i in range(k + 1, 4):
            if fabs(a[i, k]) > mx:
                mx = fabs(a[i, k])
                piv = i
        if mx == 0:
            return -1
        if piv != k:
            for j in range(4):
                t = a[k, j]; a[k, j] = a[piv, j]; a[piv, j] = t
                t = b[k, j]; b[k, j] = b[piv, j]; b[piv, j] = t
        for i in range(k + 1, 4):
            t = a[i, k] / a[k, k]
            for j in range(k, 4):
                a[i, j] -= t * a[k, j]
            for j in range(4):
                b[i, j] -= t * b[k, j]
    for k in range(3, -1, -1):
        for j in range(4):
            t = b[k, j]
            for i in range(k + 1, 4):
                t -= a[k, i] * b[i, j]
            b[k, j] = t / a[k, k]
    return 0


cdef int _chain_sign(const double[:, :, ::1] diag, const double[:, :, ::1] off,
                     double rtol, double[:, ::1] s, double[:, ::1] a,
                     double[:, ::1] x) noexcept nogil:
    cdef Py_ssize_t n = diag.shape[0]
    cdef Py_ssize_t j, r, c, q
    cdef double p, mx, acc
    cdef int sign = 1
    for r in range(4):
        for c in range(4):
            s[r, c] = diag[0, r, c]
    for j in range(n):
        p = _pf4(s)
        mx = 0
        for r in range(4):
            for c in range(4):
                if fabs(s[r, c]) > mx:
                    mx = fabs(s[r, c])
        if mx == 0 or fabs(p) <= rtol * mx * mx:
            return 0
        if p < 0:
            sign = -sign
        if j == n - 1:
            break
        # x = s^{-1} C
        for r in range(4):
            for c in range(4):
                a[r, c] = s[r, c]
                x[r, c] = off[j, r, c]
        if _solve4(a, x) != 0:
            return 0
        # s = D_{j+1} + C^T x, re-antisymmetrized
        for r in range(4):
            for c in range(4):
                acc = diag[j + 1, r, c]
                for q in range(4):
                    acc = acc + off[j, q, r] * x[q, c]
                a[r, c] = acc
        for r in range(4):
            for c in range(4):
                s[r, c] = 0.5 * (a[r, c] - a[c, r])
    return sign


def chain_pfaffian_sign(const double[:, :, ::1] diag, const double[:, :, ::1] off,
                        double rtol):
    """Sign of the Pfaffian of a block-tridiagonal antisymmetric matrix with
    4x4 blocks, or 0 if a running Schur complement is numerically singular."""
    cdef double[:, ::1] s = np.empty((4, 4))
    cdef double[:, ::1] a = np.empty((4, 4))
    cdef double[:, ::1] x = np.empty((4, 4))
    cdef int sign
    with nogil:
        sign = _chain_sign(diag, off, rtol, s, a, x)
    return sign
