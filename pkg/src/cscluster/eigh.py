"""In-repo dense symmetric eigensolver.

Householder reduction to tridiagonal form followed by the implicit QL
iteration with Wilkinson shifts, rotations accumulated into the eigenvector
matrix. Deterministic and dependency-free by construction; the two kernels
are JIT-compiled with numba when available (identical pure-numpy fallbacks
are kept and tested).
"""

from __future__ import annotations

import numpy as np

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAVE_NUMBA = False

_EPS = float(np.finfo(np.float64).eps)
_MAX_SWEEPS = 50


# ---------------------------------------------------------------------------
# Householder tridiagonalization
# ---------------------------------------------------------------------------

def _tridiag_numpy(A: np.ndarray, Q: np.ndarray) -> None:
    """Reduce symmetric A to tridiagonal form in place, accumulating Q."""
    n = A.shape[0]
    for k in range(n - 2):
        x = A[k + 1 :, k]
        xnorm = np.sqrt(x @ x)
        if xnorm == 0.0:
            continue
        alpha = -xnorm if x[0] >= 0 else xnorm
        v = x.copy()
        v[0] -= alpha
        vnorm2 = v @ v
        if vnorm2 == 0.0:
            continue
        v /= np.sqrt(vnorm2 / 2.0)  # v^T v = 2, reflector H = I - v v^T
        B = A[k + 1 :, k + 1 :]
        w = B @ v
        w -= (0.5 * (v @ w)) * v
        B -= np.outer(v, w) + np.outer(w, v)
        A[k + 1, k] = alpha
        A[k, k + 1] = alpha
        A[k + 2 :, k] = 0.0
        A[k, k + 2 :] = 0.0
        Qb = Q[:, k + 1 :]
        Qb -= np.outer(Qb @ v, v)


def _tridiag_scalar(A, Q):  # pragma: no cover - exercised via numba path
    n = A.shape[0]
    for k in range(n - 2):
        xnorm2 = 0.0
        for i in range(k + 1, n):
            xnorm2 += A[i, k] * A[i, k]
        if xnorm2 == 0.0:
            continue
        xnorm = np.sqrt(xnorm2)
        alpha = -xnorm if A[k + 1, k] >= 0 else xnorm
        v = np.empty(n - k - 1)
        for i in range(k + 1, n):
            v[i - k - 1] = A[i, k]
        v[0] -= alpha
        vnorm2 = 0.0
        for i in range(v.size):
            vnorm2 += v[i] * v[i]
        if vnorm2 == 0.0:
            continue
        scale = np.sqrt(vnorm2 / 2.0)
        for i in range(v.size):
            v[i] /= scale
        w = np.zeros(n - k - 1)
        for i in range(k + 1, n):
            acc = 0.0
            for j in range(k + 1, n):
                acc += A[i, j] * v[j - k - 1]
            w[i - k - 1] = acc
        kappa = 0.0
        for i in range(v.size):
            kappa += v[i] * w[i]
        kappa *= 0.5
        for i in range(v.size):
            w[i] -= kappa * v[i]
        for i in range(k + 1, n):
            vi = v[i - k - 1]
            wi = w[i - k - 1]
            for j in range(k + 1, n):
                A[i, j] -= vi * w[j - k - 1] + wi * v[j - k - 1]
        A[k + 1, k] = alpha
        A[k, k + 1] = alpha
        for i in range(k + 2, n):
            A[i, k] = 0.0
            A[k, i] = 0.0
        for r in range(n):
            acc = 0.0
            for j in range(k + 1, n):
                acc += Q[r, j] * v[j - k - 1]
            for j in range(k + 1, n):
                Q[r, j] -= acc * v[j - k - 1]


# ---------------------------------------------------------------------------
# Implicit QL with Wilkinson shifts
# ---------------------------------------------------------------------------

def _ql_scalar(d, e, Z, max_sweeps):
    """QL sweeps on (d, e); plane rotations applied to Z's columns.

    Z may have zero rows for an eigenvalues-only run. Returns False when an
    eigenvalue fails to converge within max_sweeps (does not happen for
    finite symmetric input in practice).
    """
    n = d.size
    want_vectors = Z.shape[0] > 0
    for l in range(n):
        for _ in range(max_sweeps):
            m = l
            while m < n - 1:
                dd = abs(d[m]) + abs(d[m + 1])
                if abs(e[m]) <= _EPS * dd:
                    break
                m += 1
            if m == l:
                break
            # Wilkinson shift from the leading 2x2 block
            g = (d[l + 1] - d[l]) / (2.0 * e[l])
            r = np.hypot(g, 1.0)
            if g >= 0.0:
                g = d[m] - d[l] + e[l] / (g + r)
            else:
                g = d[m] - d[l] + e[l] / (g - r)
            s = 1.0
            c = 1.0
            p = 0.0
            underflow = False
            for i in range(m - 1, l - 1, -1):
                f = s * e[i]
                b = c * e[i]
                r = np.hypot(f, g)
                e[i + 1] = r
                if r == 0.0:
                    d[i + 1] -= p
                    e[m] = 0.0
                    underflow = True
                    break
                s = f / r
                c = g / r
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2.0 * c * b
                p = s * r
                d[i + 1] = g + p
                g = c * r - b
                if want_vectors:
                    for row in range(Z.shape[0]):
                        zi = Z[row, i]
                        Z[row, i] = c * zi - s * Z[row, i + 1]
                        Z[row, i + 1] = s * zi + c * Z[row, i + 1]
            if not underflow:
                d[l] -= p
                e[l] = g
                e[m] = 0.0
        else:
            return False
    return True


def _ql_numpy(d, e, Z, max_sweeps):
    """Same iteration as _ql_scalar with vectorized rotation of Z columns."""
    n = d.size
    want_vectors = Z.shape[0] > 0
    for l in range(n):
        for _ in range(max_sweeps):
            m = l
            while m < n - 1:
                dd = abs(d[m]) + abs(d[m + 1])
                if abs(e[m]) <= _EPS * dd:
                    break
                m += 1
            if m == l:
                break
            g = (d[l + 1] - d[l]) / (2.0 * e[l])
            r = np.hypot(g, 1.0)
            g = d[m] - d[l] + e[l] / (g + (r if g >= 0.0 else -r))
            s = 1.0
            c = 1.0
            p = 0.0
            underflow = False
            for i in range(m - 1, l - 1, -1):
                f = s * e[i]
                b = c * e[i]
                r = np.hypot(f, g)
                e[i + 1] = r
                if r == 0.0:
                    d[i + 1] -= p
                    e[m] = 0.0
                    underflow = True
                    break
                s = f / r
                c = g / r
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2.0 * c * b
                p = s * r
                d[i + 1] = g + p
                g = c * r - b
                if want_vectors:
                    zi = Z[:, i].copy()
                    Z[:, i] = c * zi - s * Z[:, i + 1]
                    Z[:, i + 1] = s * zi + c * Z[:, i + 1]
            if not underflow:
                d[l] -= p
                e[l] = g
                e[m] = 0.0
        else:
            return False
    return True


if HAVE_NUMBA:
    _tridiag_kernel = njit(cache=True)(_tridiag_scalar)
    _ql_kernel = njit(cache=True)(_ql_scalar)
else:  # pragma: no cover
    _tridiag_kernel = _tridiag_numpy
    _ql_kernel = _ql_numpy


def tridiagonalize(A: np.ndarray, *, use_numba: bool | None = None):
    """Return (d, e, Q) with Q^T A Q tridiagonal: diagonal d, subdiagonal e."""
    A = np.array(A, dtype=np.float64)
    n = A.shape[0]
    if A.shape != (n, n):
        raise ValueError("matrix must be square")
    Q = np.eye(n)
    if n > 2:
        kern = _tridiag_kernel if (use_numba is None or use_numba) and HAVE_NUMBA else _tridiag_numpy
        if use_numba and not HAVE_NUMBA:
            raise RuntimeError("numba not available")
        kern(A, Q)
    d = np.diag(A).copy()
    e = np.zeros(n)
    if n > 1:
        e[: n - 1] = np.diag(A, 1)
    return d, e, Q


def symmetric_eigh(A: np.ndarray, *, vectors: bool = True, use_numba: bool | None = None):
    """Full spectrum (ascending) of a symmetric matrix, optionally with vectors.

    Returns (w,) or (w, V) with ``A @ V == V * w`` and orthonormal V.
    """
    d, e, Q = tridiagonalize(A, use_numba=use_numba)
    Z = Q if vectors else np.empty((0, d.size))
    kern = _ql_kernel if (use_numba is None or use_numba) and HAVE_NUMBA else _ql_numpy
    if use_numba and not HAVE_NUMBA:
        raise RuntimeError("numba not available")
    ok = kern(d, e, Z, _MAX_SWEEPS)
    if not ok:
        raise ArithmeticError("QL iteration failed to converge")
    order = np.argsort(d, kind="stable")
    w = d[order]
    if vectors:
        return w, np.ascontiguousarray(Z[:, order])
    return w
