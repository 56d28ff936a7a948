"""Cyclic Jacobi eigensolver for Hermitian matrices.

Works on a single ``(n, n)`` matrix or on a stack ``(..., n, n)``; every
rotation is applied to the whole stack at once, so campaigns over many
small blocks cost a handful of vectorised sweeps.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import NumericError

OFF_DIAGONAL_RTOL = 1e-13
MAX_SWEEPS = 100
_NEGLIGIBLE = np.finfo(np.float64).tiny * 1e4
# single matrices up to this size run on Python scalars; numpy call overhead
# dominates the arithmetic there
_SCALAR_PATH_MAX = 8


def _off_diagonal_mass(a: np.ndarray) -> np.ndarray:
    n = a.shape[-1]
    off = a * (1.0 - np.eye(n))
    return np.sqrt(np.sum(off.real ** 2 + off.imag ** 2, axis=(-2, -1)))


def jacobi_eigh(matrix, *, rtol: float = OFF_DIAGONAL_RTOL, max_sweeps: int = MAX_SWEEPS):
    """Eigen-decompose Hermitian matrices by cyclic Jacobi rotations.

    Returns ``(w, v)`` with eigenvalues ``w`` ascending along the last axis
    and eigenvectors in the columns of ``v``, so ``a = v @ diag(w) @ v^H``.
    Sweeps stop once the off-diagonal Frobenius mass of every matrix in the
    stack is at most ``rtol`` times its Frobenius norm.

    Raises NumericError (with sweep diagnostics) if ``max_sweeps`` is hit.
    """
    a = np.asarray(matrix, dtype=np.complex128)
    if a.ndim < 2 or a.shape[-1] != a.shape[-2]:
        raise ValueError(f"expected square matrices, got shape {a.shape}")
    batch_shape = a.shape[:-2]
    n = a.shape[-1]
    if not batch_shape and n <= _SCALAR_PATH_MAX:
        return _jacobi_single(a, rtol, max_sweeps)
    a = a.reshape((-1, n, n))
    a = 0.5 * (a + np.conj(np.swapaxes(a, -1, -2)))
    m = a.shape[0]
    v = np.broadcast_to(np.eye(n, dtype=np.complex128), (m, n, n)).copy()

    if n > 1 and m > 0:
        threshold = rtol * np.sqrt(np.sum(np.abs(a) ** 2, axis=(-2, -1)))
        sweeps = 0
        while True:
            off = _off_diagonal_mass(a)
            if np.all(off <= threshold):
                break
            if sweeps >= max_sweeps:
                worst = int(np.argmax(off - threshold))
                raise _not_converged(sweeps, float(off[worst]), float(threshold[worst]), n)
            for p in range(n - 1):
                for q in range(p + 1, n):
                    _rotate(a, v, p, q)
            sweeps += 1

    w = np.real(np.diagonal(a, axis1=-2, axis2=-1)).copy()
    order = np.argsort(w, axis=-1)
    w = np.take_along_axis(w, order, axis=-1)
    v = np.take_along_axis(v, order[:, None, :], axis=-1)
    return w.reshape(batch_shape + (n,)), v.reshape(batch_shape + (n, n))


def _rotate(a: np.ndarray, v: np.ndarray, p: int, q: int) -> None:
    apq = a[:, p, q]
    r = np.abs(apq)
    active = r > _NEGLIGIBLE
    safe_r = np.where(active, r, 1.0)
    phase = np.where(active, apq / safe_r, 1.0)
    # tan of the rotation angle, written without dividing by r
    d = a[:, q, q].real - a[:, p, p].real
    sign = np.where(d >= 0.0, 1.0, -1.0)
    t = 2.0 * safe_r * sign / (np.abs(d) + np.hypot(d, 2.0 * safe_r))
    t = np.where(active, t, 0.0)
    c = 1.0 / np.sqrt(1.0 + t * t)
    s = t * c
    sp = (s * phase)[:, None]
    spc = (s * np.conj(phase))[:, None]
    c = c[:, None]

    col_p = a[:, :, p].copy()
    col_q = a[:, :, q].copy()
    a[:, :, p] = c * col_p - spc * col_q
    a[:, :, q] = sp * col_p + c * col_q

    row_p = a[:, p, :].copy()
    row_q = a[:, q, :].copy()
    a[:, p, :] = c * row_p - sp * row_q
    a[:, q, :] = spc * row_p + c * row_q
    a[:, p, q] = 0.0
    a[:, q, p] = 0.0

    vp = v[:, :, p].copy()
    vq = v[:, :, q].copy()
    v[:, :, p] = c * vp - spc * vq
    v[:, :, q] = sp * vp + c * vq


def _not_converged(sweeps, off, threshold, n):
    return NumericError(
        f"Jacobi eigensolver did not converge in {sweeps} sweeps",
        {"sweeps": sweeps, "off_diagonal": off, "threshold": threshold, "dimension": n},
    )


def _jacobi_single(matrix: np.ndarray, rtol: float, max_sweeps: int):
    n = matrix.shape[0]
    a = [[0.5 * (complex(matrix[i, j]) + complex(matrix[j, i]).conjugate()) for j in range(n)]
         for i in range(n)]
    v = [[1.0 + 0j if i == j else 0j for j in range(n)] for i in range(n)]
    threshold = rtol * math.sqrt(sum(abs(x) ** 2 for row in a for x in row))
    sweeps = 0
    while True:
        off = math.sqrt(sum(abs(a[i][j]) ** 2 for i in range(n) for j in range(n) if i != j))
        if off <= threshold:
            break
        if sweeps >= max_sweeps:
            raise _not_converged(sweeps, off, threshold, n)
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p][q]
                r = abs(apq)
                if r <= _NEGLIGIBLE:
                    continue
                phase = apq / r
                d = a[q][q].real - a[p][p].real
                t = 2.0 * r * (1.0 if d >= 0.0 else -1.0) / (abs(d) + math.hypot(d, 2.0 * r))
                c = 1.0 / math.sqrt(1.0 + t * t)
                sp = t * c * phase
                spc = sp.conjugate()
                for row in a:
                    xp, xq = row[p], row[q]
                    row[p] = c * xp - spc * xq
                    row[q] = sp * xp + c * xq
                rp, rq = a[p], a[q]
                for k in range(n):
                    xp, xq = rp[k], rq[k]
                    rp[k] = c * xp - sp * xq
                    rq[k] = spc * xp + c * xq
                rp[q] = rq[p] = 0j
                for row in v:
                    xp, xq = row[p], row[q]
                    row[p] = c * xp - spc * xq
                    row[q] = sp * xp + c * xq
        sweeps += 1
    w = np.array([a[i][i].real for i in range(n)])
    vec = np.array(v, dtype=np.complex128).reshape(n, n)
    order = np.argsort(w)
    return w[order], vec[:, order]


def eigvalsh(matrix) -> np.ndarray:
    return jacobi_eigh(matrix)[0]
