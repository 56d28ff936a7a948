"""Vectorised versions of the spectral tests for stacks of elements.

A *stack* is a tuple with one array per algebra block, each of shape
``(..., n, n)``.  The functions here mirror ``op_norm``, ``is_positive`` and
``is_way_below`` element for element, but run one Jacobi pass per block.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .algebra import Element
from .linalg import jacobi_eigh
from .tolerance import Tolerance, resolve


def stack(elements: Sequence[Element]) -> tuple:
    algebra = elements[0].algebra
    return tuple(np.stack([e.blocks[k] for e in elements]) for k in range(len(algebra.blocks)))


def unstack(algebra, blocks: tuple, index) -> Element:
    return Element(algebra, [b[index] for b in blocks])


def adjoint(blocks: tuple) -> tuple:
    return tuple(np.conj(np.swapaxes(b, -1, -2)) for b in blocks)


def norms(blocks: tuple) -> np.ndarray:
    result = None
    for b in blocks:
        if b.shape[-1] == 1:
            value = np.abs(b[..., 0, 0])
        else:
            w, _ = jacobi_eigh(np.conj(np.swapaxes(b, -1, -2)) @ b)
            value = np.sqrt(np.maximum(w[..., -1], 0.0))
        result = value if result is None else np.maximum(result, value)
    return result


def min_eigenvalues(blocks: tuple) -> np.ndarray:
    """Least eigenvalue of the hermitian part, minimised over blocks."""
    result = None
    for b in blocks:
        h = 0.5 * (b + np.conj(np.swapaxes(b, -1, -2)))
        if b.shape[-1] == 1:
            value = h[..., 0, 0].real
        else:
            value = jacobi_eigh(h)[0][..., 0]
        result = value if result is None else np.minimum(result, value)
    return result


def hermitian(blocks: tuple, tol: Tolerance | None = None, scale: np.ndarray | None = None) -> np.ndarray:
    tol = resolve(tol)
    if scale is None:
        scale = norms(blocks)
    skew = tuple(b - a for b, a in zip(blocks, adjoint(blocks)))
    return norms(skew) <= tol.abs_tol + tol.rel_tol * scale


def positive(blocks: tuple, tol: Tolerance | None = None) -> np.ndarray:
    """Element-wise ``is_positive(...).holds``."""
    tol = resolve(tol)
    scale = norms(blocks)
    floor = -(tol.abs_tol + tol.rel_tol * scale)
    return hermitian(blocks, tol, scale) & (min_eigenvalues(blocks) >= floor)


def way_below(lower: tuple, upper: tuple, tol: Tolerance | None = None, *, strict: bool = False) -> np.ndarray:
    """Element-wise ``is_way_below(lower, upper)``.

    With ``strict`` the least eigenvalue of the gap need only be positive
    (no tolerance band); sequence probes use this form.
    """
    tol = resolve(tol)
    ok = hermitian(lower, tol) & hermitian(upper, tol)
    gap = tuple(u - l for l, u in zip(lower, upper))
    gap = tuple(0.5 * (g + a) for g, a in zip(gap, adjoint(gap)))
    ceiling = 0.0 if strict else tol.abs_tol + tol.rel_tol * norms(gap)
    return ok & (min_eigenvalues(gap) > ceiling)


def broadcast(element: Element, shape: tuple) -> tuple:
    return tuple(np.broadcast_to(b, shape + b.shape) for b in element.blocks)


# stack arithmetic: the campaign runs its sampled laws on whole stacks


def random(algebra, rng: np.random.Generator, count: int, scale: float = 1.0) -> tuple:
    """``count`` elements with independent standard Gaussian real and imaginary parts."""
    return tuple(scale * (rng.standard_normal((count, n, n)) + 1j * rng.standard_normal((count, n, n)))
                 for n in algebra.blocks)


def _column(s):
    s = np.asarray(s)
    return s[..., None, None] if s.ndim else s


def add(x: tuple, y: tuple) -> tuple:
    return tuple(a + b for a, b in zip(x, y))


def sub(x: tuple, y: tuple) -> tuple:
    return tuple(a - b for a, b in zip(x, y))


def mul(x: tuple, y: tuple) -> tuple:
    return tuple(a @ b for a, b in zip(x, y))


def scale(x: tuple, s) -> tuple:
    """Multiply every element by a scalar or by one scalar per element."""
    s = _column(s)
    return tuple(s * a for a in x)


def identity(algebra, count: int) -> tuple:
    return tuple(np.broadcast_to(np.eye(n, dtype=np.complex128), (count, n, n)).copy() for n in algebra.blocks)


def hermitian_parts(x: tuple) -> tuple:
    xs = adjoint(x)
    return scale(add(x, xs), 0.5), scale(sub(x, xs), 1 / 2j)


def random_hermitian(algebra, rng: np.random.Generator, count: int) -> tuple:
    return hermitian_parts(random(algebra, rng, count))[0]


def random_positive(algebra, rng: np.random.Generator, count: int) -> tuple:
    g = random(algebra, rng, count)
    return mul(adjoint(g), g)


def sqrt_positive(x: tuple) -> tuple:
    """Spectral square roots, negative rounding noise clamped to zero (no positivity check)."""
    out = []
    for b in x:
        h = 0.5 * (b + np.conj(np.swapaxes(b, -1, -2)))
        if b.shape[-1] == 1:
            out.append(np.sqrt(np.clip(h.real, 0.0, None)).astype(np.complex128))
            continue
        w, v = jacobi_eigh(h)
        root = np.sqrt(np.clip(w, 0.0, None))
        out.append((v * root[..., None, :]) @ np.conj(np.swapaxes(v, -1, -2)))
    return tuple(out)


def close(x: tuple, y: tuple, tol: Tolerance | None = None) -> np.ndarray:
    """Element-wise ``Element.close``."""
    tol = resolve(tol)
    return norms(sub(x, y)) <= tol.abs_tol + tol.rel_tol * np.maximum(norms(x), norms(y))


def leq(x: tuple, y: tuple, tol: Tolerance | None = None) -> np.ndarray:
    """Element-wise ``order.leq(x, y).holds``."""
    return positive(sub(y, x), tol)
