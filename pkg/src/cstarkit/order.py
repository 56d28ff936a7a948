"""Positive cone, operator order and positive square roots.

``a <= b`` means ``b - a`` is positive; ``a << b`` means ``b - a`` lies in the
interior of the positive cone *relative to the hermitian part*, which in the
block model is exactly the set of positive-definite elements.  All spectral
comparisons go through the tolerance policy: a verdict holds when the least
eigenvalue is at least ``-(abs_tol + rel_tol * ||a||)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from .algebra import AlgebraDescriptor, Element, element_to_json, hermitian_parts, is_hermitian, op_norm
from .errors import DomainError, NumericError, ShapeError
from . import batch
from .linalg import jacobi_eigh
from .tolerance import Tolerance, resolve


@dataclass(frozen=True)
class OrderVerdict:
    """Outcome of a positivity test.

    ``min_eigenvalue`` is NaN when the tested element is not hermitian; the
    witness is the spectral projection onto an eigenvector of the least
    eigenvalue, so ``witness * a * witness`` exhibits the violation.
    """

    holds: bool
    min_eigenvalue: float
    witness: Element | None = None
    reason: str = ""

    def __bool__(self):
        return self.holds

    def to_json(self) -> dict:
        return {
            "holds": self.holds,
            "min_eigenvalue": None if math.isnan(self.min_eigenvalue) else self.min_eigenvalue,
            "witness": None if self.witness is None else element_to_json(self.witness),
            "reason": self.reason,
        }


@dataclass(frozen=True)
class ConeReport:
    p1_nonzero: bool
    p2_conic: bool
    p3_pointed: bool
    normality_constant: float
    samples: int = 0
    violations: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.p1_nonzero and self.p2_conic and self.p3_pointed

    def to_json(self) -> dict:
        return {
            "p1_nonzero": self.p1_nonzero,
            "p2_conic": self.p2_conic,
            "p3_pointed": self.p3_pointed,
            "normality_constant": self.normality_constant,
            "samples": self.samples,
            "violations": list(self.violations),
        }


def _spectrum(h: Element):
    """Per-block eigen-decompositions of a hermitian element."""
    return [jacobi_eigh(block) for block in h.blocks]


def _least_eigen(h: Element):
    best = None
    for k, (w, v) in enumerate(_spectrum(h)):
        if best is None or w[0] < best[0]:
            best = (float(w[0]), k, v[:, 0])
    value, k, vec = best
    blocks = [np.zeros((n, n), dtype=np.complex128) for n in h.algebra.blocks]
    blocks[k] = np.outer(vec, vec.conj())
    return value, Element(h.algebra, blocks)


def is_positive(a: Element, tol: Tolerance | None = None) -> OrderVerdict:
    tol = resolve(tol)
    if not is_hermitian(a, tol):
        return OrderVerdict(False, math.nan, None, "not hermitian")
    herm = hermitian_parts(a)[0]
    value, projector = _least_eigen(herm)
    if value >= -tol.bound(op_norm(a)):
        return OrderVerdict(True, value)
    return OrderVerdict(False, value, projector, "negative spectrum")


def leq(a: Element, b: Element, tol: Tolerance | None = None) -> OrderVerdict:
    """``a <= b``, i.e. ``b - a`` is positive."""
    if a.algebra != b.algebra:
        raise ShapeError(f"cannot compare elements of {a.algebra.name} and {b.algebra.name}")
    tol = resolve(tol)
    for name, x in (("left", a), ("right", b)):
        if not is_hermitian(x, tol):
            return OrderVerdict(False, math.nan, None, f"{name} operand not hermitian")
    return is_positive(b - a, tol)


def sqrt_positive(a: Element, tol: Tolerance | None = None) -> Element:
    """The unique positive ``b`` with ``b * b = a``.

    Eigenvalues inside the tolerance band below zero are rounding noise of a
    positive input and are clamped to zero.
    """
    tol = resolve(tol)
    verdict = is_positive(a, tol)
    if not verdict.holds:
        raise DomainError(f"square root of a non-positive element ({verdict.reason})", verdict)
    herm = hermitian_parts(a)[0]
    blocks = []
    for w, v in _spectrum(herm):
        root = np.sqrt(np.clip(w, 0.0, None))
        blocks.append((v * root) @ v.conj().T)
    return Element(a.algebra, blocks)


def _require_commutative(algebra: AlgebraDescriptor, what: str):
    if not algebra.commutative:
        raise DomainError(f"{what} needs a commutative algebra, got {algebra.name}")


def commutative_product_root(a: Element, b: Element, tol: Tolerance | None = None) -> Element:
    """``(ab)^(1/2)``, checked against ``a^(1/2) b^(1/2)``."""
    if a.algebra != b.algebra:
        raise ShapeError(f"elements of {a.algebra.name} and {b.algebra.name}")
    _require_commutative(a.algebra, "commutative_product_root")
    tol = resolve(tol)
    root_a = sqrt_positive(a, tol)
    root_b = sqrt_positive(b, tol)
    product = a * b
    verdict = is_positive(product, tol)
    if not verdict.holds:
        raise NumericError("product of positives failed the positivity test", {"verdict": verdict.to_json()})
    root = sqrt_positive(product, tol)
    other = root_a * root_b
    if not root.close(other, Tolerance(tol.abs_tol, max(tol.rel_tol, 1e-8))):
        raise NumericError(
            "(ab)^(1/2) and a^(1/2) b^(1/2) disagree",
            {"difference": op_norm(root - other)},
        )
    return root


def norm_zero(x: Element, tol: Tolerance | None = None) -> Element:
    """A-valued modulus ``(a^2 + b^2)^(1/2)`` where ``x = a + ib``, a and b hermitian."""
    _require_commutative(x.algebra, "norm_zero")
    a, b = hermitian_parts(x)
    return sqrt_positive(a * a + b * b, tol)


def is_way_below(a: Element, b: Element, tol: Tolerance | None = None, *, strict: bool = False) -> bool:
    """``a << b``: ``b - a`` is positive definite beyond the tolerance band
    (or merely positive definite when ``strict``)."""
    if a.algebra != b.algebra:
        raise ShapeError(f"cannot compare elements of {a.algebra.name} and {b.algebra.name}")
    tol = resolve(tol)
    if not (is_hermitian(a, tol) and is_hermitian(b, tol)):
        return False
    gap = hermitian_parts(b - a)[0]
    value, _ = _least_eigen(gap)
    return value > (0.0 if strict else tol.bound(op_norm(gap)))


def interior_demo(algebra: AlgebraDescriptor, a: Element, epsilon: float,
                  tol: Tolerance | None = None) -> Element:
    """Perturb the first coordinate of a positive ``a`` by ``-i epsilon/2``.

    The result lies within ``epsilon`` of ``a`` but outside the positive cone,
    so no positive element is interior to the cone inside the full algebra.
    Non-positivity is certified at a resolution finer than the perturbation.
    """
    _require_commutative(algebra, "interior_demo")
    if a.algebra != algebra:
        raise ShapeError(f"element of {a.algebra.name} where {algebra.name} expected")
    if not epsilon > 0:
        raise ValueError("epsilon must be positive")
    tol = resolve(tol)
    if not is_positive(a, tol):
        raise DomainError("interior_demo needs a positive element", is_positive(a, tol))
    coords = a.coordinates()
    coords[0] -= 0.5j * epsilon
    b = algebra.diagonal(coords)
    distance = op_norm(a - b)
    if not math.isclose(distance, epsilon / 2, rel_tol=1e-12) or not distance < epsilon:
        raise NumericError("perturbation distance is not epsilon/2", {"distance": distance})
    fine = Tolerance(min(tol.abs_tol, epsilon / 8), min(tol.rel_tol, epsilon / 8))
    if is_positive(b, fine).holds:
        raise NumericError("perturbed element still classified positive", {"epsilon": epsilon})
    return b


# random generation


def random_positive(algebra: AlgebraDescriptor, rng: np.random.Generator, scale: float = 1.0) -> Element:
    """``g* g`` for a Gaussian-entry ``g``; every positive element has this form."""
    g = algebra.random(rng, scale)
    return g.star() * g


def random_hermitian(algebra: AlgebraDescriptor, rng: np.random.Generator, scale: float = 1.0) -> Element:
    return hermitian_parts(algebra.random(rng, scale))[0]


def random_ordered_pair(algebra: AlgebraDescriptor, rng: np.random.Generator) -> tuple:
    """Positive ``a <= b`` built as ``(a, a + h* h)``."""
    a = random_positive(algebra, rng)
    return a, a + random_positive(algebra, rng)


def normality_ratio(a: Element, b: Element) -> float:
    """``||a|| / ||b||`` for an ordered positive pair (0 when ``b`` is zero)."""
    nb = op_norm(b)
    return op_norm(a) / nb if nb > 0 else 0.0


def check_cone(algebra: AlgebraDescriptor, samples: int, seed: int,
               tol: Tolerance | None = None, pairs: Iterable | None = None) -> ConeReport:
    """Randomised check that the positive elements form a normal cone.

    ``normality_constant`` is the largest observed ``||a|| / ||b||`` over the
    ordered pairs ``0 <= a <= b``; for a C*-algebra it never exceeds 1.
    Explicit ``pairs`` replace the random ordered pairs.
    """
    if samples < 1:
        raise ValueError("samples must be at least 1")
    tol = resolve(tol)
    rng = np.random.default_rng(seed)
    violations = []

    # P1: the identity is a nonzero positive element
    unit = algebra.identity()
    p1 = is_positive(unit, tol).holds and op_norm(unit) > tol.abs_tol

    a = batch.random_positive(algebra, rng, samples)
    b = batch.random_positive(algebra, rng, samples)
    coeffs = rng.exponential(size=(samples, 2))
    conic = batch.positive(batch.add(batch.scale(a, coeffs[:, 0]), batch.scale(b, coeffs[:, 1])), tol)
    violations += [{"axiom": "P2", "sample": int(i)} for i in np.flatnonzero(~conic)]
    p2 = bool(conic.all())

    # P3: nothing nonzero lies in both P and -P
    h = batch.random_hermitian(algebra, rng, samples)
    pointed = np.ones(samples, dtype=bool)
    for x in (h, a, batch.scale(a, -1.0)):
        both = batch.positive(x, tol) & batch.positive(batch.scale(x, -1.0), tol) & (batch.norms(x) > tol.bound(0))
        pointed &= ~both
    violations += [{"axiom": "P3", "sample": int(i)} for i in np.flatnonzero(~pointed)]
    p3 = bool(pointed.all())

    if pairs is None:
        lo = batch.random_positive(algebra, rng, samples)
        hi = batch.add(lo, batch.random_positive(algebra, rng, samples))
    else:
        ordered = list(pairs)
        lo = batch.stack([p[0] for p in ordered]) if ordered else None
        hi = batch.stack([p[1] for p in ordered]) if ordered else None
    ratio = 0.0
    if lo is not None:
        valid = batch.positive(lo, tol) & batch.leq(lo, hi, tol)
        violations += [{"axiom": "ordered-pair", "sample": int(i)} for i in np.flatnonzero(~valid)]
        na, nb = batch.norms(lo), batch.norms(hi)
        ratios = np.divide(na, nb, out=np.zeros_like(na), where=nb > 0)
        broken = valid & (na > nb + tol.abs_tol + tol.rel_tol * nb)
        violations += [{"axiom": "normality", "sample": int(i), "ratio": float(ratios[i])}
                       for i in np.flatnonzero(broken)]
        if valid.any():
            ratio = float(ratios[valid].max())
    return ConeReport(p1, p2, p3, ratio, samples, violations)
