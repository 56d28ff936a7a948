"""Finite-dimensional C*-algebras as direct sums of full complex matrix blocks.

Every finite-dimensional C*-algebra is *-isomorphic to some
``M_{n1}(C) + ... + M_{nk}(C)``, so an :class:`AlgebraDescriptor` (the list of
block sizes) together with block-diagonal :class:`Element` values covers all
of them.  Elements are immutable; every operation returns a new value.
"""

from __future__ import annotations

import math
import numbers
import re
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import ShapeError
from .linalg import jacobi_eigh
from .tolerance import Tolerance, resolve


@dataclass(frozen=True)
class AlgebraDescriptor:
    """Block sizes ``(n1, ..., nk)`` of ``M_{n1}(C) + ... + M_{nk}(C)``."""

    blocks: tuple

    def __post_init__(self):
        blocks = tuple(int(n) for n in self.blocks)
        if not blocks or any(n < 1 for n in blocks):
            raise ValueError(f"block sizes must be positive and non-empty, got {self.blocks!r}")
        object.__setattr__(self, "blocks", blocks)

    @property
    def commutative(self) -> bool:
        return all(n == 1 for n in self.blocks)

    @property
    def unital(self) -> bool:
        return True

    @property
    def dim(self) -> int:
        """Complex dimension of the algebra."""
        return sum(n * n for n in self.blocks)

    @property
    def name(self) -> str:
        parts = []
        ones = 0
        for n in self.blocks:
            if n == 1:
                ones += 1
                continue
            if ones:
                parts.append(f"C{ones}")
                ones = 0
            parts.append(f"M{n}")
        if ones:
            parts.append(f"C{ones}")
        return "+".join(parts)

    @classmethod
    def parse(cls, text: str) -> "AlgebraDescriptor":
        """Parse names like ``"C2"``, ``"M3"`` or ``"C2+M2"``.

        ``Ck`` is the commutative algebra C^k (k blocks of size one) and
        ``Mn`` a single full matrix block.
        """
        blocks = []
        for token in text.replace(" ", "").split("+"):
            match = re.fullmatch(r"([CM])\^?(\d+)", token)
            if not match:
                raise ValueError(f"cannot parse algebra name {text!r}")
            kind, size = match.group(1), int(match.group(2))
            if size < 1:
                raise ValueError(f"cannot parse algebra name {text!r}")
            blocks.extend([1] * size if kind == "C" else [size])
        return cls(tuple(blocks))

    def __str__(self):
        return self.name

    # constructors

    def zero(self) -> "Element":
        return Element(self, [np.zeros((n, n), dtype=np.complex128) for n in self.blocks])

    def identity(self) -> "Element":
        return Element(self, [np.eye(n, dtype=np.complex128) for n in self.blocks])

    def scalar(self, value: complex) -> "Element":
        return complex(value) * self.identity()

    def element(self, blocks: Sequence) -> "Element":
        return Element(self, blocks)

    def diagonal(self, values: Iterable[complex]) -> "Element":
        """Element of a commutative algebra from its coordinates."""
        values = [complex(v) for v in values]
        if not self.commutative or len(values) != len(self.blocks):
            raise ShapeError(f"{len(values)} coordinates do not describe an element of {self.name}")
        return Element(self, [np.array([[v]]) for v in values])

    def random(self, rng: np.random.Generator, scale: float = 1.0) -> "Element":
        """Element with independent standard Gaussian real and imaginary parts."""
        return Element(
            self,
            [scale * (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n)))
             for n in self.blocks],
        )

    # serialisation

    def to_json(self) -> dict:
        return {"blocks": list(self.blocks)}

    @classmethod
    def from_json(cls, obj) -> "AlgebraDescriptor":
        if isinstance(obj, str):
            return cls.parse(obj)
        return cls(tuple(obj["blocks"]))


class Element:
    """A block-diagonal complex matrix in a fixed :class:`AlgebraDescriptor`.

    ``x * y`` is the algebra product when both are elements and scalar
    multiplication when one side is a number.  ``x.star()`` is the involution.
    """

    __slots__ = ("algebra", "blocks")

    def __init__(self, algebra: AlgebraDescriptor, blocks: Sequence):
        if len(blocks) != len(algebra.blocks):
            raise ShapeError(f"{len(blocks)} blocks given for algebra {algebra.name}")
        arrays = []
        for n, block in zip(algebra.blocks, blocks):
            arr = np.array(block, dtype=np.complex128)
            if arr.shape != (n, n):
                raise ShapeError(f"block of shape {arr.shape} where ({n}, {n}) expected")
            if not np.all(np.isfinite(arr)):
                raise ValueError("element entries must be finite")
            arr.setflags(write=False)
            arrays.append(arr)
        object.__setattr__(self, "algebra", algebra)
        object.__setattr__(self, "blocks", tuple(arrays))

    @classmethod
    def _wrap(cls, algebra: AlgebraDescriptor, arrays: list) -> "Element":
        """Element from blocks produced by arithmetic on valid blocks: shapes
        and dtype are known, so only finiteness (overflow) is checked."""
        self = object.__new__(cls)
        for arr in arrays:
            if not np.isfinite(arr).all():
                raise ValueError("element entries must be finite")
            arr.setflags(write=False)
        object.__setattr__(self, "algebra", algebra)
        object.__setattr__(self, "blocks", tuple(arrays))
        return self

    def __setattr__(self, name, value):
        raise AttributeError("Element is immutable")

    def __repr__(self):
        if self.algebra.commutative:
            return f"Element({self.algebra.name}, {[complex(b[0, 0]) for b in self.blocks]})"
        return f"Element({self.algebra.name}, {[b.tolist() for b in self.blocks]})"

    def _check(self, other: "Element"):
        if not isinstance(other, Element):
            return NotImplemented
        if other.algebra != self.algebra:
            raise ShapeError(f"elements of {self.algebra.name} and {other.algebra.name} do not combine")
        return None

    def __add__(self, other):
        if self._check(other) is NotImplemented:
            return NotImplemented
        return Element._wrap(self.algebra, [a + b for a, b in zip(self.blocks, other.blocks)])

    def __sub__(self, other):
        if self._check(other) is NotImplemented:
            return NotImplemented
        return Element._wrap(self.algebra, [a - b for a, b in zip(self.blocks, other.blocks)])

    def __neg__(self):
        return Element._wrap(self.algebra, [-a for a in self.blocks])

    def __mul__(self, other):
        if isinstance(other, numbers.Number):
            return Element._wrap(self.algebra, [complex(other) * a for a in self.blocks])
        if self._check(other) is NotImplemented:
            return NotImplemented
        return Element._wrap(self.algebra, [a @ b for a, b in zip(self.blocks, other.blocks)])

    def __rmul__(self, other):
        if isinstance(other, numbers.Number):
            return Element._wrap(self.algebra, [complex(other) * a for a in self.blocks])
        return NotImplemented

    def __truediv__(self, other):
        if isinstance(other, numbers.Number):
            return Element._wrap(self.algebra, [a / complex(other) for a in self.blocks])
        return NotImplemented

    def star(self) -> "Element":
        return Element._wrap(self.algebra, [a.conj().T for a in self.blocks])

    def norm(self) -> float:
        return op_norm(self)

    def close(self, other: "Element", tol: Tolerance | None = None) -> bool:
        """``||x - y|| <= abs_tol + rel_tol * max(||x||, ||y||)``."""
        self._check(other)
        tol = resolve(tol)
        return op_norm(self - other) <= tol.bound(max(op_norm(self), op_norm(other)))

    def coordinates(self) -> list:
        """Coordinates of an element of a commutative algebra."""
        if not self.algebra.commutative:
            raise ShapeError(f"{self.algebra.name} is not commutative")
        return [complex(b[0, 0]) for b in self.blocks]

    def to_json(self) -> dict:
        return element_to_json(self)


def element_to_json(x: Element) -> dict:
    return {
        "blocks": list(x.algebra.blocks),
        "data": [
            [[[float(z.real), float(z.imag)] for z in row] for row in block]
            for block in x.blocks
        ],
    }


def element_from_json(obj: dict, algebra: AlgebraDescriptor | None = None) -> Element:
    descriptor = AlgebraDescriptor(tuple(obj["blocks"]))
    if algebra is not None and descriptor != algebra:
        raise ShapeError(f"element of {descriptor.name} where {algebra.name} expected")
    blocks = []
    for block in obj["data"]:
        blocks.append([[complex(re_, im_) for re_, im_ in row] for row in block])
    return Element(descriptor, blocks)


# named operations


def elem_add(x: Element, y: Element) -> Element:
    return x + y


def elem_mul(x: Element, y: Element) -> Element:
    return x * y


def involution(x: Element) -> Element:
    return x.star()


def _block_norm(block: np.ndarray) -> float:
    if block.shape[0] == 1:
        return abs(complex(block[0, 0]))
    w, _ = jacobi_eigh(block.conj().T @ block)
    return math.sqrt(max(float(w[-1]), 0.0))


def op_norm(x: Element) -> float:
    """C*-norm: the largest block operator norm ``sqrt(lambda_max(x* x))``."""
    return max(_block_norm(b) for b in x.blocks)


def op_norms(elements: Sequence[Element]) -> np.ndarray:
    """Operator norms of many elements of one algebra, one Jacobi pass per block."""
    from . import batch

    if not elements:
        return np.zeros(0)
    return batch.norms(batch.stack(elements))


def hermitian_parts(x: Element) -> tuple:
    """The unique hermitian ``(a, b)`` with ``x = a + i b``."""
    xs = x.star()
    return (x + xs) * 0.5, (x - xs) * (1 / 2j)


def is_hermitian(x: Element, tol: Tolerance | None = None) -> bool:
    tol = resolve(tol)
    return op_norm(x - x.star()) <= tol.bound(op_norm(x))


@dataclass(frozen=True)
class UnitizedElement:
    """A pair ``(a, alpha)`` in the unitization of ``A``."""

    a: Element
    alpha: complex = 0j

    def __post_init__(self):
        object.__setattr__(self, "alpha", complex(self.alpha))

    @classmethod
    def embed(cls, a: Element) -> "UnitizedElement":
        return cls(a, 0j)

    @classmethod
    def unit(cls, algebra: AlgebraDescriptor) -> "UnitizedElement":
        return cls(algebra.zero(), 1 + 0j)

    def __add__(self, other: "UnitizedElement") -> "UnitizedElement":
        return UnitizedElement(self.a + other.a, self.alpha + other.alpha)

    def __sub__(self, other: "UnitizedElement") -> "UnitizedElement":
        return UnitizedElement(self.a - other.a, self.alpha - other.alpha)

    def __mul__(self, other):
        if isinstance(other, numbers.Number):
            return UnitizedElement(self.a * other, self.alpha * complex(other))
        return unitize_mul(self, other)

    def star(self) -> "UnitizedElement":
        return UnitizedElement(self.a.star(), self.alpha.conjugate())

    def as_direct_sum(self) -> Element:
        """Image under the *-isomorphism ``(a, alpha) -> (a + alpha I) + alpha``.

        ``A`` is unital here, so its unitization is ``A + C`` as a C*-algebra;
        the image lives in the descriptor with one extra size-one block.
        """
        algebra = AlgebraDescriptor(self.a.algebra.blocks + (1,))
        shifted = self.a + self.a.algebra.scalar(self.alpha)
        return Element(algebra, list(shifted.blocks) + [np.array([[self.alpha]])])

    def norm(self) -> float:
        return op_norm(self.as_direct_sum())

    def close(self, other: "UnitizedElement", tol: Tolerance | None = None) -> bool:
        return self.as_direct_sum().close(other.as_direct_sum(), tol)


def unitize_mul(p: UnitizedElement, q: UnitizedElement) -> UnitizedElement:
    """``(a, alpha)(b, beta) = (ab + beta a + alpha b, alpha beta)``."""
    if p.a.algebra != q.a.algebra:
        raise ShapeError(f"unitized elements over {p.a.algebra.name} and {q.a.algebra.name}")
    a, alpha = p.a, p.alpha
    b, beta = q.a, q.alpha
    return UnitizedElement(a * b + beta * a + alpha * b, alpha * beta)
