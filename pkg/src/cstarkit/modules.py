"""The standard inner-product C*-module ``A^n``.

Vectors are n-tuples of algebra elements with the right action
``(x a)_i = x_i a`` and the inner product ``<x, y> = sum_i x_i* y_i``.  The
scalar norm is ``||x||_m = ||<x, x>||^(1/2)``; over a commutative algebra
there is also the A-valued norm ``<x, x>^(1/2)``.
"""

from __future__ import annotations

import math
import numbers
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from . import batch
from .algebra import AlgebraDescriptor, Element, element_from_json, element_to_json, op_norm
from .completion import CompletedSpace, CompletionPoint
from .errors import DomainError, InputError, ShapeError
from .metric import DEFAULT_GRID, MetricSpace, PointSequence, converges_norm, tail_samples, horizon
from .order import OrderVerdict, is_positive, leq, norm_zero, sqrt_positive
from .tolerance import Tolerance, resolve


@dataclass(frozen=True)
class ModuleSpace:
    """``A^rank`` as a right A-module with ``<x, y> = sum x_i* y_i``."""

    algebra: AlgebraDescriptor
    rank: int

    def __post_init__(self):
        if self.rank < 1:
            raise ValueError("rank must be at least 1")

    @property
    def name(self) -> str:
        return f"({self.algebra.name})^{self.rank}"

    def vector(self, coords: Sequence) -> "ModuleVector":
        return ModuleVector(self, coords)

    def zero(self) -> "ModuleVector":
        return ModuleVector(self, [self.algebra.zero()] * self.rank)

    def basis(self, i: int) -> "ModuleVector":
        """``e_i``: the identity in slot ``i`` and zero elsewhere."""
        coords = [self.algebra.zero()] * self.rank
        coords[i] = self.algebra.identity()
        return ModuleVector(self, coords)

    def random(self, rng: np.random.Generator, scale: float = 1.0) -> "ModuleVector":
        return ModuleVector(self, [self.algebra.random(rng, scale) for _ in range(self.rank)])

    def random_invertible(self, rng: np.random.Generator, floor: float = 0.1) -> "ModuleVector":
        """Commutative algebras only: every coordinate entry has modulus in ``[floor, 1 + floor]``."""
        if not self.algebra.commutative:
            raise DomainError(f"{self.algebra.name} is not commutative")
        k = len(self.algebra.blocks)
        coords = []
        for _ in range(self.rank):
            radius = floor + rng.random(k)
            phase = np.exp(2j * np.pi * rng.random(k))
            coords.append(self.algebra.diagonal(radius * phase))
        return ModuleVector(self, coords)

    def to_json(self) -> dict:
        return {"algebra": self.algebra.to_json(), "rank": self.rank}


class ModuleVector:
    """An element ``(x_1, ..., x_n)`` of ``A^n``.

    ``x * a`` is the right action when ``a`` is an Element and scalar
    multiplication when ``a`` is a number.
    """

    __slots__ = ("space", "coords")

    def __init__(self, space: ModuleSpace, coords: Sequence[Element]):
        coords = tuple(coords)
        if len(coords) != space.rank:
            raise ShapeError(f"{len(coords)} coordinates for a module of rank {space.rank}")
        for c in coords:
            if not isinstance(c, Element) or c.algebra != space.algebra:
                raise ShapeError(f"coordinate is not an element of {space.algebra.name}")
        object.__setattr__(self, "space", space)
        object.__setattr__(self, "coords", coords)

    def __setattr__(self, name, value):
        raise AttributeError("ModuleVector is immutable")

    def __repr__(self):
        return f"ModuleVector({self.space.name}, {list(self.coords)})"

    def _check(self, other):
        if not isinstance(other, ModuleVector):
            return NotImplemented
        if other.space != self.space:
            raise ShapeError(f"vectors of {self.space.name} and {other.space.name} do not combine")
        return None

    def __add__(self, other):
        if self._check(other) is NotImplemented:
            return NotImplemented
        return ModuleVector(self.space, [a + b for a, b in zip(self.coords, other.coords)])

    def __sub__(self, other):
        if self._check(other) is NotImplemented:
            return NotImplemented
        return ModuleVector(self.space, [a - b for a, b in zip(self.coords, other.coords)])

    def __neg__(self):
        return ModuleVector(self.space, [-a for a in self.coords])

    def __mul__(self, other):
        if isinstance(other, numbers.Number):
            return ModuleVector(self.space, [complex(other) * a for a in self.coords])
        if isinstance(other, Element):
            return self.act(other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, numbers.Number):
            return self * other
        return NotImplemented

    def act(self, a: Element) -> "ModuleVector":
        """Right action ``x a``."""
        if a.algebra != self.space.algebra:
            raise ShapeError(f"cannot act by an element of {a.algebra.name} on {self.space.name}")
        return ModuleVector(self.space, [x * a for x in self.coords])

    def to_json(self) -> dict:
        return {"rank": self.space.rank, "coords": [element_to_json(c) for c in self.coords]}

    @classmethod
    def from_json(cls, obj: dict, algebra: AlgebraDescriptor | None = None) -> "ModuleVector":
        coords = [element_from_json(c, algebra) for c in obj["coords"]]
        if not coords:
            raise InputError("module vectors need at least one coordinate")
        if len(coords) != obj["rank"]:
            raise InputError(f"rank {obj['rank']} but {len(coords)} coordinates")
        return cls(ModuleSpace(coords[0].algebra, len(coords)), coords)


def inner(x: ModuleVector, y: ModuleVector) -> Element:
    """``<x, y> = sum_i x_i* y_i``: conjugate-linear in ``x``, A-linear on the right in ``y``."""
    if x.space != y.space:
        raise ShapeError(f"inner product of vectors in {x.space.name} and {y.space.name}")
    total = x.space.algebra.zero()
    for a, b in zip(x.coords, y.coords):
        total = total + a.star() * b
    return total


def norm_m(x: ModuleVector) -> float:
    """Scalar norm ``||<x, x>||^(1/2)``."""
    return math.sqrt(op_norm(inner(x, x)))


def norm_avalued(x: ModuleVector, tol: Tolerance | None = None) -> Element:
    """A-valued norm ``<x, x>^(1/2)``; needs a commutative algebra."""
    if not x.space.algebra.commutative:
        raise DomainError(f"the A-valued norm needs a commutative algebra, got {x.space.algebra.name}")
    return sqrt_positive(inner(x, x), tol)


def stack_vectors(vectors: Sequence[ModuleVector]) -> tuple:
    """Coordinates of many vectors as one batch stack per coordinate."""
    return tuple(batch.stack([v.coords[i] for v in vectors]) for i in range(vectors[0].space.rank))


def inner_stack(xs: tuple, ys: tuple) -> tuple:
    """Element-wise ``inner`` on stacked vectors."""
    total = None
    for a, b in zip(xs, ys):
        term = batch.mul(batch.adjoint(a), b)
        total = term if total is None else batch.add(total, term)
    return total


def norm_m_stack(xs: tuple) -> np.ndarray:
    return np.sqrt(batch.norms(inner_stack(xs, xs)))


# module axioms


@dataclass
class ModuleReport:
    axioms: dict = field(default_factory=dict)
    witnesses: list = field(default_factory=list)
    samples: int = 0

    @property
    def passed(self) -> bool:
        return all(self.axioms.values())

    def to_json(self) -> dict:
        return {"passed": self.passed, "samples": self.samples, "axioms": dict(self.axioms),
                "witnesses": list(self.witnesses)}


MODULE_AXIOMS = ("linearity", "right-linearity", "hermitian-symmetry", "positivity", "definiteness",
                 "compatibility")


def _complex_scalar(rng: np.random.Generator) -> complex:
    re_, im = rng.standard_normal(2)
    return complex(re_, im)


def check_module_axioms(space: ModuleSpace, samples: int, seed: int,
                        tol: Tolerance | None = None) -> ModuleReport:
    """Randomised check of the five inner-product axioms and scalar compatibility.

    For sampled ``x, y, z``, ``a`` and scalars ``alpha, beta``:
    ``<x, alpha y + beta z> = alpha <x,y> + beta <x,z>``, ``<x, y a> = <x, y> a``,
    ``<y, x> = <x, y>*``, ``<x, x> >= 0``, ``<x, x> = 0`` only for ``x = 0``,
    and ``alpha (x a) = (alpha x) a = x (alpha a)``.
    """
    tol = resolve(tol)
    rng = np.random.default_rng(seed)
    axioms = {name: True for name in MODULE_AXIOMS}
    report = ModuleReport(axioms=axioms, samples=samples)

    def fail(name, k, detail=""):
        if axioms[name]:
            report.witnesses.append({"axiom": name, "sample": k, "detail": detail})
        axioms[name] = False

    zero_ok = op_norm(inner(space.zero(), space.zero())) <= tol.abs_tol
    if samples and not zero_ok:
        fail("definiteness", -1, "<0, 0> != 0")
    for k in range(samples):
        x, y, z = space.random(rng), space.random(rng), space.random(rng)
        a = space.algebra.random(rng)
        alpha, beta = _complex_scalar(rng), _complex_scalar(rng)
        if not inner(x, y * alpha + z * beta).close(inner(x, y) * alpha + inner(x, z) * beta, tol):
            fail("linearity", k)
        if not inner(x, y.act(a)).close(inner(x, y) * a, tol):
            fail("right-linearity", k)
        if not inner(y, x).close(inner(x, y).star(), tol):
            fail("hermitian-symmetry", k)
        xx = inner(x, x)
        if not is_positive(xx, tol).holds:
            fail("positivity", k)
        if op_norm(xx) <= tol.bound(0.0):
            fail("definiteness", k, "<x, x> = 0 for a nonzero sample")
        lhs = (x.act(a)) * alpha
        mid = (x * alpha).act(a)
        rhs = x.act(a * alpha)
        if not all(p.close(q, tol) and q.close(r, tol)
                   for p, q, r in zip(lhs.coords, mid.coords, rhs.coords)):
            fail("compatibility", k)
    return report


# Cauchy-Schwarz


@dataclass
class CauchySchwarzVerdict:
    """Both forms of the A-valued inequality for one pair.

    ``in_hypothesis`` records whether every nonzero value among
    ``<x,y>, <x,x>, <y,y>`` is invertible.
    """

    holds: bool
    product_form: OrderVerdict
    root_form: OrderVerdict
    in_hypothesis: bool

    def to_json(self) -> dict:
        return {"holds": self.holds, "in_hypothesis": self.in_hypothesis,
                "product_form": self.product_form.to_json(), "root_form": self.root_form.to_json()}


def _zero_or_invertible(a: Element, tol: Tolerance) -> bool:
    moduli = [abs(c) for c in a.coordinates()]
    return max(moduli) <= tol.abs_tol or min(moduli) > tol.abs_tol


def cauchy_schwarz_avalued(x: ModuleVector, y: ModuleVector, tol: Tolerance | None = None) -> CauchySchwarzVerdict:
    """``<x,y><y,x> <= <x,x><y,y>`` and ``||<x,y>||_0 <= <x,x>^(1/2) <y,y>^(1/2)``."""
    if not x.space.algebra.commutative:
        raise DomainError(f"A-valued Cauchy-Schwarz needs a commutative algebra, got {x.space.algebra.name}")
    tol = resolve(tol)
    xy, yx = inner(x, y), inner(y, x)
    xx, yy = inner(x, x), inner(y, y)
    product = leq(xy * yx, xx * yy, tol)
    root = leq(norm_zero(xy, tol), sqrt_positive(xx, tol) * sqrt_positive(yy, tol), tol)
    hypothesis = all(_zero_or_invertible(v, tol) for v in (xy, xx, yy))
    return CauchySchwarzVerdict(product.holds and root.holds, product, root, hypothesis)


@dataclass(frozen=True)
class ScalarVerdict:
    holds: bool
    lhs: float
    rhs: float

    def to_json(self) -> dict:
        return {"holds": self.holds, "lhs": self.lhs, "rhs": self.rhs}


def cauchy_schwarz_scalar(x: ModuleVector, y: ModuleVector, tol: Tolerance | None = None) -> ScalarVerdict:
    """``||<y, x>|| <= ||<x, x>||^(1/2) ||<y, y>||^(1/2)`` over any algebra."""
    tol = resolve(tol)
    lhs = op_norm(inner(y, x))
    rhs = math.sqrt(op_norm(inner(x, x))) * math.sqrt(op_norm(inner(y, y)))
    return ScalarVerdict(lhs <= rhs + tol.bound(rhs), lhs, rhs)


# metrics on the module


def module_metric(space: ModuleSpace) -> MetricSpace:
    """``d(x, y) = ||x - y||_m`` as a ``C^1``-valued metric."""
    scalar = AlgebraDescriptor((1,))
    return MetricSpace(scalar, lambda x, y: scalar.diagonal([norm_m(x - y)]), None,
                       name=f"{space.name} with ||.||_m",
                       contains=lambda x: isinstance(x, ModuleVector) and x.space == space)


def avalued_metric(space: ModuleSpace, tol: Tolerance | None = None) -> MetricSpace:
    """``d(x, y) = <x - y, x - y>^(1/2)`` in ``A`` (commutative algebras only)."""
    if not space.algebra.commutative:
        raise DomainError(f"the A-valued norm needs a commutative algebra, got {space.algebra.name}")
    return MetricSpace(space.algebra, lambda x, y: norm_avalued(x - y, tol), None,
                       name=f"{space.name} with <.,.>^(1/2)",
                       contains=lambda x: isinstance(x, ModuleVector) and x.space == space)


def bridge_gap(x: ModuleVector, tol: Tolerance | None = None) -> float:
    """``| ||norm_avalued(x)|| - norm_m(x) |``; zero in exact arithmetic."""
    return abs(op_norm(norm_avalued(x, tol)) - norm_m(x))


@dataclass
class EquivalenceReport:
    bridge_max_gap: float
    bridge_passed: bool
    sequences: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.bridge_passed and all(s["agree"] for s in self.sequences)

    def to_json(self) -> dict:
        return {"passed": self.passed, "bridge_max_gap": self.bridge_max_gap,
                "bridge_passed": self.bridge_passed, "sequences": list(self.sequences)}


def completeness_equiv(space: ModuleSpace, test_sequences: Sequence[tuple], grid: Sequence[float] = DEFAULT_GRID,
                       depth: int = 1000, samples: Sequence[ModuleVector] = (),
                       tol: Tolerance | None = None) -> EquivalenceReport:
    """Verdict agreement between ``||.||_m`` and the A-valued norm's metric.

    ``test_sequences`` holds ``(at, target, name)`` triples; each sequence is
    probed for convergence to ``target`` and for Cauchyness in both metrics
    and the per-probe outcomes are compared.  ``samples`` feed the bridge
    identity ``|| <x,x>^(1/2) || = ||x||_m``.
    """
    tol = resolve(tol)
    m_space, a_space = module_metric(space), avalued_metric(space, tol)
    gaps = [bridge_gap(x, tol) for x in samples]
    worst = max(gaps, default=0.0)
    bridge_ok = all(g <= tol.bound(norm_m(x)) for g, x in zip(gaps, samples))
    report = EquivalenceReport(worst, bridge_ok)
    for at, target, name in test_sequences:
        vm = converges_norm(PointSequence(m_space, at, name=name), target, grid, depth, tol)
        va = converges_norm(PointSequence(a_space, at, name=name), target, grid, depth, tol)
        agree = (vm.probes_satisfied() == va.probes_satisfied()
                 and vm.probes_satisfied("cauchy") == va.probes_satisfied("cauchy"))
        report.sequences.append({"sequence": name, "agree": agree,
                                 "norm_m": vm.to_json(), "a_valued": va.to_json()})
    return report


# continuity of the inner product


@dataclass
class ContinuityReport:
    passed: bool
    probe_log: list
    chain_violations: list

    def to_json(self) -> dict:
        return {"passed": self.passed, "probe_log": list(self.probe_log),
                "chain_violations": list(self.chain_violations)}


def inner_continuity(xseq: Callable[[int], ModuleVector], yseq: Callable[[int], ModuleVector],
                     x: ModuleVector, y: ModuleVector, grid: Sequence[float] = DEFAULT_GRID,
                     depth: int = 1000, tol: Tolerance | None = None) -> ContinuityReport:
    """``<x_n, y_n> -> <x, y>`` checked against the chain bound
    ``||x_n||_m ||y_n - y||_m + ||x_n - x||_m ||y||_m``.

    Premises ``x_n -> x`` and ``y_n -> y`` are probed in ``||.||_m`` first;
    failure is an input error.  For each ``eps`` the report gives the least
    sampled ``N`` from which the chain bound is below ``eps``, and the
    largest observed ``||<x_n, y_n> - <x, y>||`` on that tail.
    """
    tol = resolve(tol)
    metric = module_metric(x.space)
    for seq, target, label in ((xseq, x, "x"), (yseq, y, "y")):
        verdict = converges_norm(PointSequence(metric, seq), target, grid, depth, tol, with_cauchy=False)
        if not verdict.converges:
            raise InputError(f"premise sequence {label}_n does not converge on the grid", witness=label)
    indices = tail_samples(depth)
    count = len(indices)
    xs = stack_vectors([xseq(n) for n in indices])
    ys = stack_vectors([yseq(n) for n in indices])
    x_gap = tuple(batch.sub(c, batch.broadcast(e, (count,))) for c, e in zip(xs, x.coords))
    y_gap = tuple(batch.sub(c, batch.broadcast(e, (count,))) for c, e in zip(ys, y.coords))
    actual = batch.norms(batch.sub(inner_stack(xs, ys), batch.broadcast(inner(x, y), (count,))))
    bound = norm_m_stack(xs) * norm_m_stack(y_gap) + norm_m_stack(x_gap) * norm_m(y)
    violations = [{"n": indices[k], "actual": float(actual[k]), "bound": float(bound[k])}
                  for k in np.flatnonzero(actual > bound + tol.abs_tol + tol.rel_tol * bound)]
    log = []
    ok = not violations
    for eps in grid:
        failing = np.flatnonzero(~(bound < eps))
        start = 0 if len(failing) == 0 else failing[-1] + 1
        if start >= len(indices) or indices[start] > horizon(depth):
            log.append({"eps": eps, "N": None, "max_observed": float(actual[-1])})
            ok = False
            continue
        tail = actual[start:]
        hit = bool(np.all(tail < eps))
        ok = ok and hit
        log.append({"eps": eps, "N": indices[start], "max_observed": float(tail.max()), "satisfied": hit})
    return ContinuityReport(ok, log, violations)


# completion of a module


def decimal_round(x: ModuleVector, digits: int) -> ModuleVector:
    """Entries rounded to ``digits`` decimals: a point of the decimal-rational submodule."""
    return ModuleVector(x.space, [Element(c.algebra, [np.round(b, digits) for b in c.blocks])
                                  for c in x.coords])


def rounding_modulus(space: ModuleSpace) -> Callable[[float], int]:
    """Modulus for ``decimal_round(x, n)``.

    Each entry moves by at most ``sqrt(2)/2 * 10^-n`` (plus float rounding),
    so ``||x_n - x_m||_m`` is below ``sqrt(2 * entries) * 10^-min(n, m)``.
    """
    entries = space.rank * space.algebra.dim
    lipschitz = math.sqrt(2.0 * entries)

    def modulus(eps):
        n = max(1, math.ceil(math.log10(lipschitz / eps)))
        return n + 1

    return modulus


class CompletedModule:
    """Completion of a submodule of ``A^n`` under ``||.||_m`` with the inner
    product and right action extended by limits."""

    def __init__(self, space: ModuleSpace, name: str = ""):
        self.space = space
        self.base = module_metric(space)
        self.completed = CompletedSpace(self.base, name or f"completion({space.name})")

    def embed(self, x: ModuleVector) -> CompletionPoint:
        return self.completed.embed(x)

    def point(self, at, modulus, name: str = "") -> CompletionPoint:
        return self.completed.point(at, modulus, name)

    def approximate(self, x: ModuleVector, name: str = "") -> CompletionPoint:
        """The decimal-rounding representative of ``x``."""
        return self.point(lambda n: decimal_round(x, n), rounding_modulus(self.space), name)

    def inner_s(self, p: CompletionPoint, q: CompletionPoint, epsilon: float) -> Element:
        """``<p_N, q_N>`` within ``eps`` of ``lim <p_n, q_n>``.

        With ``M`` bounding the tails' norms, ``||<p_n,q_n> - <p,q>|| <=
        M ||q_n - q||_m + ||p_n - p||_m M``, so both tails are taken at
        ``eps / (2 (M_p + M_q))``.
        """
        if not epsilon > 0:
            raise ValueError("epsilon must be positive")
        mp = norm_m(p.approximant(1.0)) + 1.0
        mq = norm_m(q.approximant(1.0)) + 1.0
        delta = epsilon / (2.0 * (mp + mq))
        n = max(p.modulus(delta), q.modulus(delta), p.modulus(1.0), q.modulus(1.0))
        return inner(p.at(n), q.at(n))

    def act_s(self, p: CompletionPoint, a: Element) -> CompletionPoint:
        """``p a = lim p_n a``, Cauchy because ``||u a||_m <= ||u||_m ||a||``."""
        size = op_norm(a)

        def modulus(eps):
            return 1 if size == 0 else p.modulus(eps / size)

        return self.point(lambda n: p.at(n).act(a), modulus, name=f"({p.name})a")

    def norm_m_s(self, p: CompletionPoint, epsilon: float) -> float:
        return norm_m(p.approximant(epsilon))


@dataclass
class ModuleCompletionReport:
    action_bound: bool
    inner_bound: bool
    limit_matches: list
    identity_on_complete: bool
    samples: int
    witnesses: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return (self.action_bound and self.inner_bound and self.identity_on_complete
                and all(ok for _, ok in self.limit_matches))

    def to_json(self) -> dict:
        return {"passed": self.passed, "action_bound": self.action_bound, "inner_bound": self.inner_bound,
                "identity_on_complete": self.identity_on_complete, "samples": self.samples,
                "limit_matches": [{"eps": eps, "ok": ok} for eps, ok in self.limit_matches],
                "witnesses": list(self.witnesses)}


def complete_module(space: ModuleSpace, samples: int, seed: int, grid: Sequence[float] = DEFAULT_GRID,
                    limit_pairs: int = 20, tol: Tolerance | None = None) -> ModuleCompletionReport:
    """Complete the decimal-rational submodule of ``A^n`` and check well-posedness.

    Checks ``||u a||_m <= ||u||_m ||a||`` and ``||<u, v>|| <= ||u||_m ||v||_m``
    on sampled submodule vectors, that embedded points keep their inner
    products exactly, and that the extended inner product of limit points
    matches the direct value within ``2 eps`` at every grid resolution.
    """
    tol = resolve(tol)
    rng = np.random.default_rng(seed)
    module = CompletedModule(space)
    report = ModuleCompletionReport(True, True, [], True, samples)
    for k in range(samples):
        digits = int(rng.integers(1, 8))
        u = decimal_round(space.random(rng), digits)
        v = decimal_round(space.random(rng), digits)
        a = space.algebra.random(rng)
        nu, nv = norm_m(u), norm_m(v)
        rhs = nu * op_norm(a)
        if norm_m(u.act(a)) > rhs + tol.bound(rhs):
            if report.action_bound:
                report.witnesses.append({"check": "action-bound", "sample": k})
            report.action_bound = False
        rhs = nu * nv
        if op_norm(inner(u, v)) > rhs + tol.bound(rhs):
            if report.inner_bound:
                report.witnesses.append({"check": "inner-bound", "sample": k})
            report.inner_bound = False
        if k < limit_pairs:
            p, q = module.embed(u), module.embed(v)
            if not (module.inner_s(p, q, 1e-3) - inner(u, v)).norm() == 0.0:
                report.identity_on_complete = False
    pairs = [(space.random(rng), space.random(rng)) for _ in range(limit_pairs)]
    points = [(module.approximate(x), module.approximate(y)) for x, y in pairs]
    for eps in grid:
        ok = True
        for (x, y), (p, q) in zip(pairs, points):
            gap = op_norm(module.inner_s(p, q, eps) - inner(x, y))
            ok = ok and gap < 2 * eps
        report.limit_matches.append((eps, ok))
    return report
