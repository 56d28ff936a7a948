"""Completion of C*-valued metric and normed spaces, at desk scale.

A point of the completion ``X^s`` is a Cauchy sequence in the base space that
carries an explicit modulus ``eps -> N``.  Distances in ``X^s`` are limits, so
they are evaluated to a requested accuracy: ``dist_s(p, q, eps)`` is
``d(p_N, q_N)`` with ``N`` taken from both moduli at ``eps/3``, which is
within ``eps`` of the limit in norm.  Equality in ``X^s`` is only available
at a resolution: ``equivalent(p, q, eps)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Sequence

from .algebra import AlgebraDescriptor, Element, op_norm
from .errors import InputError
from .metric import DEFAULT_GRID, MetricSpace, PointSequence, converges_norm, cauchy_norm
from .order import norm_zero
from .tolerance import Tolerance, resolve


class CompletionPoint:
    """A Cauchy sequence with a modulus, standing for a point of ``X^s``."""

    __slots__ = ("seq", "name")

    def __init__(self, seq: PointSequence, name: str = ""):
        if not seq.has_modulus:
            raise InputError(f"completion points need a modulus of Cauchyness ({seq.name or 'unnamed'})")
        self.seq = seq
        self.name = name or seq.name

    def __repr__(self):
        return f"CompletionPoint({self.name or 'unnamed'})"

    def at(self, n: int):
        return self.seq.at(n)

    def modulus(self, eps: float) -> int:
        return self.seq.modulus(eps)

    def approximant(self, eps: float):
        """A base point within ``eps`` of this point (in norm)."""
        return self.seq.at(self.modulus(eps))


class CompletedSpace:
    """The completion ``X^s`` of a base metric space."""

    def __init__(self, base: MetricSpace, name: str = ""):
        self.base = base
        self.algebra = base.algebra
        self.name = name or f"completion({base.name})"

    def __repr__(self):
        return f"CompletedSpace({self.name})"

    def point(self, at: Callable[[int], Any], modulus: Callable[[float], int], name: str = "") -> CompletionPoint:
        return CompletionPoint(PointSequence(self.base, at, modulus, name), name)

    def from_sequence(self, seq: PointSequence) -> CompletionPoint:
        if seq.space is not self.base:
            raise InputError("sequence lives in a different base space")
        return CompletionPoint(seq)

    def embed(self, x) -> CompletionPoint:
        """The constant sequence at ``x`` with modulus ``eps -> 1``."""
        if x not in self.base:
            raise InputError(f"{x!r} is not a point of {self.base.name or 'the base space'}", witness=x)
        return self.point(lambda n, x=x: x, lambda eps: 1, name=str(x))

    def dist_s(self, p: CompletionPoint, q: CompletionPoint, epsilon: float) -> Element:
        """``d(p_N, q_N)`` with ``N = max(p.modulus(eps/3), q.modulus(eps/3))``.

        By the triangle inequality and normality of the cone the result is
        within ``eps`` (indeed ``2 eps / 3``) of ``d^s(p, q)`` in norm.
        """
        if not epsilon > 0:
            raise ValueError("epsilon must be positive")
        n = max(p.modulus(epsilon / 3), q.modulus(epsilon / 3))
        return self.base.dist(p.at(n), q.at(n))

    def equivalent(self, p: CompletionPoint, q: CompletionPoint, epsilon: float) -> bool:
        """Equality in ``X^s`` resolved at ``epsilon``: ``||dist_s(p, q, eps)|| < eps``."""
        return op_norm(self.dist_s(p, q, epsilon)) < epsilon

    def at_resolution(self, epsilon: float) -> MetricSpace:
        """``X^s`` as a metric space whose distances are evaluated to ``epsilon``."""
        return MetricSpace(self.algebra, lambda p, q: self.dist_s(p, q, epsilon), None,
                           name=f"{self.name}@{epsilon:g}",
                           contains=lambda p: isinstance(p, CompletionPoint))


def embed(space: CompletedSpace, x) -> CompletionPoint:
    return space.embed(x)


def dist_s(space: CompletedSpace, p: CompletionPoint, q: CompletionPoint, epsilon: float) -> Element:
    return space.dist_s(p, q, epsilon)


def equivalent(space: CompletedSpace, p: CompletionPoint, q: CompletionPoint, epsilon: float) -> bool:
    return space.equivalent(p, q, epsilon)


# sequences of completion points and their limits


class CompletionSequence:
    """A sequence ``P_1, P_2, ...`` in ``X^s`` with an outer modulus.

    ``modulus(eps)`` certifies ``||d^s(P_k, P_j)|| < eps`` for all
    ``k, j >= modulus(eps)``.
    """

    def __init__(self, space: CompletedSpace, at: Callable[[int], CompletionPoint],
                 modulus: Callable[[float], int] | None, name: str = "",
                 expected: CompletionPoint | None = None):
        if modulus is None:
            raise InputError(f"sequence {name or 'unnamed'} in the completion has no modulus")
        self.space = space
        self._seq = PointSequence(space.at_resolution(1.0), at, modulus, name)
        self.name = name
        self.expected = expected

    def at(self, k: int) -> CompletionPoint:
        return self._seq.at(k)

    def modulus(self, eps: float) -> int:
        return self._seq.modulus(eps)

    def as_point_sequence(self, epsilon: float) -> PointSequence:
        return PointSequence(self.space.at_resolution(epsilon), self.at, self.modulus, self.name)


def diagonal_limit(seq: CompletionSequence) -> CompletionPoint:
    """The limit of a Cauchy sequence in ``X^s`` as a new completion point.

    Term ``n`` is the ``2^-n`` approximant of ``P_{k_n}`` with ``k_n`` the
    (monotone) outer modulus at ``2^-n``.  Consecutive terms are within
    ``3 * 2^-min(n, m)`` of each other, which gives the modulus.
    """
    space = seq.space

    def outer(n):
        return max(seq.modulus(2.0 ** -j) for j in range(1, n + 1))

    def at(n):
        return seq.at(outer(n)).approximant(2.0 ** -n)

    def modulus(eps):
        return max(1, math.floor(math.log2(3.0 / eps)) + 1)

    return space.point(at, modulus, name=f"lim({seq.name})")


@dataclass
class LimitCheck:
    name: str
    passed: bool
    probe_log: list = field(default_factory=list)
    expected_match: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {"sequence": self.name, "passed": self.passed,
                "probe_log": [e.to_json() for e in self.probe_log],
                "expected_match": [{"eps": eps, "equivalent": ok} for eps, ok in self.expected_match]}


@dataclass
class CompletenessReport:
    checks: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_json(self) -> dict:
        return {"passed": self.passed, "checks": [c.to_json() for c in self.checks]}


def complete_check(space: CompletedSpace, test_sequences: Sequence[CompletionSequence],
                   grid: Sequence[float] = DEFAULT_GRID, depth: int = 64,
                   tol: Tolerance | None = None) -> CompletenessReport:
    """Build the diagonal limit of each Cauchy sequence of completion points
    and verify ``P_k -> lim`` on the grid.

    For each ``eps``, distances are evaluated to ``eps/4`` and compared with
    ``3 eps / 4``, so a satisfied probe certifies ``||d^s(P_k, lim)|| < eps``
    on the sampled tail.  Sequences with an ``expected`` limit are also
    compared with it at every grid resolution.
    """
    report = CompletenessReport()
    for seq in test_sequences:
        if not isinstance(seq, CompletionSequence):
            raise InputError("test sequences must be CompletionSequence values with a modulus")
        limit = diagonal_limit(seq)
        log = []
        for eps in grid:
            probe = seq.as_point_sequence(eps / 4)
            verdict = converges_norm(probe, limit, probes=[0.75 * eps], depth=depth, tol=tol, with_cauchy=False)
            entry = verdict.probe_log[0]
            entry.probe = eps
            log.append(entry)
        matches = []
        if seq.expected is not None:
            matches = [(eps, space.equivalent(limit, seq.expected, eps)) for eps in grid]
        passed = all(e.satisfied for e in log) and all(ok for _, ok in matches)
        report.checks.append(LimitCheck(seq.name, passed, log, matches))
    return report


def embedded_sequence(space: CompletedSpace, seq: PointSequence) -> CompletionSequence:
    """The sequence ``embed(x_1), embed(x_2), ...`` in ``X^s``; its limit is ``seq`` itself."""
    return CompletionSequence(space, lambda k: space.embed(seq.at(k)), seq.modulus,
                              name=f"embed({seq.name})", expected=space.from_sequence(seq))


def constant_sequence(space: CompletedSpace, p: CompletionPoint) -> CompletionSequence:
    return CompletionSequence(space, lambda k: p, lambda eps: 1, name=f"const({p.name})", expected=p)


def interleave(p: CompletionPoint, q: CompletionPoint, name: str = "") -> PointSequence:
    """``z_(2n-1) = p_n``, ``z_(2n) = q_n``.

    Cauchy exactly when ``p`` and ``q`` have the same limit; the modulus
    attached assumes so (it is ``2 max(p.modulus(eps/3), q.modulus(eps/3))``),
    and callers are expected to probe the result rather than trust it.
    """
    space = p.seq.space

    def at(n):
        k = (n + 1) // 2
        return p.at(k) if n % 2 else q.at(k)

    def modulus(eps):
        return 2 * max(p.modulus(eps / 3), q.modulus(eps / 3))

    return PointSequence(space, at, modulus, name or f"interleave({p.name}, {q.name})")


def compare_completions(first: CompletedSpace, second: CompletedSpace, pairs: Sequence[tuple],
                        epsilon: float) -> list:
    """Spot-check that two completions of one base agree through the canonical map.

    ``pairs`` holds ``((p1, q1), (p2, q2))`` where ``p2`` is the image of
    ``p1`` in ``second`` (same limit, possibly another representative).
    Returns the discrepancies ``||dist_s^1 - dist_s^2||`` that exceed
    ``2 epsilon``.
    """
    bad = []
    for (p1, q1), (p2, q2) in pairs:
        gap = op_norm(first.dist_s(p1, q1, epsilon) - second.dist_s(p2, q2, epsilon))
        if not gap < 2 * epsilon:
            bad.append({"pair": [p1.name, q1.name], "gap": gap})
    return bad


# vector structure


class VectorizedSpace:
    """A metric space carrying vector operations and an A-valued norm.

    ``dist`` must be the norm-induced metric ``d(x, y) = ||x - y||``.
    """

    def __init__(self, carrier: MetricSpace, add: Callable, scalar_mul: Callable, zero: Any,
                 norm: Callable[[Any], Element], neg: Callable | None = None,
                 equal: Callable | None = None, name: str = ""):
        self.carrier = carrier
        self.algebra = carrier.algebra
        self.add = add
        self.scalar_mul = scalar_mul
        self.zero = zero
        self.norm = norm
        self.neg = neg if neg is not None else (lambda u: scalar_mul(-1, u))
        self._equal = equal
        self.name = name or carrier.name

    def __repr__(self):
        return f"VectorizedSpace({self.name})"

    def dist(self, x, y) -> Element:
        return self.carrier.dist(x, y)

    def sub(self, x, y):
        return self.add(x, self.neg(y))

    def equal(self, x, y, tol: Tolerance | None = None) -> bool:
        """Equality up to tolerance, judged by the distance unless a rule is given."""
        if self._equal is not None:
            return self._equal(x, y)
        tol = resolve(tol)
        return op_norm(self.carrier.dist(x, y)) <= tol.bound(max(op_norm(self.norm(x)), op_norm(self.norm(y))))

    def __contains__(self, x) -> bool:
        return x in self.carrier


def normed_space(algebra: AlgebraDescriptor, add, scalar_mul, zero, norm, *, neg=None,
                 contains=None, codec=None, points=None, name: str = "") -> VectorizedSpace:
    """A normed space with its induced metric ``d(x, y) = ||x - y||``."""
    neg = neg if neg is not None else (lambda u: scalar_mul(-1, u))
    carrier = MetricSpace(algebra, lambda x, y: norm(add(x, neg(y))), points, name=name,
                          contains=contains, codec=codec)
    return VectorizedSpace(carrier, add, scalar_mul, zero, norm, neg, name=name)


def _tuple_add(u, v):
    return tuple(a + b for a, b in zip(u, v))


def _tuple_scale(alpha, u):
    return tuple(alpha * a for a in u)


def coordinate_space(dim: int) -> VectorizedSpace:
    """``C^dim`` as a normed space over the commutative algebra ``C^dim``
    with the A-valued norm ``||x||_0`` (coordinate-wise modulus)."""
    algebra = AlgebraDescriptor((1,) * dim)

    def norm(u):
        return norm_zero(algebra.diagonal(u))

    return normed_space(algebra, _tuple_add, _tuple_scale, (0j,) * dim, norm,
                        contains=lambda u: isinstance(u, tuple) and len(u) == dim, name=f"C^{dim}")


# Gaussian rationals: exact arithmetic in Q + iQ


@dataclass(frozen=True)
class GaussianRational:
    """``re + i im`` with rational parts."""

    re: Fraction
    im: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "re", Fraction(self.re))
        object.__setattr__(self, "im", Fraction(self.im))

    def __add__(self, other):
        return GaussianRational(self.re + other.re, self.im + other.im)

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, GaussianRational):
            return GaussianRational(self.re * other.re - self.im * other.im,
                                    self.re * other.im + self.im * other.re)
        other = _as_gaussian(other)
        return self * other

    __rmul__ = __mul__

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __str__(self):
        return f"{self.re}+{self.im}i"


def _as_gaussian(value) -> GaussianRational:
    if isinstance(value, GaussianRational):
        return value
    if isinstance(value, (int, Fraction)):
        return GaussianRational(Fraction(value))
    # floats are binary rationals, so this conversion is exact
    z = complex(value)
    return GaussianRational(Fraction(z.real), Fraction(z.imag))


def gaussian_rationals() -> VectorizedSpace:
    """``Q + iQ`` inside ``C`` with the norm ``||x||_0 = |x|`` in ``C^1``.

    Arithmetic is exact; only the norm value is rounded to a double.
    """
    algebra = AlgebraDescriptor((1,))

    def norm(u):
        return algebra.diagonal([abs(complex(u))])

    def scale(alpha, u):
        return _as_gaussian(alpha) * u

    def parse(label):
        re_, _, im = label.partition(",")
        return GaussianRational(Fraction(re_), Fraction(im or 0))

    return normed_space(algebra, lambda u, v: u + v, scale, GaussianRational(Fraction(0)), norm,
                        neg=lambda u: -u, contains=lambda u: isinstance(u, GaussianRational),
                        codec=parse, name="Q+iQ")


def exp_i_partial_sums(space: VectorizedSpace) -> PointSequence:
    """``s_n = sum_{k<n} i^k / k!`` in ``Q + iQ``; the limit ``e^i`` is irrational.

    Tail bound ``|s_n - s_m| <= 2 / n!`` for ``m > n``, so the modulus is the
    least ``N`` with ``2 / N! < eps``.
    """
    powers = [GaussianRational(1), GaussianRational(0, 1), GaussianRational(-1), GaussianRational(0, -1)]

    def at(n):
        total = GaussianRational(0)
        for k in range(n):
            total = total + powers[k % 4] * Fraction(1, math.factorial(k))
        return total

    def modulus(eps):
        n = 1
        while 2.0 / math.factorial(n) >= eps:
            n += 1
        return n

    return PointSequence(space.carrier, at, modulus, name="sum i^k/k!")


# transported structure


@dataclass
class TransportReport:
    axioms: dict = field(default_factory=dict)
    linear: bool = True
    metric_matches: bool = True
    witnesses: list = field(default_factory=list)
    samples: int = 0

    @property
    def passed(self) -> bool:
        return all(self.axioms.values()) and self.linear and self.metric_matches

    def to_json(self) -> dict:
        return {"passed": self.passed, "axioms": dict(self.axioms), "linear": self.linear,
                "metric_matches": self.metric_matches, "samples": self.samples,
                "witnesses": list(self.witnesses)}


AXIOM_NAMES = {
    "V1": "closure",
    "V2": "associativity",
    "V3": "commutativity",
    "V4": "zero",
    "V5": "inverse",
    "V6": "scalar compatibility",
    "V7": "distributivity over vectors",
    "V8": "distributivity over scalars",
    "V9": "unit scalar",
}


def transport_structure(W: MetricSpace, X: VectorizedSpace, T: Callable, T_inv: Callable,
                        sample: Sequence, tol: Tolerance | None = None) -> VectorizedSpace:
    """Pull the vector structure of ``X`` back to ``W`` along a bijective isometry.

    ``u (+) v = T^-1(Tu + Tv)``, ``a (.) u = T^-1(a Tu)``, zero ``T^-1(0_X)``
    and ``||u||_W = ||Tu||_X``.  ``T`` must preserve distances (with the
    identity on the value algebra) and be inverted by ``T_inv``; both are
    checked on all pairs of ``sample``.
    """
    tol = resolve(tol)
    if W.algebra != X.algebra:
        raise InputError(f"W takes values in {W.algebra.name} but X in {X.algebra.name}")
    pts = list(sample)
    for u in pts:
        back = T_inv(T(u))
        if not op_norm(W.dist(back, u)) <= tol.bound(op_norm(X.norm(T(u)))):
            raise InputError("T_inv does not invert T on the sample", witness=(u,))
    for i, u in enumerate(pts):
        for v in pts[i + 1:]:
            d_w = W.dist(u, v)
            d_x = X.dist(T(u), T(v))
            if not d_w.close(d_x, tol):
                raise InputError("T does not preserve distances on the sample", witness=(u, v))

    def add(u, v):
        return T_inv(X.add(T(u), T(v)))

    def scalar_mul(alpha, u):
        return T_inv(X.scalar_mul(alpha, T(u)))

    def norm(u):
        return X.norm(T(u))

    def equal(u, v):
        scale = max(op_norm(norm(u)), op_norm(norm(v)))
        return op_norm(W.dist(u, v)) <= tol.bound(scale)

    structure = VectorizedSpace(W, add, scalar_mul, T_inv(X.zero), norm,
                                neg=lambda u: T_inv(X.neg(T(u))), equal=equal,
                                name=f"transported({W.name})")
    structure.T = T
    structure.T_inv = T_inv
    structure.target = X
    return structure


def check_vector_axioms(V: VectorizedSpace, triples: Sequence[tuple], scalars: Sequence[tuple],
                        tol: Tolerance | None = None) -> TransportReport:
    """Check V1-V9, ``d(u, v) = ||u (+) (-v)||``, and linearity of ``T`` when present.

    ``triples`` are ``(u, v, w)`` and ``scalars`` the matching ``(alpha, beta)``.
    """
    tol = resolve(tol)
    eq = V.equal
    add, mul = V.add, V.scalar_mul
    axioms = {name: True for name in AXIOM_NAMES}
    report = TransportReport(axioms=axioms, samples=len(triples))

    def fail(name, k):
        if axioms.get(name, True):
            report.witnesses.append({"check": name, "sample": k})
        axioms[name] = False

    for k, ((u, v, w), (alpha, beta)) in enumerate(zip(triples, scalars)):
        if not (add(u, v) in V and mul(alpha, u) in V):
            fail("V1", k)
        if not eq(add(add(u, v), w), add(u, add(v, w))):
            fail("V2", k)
        if not eq(add(u, v), add(v, u)):
            fail("V3", k)
        if not (eq(add(V.zero, u), u) and eq(add(u, V.zero), u)):
            fail("V4", k)
        if not eq(add(V.neg(u), u), V.zero):
            fail("V5", k)
        if not eq(mul(alpha, mul(beta, u)), mul(alpha * beta, u)):
            fail("V6", k)
        if not eq(mul(alpha, add(u, v)), add(mul(alpha, u), mul(alpha, v))):
            fail("V7", k)
        if not eq(mul(alpha + beta, u), add(mul(alpha, u), mul(beta, u))):
            fail("V8", k)
        if not eq(mul(1, u), u):
            fail("V9", k)
        if not V.dist(u, v).close(V.norm(add(u, V.neg(v))), tol):
            if report.metric_matches:
                report.witnesses.append({"check": "metric", "sample": k})
            report.metric_matches = False
        T = getattr(V, "T", None)
        if T is not None:
            X = V.target
            lhs = T(add(mul(alpha, u), mul(beta, v)))
            rhs = X.add(X.scalar_mul(alpha, T(u)), X.scalar_mul(beta, T(v)))
            if not X.equal(lhs, rhs, tol):
                if report.linear:
                    report.witnesses.append({"check": "linear", "sample": k})
                report.linear = False
    return report


# completion of normed spaces


class CompletedNormedSpace:
    """``X^s`` for a normed space, with operations extended by limits."""

    def __init__(self, space: VectorizedSpace, name: str = ""):
        self.space = space
        self.completed = CompletedSpace(space.carrier, name or f"completion({space.name})")
        self.algebra = space.algebra

    def embed(self, x) -> CompletionPoint:
        return self.completed.embed(x)

    def point(self, at, modulus, name: str = "") -> CompletionPoint:
        return self.completed.point(at, modulus, name)

    def add(self, p: CompletionPoint, q: CompletionPoint) -> CompletionPoint:
        """Termwise sum; ``||(x_n + y_n) - (x_m + y_m)|| <= ||x_n - x_m|| + ||y_n - y_m||``."""
        V = self.space
        return self.completed.point(lambda n: V.add(p.at(n), q.at(n)),
                                    lambda eps: max(p.modulus(eps / 2), q.modulus(eps / 2)),
                                    name=f"({p.name})+({q.name})")

    def scalar_mul(self, alpha: complex, p: CompletionPoint) -> CompletionPoint:
        V = self.space
        size = abs(complex(alpha))

        def modulus(eps):
            return 1 if size == 0 else p.modulus(eps / size)

        return self.completed.point(lambda n: V.scalar_mul(alpha, p.at(n)), modulus,
                                    name=f"{alpha}*({p.name})")

    def neg(self, p: CompletionPoint) -> CompletionPoint:
        V = self.space
        return self.completed.point(lambda n: V.neg(p.at(n)), p.modulus, name=f"-({p.name})")

    @property
    def zero(self) -> CompletionPoint:
        return self.completed.embed(self.space.zero)

    def norm_s(self, p: CompletionPoint, epsilon: float) -> Element:
        """``||p_N||`` with ``N = p.modulus(eps)``: within ``eps`` of ``lim ||p_n||``."""
        return self.space.norm(p.approximant(epsilon))

    def dist_s(self, p, q, epsilon):
        return self.completed.dist_s(p, q, epsilon)

    def equivalent(self, p, q, epsilon) -> bool:
        return self.completed.equivalent(p, q, epsilon)


def check_norm_induced(space: VectorizedSpace, sample: Sequence, tol: Tolerance | None = None) -> None:
    """Raise InputError unless ``d(x, y) = ||x - y||`` on all sampled pairs."""
    tol = resolve(tol)
    pts = list(sample)
    for i, x in enumerate(pts):
        for y in pts[i:]:
            if not space.dist(x, y).close(space.norm(space.sub(x, y)), tol):
                raise InputError("metric is not induced by the norm on the sample", witness=(x, y))


def complete_normed(space: VectorizedSpace, sample: Sequence = (), tol: Tolerance | None = None) -> CompletedNormedSpace:
    """Completion of a normed space; the metric is checked to be norm-induced on ``sample``."""
    check_norm_induced(space, sample, tol)
    return CompletedNormedSpace(space)


@dataclass
class WellDefinedness:
    interleave_cauchy: bool
    sums_agree: list
    probe_log: list

    @property
    def passed(self) -> bool:
        return self.interleave_cauchy and all(ok for _, ok in self.sums_agree)

    def to_json(self) -> dict:
        return {"passed": self.passed, "interleave_cauchy": self.interleave_cauchy,
                "sums_agree": [{"eps": eps, "agree": ok} for eps, ok in self.sums_agree],
                "probe_log": [e.to_json() for e in self.probe_log]}


def check_well_defined(C: CompletedNormedSpace, x: CompletionPoint, x2: CompletionPoint,
                       y: CompletionPoint, y2: CompletionPoint,
                       grid: Sequence[float] = DEFAULT_GRID, depth: int = 2000) -> WellDefinedness:
    """Two representatives of the same ``x`` and ``y``: the interleaved sum
    sequence must be Cauchy and both extended sums must agree within ``2 eps``."""
    s1, s2 = C.add(x, y), C.add(x2, y2)
    z = interleave(s1, s2)
    verdict = cauchy_norm(z, grid, depth)
    agree = [(eps, op_norm(C.dist_s(s1, s2, eps)) < 2 * eps) for eps in grid]
    return WellDefinedness(bool(verdict.cauchy), agree, verdict.cauchy_log)


# rational-line fixtures


def truncation_modulus(radix: int, lipschitz: float = 1.0) -> Callable[[float], int]:
    """Modulus for radix truncations ``x_n`` with ``|x_n - x_m| < radix^-min(n, m)``
    in a space where ``||d(p, q)|| = lipschitz * |p - q|``."""

    def modulus(eps):
        n = max(1, math.ceil(math.log(lipschitz / eps, radix)))
        while lipschitz * float(radix) ** -n >= eps:
            n += 1
        return n

    return modulus


def sqrt_truncations(numerator: int, denominator: int = 1) -> Callable[[int], Fraction]:
    """Exact decimal truncations of ``sqrt(numerator / denominator)``."""

    def at(n):
        scale = 10 ** n
        # floor(sqrt(p/q) * 10^n) = isqrt(p * 10^2n // q) exactly
        return Fraction(math.isqrt(numerator * scale * scale // denominator), scale)

    return at


def binary_roundings(numerator: int, denominator: int = 1) -> Callable[[int], Fraction]:
    """Exact binary truncations of ``sqrt(numerator / denominator)``: a second,
    independent representative of the same limit."""

    def at(n):
        scale = 2 ** n
        return Fraction(math.isqrt(numerator * scale * scale // denominator), scale)

    return at
