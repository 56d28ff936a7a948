"""C*-algebra-valued metric spaces and finite-probe sequence analysis.

A :class:`MetricSpace` is a distance function into an algebra, either backed
by a finite table or by a rule over an arbitrary point type.  Convergence and
Cauchyness are probed two ways:

* norm style: ``||d(x_n, x)|| < eps`` from some index on;
* cone style: ``d(x_n, x) << c`` from some index on, for witnesses ``c >> 0``.

Limits cannot be decided from finitely many terms, so every verdict is
"verified up to (probe grid, depth)" and carries its probe log.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Iterable, Mapping, Sequence

import numpy as np

from . import batch
from .algebra import AlgebraDescriptor, Element, UnitizedElement, element_from_json, element_to_json, op_norm
from .errors import InputError, ShapeError
from .order import is_way_below, leq
from .tolerance import Tolerance, resolve

DEFAULT_GRID = (1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6)
DEFAULT_DEPTH = 10_000


def horizon(depth: int) -> int:
    """Largest admissible probe index N: the certified tail [N, depth] must
    cover at least the upper half of the probed range, otherwise the last
    sampled term alone would "certify" any sequence."""
    return max(1, depth // 2)


class MetricSpace:
    """Distance function ``dist(x, y) -> Element`` on a set of points.

    ``points`` is the finite carrier (or ``None`` for rule-defined spaces over
    an infinite point type); ``contains`` tests membership for rule-defined
    spaces and ``codec`` turns a text label into a point.
    """

    def __init__(self, algebra: AlgebraDescriptor, dist: Callable[[Any, Any], Element],
                 points: Sequence | None = None, *, name: str = "",
                 contains: Callable[[Any], bool] | None = None,
                 codec: Callable[[str], Any] | None = None):
        self.algebra = algebra
        self._dist = dist
        self.points = None if points is None else list(points)
        self.name = name
        self._contains = contains
        self._codec = codec

    def __repr__(self):
        size = "rule" if self.points is None else f"{len(self.points)} points"
        return f"MetricSpace({self.name or 'unnamed'}, {self.algebra.name}, {size})"

    @property
    def finite(self) -> bool:
        return self.points is not None

    def dist(self, x, y) -> Element:
        return self._dist(x, y)

    __call__ = dist

    def __contains__(self, x) -> bool:
        if self.points is not None:
            return x in self.points
        return True if self._contains is None else bool(self._contains(x))

    def decode(self, label: str):
        if self._codec is None:
            if self.points is not None and label in self.points:
                return label
            raise InputError(f"cannot decode point label {label!r}")
        return self._codec(label)

    def restrict(self, points: Iterable) -> "MetricSpace":
        """Finite subspace on the given points, sharing this distance rule."""
        return MetricSpace(self.algebra, self._dist, list(points), name=self.name,
                           contains=self._contains, codec=self._codec)

    def tabulate(self, points: Iterable | None = None) -> "TableSpace":
        pts = list(self.points if points is None else points)
        table = {(x, y): self._dist(x, y) for x in pts for y in pts}
        return TableSpace(self.algebra, pts, table, name=self.name)

    def relabel(self, mapping: Mapping) -> "MetricSpace":
        """Same space with every point renamed by a bijection ``mapping``."""
        inverse = {v: k for k, v in mapping.items()}
        if len(inverse) != len(mapping):
            raise InputError("relabelling is not injective")
        pts = None if self.points is None else [mapping[p] for p in self.points]
        return MetricSpace(self.algebra, lambda x, y: self._dist(inverse[x], inverse[y]), pts,
                           name=self.name)

    def map_values(self, f: Callable[[Element], Element], algebra: AlgebraDescriptor) -> "MetricSpace":
        return MetricSpace(algebra, lambda x, y: f(self._dist(x, y)), self.points, name=self.name,
                           contains=self._contains, codec=self._codec)

    def unitized(self) -> "MetricSpace":
        """Distances pushed into the unitization through ``a -> (a, 0)``."""
        target = AlgebraDescriptor(self.algebra.blocks + (1,))
        return self.map_values(lambda d: UnitizedElement.embed(d).as_direct_sum(), target)


class TableSpace(MetricSpace):
    """Finite space whose distances come from an explicit table.

    ``table`` maps ordered pairs to elements.  A pair given in one orientation
    only is used for both; missing diagonal entries are ``0_A``.
    """

    def __init__(self, algebra: AlgebraDescriptor, points: Sequence, table: Mapping, *, name: str = ""):
        self.table = dict(table)
        super().__init__(algebra, self._lookup, points, name=name)
        for (x, y), value in self.table.items():
            if x not in self.points or y not in self.points:
                raise InputError(f"table entry for unknown pair ({x!r}, {y!r})")
            if value.algebra != algebra:
                raise ShapeError(f"distance ({x!r}, {y!r}) is in {value.algebra.name}, not {algebra.name}")

    def _lookup(self, x, y) -> Element:
        if (x, y) in self.table:
            return self.table[(x, y)]
        if (y, x) in self.table:
            return self.table[(y, x)]
        if x == y and x in self.points:
            return self.algebra.zero()
        raise InputError(f"no distance given for pair ({x!r}, {y!r})", witness=(x, y))

    def with_entry(self, x, y, value: Element, *, symmetric: bool = True) -> "TableSpace":
        table = dict(self.table)
        table[(x, y)] = value
        if symmetric:
            table[(y, x)] = value
        elif (y, x) not in table:
            table[(y, x)] = self._lookup(y, x)
        return TableSpace(self.algebra, self.points, table, name=self.name)

    def to_json(self) -> dict:
        labels = [str(p) for p in self.points]
        dist = {}
        for i, x in enumerate(self.points):
            for j in range(i + 1, len(self.points)):
                y = self.points[j]
                dist[f"{labels[i]}|{labels[j]}"] = element_to_json(self._lookup(x, y))
        return {"algebra": self.algebra.to_json(), "points": labels, "dist": dist}

    @classmethod
    def from_json(cls, obj: dict) -> "TableSpace":
        algebra = AlgebraDescriptor.from_json(obj["algebra"])
        points = list(obj["points"])
        index = {p: i for i, p in enumerate(points)}
        if len(index) != len(points):
            raise InputError("duplicate point labels")
        table = {}
        for key, value in obj["dist"].items():
            parts = key.split("|")
            if len(parts) != 2 or parts[0] not in index or parts[1] not in index:
                raise InputError(f"bad distance key {key!r}", witness=key)
            x, y = parts
            if index[x] >= index[y]:
                raise InputError(f"distance key {key!r} must be ordered 'min|max' by point index", witness=key)
            table[(x, y)] = element_from_json(value, algebra)
        missing = [(points[i], points[j]) for i in range(len(points)) for j in range(i + 1, len(points))
                   if (points[i], points[j]) not in table]
        if missing:
            raise InputError(f"distance table is partial, e.g. {missing[0][0]}|{missing[0][1]} missing",
                             witness=missing[0])
        return cls(algebra, points, table)


# concrete rule-defined spaces


def _fraction_codec(label: str) -> Fraction:
    try:
        return Fraction(label)
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"not a rational number: {label!r}") from exc


def _complex_codec(label: str) -> complex:
    try:
        return complex(label.replace(" ", ""))
    except ValueError as exc:
        raise InputError(f"not a complex number: {label!r}") from exc


def scaled_modulus_space(alpha: float, points: Sequence | None = None) -> MetricSpace:
    """``X = C`` with ``d(a, b) = (|a - b|, alpha |a - b|)`` in ``C^2``.

    A C*-valued metric whose value algebra has a positive cone with empty
    interior in the full algebra.
    """
    if not alpha > 0:
        raise ValueError("alpha must be positive")
    algebra = AlgebraDescriptor((1, 1))

    def dist(a, b):
        r = abs(complex(a) - complex(b))
        return algebra.diagonal([r, alpha * r])

    return MetricSpace(algebra, dist, points, name=f"scaled-modulus(alpha={alpha:g})",
                       contains=lambda x: isinstance(x, (int, float, complex, Fraction)),
                       codec=_complex_codec)


def rational_line(alpha: float | None = None) -> MetricSpace:
    """The rationals with ``d(p, q) = |p - q|`` (in ``C^1``) or ``(|p-q|, alpha|p-q|)``.

    Points are :class:`fractions.Fraction`; differences are exact, only the
    final distance is rounded to a double.
    """
    if alpha is None:
        algebra = AlgebraDescriptor((1,))

        def dist(p, q):
            return algebra.diagonal([float(abs(Fraction(p) - Fraction(q)))])
    else:
        algebra = AlgebraDescriptor((1, 1))

        def dist(p, q):
            r = float(abs(Fraction(p) - Fraction(q)))
            return algebra.diagonal([r, alpha * r])

    return MetricSpace(algebra, dist, None, name="rational-line",
                       contains=lambda x: isinstance(x, (int, Fraction)), codec=_fraction_codec)


def complex_line() -> MetricSpace:
    algebra = AlgebraDescriptor((1,))
    return MetricSpace(algebra, lambda a, b: algebra.diagonal([abs(complex(a) - complex(b))]), None,
                       name="complex-line", contains=lambda x: isinstance(x, (int, float, complex, Fraction)),
                       codec=_complex_codec)


# axiom checking


@dataclass
class AxiomResult:
    passed: bool
    witness: tuple | None = None
    detail: str = ""

    def to_json(self) -> dict:
        return {"passed": self.passed, "witness": None if self.witness is None else [str(w) for w in self.witness],
                "detail": self.detail}


@dataclass
class AxiomReport:
    results: dict = field(default_factory=dict)
    points: int = 0

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results.values())

    def failed(self) -> list:
        return [name for name, r in self.results.items() if not r.passed]

    def to_json(self) -> dict:
        return {"points": self.points, "passed": self.passed,
                "axioms": {name: r.to_json() for name, r in self.results.items()}}


def _distance_table(space: MetricSpace, pts: list):
    n = len(pts)
    algebra = space.algebra
    arrays = [np.zeros((n, n, m, m), dtype=np.complex128) for m in algebra.blocks]
    for i, x in enumerate(pts):
        for j, y in enumerate(pts):
            try:
                d = space.dist(x, y)
            except KeyError as exc:
                raise InputError(f"distance map is partial at ({x!r}, {y!r})", witness=(x, y)) from exc
            if d.algebra != algebra:
                raise ShapeError(f"distance ({x!r}, {y!r}) lies in {d.algebra.name}, not {algebra.name}")
            for k, block in enumerate(d.blocks):
                arrays[k][i, j] = block
    return tuple(arrays)


def check_metric_axioms(space: MetricSpace, sample: Sequence | None = None,
                        tol: Tolerance | None = None) -> AxiomReport:
    """Check C1 (positivity), C2 (definiteness), C3 (symmetry) and C4 (triangle).

    Rule-defined spaces are checked on ``sample``.  C4 runs over all ordered
    triples.  Each failed axiom carries the first violating tuple.
    """
    tol = resolve(tol)
    pts = list(sample) if sample is not None else space.points
    if pts is None:
        raise InputError("rule-defined spaces need a finite sample to check")
    n = len(pts)
    report = AxiomReport(points=n)
    if n == 0:
        for name in ("C1", "C2", "C3", "C4"):
            report.results[name] = AxiomResult(True, detail="vacuous")
        return report

    table = _distance_table(space, pts)
    norms = batch.norms(table)
    positive = batch.positive(table, tol)
    herm = batch.hermitian(table, tol, norms)

    bad = np.argwhere(~positive)
    report.results["C1"] = (AxiomResult(False, (pts[bad[0][0]], pts[bad[0][1]]), "distance not positive")
                            if len(bad) else AxiomResult(True))

    eye = np.eye(n, dtype=bool)
    zero_level = tol.bound(0.0)
    c2_bad = np.argwhere((eye & (norms > zero_level)) | (~eye & (norms <= zero_level)))
    if len(c2_bad):
        i, j = c2_bad[0]
        detail = "d(x, x) is not 0" if i == j else "d(x, y) = 0 for distinct points"
        report.results["C2"] = AxiomResult(False, (pts[i], pts[j]), detail)
    else:
        report.results["C2"] = AxiomResult(True)

    transposed = tuple(np.swapaxes(b, 0, 1) for b in table)
    diff = batch.norms(tuple(a - b for a, b in zip(table, transposed)))
    scale = np.maximum(norms, norms.T)
    c3_bad = np.argwhere(diff > tol.abs_tol + tol.rel_tol * scale)
    report.results["C3"] = (AxiomResult(False, (pts[c3_bad[0][0]], pts[c3_bad[0][1]]), "d(x, y) != d(y, x)")
                            if len(c3_bad) else AxiomResult(True))

    c4 = AxiomResult(True)
    for z in range(n):
        through = tuple(b[:, z, None] + b[None, z, :] for b in table)
        slack = tuple(t - b for t, b in zip(through, table))
        ok = herm & batch.hermitian(through, tol) & batch.positive(slack, tol)
        bad = np.argwhere(~ok)
        if len(bad):
            i, j = bad[0]
            c4 = AxiomResult(False, (pts[i], pts[j], pts[z]), "d(x, y) > d(x, z) + d(z, y)")
            break
    report.results["C4"] = c4
    return report


def mutate(space: TableSpace, axiom: str, rng: np.random.Generator) -> TableSpace:
    """Break exactly the named axiom of a valid table at a random location."""
    pts = space.points
    if len(pts) < 3:
        raise InputError("mutations need at least three points")
    i, j, k = rng.choice(len(pts), size=3, replace=False)
    x, y, z = pts[i], pts[j], pts[k]
    d = space.dist(x, y)
    if axiom == "C1":
        return space.with_entry(x, y, -d)
    if axiom == "C2":
        return space.with_entry(x, y, space.algebra.zero())
    if axiom == "C3":
        return space.with_entry(y, x, d * 1.5 + space.algebra.identity() * 1e-3, symmetric=False)
    if axiom == "C4":
        return space.with_entry(x, y, (space.dist(x, z) + space.dist(z, y)) * 3.0 + space.algebra.identity())
    raise ValueError(f"unknown axiom {axiom!r}")


# sequences


class PointSequence:
    """Lazily evaluated sequence ``x_1, x_2, ...`` in a metric space.

    ``modulus(eps)`` (optional) is an index N certifying
    ``||d(x_n, x_m)|| < eps`` for all ``n, m >= N``.  Evaluation must be pure;
    terms are memoised behind a lock so one sequence can be shared between
    threads.
    """

    def __init__(self, space: MetricSpace, at: Callable[[int], Any],
                 modulus: Callable[[float], int] | None = None, name: str = ""):
        self.space = space
        self._at = at
        self._modulus = modulus
        self.name = name
        self._cache: dict = {}
        self._lock = threading.Lock()

    def __repr__(self):
        return f"PointSequence({self.name or 'unnamed'}, {self.space!r})"

    @property
    def has_modulus(self) -> bool:
        return self._modulus is not None

    def at(self, n: int):
        if n < 1:
            raise IndexError("sequences are indexed from 1")
        with self._lock:
            if n in self._cache:
                return self._cache[n]
        value = self._at(n)
        with self._lock:
            return self._cache.setdefault(n, value)

    __getitem__ = at

    def modulus(self, eps: float) -> int:
        if self._modulus is None:
            raise InputError(f"sequence {self.name or ''} has no modulus of Cauchyness")
        if not eps > 0:
            raise ValueError("eps must be positive")
        return max(1, int(self._modulus(eps)))

    def check_modulus(self, grid: Sequence[float] = DEFAULT_GRID, depth: int = DEFAULT_DEPTH) -> list:
        """Spot-check the modulus; returns violating ``(eps, n, m, ||d||)`` tuples."""
        violations = []
        for eps in grid:
            start = self.modulus(eps)
            if start > depth:
                continue
            idx = [i for i in pair_samples(depth) if i >= start]
            idx = sorted(set([start] + idx))
            for a_pos, n in enumerate(idx):
                for m in idx[a_pos + 1:]:
                    value = op_norm(self.space.dist(self.at(n), self.at(m)))
                    if not value < eps:
                        violations.append((eps, n, m, value))
        return violations


def tail_samples(depth: int) -> list:
    """Indices probed for convergence: 1..64 densely, then ratio 1.1, then ``depth``."""
    return _samples(depth, dense=64, ratio=1.1)


def pair_samples(depth: int) -> list:
    """Smaller index set used for pairwise (Cauchy) probes."""
    return _samples(depth, dense=16, ratio=1.3)


def _samples(depth: int, dense: int, ratio: float) -> list:
    if depth < 1:
        raise ValueError("depth must be at least 1")
    idx = set(range(1, min(depth, dense) + 1))
    x = float(dense)
    while x < depth:
        x *= ratio
        idx.add(min(depth, int(math.ceil(x))))
    idx.add(depth)
    return sorted(idx)


@dataclass
class ProbeEntry:
    """One probe: ``eps`` (or a cone witness label), least index ``n`` or None, tail maximum."""

    probe: Any
    n: int | None
    max_observed: float

    @property
    def satisfied(self) -> bool:
        return self.n is not None

    def to_json(self) -> dict:
        return {"probe": self.probe, "N": self.n, "max_observed": self.max_observed}


@dataclass
class SeqVerdict:
    converges: bool | None
    cauchy: bool | None
    limit: Any = None
    probe_log: list = field(default_factory=list)
    cauchy_log: list = field(default_factory=list)
    mode: str = "norm"

    def probes_satisfied(self, which: str = "converges") -> list:
        log = self.probe_log if which == "converges" else self.cauchy_log
        return [entry.satisfied for entry in log]

    def to_json(self) -> dict:
        return {
            "mode": self.mode,
            "converges": self.converges,
            "cauchy": self.cauchy,
            "limit": None if self.limit is None else str(self.limit),
            "probe_log": [e.to_json() for e in self.probe_log],
            "cauchy_log": [e.to_json() for e in self.cauchy_log],
        }


def _least_index(indices: list, ok: np.ndarray) -> int | None:
    """Least N such that every sampled index >= N passes."""
    failing = np.flatnonzero(~ok)
    if len(failing) == 0:
        return 1
    last = failing[-1]
    if last == len(indices) - 1:
        return None
    return indices[last] + 1


def _limit_distances(seq: PointSequence, x, indices: list) -> list:
    return [seq.space.dist(seq.at(n), x) for n in indices]


def _probe_tail(seq: PointSequence, x, indices: list, distances: list, stack: tuple,
                passes: Callable[[tuple], np.ndarray], tol: Tolerance):
    """Least N for one probe, refining densely between the last failure and the next sample."""
    ok = passes(stack)
    n = _least_index(indices, ok)
    norms = batch.norms(stack)
    if n is None:
        return None, float(norms[-1])
    pos = int(np.searchsorted(indices, n))
    if pos > 0 and n < indices[pos]:
        gap = list(range(n, indices[pos]))
        gap_stack = batch.stack(_limit_distances(seq, x, gap))
        gap_ok = passes(gap_stack)
        failing = np.flatnonzero(~gap_ok)
        if len(failing):
            n = gap[failing[-1]] + 1
    tail = norms[np.asarray(indices) >= n]
    worst = float(tail.max()) if len(tail) else 0.0
    if n > horizon(indices[-1]):
        return None, worst
    return n, worst


def _pairwise(seq: PointSequence, indices: list):
    pairs = [(a, b) for ia, a in enumerate(indices) for b in indices[ia:]]
    distances = [seq.space.dist(seq.at(a), seq.at(b)) for a, b in pairs]
    return pairs, batch.stack(distances)


def _cauchy_probe(indices: list, pairs: list, ok: np.ndarray, norms: np.ndarray):
    """Least sampled N with every sampled pair in ``[N, depth]`` passing."""
    position = {v: i for i, v in enumerate(indices)}
    bad_from = np.full(len(indices), False)
    worst = np.zeros(len(indices))
    for (a, b), good, value in zip(pairs, ok, norms):
        lo = position[a]
        if not good:
            bad_from[lo] = True
        worst[lo] = max(worst[lo], value)
    # suffix "any failure among pairs starting at or after i"
    failing = np.flatnonzero(bad_from)
    suffix_worst = np.maximum.accumulate(worst[::-1])[::-1]
    if len(failing) == 0:
        return 1, float(suffix_worst[0])
    last = failing[-1]
    if last == len(indices) - 1 or indices[last] + 1 > horizon(indices[-1]):
        return None, float(suffix_worst[min(last + 1, len(indices) - 1)])
    return indices[last] + 1, float(suffix_worst[last + 1])


def _check_depth(seq: PointSequence, eps: float, depth: int) -> bool:
    return not seq.has_modulus or seq.modulus(eps) <= depth


def converges_norm(seq: PointSequence, x, probes: Sequence[float] = DEFAULT_GRID,
                   depth: int = DEFAULT_DEPTH, tol: Tolerance | None = None,
                   with_cauchy: bool = True) -> SeqVerdict:
    """Probe ``||d(x_n, x)|| < eps`` on the sampled tail for every ``eps``."""
    tol = resolve(tol)
    indices = tail_samples(depth)
    distances = _limit_distances(seq, x, indices)
    stack = batch.stack(distances)
    log = []
    for eps in probes:
        n, worst = _probe_tail(seq, x, indices, distances, stack, lambda s, e=eps: batch.norms(s) < e, tol)
        log.append(ProbeEntry(eps, n, worst))
    converges = all(e.satisfied for e in log)
    verdict = SeqVerdict(converges, None, x if converges else None, log, mode="norm")
    if with_cauchy:
        cauchy = cauchy_norm(seq, probes, depth, tol)
        verdict.cauchy = cauchy.cauchy
        verdict.cauchy_log = cauchy.cauchy_log
    return verdict


def cauchy_norm(seq: PointSequence, probes: Sequence[float] = DEFAULT_GRID,
                depth: int = DEFAULT_DEPTH, tol: Tolerance | None = None) -> SeqVerdict:
    """Probe ``||d(x_n, x_m)|| < eps`` over sampled pairs in the tail."""
    indices = pair_samples(depth)
    pairs, stack = _pairwise(seq, indices)
    norms = batch.norms(stack)
    log = []
    for eps in probes:
        n, worst = _cauchy_probe(indices, pairs, norms < eps, norms)
        log.append(ProbeEntry(eps, n, worst))
    cauchy = all(e.satisfied for e in log)
    return SeqVerdict(None, cauchy, None, [], log, mode="norm")


def canonical_witnesses(algebra: AlgebraDescriptor, grid: Sequence[float] = DEFAULT_GRID) -> list:
    """The witness family ``{eps I : eps in grid}``."""
    return [algebra.scalar(eps) for eps in grid]


def _witness_label(c: Element) -> str:
    if c.algebra.commutative:
        coords = c.coordinates()
        if all(v == coords[0] for v in coords):
            return f"{coords[0].real:g}*I"
    return f"witness(norm={op_norm(c):.3g})"


def _validate_witnesses(witnesses: Sequence[Element], tol: Tolerance):
    for c in witnesses:
        if not is_way_below(c.algebra.zero(), c, tol):
            raise InputError("cone witnesses must satisfy 0 << c", witness=element_to_json(c))


def converges_cone(seq: PointSequence, x, witnesses: Sequence[Element] | None = None,
                   depth: int = DEFAULT_DEPTH, tol: Tolerance | None = None,
                   with_cauchy: bool = True) -> SeqVerdict:
    """Probe ``d(x_n, x) << c`` on the sampled tail for every witness ``c``.

    The gap ``c - d`` must be positive definite with no tolerance band, so
    ``eps I`` witnesses decide exactly as the strict norm probe does.
    """
    tol = resolve(tol)
    if witnesses is None:
        witnesses = canonical_witnesses(seq.space.algebra)
    _validate_witnesses(witnesses, tol)
    indices = tail_samples(depth)
    distances = _limit_distances(seq, x, indices)
    stack = batch.stack(distances)
    log = []
    for c in witnesses:
        def passes(s, c=c):
            shape = s[0].shape[:1]
            return batch.way_below(s, batch.broadcast(c, shape), tol, strict=True)
        n, worst = _probe_tail(seq, x, indices, distances, stack, passes, tol)
        log.append(ProbeEntry(_witness_label(c), n, worst))
    converges = all(e.satisfied for e in log)
    verdict = SeqVerdict(converges, None, x if converges else None, log, mode="cone")
    if with_cauchy:
        cauchy = cauchy_cone(seq, witnesses, depth, tol)
        verdict.cauchy = cauchy.cauchy
        verdict.cauchy_log = cauchy.cauchy_log
    return verdict


def cauchy_cone(seq: PointSequence, witnesses: Sequence[Element] | None = None,
                depth: int = DEFAULT_DEPTH, tol: Tolerance | None = None) -> SeqVerdict:
    tol = resolve(tol)
    if witnesses is None:
        witnesses = canonical_witnesses(seq.space.algebra)
    _validate_witnesses(witnesses, tol)
    indices = pair_samples(depth)
    pairs, stack = _pairwise(seq, indices)
    norms = batch.norms(stack)
    log = []
    for c in witnesses:
        ok = batch.way_below(stack, batch.broadcast(c, (len(pairs),)), tol, strict=True)
        n, worst = _cauchy_probe(indices, pairs, ok, norms)
        log.append(ProbeEntry(_witness_label(c), n, worst))
    cauchy = all(e.satisfied for e in log)
    return SeqVerdict(None, cauchy, None, [], log, mode="cone")


# balls, closure, density


def ball(space: MetricSpace, x, epsilon: float) -> list:
    """``{y : ||d(x, y)|| < epsilon}`` in a finite space."""
    _need_finite(space)
    return [y for y in space.points if op_norm(space.dist(x, y)) < epsilon]


def ball_cone(space: MetricSpace, x, c: Element, *, strict_order: bool = False,
              tol: Tolerance | None = None) -> list:
    """``{y : d(x, y) << c}``; with ``strict_order`` the relation is ``<=`` and ``!=``."""
    _need_finite(space)
    tol = resolve(tol)
    result = []
    for y in space.points:
        d = space.dist(x, y)
        if strict_order:
            inside = leq(d, c, tol).holds and not d.close(c, tol)
        else:
            inside = is_way_below(d, c, tol, strict=True)
        if inside:
            result.append(y)
    return result


def closure_grid(tol: Tolerance | None = None) -> list:
    """Decreasing radii ``10^-1, 10^-2, ...`` down to the absolute tolerance."""
    tol = resolve(tol)
    grid = []
    eps = 0.1
    while eps > tol.abs_tol:
        grid.append(eps)
        eps /= 10
    grid.append(tol.abs_tol)
    return grid


def closure(space: MetricSpace, subset: Iterable, grid: Sequence[float] | None = None,
            tol: Tolerance | None = None) -> list:
    """Points whose every grid ball meets ``subset``."""
    _need_finite(space)
    grid = closure_grid(tol) if grid is None else list(grid)
    members = list(subset)
    if not members:
        return []
    result = []
    for x in space.points:
        nearest = min(op_norm(space.dist(x, m)) for m in members)
        if all(nearest < eps for eps in grid):
            result.append(x)
    return result


def is_dense(space: MetricSpace, subset: Iterable, grid: Sequence[float] | None = None,
             tol: Tolerance | None = None) -> bool:
    return len(closure(space, subset, grid, tol)) == len(space.points)


def _need_finite(space: MetricSpace):
    if not space.finite:
        raise InputError("operation needs a finite space; use restrict() on a sample")
