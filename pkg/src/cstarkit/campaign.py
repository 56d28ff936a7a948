"""Seeded property campaigns over every module's invariants.

Each registered check is a function of a :class:`Context` returning an
:class:`Outcome`; the runner turns outcomes into report records.  Random
streams are derived from the campaign seed with
``SeedSequence(seed, spawn_key=(suite, check, algebra))`` feeding a PCG64
generator, so any single record can be reproduced without running the rest.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from . import batch
from .algebra import (
    AlgebraDescriptor,
    Element,
    UnitizedElement,
    elem_mul,
    hermitian_parts,
    involution,
    is_hermitian,
    op_norm,
    unitize_mul,
)
from .completion import (
    CompletedSpace,
    VectorizedSpace,
    GaussianRational,
    binary_roundings,
    check_vector_axioms,
    check_well_defined,
    compare_completions,
    complete_check,
    complete_normed,
    coordinate_space,
    embedded_sequence,
    exp_i_partial_sums,
    sqrt_truncations,
    transport_structure,
    truncation_modulus,
    gaussian_rationals,
)
from .errors import InputError
from .metric import (
    DEFAULT_DEPTH,
    DEFAULT_GRID,
    MetricSpace,
    PointSequence,
    _pairwise,
    ball,
    ball_cone,
    canonical_witnesses,
    check_metric_axioms,
    closure,
    converges_cone,
    converges_norm,
    is_dense,
    mutate,
    pair_samples,
    rational_line,
    scaled_modulus_space,
)
from .modules import (
    ModuleSpace,
    cauchy_schwarz_avalued,
    cauchy_schwarz_scalar,
    check_module_axioms,
    complete_module,
    completeness_equiv,
    inner_continuity,
    norm_avalued,
    norm_m,
    bridge_gap,
)
from .order import (
    check_cone,
    is_positive,
    leq,
    norm_zero,
    sqrt_positive,
)
from .report import Report, Record
from .tolerance import Tolerance, resolve

SUITES = ("algebra", "order", "metric", "completion", "cauchy-schwarz")
DEFAULT_ALGEBRAS = ("C1", "C2", "C4", "M2", "C2+M2")
DEFAULT_SAMPLES = 1000
DEFAULT_SEQUENCES = 200
MODULE_RANK = 2


@dataclass
class Context:
    algebra: AlgebraDescriptor | None
    rng: np.random.Generator
    samples: int
    tol: Tolerance
    grid: tuple = DEFAULT_GRID
    depth: int = DEFAULT_DEPTH
    sequences: int = DEFAULT_SEQUENCES


@dataclass
class Outcome:
    passed: bool
    samples: int
    violations: int = 0
    witness: object = None
    details: dict = field(default_factory=dict)


@dataclass(frozen=True)
class Check:
    name: str
    anchor: str
    suite: str
    fn: Callable[[Context], Outcome]
    per_algebra: bool = True
    commutative_only: bool = False


REGISTRY: list = []


def check(name: str, anchor: str, suite: str, *, per_algebra: bool = True, commutative_only: bool = False):
    def register(fn):
        REGISTRY.append(Check(name, anchor, suite, fn, per_algebra, commutative_only))
        return fn
    return register


class _Tally:
    """Counts violations and keeps the first witness."""

    def __init__(self):
        self.count = 0
        self.witness = None

    def fail(self, witness):
        if self.count == 0:
            self.witness = witness
        self.count += 1

    def outcome(self, samples, **details) -> Outcome:
        return Outcome(self.count == 0, samples, self.count, self.witness, details)


def _elements(ctx: Context, count: int) -> list:
    return [ctx.algebra.random(ctx.rng) for _ in range(count)]


def _norms(elements: Sequence[Element]) -> np.ndarray:
    return batch.norms(batch.stack(elements)) if elements else np.zeros(0)


# algebra suite
#
# Laws run on whole stacks of samples (one numpy pass per block); the first
# CROSS samples are also pushed through the per-element API and compared.

CROSS = 20


def _flag(t: _Tally, ok: np.ndarray, law: str, **values) -> None:
    for i in np.flatnonzero(~np.asarray(ok)):
        t.fail({"sample": int(i), "law": law, **{k: float(v[i]) for k, v in values.items()}})


def _bound(ctx, scale):
    return ctx.tol.abs_tol + ctx.tol.rel_tol * scale


def _cross(ctx, count):
    return range(min(CROSS, count))


def _complex_samples(rng, count):
    return rng.standard_normal(count) + 1j * rng.standard_normal(count)


@check("cstar-identity", "cstar-identity", "algebra")
def _cstar_identity(ctx):
    t = _Tally()
    x = batch.random(ctx.algebra, ctx.rng, ctx.samples)
    nx = batch.norms(x)
    nxx = batch.norms(batch.mul(batch.adjoint(x), x))
    _flag(t, np.abs(nxx - nx ** 2) <= _bound(ctx, nx ** 2), "||x*x|| = ||x||^2", lhs=nxx, rhs=nx ** 2)
    for i in _cross(ctx, ctx.samples):
        e = batch.unstack(ctx.algebra, x, i)
        if abs(op_norm(involution(e) * e) - op_norm(e) ** 2) > ctx.tol.bound(op_norm(e) ** 2):
            t.fail({"sample": i, "law": "element API"})
    return t.outcome(ctx.samples)


@check("banach-star", "banach-star-laws", "algebra")
def _banach_star(ctx):
    t = _Tally()
    x = batch.random(ctx.algebra, ctx.rng, ctx.samples)
    y = batch.random(ctx.algebra, ctx.rng, ctx.samples)
    nx, ny = batch.norms(x), batch.norms(y)
    nxy = batch.norms(batch.mul(x, y))
    nstar = batch.norms(batch.adjoint(x))
    _flag(t, nxy <= nx * ny + _bound(ctx, nx * ny), "submultiplicative", lhs=nxy, rhs=nx * ny)
    _flag(t, np.abs(nstar - nx) <= _bound(ctx, nx), "star-isometry", lhs=nstar, rhs=nx)
    nsum = batch.norms(batch.add(x, y))
    _flag(t, nsum <= nx + ny + _bound(ctx, nx + ny), "triangle", lhs=nsum, rhs=nx + ny)
    for i in _cross(ctx, ctx.samples):
        a, b = batch.unstack(ctx.algebra, x, i), batch.unstack(ctx.algebra, y, i)
        if op_norm(elem_mul(a, b)) > op_norm(a) * op_norm(b) + ctx.tol.bound(op_norm(a) * op_norm(b)):
            t.fail({"sample": i, "law": "element API"})
    return t.outcome(ctx.samples)


@check("involution-laws", "involution-laws", "algebra")
def _involution(ctx):
    t = _Tally()
    x = batch.random(ctx.algebra, ctx.rng, ctx.samples)
    y = batch.random(ctx.algebra, ctx.rng, ctx.samples)
    lam = _complex_samples(ctx.rng, ctx.samples)
    nx, ny = batch.norms(x), batch.norms(y)
    xss = batch.adjoint(batch.adjoint(x))
    exact = np.all([np.all(a == b, axis=(-2, -1)) for a, b in zip(xss, x)], axis=0)
    _flag(t, exact, "x** = x")
    gap = batch.norms(batch.sub(batch.adjoint(batch.mul(x, y)), batch.mul(batch.adjoint(y), batch.adjoint(x))))
    _flag(t, gap <= _bound(ctx, nx * ny), "(xy)* = y*x*", gap=gap)
    gap = batch.norms(batch.sub(batch.adjoint(batch.add(x, y)), batch.add(batch.adjoint(x), batch.adjoint(y))))
    _flag(t, gap <= _bound(ctx, nx + ny), "(x+y)* = x*+y*", gap=gap)
    gap = batch.norms(batch.sub(batch.adjoint(batch.scale(x, lam)), batch.scale(batch.adjoint(x), lam.conj())))
    _flag(t, gap <= _bound(ctx, np.abs(lam) * nx), "(lx)* = conj(l)x*", gap=gap)
    for i in _cross(ctx, ctx.samples):
        a, b = batch.unstack(ctx.algebra, x, i), batch.unstack(ctx.algebra, y, i)
        if not all(np.array_equal(u, v) for u, v in zip(involution(involution(a)).blocks, a.blocks)):
            t.fail({"sample": i, "law": "element API x** = x"})
        if not involution(elem_mul(a, b)).close(elem_mul(involution(b), involution(a)), ctx.tol):
            t.fail({"sample": i, "law": "element API (xy)* = y*x*"})
    return t.outcome(ctx.samples)


@check("hermitian-decomposition", "hermitian-decomposition", "algebra")
def _hermitian_decomposition(ctx):
    t = _Tally()
    alg = ctx.algebra
    x = batch.random(alg, ctx.rng, ctx.samples)
    nx = batch.norms(x)
    a, b = batch.hermitian_parts(x)
    _flag(t, batch.hermitian(a, ctx.tol) & batch.hermitian(b, ctx.tol), "parts hermitian")
    gap = batch.norms(batch.sub(batch.add(a, batch.scale(b, 1j)), x))
    _flag(t, gap <= _bound(ctx, nx), "reconstruction", gap=gap)
    # uniqueness: decomposing a' + i b' returns (a', b')
    a2, b2 = batch.random_hermitian(alg, ctx.rng, ctx.samples), batch.random_hermitian(alg, ctx.rng, ctx.samples)
    ra, rb = batch.hermitian_parts(batch.add(a2, batch.scale(b2, 1j)))
    _flag(t, batch.close(ra, a2, ctx.tol) & batch.close(rb, b2, ctx.tol), "uniqueness")
    for i in _cross(ctx, ctx.samples):
        e = batch.unstack(alg, x, i)
        ea, eb = hermitian_parts(e)
        if not (is_hermitian(ea, ctx.tol) and is_hermitian(eb, ctx.tol) and (ea + eb * 1j).close(e, ctx.tol)):
            t.fail({"sample": i, "law": "element API"})
    return t.outcome(ctx.samples)


def _unitized(alg, rng, count):
    return batch.random(alg, rng, count), _complex_samples(rng, count)


def _umul(p, q):
    """``(a, alpha)(b, beta) = (ab + beta a + alpha b, alpha beta)`` on stacks."""
    (a, alpha), (b, beta) = p, q
    return batch.add(batch.add(batch.mul(a, b), batch.scale(a, beta)), batch.scale(b, alpha)), alpha * beta


def _direct(p):
    """The *-isomorphism into ``A + C``: ``(a, alpha) -> (a + alpha I, alpha)``."""
    a, alpha = p
    count = len(alpha)
    shifted = batch.add(a, batch.scale(tuple(np.broadcast_to(np.eye(m), (count, m, m)) for m in
                                             (blk.shape[-1] for blk in a)), alpha))
    return shifted + (alpha.reshape(count, 1, 1).astype(np.complex128),)


@check("unitization-product", "unitization-product", "algebra")
def _unitization(ctx):
    t = _Tally()
    alg = ctx.algebra
    n = ctx.samples
    p, q, r = (_unitized(alg, ctx.rng, n) for _ in range(3))
    lhs, rhs = _umul(_umul(p, q), r), _umul(p, _umul(q, r))
    _flag(t, batch.close(_direct(lhs), _direct(rhs), ctx.tol), "associativity")
    # the image in A + C is computed by ordinary block products: an independent oracle
    _flag(t, batch.close(_direct(_umul(p, q)), batch.mul(_direct(p), _direct(q)), ctx.tol), "product formula")
    zero = np.zeros(n, dtype=complex)
    emb = _umul((p[0], zero), (q[0], zero))
    _flag(t, batch.close(emb[0], batch.mul(p[0], q[0]), ctx.tol) & (emb[1] == 0), "embedding multiplicative")
    unit = (batch.scale(p[0], 0.0), np.ones(n, dtype=complex))
    _flag(t, batch.close(_direct(_umul(unit, p)), _direct(p), ctx.tol)
          & batch.close(_direct(_umul(p, unit)), _direct(p), ctx.tol), "unit")
    star = (batch.adjoint(p[0]), p[1].conj())
    _flag(t, batch.close(_direct(star), batch.adjoint(_direct(p)), ctx.tol), "involution")
    for i in _cross(ctx, n):
        ep, eq = (UnitizedElement(batch.unstack(alg, z[0], i), z[1][i]) for z in (p, q))
        prod = unitize_mul(ep, eq)
        if not prod.as_direct_sum().close(ep.as_direct_sum() * eq.as_direct_sum(), ctx.tol):
            t.fail({"sample": i, "law": "element API"})
    return t.outcome(n)


@check("commutativity", "commutative-descriptor", "algebra")
def _commutativity(ctx):
    count = min(ctx.samples, 100)
    x, y = batch.random(ctx.algebra, ctx.rng, count), batch.random(ctx.algebra, ctx.rng, count)
    commuting = int(np.sum(batch.close(batch.mul(x, y), batch.mul(y, x), ctx.tol)))
    expected = ctx.algebra.commutative
    ok = (commuting == count) if expected else (count == 0 or commuting < count)
    witness = None if ok else {"commutative_descriptor": expected, "commuting_pairs": commuting}
    return Outcome(ok, count, 0 if ok else 1, witness, {"commuting_pairs": commuting})


# order suite


def _ordered(ctx, n):
    a = batch.random_positive(ctx.algebra, ctx.rng, n)
    return a, batch.add(a, batch.random_positive(ctx.algebra, ctx.rng, n))


@check("square-root", "positive-square-root", "order")
def _square_root(ctx):
    t = _Tally()
    n = ctx.samples
    rel = Tolerance(ctx.tol.abs_tol, max(ctx.tol.rel_tol, 1e-8))
    a = batch.random_positive(ctx.algebra, ctx.rng, n)
    b = batch.sqrt_positive(a)
    na = batch.norms(a)
    residual = batch.norms(batch.sub(batch.mul(b, b), a))
    _flag(t, residual <= rel.abs_tol + rel.rel_tol * na, "b^2 = a", residual=residual)
    _flag(t, batch.positive(b, ctx.tol), "root positive")
    # ((al^2 + be^2) a)^(1/2) = |al + i be| a^(1/2)
    z = _complex_samples(ctx.rng, n)
    lhs = batch.sqrt_positive(batch.scale(a, np.abs(z) ** 2))
    _flag(t, batch.close(lhs, batch.scale(b, np.abs(z)), rel), "scaling")
    for i in _cross(ctx, n):
        e = batch.unstack(ctx.algebra, a, i)
        root = sqrt_positive(e, ctx.tol)
        if not root.close(batch.unstack(ctx.algebra, b, i), rel) or op_norm(root * root - e) > rel.bound(op_norm(e)):
            t.fail({"sample": i, "law": "element API"})
    return t.outcome(n)


@check("root-monotonicity", "root-monotonicity", "order")
def _root_monotonicity(ctx):
    t = _Tally()
    a, b = _ordered(ctx, ctx.samples)
    ok = batch.leq(batch.sqrt_positive(a), batch.sqrt_positive(b), ctx.tol)
    _flag(t, ok, "a <= b implies a^(1/2) <= b^(1/2)")
    for i in _cross(ctx, ctx.samples):
        ea, eb = batch.unstack(ctx.algebra, a, i), batch.unstack(ctx.algebra, b, i)
        verdict = leq(sqrt_positive(ea, ctx.tol), sqrt_positive(eb, ctx.tol), ctx.tol)
        if not verdict.holds:
            t.fail({"sample": i, "law": "element API", "min_eigenvalue": verdict.min_eigenvalue})
    return t.outcome(ctx.samples)


@check("order-translation", "order-translation", "order")
def _order_translation(ctx):
    t = _Tally()
    a, b = _ordered(ctx, ctx.samples)
    c = batch.random_hermitian(ctx.algebra, ctx.rng, ctx.samples)
    _flag(t, batch.leq(batch.add(a, c), batch.add(b, c), ctx.tol), "a + c <= b + c")
    for i in _cross(ctx, ctx.samples):
        ea, eb, ec = (batch.unstack(ctx.algebra, z, i) for z in (a, b, c))
        if not leq(ea + ec, eb + ec, ctx.tol).holds:
            t.fail({"sample": i, "law": "element API"})
    return t.outcome(ctx.samples)


@check("conjugation-monotonicity", "conjugation-monotonicity", "order")
def _conjugation(ctx):
    t = _Tally()
    a, b = _ordered(ctx, ctx.samples)
    c = batch.random(ctx.algebra, ctx.rng, ctx.samples)
    cs = batch.adjoint(c)
    lhs = batch.hermitian_parts(batch.mul(batch.mul(cs, a), c))[0]
    rhs = batch.hermitian_parts(batch.mul(batch.mul(cs, b), c))[0]
    _flag(t, batch.leq(lhs, rhs, ctx.tol), "c*ac <= c*bc")
    for i in _cross(ctx, ctx.samples):
        ea, eb, ec = (batch.unstack(ctx.algebra, z, i) for z in (a, b, c))
        if not leq(hermitian_parts(ec.star() * ea * ec)[0], hermitian_parts(ec.star() * eb * ec)[0], ctx.tol).holds:
            t.fail({"sample": i, "law": "element API"})
    return t.outcome(ctx.samples)


@check("normality", "normal-cone", "order")
def _normality(ctx):
    t = _Tally()
    a, b = _ordered(ctx, ctx.samples)
    na, nb = batch.norms(a), batch.norms(b)
    _flag(t, na <= nb + ctx.tol.abs_tol, "||a|| <= ||b||", norm_a=na, norm_b=nb)
    ratio = np.divide(na, nb, out=np.zeros_like(na), where=nb > 0)
    return t.outcome(ctx.samples, max_ratio=float(ratio.max()) if len(ratio) else 0.0)


@check("cone-axioms", "positive-cone", "order")
def _cone_axioms(ctx):
    seed = int(ctx.rng.integers(2 ** 63))
    report = check_cone(ctx.algebra, ctx.samples, seed, ctx.tol)
    ok = report.passed and report.normality_constant <= 1 + ctx.tol.abs_tol and not report.violations
    witness = None if ok else (report.violations[0] if report.violations else report.to_json())
    return Outcome(ok, ctx.samples, len(report.violations), witness,
                   {"normality_constant": report.normality_constant})


@check("cone-closedness", "positive-cone-closed", "order")
def _cone_closed(ctx):
    """Limits of positive sequences stay positive: ``a_k = proj(a + h / k^2) -> a``."""
    t = _Tally()
    count = min(ctx.samples, 200)
    a = batch.random_positive(ctx.algebra, ctx.rng, count)
    h = batch.random_hermitian(ctx.algebra, ctx.rng, count)
    term = None
    for k in (10, 100, 1000, 10000):
        term = _project(batch.add(a, batch.scale(h, 1.0 / k ** 2)))
        _flag(t, batch.positive(term, ctx.tol), f"term {k} positive")
    _flag(t, batch.positive(a, ctx.tol), "limit positive")
    gap = batch.norms(batch.sub(term, a))
    _flag(t, gap <= 1e-8 * (1 + batch.norms(h)) + _bound(ctx, batch.norms(a)), "limit", gap=gap)
    return t.outcome(count)


def _project(h: tuple) -> tuple:
    """Nearest positive elements (negative eigenvalues clipped to zero)."""
    root = batch.sqrt_positive(h)
    return batch.mul(root, root)


def _norm_zero(x: tuple) -> tuple:
    a, b = batch.hermitian_parts(x)
    return batch.sqrt_positive(batch.add(batch.mul(a, a), batch.mul(b, b)))


@check("norm-zero-axioms", "commutative-modulus-norm", "order", commutative_only=True)
def _norm_zero_axioms(ctx):
    t = _Tally()
    alg = ctx.algebra
    n = ctx.samples
    if op_norm(norm_zero(alg.zero(), ctx.tol)) != 0.0:
        t.fail({"law": "norm of zero"})
    x, y = batch.random(alg, ctx.rng, n), batch.random(alg, ctx.rng, n)
    gamma = _complex_samples(ctx.rng, n)
    nx, ny = _norm_zero(x), _norm_zero(y)
    _flag(t, batch.positive(nx, ctx.tol) & (batch.norms(nx) > ctx.tol.abs_tol), "definiteness")
    _flag(t, batch.close(_norm_zero(batch.scale(x, gamma)), batch.scale(nx, np.abs(gamma)), ctx.tol), "homogeneity")
    _flag(t, batch.leq(_norm_zero(batch.add(x, y)), batch.add(nx, ny), ctx.tol), "triangle")
    for i in _cross(ctx, n):
        ex, ey = batch.unstack(alg, x, i), batch.unstack(alg, y, i)
        if not norm_zero(ex, ctx.tol).close(batch.unstack(alg, nx, i), ctx.tol):
            t.fail({"sample": i, "law": "element API"})
        if not leq(norm_zero(ex + ey, ctx.tol), norm_zero(ex, ctx.tol) + norm_zero(ey, ctx.tol), ctx.tol).holds:
            t.fail({"sample": i, "law": "element API triangle"})
    return t.outcome(n)


@check("norm-zero-fixed-point", "modulus-fixed-point", "order", commutative_only=True)
def _norm_zero_fixed(ctx):
    t = _Tally()
    a = batch.random_positive(ctx.algebra, ctx.rng, ctx.samples)
    gap = batch.norms(batch.sub(_norm_zero(a), a))
    _flag(t, gap <= _bound(ctx, batch.norms(a)), "||a||_0 = a", gap=gap)
    for i in _cross(ctx, ctx.samples):
        e = batch.unstack(ctx.algebra, a, i)
        if op_norm(norm_zero(e, ctx.tol) - e) > ctx.tol.bound(op_norm(e)):
            t.fail({"sample": i, "law": "element API"})
    return t.outcome(ctx.samples)


# metric suite


def _complex_points(rng, count):
    return [complex(a, b) for a, b in rng.standard_normal((count, 2))]


@check("scaled-modulus-axioms", "scaled-modulus-metric", "metric", per_algebra=False)
def _scaled_modulus(ctx):
    t = _Tally()
    pts = _complex_points(ctx.rng, 50)
    for alpha in (0.5, 1.0, 2.0):
        report = check_metric_axioms(scaled_modulus_space(alpha), pts, ctx.tol)
        if not report.passed:
            t.fail({"alpha": alpha, "failed": report.failed()})
    return t.outcome(3 * len(pts))


@check("mutation-detection", "metric-axioms", "metric", per_algebra=False)
def _mutations(ctx):
    t = _Tally()
    table = scaled_modulus_space(2.0).tabulate(_complex_points(ctx.rng, 12))
    witnesses = {}
    for axiom in ("C1", "C2", "C3", "C4"):
        broken = mutate(table, axiom, ctx.rng)
        report = check_metric_axioms(broken, tol=ctx.tol)
        result = report.results[axiom]
        if result.passed or result.witness is None:
            t.fail({"axiom": axiom})
        else:
            witnesses[axiom] = [str(w) for w in result.witness]
    return t.outcome(4, witnesses=witnesses)


@check("pullback-metric", "metric-axioms", "metric", commutative_only=True)
def _pullback(ctx):
    alg = ctx.algebra
    pts = list(range(20))
    images = {p: alg.random(ctx.rng) for p in pts}
    space = MetricSpace(alg, lambda x, y: norm_zero(images[x] - images[y], ctx.tol), pts, name="pullback")
    report = check_metric_axioms(space, tol=ctx.tol)
    relabelled = check_metric_axioms(space.relabel({p: f"q{p}" for p in pts}), tol=ctx.tol)
    ok = report.passed and relabelled.passed
    return Outcome(ok, len(pts), 0 if ok else 1, None if ok else report.to_json())


@check("relabel-invariance", "metric-pullback-invariance", "metric", per_algebra=False)
def _relabel(ctx):
    t = _Tally()
    table = scaled_modulus_space(1.0).tabulate(_complex_points(ctx.rng, 10))
    for axiom in (None, "C1", "C2", "C3", "C4"):
        space = table if axiom is None else mutate(table, axiom, ctx.rng)
        mapping = {p: f"r{i}" for i, p in enumerate(space.points)}
        a = check_metric_axioms(space, tol=ctx.tol)
        b = check_metric_axioms(space.relabel(mapping), tol=ctx.tol)
        if {k: r.passed for k, r in a.results.items()} != {k: r.passed for k, r in b.results.items()}:
            t.fail({"mutation": axiom})
    return t.outcome(5)


def generate_sequences(rng: np.random.Generator, count: int) -> list:
    """A mix of convergent, Cauchy-but-not-convergent-in-the-base and divergent
    sequences, each with the target it is probed against."""
    spaces = {alpha: scaled_modulus_space(alpha) for alpha in (0.5, 1.0, 2.0)}
    rational = rational_line(alpha=2.0)
    hermitian = _matrix_valued_space()
    out = []
    for k in range(count):
        kind = k % 6
        alpha = (0.5, 1.0, 2.0)[int(rng.integers(3))]
        space = spaces[alpha]
        x = complex(*rng.standard_normal(2))
        phase = complex(*rng.standard_normal(2))
        phase /= abs(phase)
        if kind == 0:
            p = float(rng.uniform(0.5, 3.0))
            r = float(rng.uniform(0.1, 5.0))
            seq = PointSequence(space, lambda n, x=x, r=r, p=p, ph=phase: x + ph * r / n ** p, name="power-decay")
            out.append((seq, x, "convergent"))
        elif kind == 1:
            q = float(rng.uniform(0.3, 0.95))
            seq = PointSequence(space, lambda n, x=x, q=q, ph=phase: x + ph * q ** n, name="geometric")
            out.append((seq, x, "convergent"))
        elif kind == 2:
            num = int(rng.integers(2, 50))
            target = Fraction(math.isqrt(num * 10 ** 6), 10 ** 3)
            seq = PointSequence(rational, sqrt_truncations(num), name=f"sqrt({num}) truncations")
            label = "cauchy-not-convergent" if math.isqrt(num) ** 2 != num else "convergent"
            out.append((seq, target if label != "convergent" else Fraction(math.isqrt(num)), label))
        elif kind == 3:
            y = x + complex(*rng.standard_normal(2))
            seq = PointSequence(space, lambda n, x=x, y=y: x if n % 2 else y, name="alternating")
            out.append((seq, x, "divergent"))
        elif kind == 4:
            seq = PointSequence(space, lambda n, x=x, ph=phase: x + ph * math.log(n), name="log-growth")
            out.append((seq, x, "divergent"))
        else:
            r = float(rng.uniform(0.1, 2.0))
            q = float(rng.uniform(0.5, 0.9))
            seq = PointSequence(hermitian, lambda n, r=r, q=q: r * q ** n, name="matrix-valued geometric")
            out.append((seq, 0.0, "convergent"))
    return out


def _matrix_valued_space() -> MetricSpace:
    """``d(s, t) = |s - t| H`` for a fixed positive-definite ``H`` in ``M2``."""
    alg = AlgebraDescriptor((2,))
    h = np.array([[2.0, 0.5 - 0.5j], [0.5 + 0.5j, 1.0]])
    return MetricSpace(alg, lambda s, t: Element(alg, [abs(complex(s) - complex(t)) * h]), None,
                       name="M2-scaled line", contains=lambda v: isinstance(v, (int, float, complex)))


def compare_verdicts(norm_verdict, cone_verdict) -> list:
    """Probe positions where norm-style and cone-style verdicts disagree."""
    diffs = []
    for kind, a_log, b_log in (("converges", norm_verdict.probe_log, cone_verdict.probe_log),
                               ("cauchy", norm_verdict.cauchy_log, cone_verdict.cauchy_log)):
        for a, b in zip(a_log, b_log):
            if (a.n is None) != (b.n is None) or a.n != b.n:
                diffs.append({"kind": kind, "eps": a.probe, "norm_N": a.n, "cone_N": b.n,
                              "max_observed": a.max_observed})
    return diffs


@check("convergence-equivalence", "convergence-equivalence", "metric", per_algebra=False)
def _convergence_equivalence(ctx):
    t = _Tally()
    kinds = {}
    for k, (seq, target, label) in enumerate(generate_sequences(ctx.rng, ctx.sequences)):
        vn = converges_norm(seq, target, ctx.grid, ctx.depth, ctx.tol)
        vc = converges_cone(seq, target, canonical_witnesses(seq.space.algebra, ctx.grid), ctx.depth, ctx.tol)
        diffs = compare_verdicts(vn, vc)
        kinds[label] = kinds.get(label, 0) + 1
        if diffs:
            t.fail({"sequence": k, "name": seq.name, "counterexample_candidate": diffs[0]})
    return t.outcome(ctx.sequences, kinds=dict(sorted(kinds.items())))


@check("convergent-implies-cauchy", "convergent-implies-cauchy", "metric", per_algebra=False)
def _convergent_cauchy(ctx):
    """A satisfied probe ``||d(x_n, x)|| < eps`` from ``N`` on forces
    ``||d(x_n, x_m)|| < 2 eps`` for all sampled ``n, m >= N``."""
    t = _Tally()
    checked = 0
    for k, (seq, target, label) in enumerate(generate_sequences(ctx.rng, ctx.sequences)):
        verdict = converges_norm(seq, target, ctx.grid, ctx.depth, ctx.tol)
        if verdict.converges and not verdict.cauchy:
            t.fail({"sequence": k, "name": seq.name, "law": "converges but not cauchy"})
        pairs, stack = _pairwise(seq, pair_samples(ctx.depth))
        pair_norms = batch.norms(stack)
        for entry in verdict.probe_log:
            if not entry.satisfied:
                continue
            checked += 1
            mask = np.array([min(a, b) >= entry.n for a, b in pairs], dtype=bool)
            worst = float(pair_norms[mask].max()) if mask.any() else 0.0
            if not worst < 2 * entry.probe:
                t.fail({"sequence": k, "eps": entry.probe, "N": entry.n, "max_pair_distance": worst})
    return t.outcome(ctx.sequences, satisfied_probes=checked)


@check("unitization-invariance", "unitization-invariance", "metric", per_algebra=False)
def _unitization_invariance(ctx):
    t = _Tally()
    pts = _complex_points(ctx.rng, 15)
    base = scaled_modulus_space(2.0).tabulate(pts)
    for axiom in (None, "C1", "C2", "C3", "C4"):
        space = base if axiom is None else mutate(base, axiom, ctx.rng)
        a = check_metric_axioms(space, tol=ctx.tol)
        b = check_metric_axioms(space.unitized(), tol=ctx.tol)
        if {k: r.passed for k, r in a.results.items()} != {k: r.passed for k, r in b.results.items()}:
            t.fail({"mutation": axiom, "law": "axiom verdicts"})
    count = min(ctx.sequences, 20)
    for k, (seq, target, _) in enumerate(generate_sequences(ctx.rng, count)):
        lifted = PointSequence(seq.space.unitized(), seq.at, name=seq.name)
        va = converges_norm(seq, target, ctx.grid, ctx.depth, ctx.tol)
        vb = converges_norm(lifted, target, ctx.grid, ctx.depth, ctx.tol)
        if va.probes_satisfied() != vb.probes_satisfied() or va.cauchy != vb.cauchy:
            t.fail({"sequence": k, "law": "sequence verdicts"})
    return t.outcome(5 + count)


@check("balls-and-closure", "closure-density", "metric", per_algebra=False)
def _balls(ctx):
    t = _Tally()
    pts = _complex_points(ctx.rng, 40)
    space = scaled_modulus_space(2.0).restrict(pts)
    x = pts[0]
    for eps in (0.1, 0.5, 1.0, 2.0):
        by_norm = ball(space, x, eps)
        by_cone = ball_cone(space, x, space.algebra.scalar(eps), tol=ctx.tol)
        if by_norm != by_cone:
            t.fail({"eps": eps, "law": "ball vs ball_cone"})
        expected = [y for y in pts if 2 * abs(y - x) < eps]
        if by_norm != expected:
            t.fail({"eps": eps, "law": "ball formula"})
    if ball(space, x, 1e9) != pts:
        t.fail({"law": "large ball"})
    if closure(space, pts) != pts:
        t.fail({"law": "closure of X"})
    subset = pts[:10]
    if closure(space, subset) != subset:
        t.fail({"law": "isolated points"})
    # a coarse rational grid is dense in a finer one at the coarse resolution
    line = rational_line(alpha=2.0)
    fine = line.restrict([Fraction(k, 200) for k in range(201)])
    coarse = [Fraction(k, 20) for k in range(21)]
    # worst gap 1/40, so the norm-distance to the coarse grid is at most 2/40
    if not is_dense(fine, coarse, grid=[2 * 0.025 + 1e-12]):
        t.fail({"law": "grid density"})
    if is_dense(fine, coarse, grid=[0.025]):
        t.fail({"law": "grid density is resolution dependent"})
    return t.outcome(len(pts))


# completion suite


def rational_grid_space(points: int = 200):
    """The rational line (values ``(|p-q|, 2|p-q|)``) sampled on ``k / points``."""
    base = rational_line(alpha=2.0)
    grid = [Fraction(k, points) for k in range(points)]
    return base, grid


def irrational_points(space: CompletedSpace, numbers: Sequence[int]) -> list:
    """Completion points ``sqrt(n / 7)`` for non-square ``n / 7``, by decimal truncation."""
    return [space.point(sqrt_truncations(n, 7), truncation_modulus(10, 2.0), name=f"sqrt({n}/7)")
            for n in numbers]


@check("isometric-embedding", "completion-isometric-embedding", "completion", per_algebra=False)
def _isometric_embedding(ctx):
    base, grid = rational_grid_space()
    C = CompletedSpace(base)
    emb = [C.embed(g) for g in grid]
    t = _Tally()
    eps = ctx.grid[-1]
    for i, p in enumerate(emb):
        for j in range(i, len(emb)):
            d = C.dist_s(p, emb[j], eps)
            if not all(np.array_equal(a, b) for a, b in zip(d.blocks, base.dist(grid[i], grid[j]).blocks)):
                t.fail({"pair": [str(grid[i]), str(grid[j])]})
            if i != j and C.equivalent(p, emb[j], min(eps, 1e-3)):
                t.fail({"pair": [str(grid[i]), str(grid[j])], "law": "distinct embeds equivalent"})
    return t.outcome(len(grid) * (len(grid) + 1) // 2)


@check("density", "completion-density", "completion", per_algebra=False)
def _density(ctx):
    base, grid = rational_grid_space()
    C = CompletedSpace(base)
    points = irrational_points(C, range(1, 30)) + [C.embed(g) for g in grid[::20]]
    t = _Tally()
    for p in points:
        for eps in ctx.grid:
            w = p.approximant(eps)
            if not op_norm(C.dist_s(p, C.embed(w), eps)) < 2 * eps:
                t.fail({"point": p.name, "eps": eps})
    return t.outcome(len(points) * len(ctx.grid))


@check("off-grid-limit", "completion-complete", "completion", per_algebra=False)
def _off_grid_limit(ctx):
    base, grid = rational_grid_space()
    C = CompletedSpace(base)
    t = _Tally()
    targets = [2, 3, 5, 6, 10]
    for n in targets:
        seq = PointSequence(base, sqrt_truncations(n, 7), truncation_modulus(10, 2.0), name=f"sqrt({n}/7)")
        report = complete_check(C, [embedded_sequence(C, seq)], ctx.grid, depth=64, tol=ctx.tol)
        if not report.passed:
            t.fail({"target": seq.name, "report": report.to_json()})
        limit = C.from_sequence(seq)
        nearest = min(op_norm(C.dist_s(limit, C.embed(g), ctx.grid[-1])) for g in grid)
        if not nearest > ctx.grid[-1]:
            t.fail({"target": seq.name, "law": "limit lies on the grid"})
    return t.outcome(len(targets), smallest_eps=ctx.grid[-1])


@check("eps-consistency", "completion-metric-limit", "completion", per_algebra=False)
def _eps_consistency(ctx):
    base, grid = rational_grid_space()
    C = CompletedSpace(base)
    pts = irrational_points(C, range(1, 12)) + [C.embed(g) for g in grid[::40]]
    t = _Tally()
    count = 0
    for i, p in enumerate(pts):
        for q in pts[i:]:
            for e1 in ctx.grid:
                for e2 in ctx.grid:
                    count += 1
                    gap = op_norm(C.dist_s(p, q, e1) - C.dist_s(p, q, e2))
                    if gap > e1 + e2:
                        t.fail({"pair": [p.name, q.name], "eps": [e1, e2], "gap": gap})
            for eps in ctx.grid:
                if op_norm(C.dist_s(p, q, eps) - C.dist_s(q, p, eps)) != 0.0:
                    t.fail({"pair": [p.name, q.name], "law": "symmetry"})
    return t.outcome(count)


@check("equivalence-laws", "completion-quotient", "completion", per_algebra=False)
def _equivalence_laws(ctx):
    base = rational_line(alpha=2.0)
    C = CompletedSpace(base)
    t = _Tally()
    count = 0
    for n in range(2, 14):
        # three representatives of one limit: decimal, binary, shifted decimal
        p = C.point(sqrt_truncations(n, 7), truncation_modulus(10, 2.0), f"dec({n})")
        q = C.point(binary_roundings(n, 7), truncation_modulus(2, 2.0), f"bin({n})")
        r = C.point(lambda k, n=n: sqrt_truncations(n, 7)(k + 2), truncation_modulus(10, 2.0), f"dec+2({n})")
        for eps in ctx.grid:
            count += 1
            if not (C.equivalent(p, p, eps) and C.equivalent(q, q, eps)):
                t.fail({"law": "reflexive", "n": n, "eps": eps})
            if C.equivalent(p, q, eps) != C.equivalent(q, p, eps):
                t.fail({"law": "symmetric", "n": n, "eps": eps})
            if C.equivalent(p, q, eps) and C.equivalent(q, r, eps):
                if not C.equivalent(p, r, 2 * eps + ctx.tol.abs_tol):
                    t.fail({"law": "transitive", "n": n, "eps": eps})
            if not (C.equivalent(p, q, eps) and C.equivalent(q, r, eps)):
                t.fail({"law": "same limit not equivalent", "n": n, "eps": eps})
    # 1/n and 1/n^2 both represent 0
    zero = C.embed(Fraction(0))
    harmonic = C.point(lambda k: Fraction(1, k), lambda eps: math.ceil(2 / eps) + 1, "1/n")
    square = C.point(lambda k: Fraction(1, k * k), lambda eps: math.ceil(math.sqrt(2 / eps)) + 1, "1/n^2")
    for eps in ctx.grid[:4]:
        count += 1
        if not (C.equivalent(harmonic, zero, eps) and C.equivalent(square, zero, eps)):
            t.fail({"law": "null sequences", "eps": eps})
    return t.outcome(count)


@check("uniqueness", "completion-uniqueness", "completion", per_algebra=False)
def _uniqueness(ctx):
    base, grid = rational_grid_space()
    first, second = CompletedSpace(base, "decimal"), CompletedSpace(base, "binary")
    numbers = [int(v) for v in ctx.rng.choice(np.arange(1, 60), size=12, replace=False)]
    pairs = []
    for a in numbers:
        for b in numbers[:4]:
            p1 = first.point(sqrt_truncations(a, 7), truncation_modulus(10, 2.0), f"sqrt({a}/7)")
            q1 = first.point(sqrt_truncations(b, 7), truncation_modulus(10, 2.0), f"sqrt({b}/7)")
            p2 = second.point(binary_roundings(a, 7), truncation_modulus(2, 2.0), f"sqrt({a}/7)")
            q2 = second.point(binary_roundings(b, 7), truncation_modulus(2, 2.0), f"sqrt({b}/7)")
            pairs.append(((p1, q1), (p2, q2)))
        g = grid[int(ctx.rng.integers(len(grid)))]
        pairs.append(((first.point(sqrt_truncations(a, 7), truncation_modulus(10, 2.0), f"sqrt({a}/7)"),
                       first.embed(g)),
                      (second.point(binary_roundings(a, 7), truncation_modulus(2, 2.0), f"sqrt({a}/7)"),
                       second.embed(g))))
    t = _Tally()
    for eps in ctx.grid:
        for bad in compare_completions(first, second, pairs, eps):
            t.fail({"eps": eps, **bad})
    return t.outcome(len(pairs) * len(ctx.grid))


def transport_fixture(theta=(0.7, -1.3), shift=(0.5 - 0.25j, -1.0 + 2.0j)):
    """``W = C^2`` with the coordinate-modulus metric, ``X = C^2`` with ``||.||_0``
    and ``T(u) = (e^(i t1) conj(u1), e^(i t2) u2) + v``: an isometry that is
    neither linear nor complex-linear in the original coordinates."""
    X = coordinate_space(2)
    alg = X.algebra
    W = MetricSpace(alg, lambda u, v: alg.diagonal([abs(u[0] - v[0]), abs(u[1] - v[1])]), None,
                    name="C^2 (modulus metric)", contains=lambda u: isinstance(u, tuple) and len(u) == 2)
    r1, r2 = np.exp(1j * theta[0]), np.exp(1j * theta[1])

    def T(u):
        return (r1 * u[0].conjugate() + shift[0], r2 * u[1] + shift[1])

    def T_inv(x):
        return (((x[0] - shift[0]) / r1).conjugate(), (x[1] - shift[1]) / r2)

    return W, X, T, T_inv


@check("transported-structure", "transported-vector-structure", "completion", per_algebra=False)
def _transport(ctx):
    W, X, T, T_inv = transport_fixture()
    count = max(1, ctx.samples // 10) if ctx.samples else 0
    pts = [tuple(complex(*ctx.rng.standard_normal(2)) for _ in range(2)) for _ in range(3 * count)]
    V = transport_structure(W, X, T, T_inv, pts[:30], ctx.tol)
    triples = [tuple(pts[3 * k:3 * k + 3]) for k in range(count)]
    scalars = [(complex(*ctx.rng.standard_normal(2)), complex(*ctx.rng.standard_normal(2))) for _ in range(count)]
    report = check_vector_axioms(V, triples, scalars, ctx.tol)
    # a translation T(x) = x + v moves the zero to -v
    shift = (1.5 - 2j, 0.25j)
    Wt = coordinate_space(2).carrier
    Vt = transport_structure(Wt, X, lambda u: (u[0] + shift[0], u[1] + shift[1]),
                             lambda x: (x[0] - shift[0], x[1] - shift[1]), pts[:10], ctx.tol)
    zero_ok = abs(Vt.zero[0] + shift[0]) <= ctx.tol.abs_tol and abs(Vt.zero[1] + shift[1]) <= ctx.tol.abs_tol
    ok = report.passed and zero_ok
    witness = None if ok else (report.witnesses[0] if report.witnesses else {"law": "translation zero"})
    return Outcome(ok, count, len(report.witnesses) + (0 if zero_ok else 1), witness,
                   {"axioms": report.axioms, "linear": report.linear, "metric_matches": report.metric_matches})


@check("normed-completion", "normed-completion", "completion", per_algebra=False)
def _normed_completion(ctx):
    V = gaussian_rationals()
    sample = [GaussianRational(Fraction(int(a), 7), Fraction(int(b), 5))
              for a, b in ctx.rng.integers(-20, 20, size=(8, 2))]
    C = complete_normed(V, sample, ctx.tol)
    t = _Tally()
    s = exp_i_partial_sums(V)
    p = C.completed.from_sequence(s)
    shifted = C.point(lambda n: s.at(n + 3), s.modulus, "shifted partial sums")
    y = C.embed(sample[0])
    exact = complex(math.cos(1.0), math.sin(1.0))
    for eps in ctx.grid:
        value = p.approximant(eps / 3)
        if not abs(complex(value) - exact) < eps:
            t.fail({"law": "limit is e^i", "eps": eps})
        # norm of the limit vs limit of norms
        ns = C.norm_s(p, eps)
        for n in (s.modulus(eps), s.modulus(eps) + 5):
            if not op_norm(ns - V.norm(s.at(n))) < 2 * eps:
                t.fail({"law": "norm of limit", "eps": eps, "n": n})
        if not op_norm(ns - V.carrier.algebra.scalar(1.0)) < 2 * eps:
            t.fail({"law": "|e^i| = 1", "eps": eps})
    wd = check_well_defined(C, p, shifted, y, y, ctx.grid, depth=200)
    if not wd.passed:
        t.fail({"law": "well-defined sum", "report": wd.to_json()})
    # completing an already complete space changes nothing on samples
    Q = coordinate_space(2)
    CQ = complete_normed(Q, [(1 + 0j, 2j), (0.5 + 0j, -1 + 0j)], ctx.tol)
    u, v = (1 + 1j, 2 - 0.5j), (-0.25 + 0j, 3j)
    if op_norm(CQ.dist_s(CQ.embed(u), CQ.embed(v), 1e-6) - Q.dist(u, v)) != 0.0:
        t.fail({"law": "complete space unchanged"})
    # the discrete metric on C^2 is not induced by any norm
    discrete = MetricSpace(Q.algebra, lambda a, b: Q.algebra.scalar(0.0 if a == b else 1.0), None, name="discrete")
    broken = VectorizedSpace(discrete, Q.add, Q.scalar_mul, Q.zero, Q.norm)
    try:
        complete_normed(broken, [(0j, 0j), (1 + 0j, 0j)], ctx.tol)
        t.fail({"law": "non-norm-induced metric accepted"})
    except InputError:
        pass
    return t.outcome(len(ctx.grid))


# Hilbert-module suite


def _module(ctx) -> ModuleSpace:
    return ModuleSpace(ctx.algebra, MODULE_RANK)


@check("module-axioms", "module-axioms", "cauchy-schwarz")
def _module_axioms(ctx):
    seed = int(ctx.rng.integers(2 ** 63))
    report = check_module_axioms(_module(ctx), ctx.samples, seed, ctx.tol)
    return Outcome(report.passed, ctx.samples, len(report.witnesses),
                   report.witnesses[0] if report.witnesses else None, {"axioms": report.axioms})


@check("cauchy-schwarz-avalued", "cauchy-schwarz-avalued", "cauchy-schwarz", commutative_only=True)
def _cs_avalued(ctx):
    space = _module(ctx)
    t = _Tally()
    outside = 0
    for i in range(ctx.samples):
        x, y = space.random_invertible(ctx.rng), space.random_invertible(ctx.rng)
        if ctx.rng.random() < 0.05:
            y = x
        verdict = cauchy_schwarz_avalued(x, y, ctx.tol)
        if not verdict.holds:
            t.fail({"sample": i, "in_hypothesis": verdict.in_hypothesis})
        # beyond the stated hypothesis: informational only
        u, v = space.random(ctx.rng), space.random(ctx.rng)
        if not cauchy_schwarz_avalued(u, v, ctx.tol).holds:
            outside += 1
    return t.outcome(ctx.samples, violations_outside_hypothesis=outside)


@check("cauchy-schwarz-scalar", "cauchy-schwarz-scalar", "cauchy-schwarz")
def _cs_scalar(ctx):
    space = _module(ctx)
    t = _Tally()
    for i in range(ctx.samples):
        x, y = space.random(ctx.rng), space.random(ctx.rng)
        verdict = cauchy_schwarz_scalar(x, y, ctx.tol)
        if not verdict.holds:
            t.fail({"sample": i, "lhs": verdict.lhs, "rhs": verdict.rhs})
    return t.outcome(ctx.samples)


@check("bridge-identity", "module-norm-bridge", "cauchy-schwarz", commutative_only=True)
def _bridge(ctx):
    space = _module(ctx)
    t = _Tally()
    worst = 0.0
    for i in range(ctx.samples):
        x = space.random(ctx.rng)
        gap = bridge_gap(x, ctx.tol)
        worst = max(worst, gap)
        if gap > ctx.tol.bound(norm_m(x)):
            t.fail({"sample": i, "gap": gap})
    return t.outcome(ctx.samples, max_gap=worst)


@check("induced-norm-axioms", "module-induced-norm", "cauchy-schwarz", commutative_only=True)
def _induced_norm(ctx):
    space = _module(ctx)
    t = _Tally()
    if op_norm(norm_avalued(space.zero(), ctx.tol)) != 0.0:
        t.fail({"law": "norm of zero"})
    for i in range(ctx.samples):
        x, y = space.random_invertible(ctx.rng), space.random_invertible(ctx.rng)
        alpha = complex(*ctx.rng.standard_normal(2))
        nx, ny = norm_avalued(x, ctx.tol), norm_avalued(y, ctx.tol)
        if op_norm(nx) <= ctx.tol.abs_tol or not is_positive(nx, ctx.tol).holds:
            t.fail({"sample": i, "law": "definiteness"})
        if not norm_avalued(x * alpha, ctx.tol).close(nx * abs(alpha), ctx.tol):
            t.fail({"sample": i, "law": "homogeneity"})
        if not leq(norm_avalued(x - y, ctx.tol), nx + ny, ctx.tol).holds:
            t.fail({"sample": i, "law": "triangle"})
    return t.outcome(ctx.samples)


@check("inner-continuity", "inner-product-continuity", "cauchy-schwarz")
def _inner_continuity(ctx):
    space = _module(ctx)
    t = _Tally()
    count = max(1, ctx.samples // 10) if ctx.samples else 0
    for i in range(count):
        x, y = space.random(ctx.rng), space.random(ctx.rng)
        dx, dy = space.random(ctx.rng), space.random(ctx.rng)
        qx, qy = ctx.rng.uniform(0.5, 0.8, size=2)
        report = inner_continuity(lambda n, x=x, dx=dx, q=qx: x + dx * (q ** n),
                                  lambda n, y=y, dy=dy, q=qy: y + dy * (q ** n / n),
                                  x, y, ctx.grid, depth=1000, tol=ctx.tol)
        if not report.passed:
            t.fail({"sample": i, "report": report.to_json()})
    return t.outcome(count)


@check("module-completion", "module-completion-bounds", "cauchy-schwarz")
def _module_completion(ctx):
    seed = int(ctx.rng.integers(2 ** 63))
    report = complete_module(_module(ctx), ctx.samples, seed, ctx.grid, limit_pairs=10, tol=ctx.tol)
    return Outcome(report.passed, ctx.samples, len(report.witnesses),
                   report.witnesses[0] if report.witnesses else (None if report.passed else report.to_json()))


@check("completeness-equivalence", "hilbert-banach-equivalence", "cauchy-schwarz", commutative_only=True)
def _completeness_equiv(ctx):
    space = _module(ctx)
    x = space.random(ctx.rng)
    e = space.basis(0)
    tests = [
        (lambda n: x, x, "constant"),
        (lambda n: x + e * (1.0 / n), x, "harmonic"),
        (lambda n: x + e * (0.5 ** n), x, "geometric"),
        (lambda n: x * (n % 2), x, "alternating"),
    ]
    samples = [space.random(ctx.rng) for _ in range(ctx.samples)]
    report = completeness_equiv(space, tests, ctx.grid, depth=1000, samples=samples, tol=ctx.tol)
    bad = [s["sequence"] for s in report.sequences if not s["agree"]]
    witness = None if report.passed else {"disagreeing": bad, "bridge_max_gap": report.bridge_max_gap}
    return Outcome(report.passed, ctx.samples, len(bad) + (0 if report.bridge_passed else 1), witness,
                   {"bridge_max_gap": report.bridge_max_gap})


# runner


def child_rng(seed: int, suite_index: int, check_index: int, algebra_index: int) -> np.random.Generator:
    """The documented stream rule: one PCG64 stream per (suite, check, algebra)."""
    ss = np.random.SeedSequence(seed, spawn_key=(suite_index, check_index, algebra_index))
    return np.random.Generator(np.random.PCG64(ss))


def checks_for(suites: Sequence[str]) -> list:
    unknown = [s for s in suites if s not in SUITES and s != "all"]
    if unknown:
        raise InputError(f"unknown suite {unknown[0]!r}; choose from {', '.join(SUITES + ('all',))}")
    wanted = set(SUITES) if "all" in suites else set(suites)
    return [c for c in REGISTRY if c.suite in wanted]


def run_campaign(suites: Sequence[str] = ("all",), seed: int = 0, samples: int = DEFAULT_SAMPLES,
                 algebras: Sequence[str] = DEFAULT_ALGEBRAS, tol: Tolerance | None = None,
                 grid: Sequence[float] = DEFAULT_GRID, depth: int = DEFAULT_DEPTH,
                 sequences: int = DEFAULT_SEQUENCES, report: Report | None = None) -> Report:
    tol = resolve(tol)
    selected = checks_for(suites)
    descriptors = [AlgebraDescriptor.parse(a) for a in algebras]
    report = report or Report("campaign")
    report.config.update({
        "suites": sorted(set(SUITES) if "all" in suites else set(suites)),
        "seed": seed, "samples": samples, "algebras": [d.name for d in descriptors],
        "grid": list(grid), "depth": depth, "sequences": sequences,
        "abs_tol": tol.abs_tol, "rel_tol": tol.rel_tol, "rng": "PCG64",
    })
    if samples == 0:
        report.warnings.append("sample count is 0: no checks were run")
        return report
    for chk in selected:
        suite_index = SUITES.index(chk.suite)
        check_index = REGISTRY.index(chk)
        targets = list(enumerate(descriptors)) if chk.per_algebra else [(0, None)]
        for algebra_index, algebra in targets:
            if algebra is not None and chk.commutative_only and not algebra.commutative:
                continue
            ctx = Context(algebra, child_rng(seed, suite_index, check_index, algebra_index), samples, tol,
                          tuple(grid), depth, sequences)
            start = time.perf_counter()
            outcome = chk.fn(ctx)
            elapsed = time.perf_counter() - start
            check_id = f"{chk.suite}.{chk.name}" + (f"[{algebra.name}]" if algebra is not None else "")
            report.add(Record(check_id, chk.anchor, outcome.passed, outcome.samples, outcome.violations,
                              _plain(outcome.witness), _plain(outcome.details), elapsed))
    return report


def _plain(value):
    """JSON-friendly copy: numpy scalars to Python, complex to [re, im]."""
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if isinstance(value, complex):
        return [value.real, value.imag]
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, np.generic):
        return value.item()
    return value
