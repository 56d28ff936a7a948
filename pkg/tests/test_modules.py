import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from cstarkit import AlgebraDescriptor, DomainError, InputError, ShapeError, op_norm
from cstarkit.modules import (
    CompletedModule,
    ModuleSpace,
    ModuleVector,
    avalued_metric,
    bridge_gap,
    cauchy_schwarz_avalued,
    cauchy_schwarz_scalar,
    check_module_axioms,
    complete_module,
    completeness_equiv,
    decimal_round,
    inner,
    inner_continuity,
    inner_stack,
    module_metric,
    norm_avalued,
    norm_m,
    norm_m_stack,
    stack_vectors,
)

from oracles import conj_transpose, naive_matmul, power_iteration_norm, to_lists

C2 = AlgebraDescriptor.parse("C2")
M2 = AlgebraDescriptor.parse("M2")
MIXED = AlgebraDescriptor.parse("C2+M2")


def _oracle_inner(x, y):
    """Block-by-block sum of x_i^H y_i with list arithmetic."""
    out = []
    for k, n in enumerate(x.space.algebra.blocks):
        total = [[0j] * n for _ in range(n)]
        for a, b in zip(x.coords, y.coords):
            prod = naive_matmul(conj_transpose(to_lists(a.blocks[k])), to_lists(b.blocks[k]))
            total = [[s + p for s, p in zip(r1, r2)] for r1, r2 in zip(total, prod)]
        out.append(total)
    return out


@pytest.mark.parametrize("algebra", [C2, M2, MIXED], ids=lambda a: a.name)
def test_inner_and_norm_match_oracles(algebra, rng):
    space = ModuleSpace(algebra, 3)
    for _ in range(10):
        x, y = space.random(rng), space.random(rng)
        got = inner(x, y)
        for block, want in zip(got.blocks, _oracle_inner(x, y)):
            assert np.allclose(block, np.array(want), atol=1e-12)
        xx = _oracle_inner(x, x)
        want_norm = math.sqrt(max(power_iteration_norm(b) for b in xx))
        assert norm_m(x) == pytest.approx(want_norm, rel=1e-8)


def test_module_examples():
    space = ModuleSpace(C2, 2)
    x = space.vector([C2.diagonal([1, 2j]), C2.diagonal([3, 0])])
    assert inner(x, x).coordinates() == [10, 4]
    assert norm_m(x) == pytest.approx(math.sqrt(10))
    assert norm_avalued(x).close(C2.diagonal([math.sqrt(10), 2]))
    assert inner(space.basis(0), space.basis(1)).close(C2.zero())
    assert inner(space.basis(1), space.basis(1)).close(C2.identity())
    assert (x * 2).coords[0].close(C2.diagonal([2, 4j]))
    assert (x * C2.diagonal([0, 1])).coords[0].close(C2.diagonal([0, 2j]))


def test_vector_invariants(rng):
    space = ModuleSpace(C2, 2)
    with pytest.raises(ShapeError):
        space.vector([C2.zero()])
    with pytest.raises(ShapeError):
        space.vector([C2.zero(), M2.zero()])
    with pytest.raises(ShapeError):
        space.zero() + ModuleSpace(C2, 3).zero()
    with pytest.raises(ShapeError):
        space.zero().act(M2.identity())
    with pytest.raises(AttributeError):
        space.zero().coords = ()
    with pytest.raises(ValueError):
        ModuleSpace(C2, 0)
    v = space.random(rng)
    back = ModuleVector.from_json(v.to_json())
    assert all(a.close(b) for a, b in zip(v.coords, back.coords))
    with pytest.raises(InputError):
        ModuleVector.from_json({"rank": 3, "coords": v.to_json()["coords"]})


@pytest.mark.parametrize("algebra", [C2, M2, MIXED], ids=lambda a: a.name)
def test_module_axioms(algebra):
    report = check_module_axioms(ModuleSpace(algebra, 2), 100, seed=11)
    assert report.passed and report.samples == 100


def test_cauchy_schwarz_forms(rng):
    space = ModuleSpace(C2, 3)
    for _ in range(50):
        x, y = space.random(rng), space.random(rng)
        v = cauchy_schwarz_avalued(x, y)
        assert v.holds and v.in_hypothesis
        assert cauchy_schwarz_scalar(x, y).holds
        assert bridge_gap(x) < 1e-9 * (1 + norm_m(x))
    # equality case: y = x a
    x = space.random(rng)
    s = cauchy_schwarz_scalar(x, x.act(C2.diagonal([2, 3j])))
    assert s.holds and s.lhs <= s.rhs + 1e-9
    zero = cauchy_schwarz_avalued(space.zero(), x)
    assert zero.holds and zero.in_hypothesis
    half = space.vector([C2.diagonal([1, 0])] * 3)
    assert not cauchy_schwarz_avalued(half, x).in_hypothesis
    with pytest.raises(DomainError):
        cauchy_schwarz_avalued(ModuleSpace(M2, 1).zero(), ModuleSpace(M2, 1).zero())
    mspace = ModuleSpace(MIXED, 2)
    assert all(cauchy_schwarz_scalar(mspace.random(rng), mspace.random(rng)).holds for _ in range(50))


def test_metrics_and_domains(rng):
    space = ModuleSpace(C2, 2)
    x, y = space.random(rng), space.random(rng)
    assert module_metric(space).dist(x, y).coordinates()[0] == pytest.approx(norm_m(x - y))
    assert op_norm(avalued_metric(space).dist(x, y)) == pytest.approx(norm_m(x - y))
    with pytest.raises(DomainError):
        avalued_metric(ModuleSpace(M2, 1))
    with pytest.raises(DomainError):
        norm_avalued(ModuleSpace(M2, 1).zero())


def test_stacked_forms(rng):
    space = ModuleSpace(MIXED, 2)
    xs = [space.random(rng) for _ in range(6)]
    ys = [space.random(rng) for _ in range(6)]
    stacked = inner_stack(stack_vectors(xs), stack_vectors(ys))
    for k, (x, y) in enumerate(zip(xs, ys)):
        assert all(np.allclose(b[k], e) for b, e in zip(stacked, inner(x, y).blocks))
    assert np.allclose(norm_m_stack(stack_vectors(xs)), [norm_m(x) for x in xs])


def test_completeness_equivalence(rng):
    space = ModuleSpace(C2, 2)
    x = space.random(rng)
    seqs = [(lambda n, x=x: x * (1 + 1 / n), x, "x(1+1/n)"),
            (lambda n, x=x: x * (-1) ** n, x, "alternating"),
            (lambda n, x=x: x * (1 + 2.0 ** -n), x, "geometric")]
    report = completeness_equiv(space, seqs, depth=500, samples=[space.random(rng) for _ in range(20)])
    assert report.passed
    verdicts = {s["sequence"]: s["norm_m"]["converges"] for s in report.sequences}
    assert verdicts == {"x(1+1/n)": False, "alternating": False, "geometric": True}


def test_inner_continuity(rng):
    space = ModuleSpace(M2, 2)
    x, y = space.random(rng), space.random(rng)
    dx, dy = space.random(rng), space.random(rng)
    report = inner_continuity(lambda n: x + dx * 2.0 ** -n, lambda n: y + dy * 2.0 ** -n, x, y,
                              grid=(1e-1, 1e-3, 1e-6), depth=200)
    assert report.passed and not report.chain_violations
    with pytest.raises(InputError):
        inner_continuity(lambda n: x * (-1) ** n, lambda n: y, x, y, depth=200)


def test_completed_module(rng):
    space = ModuleSpace(C2, 2)
    module = CompletedModule(space)
    x, y = space.random(rng), space.random(rng)
    p, q = module.approximate(x), module.approximate(y)
    for eps in (1e-2, 1e-6):
        assert op_norm(module.inner_s(p, q, eps) - inner(x, y)) < eps
        assert abs(module.norm_m_s(p, eps) - norm_m(x)) < eps
    a = C2.diagonal([2, -1j])
    pa = module.act_s(p, a)
    assert op_norm(module.inner_s(pa, q, 1e-6) - inner(x.act(a), y)) < 1e-6
    assert decimal_round(x, 1).coords[0].close(C2.diagonal(np.round(x.coords[0].coordinates(), 1)))
    with pytest.raises(ValueError):
        module.inner_s(p, q, 0.0)


@pytest.mark.parametrize("algebra", [C2, MIXED], ids=lambda a: a.name)
def test_complete_module_report(algebra):
    report = complete_module(ModuleSpace(algebra, 2), 50, seed=5, grid=(1e-2, 1e-5))
    assert report.passed, report.to_json()


_coord = st.complex_numbers(max_magnitude=100, allow_nan=False, allow_infinity=False)


@given(st.lists(_coord, min_size=4, max_size=4), st.lists(_coord, min_size=4, max_size=4))
def test_property_cauchy_schwarz_c2(xs, ys):
    space = ModuleSpace(C2, 2)
    x = space.vector([C2.diagonal(xs[:2]), C2.diagonal(xs[2:])])
    y = space.vector([C2.diagonal(ys[:2]), C2.diagonal(ys[2:])])
    assert cauchy_schwarz_scalar(x, y).holds
    assert cauchy_schwarz_avalued(x, y).holds
