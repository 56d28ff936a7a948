import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from cstarkit import (
    AlgebraDescriptor,
    DomainError,
    ShapeError,
    Tolerance,
    check_cone,
    commutative_product_root,
    interior_demo,
    is_positive,
    is_way_below,
    leq,
    norm_zero,
    op_norm,
    sqrt_positive,
)
from cstarkit.order import random_ordered_pair, random_positive

from oracles import hermitian_2x2_eigenvalues, to_lists

C2 = AlgebraDescriptor.parse("C2")
C3 = AlgebraDescriptor.parse("C3")
M2 = AlgebraDescriptor.parse("M2")
MIXED = AlgebraDescriptor.parse("C2+M2")


def test_leq_examples():
    assert leq(C2.diagonal([1, 2]), C2.diagonal([2, 2]))
    assert not leq(C2.diagonal([1, 3]), C2.diagonal([2, 2]))
    verdict = leq(C2.diagonal([1, 1j]), C2.diagonal([2, 2]))
    assert not verdict and "not hermitian" in verdict.reason
    with pytest.raises(ShapeError):
        leq(C2.zero(), M2.zero())


def test_is_positive_witness_exhibits_violation():
    a = M2.element([[[1, 2], [2, 1]]])
    verdict = is_positive(a)
    assert not verdict.holds
    assert verdict.min_eigenvalue == pytest.approx(-1.0)
    p = verdict.witness
    assert (p * a * p).close(p * -1.0)
    assert verdict.to_json()["witness"]["blocks"] == [2]


def test_is_positive_eigenvalues_match_closed_form(rng):
    for _ in range(30):
        g = M2.random(rng)
        h = (g + g.star()) * 0.5
        lo, _ = hermitian_2x2_eigenvalues(to_lists(h.blocks[0]))
        assert is_positive(h).min_eigenvalue == pytest.approx(lo, abs=1e-10)
        assert is_positive(h).holds == (lo >= -1e-9 * (1 + op_norm(h)))


def test_tolerance_band():
    tiny = C2.diagonal([-1e-12, 1])
    assert is_positive(tiny)
    assert not is_positive(tiny, Tolerance(1e-14, 1e-14))


def test_sqrt_examples(rng):
    assert sqrt_positive(C2.diagonal([4, 9])).close(C2.diagonal([2, 3]))
    for _ in range(20):
        a = random_positive(MIXED, rng)
        b = sqrt_positive(a)
        assert is_positive(b)
        assert op_norm(b * b - a) <= 1e-9 * (1 + op_norm(a))
    with pytest.raises(DomainError) as info:
        sqrt_positive(C2.diagonal([-1, 1]))
    assert info.value.verdict.min_eigenvalue == -1


def test_product_root_examples(rng):
    root = commutative_product_root(C2.diagonal([4, 1]), C2.diagonal([9, 16]))
    assert root.close(C2.diagonal([6, 4]))
    for _ in range(10):
        a, b = random_positive(C3, rng), random_positive(C3, rng)
        assert commutative_product_root(a, b).close(sqrt_positive(a) * sqrt_positive(b), Tolerance(1e-9, 1e-8))
    with pytest.raises(DomainError):
        commutative_product_root(M2.identity(), M2.identity())
    with pytest.raises(DomainError):
        commutative_product_root(C2.diagonal([-1, 1]), C2.identity())


def test_norm_zero_examples():
    assert norm_zero(C2.diagonal([3 + 4j, -2])).close(C2.diagonal([5, 2]))
    with pytest.raises(DomainError):
        norm_zero(M2.identity())


def test_way_below_examples():
    assert is_way_below(M2.zero(), M2.identity())
    assert not is_way_below(M2.zero(), M2.element([[[1, 0], [0, 0]]]))
    a = M2.element([[[2, 1], [1, 2]]])
    assert is_way_below(a, a + M2.identity() * 1e-3)
    assert not is_way_below(a, a)
    # strict probes drop the band but still need a positive gap
    assert is_way_below(a, a + M2.identity() * 1e-12, strict=True)
    assert not is_way_below(a, a + M2.identity() * 1e-12)
    assert not is_way_below(C2.zero(), C2.diagonal([1, 1j]))


def test_interior_demo_examples(rng):
    for eps in (1.0, 1e-3, 1e-6):
        a = C2.diagonal([1, 2])
        b = interior_demo(C2, a, eps)
        assert op_norm(a - b) == pytest.approx(eps / 2)
        assert not is_positive(b)
    with pytest.raises(DomainError):
        interior_demo(M2, M2.identity(), 1.0)
    with pytest.raises(DomainError):
        interior_demo(C2, C2.diagonal([-1, 1]), 1.0)
    with pytest.raises(ValueError):
        interior_demo(C2, C2.identity(), 0.0)


@pytest.mark.parametrize("name", ["C1", "C2", "M2", "M3", "C2+M2"])
def test_check_cone(name):
    algebra = AlgebraDescriptor.parse(name)
    report = check_cone(algebra, 300, seed=7)
    assert report.passed and not report.violations
    assert 0 < report.normality_constant <= 1 + 1e-9
    assert report.to_json()["samples"] == 300


def test_check_cone_explicit_pairs_and_errors():
    pairs = [(C2.diagonal([1, 0]), C2.diagonal([2, 1])), (C2.diagonal([2, 0]), C2.diagonal([1, 1]))]
    report = check_cone(C2, 10, seed=1, pairs=pairs)
    assert report.normality_constant == 0.5
    assert [v["axiom"] for v in report.violations] == ["ordered-pair"]
    with pytest.raises(ValueError):
        check_cone(C2, 0, seed=1)


def test_check_cone_is_seed_deterministic():
    assert check_cone(M2, 50, seed=3) == check_cone(M2, 50, seed=3)


def test_ordered_pair_generator(rng):
    for _ in range(20):
        a, b = random_ordered_pair(MIXED, rng)
        assert is_positive(a) and leq(a, b)
        assert op_norm(a) <= op_norm(b) + 1e-9


@given(st.lists(st.floats(0, 1e3), min_size=2, max_size=2), st.lists(st.floats(0, 1e3), min_size=2, max_size=2))
def test_property_monotone_root(x, y):
    a = C2.diagonal(x)
    b = C2.diagonal([p + q for p, q in zip(x, y)])
    assert leq(sqrt_positive(a), sqrt_positive(b))
    assert math.isclose(op_norm(sqrt_positive(a)) ** 2, op_norm(a), rel_tol=1e-9, abs_tol=1e-9)


@given(st.integers(0, 2 ** 32 - 1))
def test_property_conjugation_preserves_order(seed):
    rng = np.random.default_rng(seed)
    a, b = random_ordered_pair(M2, rng)
    c = M2.random(rng)
    assert leq(c.star() * a * c, c.star() * b * c)
