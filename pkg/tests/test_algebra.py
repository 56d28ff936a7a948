import numpy as np
import pytest
from hypothesis import given, strategies as st

from cstarkit import (
    AlgebraDescriptor,
    Element,
    ShapeError,
    Tolerance,
    UnitizedElement,
    elem_add,
    elem_mul,
    element_from_json,
    element_to_json,
    hermitian_parts,
    involution,
    is_hermitian,
    op_norm,
    unitize_mul,
)

from oracles import conj_transpose, entrywise_add, naive_matmul, power_iteration_norm, to_lists

C1 = AlgebraDescriptor.parse("C1")
C2 = AlgebraDescriptor.parse("C2")
M2 = AlgebraDescriptor.parse("M2")
M3 = AlgebraDescriptor.parse("M3")
MIXED = AlgebraDescriptor.parse("C2+M2")


def test_descriptor_parsing_and_names():
    assert C2.blocks == (1, 1) and C2.commutative
    assert MIXED.blocks == (1, 1, 2) and not MIXED.commutative
    assert AlgebraDescriptor((2, 1, 1, 3)).name == "M2+C2+M3"
    assert AlgebraDescriptor.parse("C^4").blocks == (1, 1, 1, 1)
    assert MIXED.dim == 6 and MIXED.unital
    for bad in ("", "X2", "C0", "M2+", "C-1"):
        with pytest.raises(ValueError):
            AlgebraDescriptor.parse(bad)
    with pytest.raises(ValueError):
        AlgebraDescriptor(())


def test_element_invariants():
    with pytest.raises(ShapeError):
        Element(C2, [[[1]]])
    with pytest.raises(ShapeError):
        Element(M2, [np.zeros((3, 3))])
    with pytest.raises(ValueError):
        Element(C1, [[[float("nan")]]])
    x = C2.diagonal([1, 2])
    with pytest.raises(AttributeError):
        x.blocks = ()
    with pytest.raises(ValueError):
        x.blocks[0][0, 0] = 5
    with pytest.raises(ValueError):
        C2.diagonal([1e308]) * 1e308


def test_addition_examples(rng):
    x = C2.diagonal([1, 2j])
    assert elem_add(x, C2.zero()).coordinates() == x.coordinates()
    assert elem_add(C2.diagonal([1, 2j]), C2.diagonal([3, -2j])).coordinates() == [4, 0]
    for _ in range(20):
        a, b = M2.random(rng), M2.random(rng)
        assert to_lists(elem_add(a, b).blocks[0]) == entrywise_add(to_lists(a.blocks[0]), to_lists(b.blocks[0]))
    with pytest.raises(ShapeError):
        elem_add(C2.zero(), M2.zero())


def test_multiplication_examples(rng):
    x = MIXED.random(rng)
    assert elem_mul(x, MIXED.identity()).close(x)
    assert elem_mul(C2.diagonal([2, 3]), C2.diagonal([5, 7])).coordinates() == [10, 21]
    for _ in range(20):
        a, b = M3.random(rng), M3.random(rng)
        expected = np.array(naive_matmul(to_lists(a.blocks[0]), to_lists(b.blocks[0])))
        assert np.allclose(elem_mul(a, b).blocks[0], expected, atol=1e-12)
    with pytest.raises(ShapeError):
        elem_mul(C2.zero(), C1.zero())


def test_involution_examples(rng):
    assert involution(M3.identity()).close(M3.identity())
    assert involution(C1.diagonal([3 + 4j])).coordinates() == [3 - 4j]
    for _ in range(20):
        a, b = M2.random(rng), M2.random(rng)
        lhs = involution(elem_mul(a, b))
        rhs = np.array(naive_matmul(conj_transpose(to_lists(b.blocks[0])), conj_transpose(to_lists(a.blocks[0]))))
        assert np.allclose(lhs.blocks[0], rhs, atol=1e-9)
        assert all(np.array_equal(p, q) for p, q in zip(involution(involution(a)).blocks, a.blocks))


def test_norm_examples(rng):
    assert op_norm(MIXED.zero()) == 0.0
    assert op_norm(C2.diagonal([3, -4j])) == 4.0
    for _ in range(20):
        x = M2.random(rng)
        assert op_norm(x) == pytest.approx(power_iteration_norm(to_lists(x.blocks[0])), abs=1e-8)
    x = MIXED.random(rng)
    per_block = [power_iteration_norm(to_lists(b)) for b in x.blocks]
    assert op_norm(x) == pytest.approx(max(per_block), abs=1e-8)


def test_hermitian_parts_examples(rng):
    h = hermitian_parts(M2.random(rng))[0]
    a, b = hermitian_parts(h)
    assert a.close(h) and op_norm(b) <= 1e-12
    a, b = hermitian_parts(C1.diagonal([3 + 4j]))
    assert a.coordinates() == [3] and b.coordinates() == [4]
    for _ in range(20):
        x = M2.random(rng)
        a, b = hermitian_parts(x)
        assert op_norm(a + b * 1j - x) < 1e-9
        assert is_hermitian(a) and is_hermitian(b)


def test_is_hermitian_examples(rng):
    assert is_hermitian(M3.identity())
    assert not is_hermitian(C2.diagonal([1, 1j]))
    x = M3.random(rng)
    assert is_hermitian((x + x.star()) * 0.5)


def test_unitization_examples(rng):
    a, b = MIXED.random(rng), MIXED.random(rng)
    emb = unitize_mul(UnitizedElement.embed(a), UnitizedElement.embed(b))
    assert emb.alpha == 0 and emb.a.close(a * b)
    unit = UnitizedElement.unit(MIXED)
    assert unitize_mul(unit, UnitizedElement.embed(a)).close(UnitizedElement.embed(a))
    for _ in range(20):
        alpha, beta = complex(*rng.standard_normal(2)), complex(*rng.standard_normal(2))
        p, q = UnitizedElement(a, alpha), UnitizedElement(b, beta)
        r = unitize_mul(p, q)
        # formula re-evaluated on raw blocks
        for k, (x, y) in enumerate(zip(a.blocks, b.blocks)):
            expected = np.array(naive_matmul(to_lists(x), to_lists(y))) + beta * x + alpha * y
            assert np.allclose(r.a.blocks[k], expected, atol=1e-12)
        assert r.alpha == alpha * beta
    with pytest.raises(ShapeError):
        unitize_mul(UnitizedElement.embed(C2.zero()), UnitizedElement.embed(M2.zero()))


def test_unitization_direct_sum_is_star_homomorphism(rng):
    for _ in range(20):
        p = UnitizedElement(M2.random(rng), complex(*rng.standard_normal(2)))
        q = UnitizedElement(M2.random(rng), complex(*rng.standard_normal(2)))
        assert unitize_mul(p, q).as_direct_sum().close(p.as_direct_sum() * q.as_direct_sum())
        assert p.star().as_direct_sum().close(p.as_direct_sum().star())
        assert p.norm() == pytest.approx(op_norm(p.as_direct_sum()))


def test_json_round_trip(rng):
    x = MIXED.random(rng)
    data = element_to_json(x)
    assert data["blocks"] == [1, 1, 2]
    y = element_from_json(data)
    assert all(np.array_equal(p, q) for p, q in zip(x.blocks, y.blocks))
    with pytest.raises(ShapeError):
        element_from_json(data, C2)
    assert AlgebraDescriptor.from_json({"blocks": [1, 2]}) == AlgebraDescriptor((1, 2))
    assert AlgebraDescriptor.from_json("C2+M2") == MIXED


def test_scalar_operations(rng):
    x = M2.random(rng)
    assert (2 * x).close(x + x)
    assert (x / 2).close(x * 0.5)
    assert (-x).close(x * -1)
    assert (x - x).close(M2.zero())


def test_close_uses_relative_scale():
    tol = Tolerance(1e-9, 1e-9)
    big = C1.diagonal([1e6])
    assert big.close(C1.diagonal([1e6 + 1e-4]), tol)
    assert not big.close(C1.diagonal([1e6 + 1e-2]), tol)


_entries = st.complex_numbers(max_magnitude=1e3, allow_nan=False, allow_infinity=False)


def _element(algebra):
    def build(values):
        it = iter(values)
        return Element(algebra, [[[next(it) for _ in range(n)] for _ in range(n)] for n in algebra.blocks])
    return st.lists(_entries, min_size=algebra.dim, max_size=algebra.dim).map(build)


@given(_element(MIXED), _element(MIXED))
def test_property_cstar_and_banach_laws(x, y):
    tol = Tolerance()
    nx, ny = op_norm(x), op_norm(y)
    assert abs(op_norm(x.star() * x) - nx ** 2) <= tol.bound(nx ** 2) * 10
    assert op_norm(x * y) <= nx * ny + tol.bound(nx * ny) * 10
    assert abs(op_norm(x.star()) - nx) <= tol.bound(nx) * 10


@given(_element(M2), _element(M2), _element(M2))
def test_property_associativity_and_distributivity(x, y, z):
    scale = (1 + op_norm(x)) * (1 + op_norm(y)) * (1 + op_norm(z))
    assert op_norm((x * y) * z - x * (y * z)) <= 1e-12 * scale
    assert op_norm(x * (y + z) - (x * y + x * z)) <= 1e-12 * scale


@given(_element(C2), _element(C2))
def test_property_commutative_descriptor_commutes(x, y):
    assert (x * y).close(y * x)
