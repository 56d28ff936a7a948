import numpy as np
import pytest

from cstarkit import AlgebraDescriptor, is_hermitian, is_positive, is_way_below, op_norm, sqrt_positive, Tolerance
from cstarkit import batch

ALGEBRAS = [AlgebraDescriptor.parse(n) for n in ("C1", "C3", "M2", "M3", "C2+M2")]


def _elements(algebra, stack):
    return [batch.unstack(algebra, stack, i) for i in range(stack[0].shape[0])]


@pytest.mark.parametrize("algebra", ALGEBRAS, ids=lambda a: a.name)
def test_stack_round_trip(algebra, rng):
    xs = [algebra.random(rng) for _ in range(5)]
    back = _elements(algebra, batch.stack(xs))
    assert all(a.close(b) for a, b in zip(xs, back))


@pytest.mark.parametrize("algebra", ALGEBRAS, ids=lambda a: a.name)
def test_batch_matches_element_api(algebra, rng):
    x = batch.random(algebra, rng, 40)
    h = batch.random_hermitian(algebra, rng, 40)
    p = batch.random_positive(algebra, rng, 40)
    mixed = batch.stack(_elements(algebra, h)[:20] + _elements(algebra, p)[:20])
    for stack in (x, h, p, mixed):
        els = _elements(algebra, stack)
        assert np.allclose(batch.norms(stack), [op_norm(e) for e in els], atol=1e-10)
        assert list(batch.hermitian(stack)) == [is_hermitian(e) for e in els]
        assert list(batch.positive(stack)) == [is_positive(e).holds for e in els]
    unit = batch.identity(algebra, 40)
    lows, highs = _elements(algebra, h), _elements(algebra, batch.add(h, unit))
    assert list(batch.way_below(h, batch.add(h, unit))) == [is_way_below(a, b) for a, b in zip(lows, highs)]
    assert batch.way_below(h, batch.add(h, unit)).all()
    assert not batch.way_below(h, h).any()


@pytest.mark.parametrize("algebra", ALGEBRAS, ids=lambda a: a.name)
def test_arithmetic_and_roots(algebra, rng):
    x, y = batch.random(algebra, rng, 10), batch.random(algebra, rng, 10)
    ex, ey = _elements(algebra, x), _elements(algebra, y)
    for got, want in ((batch.mul(x, y), [a * b for a, b in zip(ex, ey)]),
                      (batch.sub(x, y), [a - b for a, b in zip(ex, ey)]),
                      (batch.adjoint(x), [a.star() for a in ex]),
                      (batch.scale(x, np.arange(10.0)), [a * float(k) for k, a in enumerate(ex)])):
        assert all(g.close(w) for g, w in zip(_elements(algebra, got), want))
    p = batch.random_positive(algebra, rng, 10)
    roots = _elements(algebra, batch.sqrt_positive(p))
    assert all(r.close(sqrt_positive(e), Tolerance(1e-9, 1e-8)) for r, e in zip(roots, _elements(algebra, p)))
    assert batch.close(p, p).all() and batch.leq(p, batch.add(p, p)).all()
