from fractions import Fraction

import pytest

from cstarkit import InputError
from cstarkit.metric import converges_norm
from cstarkit.sequences import Expression, algebra_of, build_sequence, build_space, build_witnesses, parse_modulus


def test_expression_language():
    assert Expression("1/n")(n=4) == Fraction(1, 4)
    assert Expression("F(1, 3) + n**2")(n=2) == Fraction(13, 3)
    assert Expression("ceil(sqrt(4/eps)) + 1", ("eps",))(eps=0.01) == 21
    assert Expression("-i * 2")() == -2j
    for bad in ("__import__('os')", "n.real", "x + 1", "'a'", "lambda: 1", "n if n else 1", "True"):
        with pytest.raises(InputError):
            Expression(bad)
    with pytest.raises(InputError):
        Expression("1 +")


def test_modulus_parsing():
    assert parse_modulus(None) is None
    m = parse_modulus("ceil(log2(2/eps)) + 1")
    assert m(0.25) == 4
    with pytest.raises(InputError, match="failed"):
        parse_modulus("log(eps - 1)")(0.5)


def test_spaces():
    assert build_space({"kind": "scaled-modulus", "alpha": 3}).dist(0, 1).coordinates() == [1, 3]
    assert build_space({"kind": "rational-line"}).algebra.blocks == (1,)
    assert build_space({"kind": "rational-line", "alpha": 2}).algebra.blocks == (1, 1)
    assert build_space({"kind": "complex-line"}).dist(0, 3j).coordinates() == [3]
    with pytest.raises(InputError):
        build_space({"kind": "hilbert"})


def test_generators_match_closed_forms():
    space = build_space({"kind": "rational-line"})
    harmonic = build_sequence(space, {"kind": "harmonic", "center": "1", "scale": "1/2", "power": 2})
    assert harmonic[3] == Fraction(1) + Fraction(1, 18)
    geometric = build_sequence(space, {"kind": "geometric", "first": "1/2", "ratio": "1/2"})
    assert [geometric[n] for n in (1, 2, 3)] == [Fraction(1, 2), Fraction(3, 4), Fraction(7, 8)]
    expr = build_sequence(space, {"kind": "expression", "expr": "1 - 1/2**n", "modulus": "ceil(log2(1/eps)) + 1"})
    assert [expr[n] for n in (1, 2, 3)] == [geometric[n] for n in (1, 2, 3)]
    assert converges_norm(expr, Fraction(1), depth=200).converges
    const = build_sequence(space, {"kind": "constant", "point": "2/3"})
    assert const[7] == Fraction(2, 3) and const.modulus(1e-9) == 1
    with pytest.raises(InputError):
        build_sequence(space, {"kind": "expression", "expr": "sqrt(n)"})[2]
    with pytest.raises(InputError):
        build_sequence(space, {"kind": "spiral"})


def test_table_walk():
    table = {"algebra": "C1", "points": ["a", "b"],
             "dist": {"a|b": {"blocks": [1], "data": [[[[1, 0]]]]}}}
    space = build_space({"kind": "table", "table": table})
    walk = build_sequence(space, {"kind": "table-walk", "points": ["a", "b"]})
    assert [walk[n] for n in (1, 2, 5)] == ["a", "b", "b"]
    cyc = build_sequence(space, {"kind": "table-walk", "points": ["a", "b"], "cycle": True})
    assert [cyc[n] for n in (1, 2, 3)] == ["a", "b", "a"]
    with pytest.raises(InputError):
        build_sequence(space, {"kind": "table-walk", "points": ["z"]})
    with pytest.raises(InputError):
        build_sequence(space, {"kind": "constant", "point": 1})


def test_witnesses_and_algebra():
    space = build_space({"kind": "scaled-modulus"})
    assert build_witnesses(space, None) is None
    ws = build_witnesses(space, [{"blocks": [1, 1], "data": [[[[0.1, 0]]], [[[0.2, 0]]]]}])
    assert ws[0].coordinates() == [0.1, 0.2]
    assert algebra_of("C2+M2").blocks == (1, 1, 2)
