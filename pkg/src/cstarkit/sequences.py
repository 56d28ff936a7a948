"""Sequence descriptions: generator kinds, spaces and a small expression language.

A description is a JSON object such as::

    {"space": {"kind": "scaled-modulus", "alpha": 2},
     "sequence": {"kind": "harmonic", "center": "0", "scale": 1, "power": 1,
                  "modulus": "ceil(4/eps) + 1"},
     "target": "0"}

Expressions (``expression`` terms and every ``modulus``) are parsed with
:mod:`ast` and evaluated over a whitelist of names and functions; integer
division is exact (:class:`fractions.Fraction`).
"""

from __future__ import annotations

import ast
import math
import operator
from fractions import Fraction
from typing import Any, Callable

from .algebra import AlgebraDescriptor, element_from_json
from .errors import InputError
from .metric import MetricSpace, PointSequence, TableSpace, complex_line, rational_line, scaled_modulus_space

GENERATOR_KINDS = ("constant", "harmonic", "geometric", "table-walk", "expression")

_FUNCTIONS = {
    "ceil": math.ceil, "floor": math.floor, "sqrt": math.sqrt, "exp": math.exp, "log": math.log,
    "log2": math.log2, "log10": math.log10, "sin": math.sin, "cos": math.cos, "abs": abs,
    "min": min, "max": max, "factorial": math.factorial, "F": Fraction, "int": int,
}
_CONSTANTS = {"pi": math.pi, "e": math.e, "i": 1j}
_BINARY = {
    ast.Add: operator.add, ast.Sub: operator.sub, ast.Mult: operator.mul, ast.Pow: operator.pow,
    ast.FloorDiv: operator.floordiv, ast.Mod: operator.mod,
}


def _divide(a, b):
    if isinstance(a, (int, Fraction)) and isinstance(b, (int, Fraction)):
        return Fraction(a) / Fraction(b)
    return a / b


class Expression:
    """A parsed arithmetic expression in the variables ``variables``."""

    def __init__(self, text: str, variables: tuple = ("n",)):
        self.text = text
        self.variables = variables
        try:
            self._tree = ast.parse(text, mode="eval")
        except SyntaxError as exc:
            raise InputError(f"cannot parse expression {text!r}: {exc.msg}") from exc
        self._validate(self._tree.body)

    def _validate(self, node):
        if isinstance(node, ast.Constant):
            if not isinstance(node.value, (int, float, complex)) or isinstance(node.value, bool):
                raise InputError(f"unsupported literal {node.value!r} in {self.text!r}")
        elif isinstance(node, ast.Name):
            if node.id not in self.variables and node.id not in _CONSTANTS:
                raise InputError(f"unknown name {node.id!r} in {self.text!r}")
        elif isinstance(node, ast.BinOp):
            if type(node.op) not in _BINARY and not isinstance(node.op, ast.Div):
                raise InputError(f"unsupported operator in {self.text!r}")
            self._validate(node.left)
            self._validate(node.right)
        elif isinstance(node, ast.UnaryOp):
            if not isinstance(node.op, (ast.USub, ast.UAdd)):
                raise InputError(f"unsupported operator in {self.text!r}")
            self._validate(node.operand)
        elif isinstance(node, ast.Call):
            if not isinstance(node.func, ast.Name) or node.func.id not in _FUNCTIONS or node.keywords:
                raise InputError(f"unsupported call in {self.text!r}")
            for arg in node.args:
                self._validate(arg)
        else:
            raise InputError(f"unsupported syntax {type(node).__name__} in {self.text!r}")

    def __call__(self, **values):
        return self._eval(self._tree.body, values)

    def _eval(self, node, env):
        if isinstance(node, ast.Constant):
            return node.value
        if isinstance(node, ast.Name):
            return env[node.id] if node.id in env else _CONSTANTS[node.id]
        if isinstance(node, ast.BinOp):
            left, right = self._eval(node.left, env), self._eval(node.right, env)
            if isinstance(node.op, ast.Div):
                return _divide(left, right)
            return _BINARY[type(node.op)](left, right)
        if isinstance(node, ast.UnaryOp):
            value = self._eval(node.operand, env)
            return -value if isinstance(node.op, ast.USub) else value
        args = [self._eval(a, env) for a in node.args]
        return _FUNCTIONS[node.func.id](*args)


def parse_modulus(text: str | None) -> Callable[[float], int] | None:
    if text is None:
        return None
    expr = Expression(str(text), ("eps",))

    def modulus(eps):
        try:
            return int(expr(eps=eps))
        except (ArithmeticError, ValueError, TypeError) as exc:
            raise InputError(f"modulus {text!r} failed at eps={eps}: {exc}") from exc

    return modulus


# spaces


def build_space(desc: Any) -> MetricSpace:
    """Space from ``{"kind": ...}``: scaled-modulus, rational-line, complex-line or table."""
    kind = desc.get("kind")
    if kind == "scaled-modulus":
        return scaled_modulus_space(float(desc.get("alpha", 1.0)))
    if kind == "rational-line":
        alpha = desc.get("alpha")
        return rational_line(None if alpha is None else float(alpha))
    if kind == "complex-line":
        return complex_line()
    if kind == "table":
        return TableSpace.from_json(desc["table"])
    raise InputError(f"unknown space kind {kind!r}")


def _point(space: MetricSpace, value):
    """Decode a label (or a plain number) into a point of ``space``."""
    if isinstance(value, str):
        return space.decode(value)
    if isinstance(value, (int, float)) and space.finite:
        raise InputError(f"points of a table space are labels, got {value!r}")
    return space.decode(str(value))


def _coerce(space: MetricSpace, value):
    """Bring an evaluated expression into the point type of ``space``."""
    if space.name == "rational-line":
        if isinstance(value, (int, Fraction)):
            return Fraction(value)
        raise InputError(f"rational-line terms must be rational, got {value!r}")
    return value


def build_sequence(space: MetricSpace, desc: dict) -> PointSequence:
    kind = desc.get("kind")
    modulus = parse_modulus(desc.get("modulus"))
    name = desc.get("name", kind or "")
    if kind == "constant":
        point = _point(space, desc["point"])
        return PointSequence(space, lambda n: point, modulus or (lambda eps: 1), name)
    if kind == "harmonic":
        center = _point(space, desc.get("center", "0"))
        scale = Fraction(str(desc.get("scale", 1)))
        power = int(desc.get("power", 1))

        def at(n):
            step = scale / Fraction(n) ** power
            return _coerce(space, center + step) if space.name == "rational-line" else center + float(step)

        return PointSequence(space, at, modulus, name)
    if kind == "geometric":
        offset = _point(space, desc.get("offset", "0"))
        first = Fraction(str(desc.get("first", "1/2")))
        ratio = Fraction(str(desc.get("ratio", "1/2")))

        def at(n):
            total = first * (1 - ratio ** n) / (1 - ratio) if ratio != 1 else first * n
            return offset + total if space.name == "rational-line" else offset + float(total)

        return PointSequence(space, at, modulus, name)
    if kind == "table-walk":
        points = [_point(space, p) for p in desc["points"]]
        if not points:
            raise InputError("table-walk needs at least one point")
        cycle = bool(desc.get("cycle", False))

        def at(n):
            return points[(n - 1) % len(points)] if cycle else points[min(n, len(points)) - 1]

        return PointSequence(space, at, modulus, name)
    if kind == "expression":
        expr = Expression(desc["expr"], ("n",))
        return PointSequence(space, lambda n: _coerce(space, expr(n=n)), modulus, name)
    raise InputError(f"unknown sequence kind {kind!r}")


def build_witnesses(space: MetricSpace, items: list | None) -> list | None:
    if items is None:
        return None
    return [element_from_json(w, space.algebra) for w in items]


def algebra_of(desc: Any) -> AlgebraDescriptor:
    return AlgebraDescriptor.from_json(desc)
