"""Composed finite-section sequences as finite expression trees.

A tree over leaves ``Leaf(B)`` (band operators on Z) stands for the sequence
``A_n`` obtained by replacing every leaf with its window ``P_n B P_n`` and
evaluating sums, products and scalings on the resulting matrices.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from .operator_model import (EPS, BandOperator, FiniteMatrix, OperatorError, materialize,
                             scalar_from_json, scalar_to_json)
from .periodic import lcm

BANDWIDTH_CAP = 64


class ExpressionError(ValueError):
    """Malformed expression tree."""


class FSExpression:
    """Base class; supports ``+``, ``-``, ``@`` (product) and scalar ``*``."""

    def __add__(self, other: "FSExpression") -> "FSExpression":
        return Sum((self, _as_expr(other)))

    def __sub__(self, other: "FSExpression") -> "FSExpression":
        return Sum((self, Scale(-1.0, _as_expr(other))))

    def __neg__(self) -> "FSExpression":
        return Scale(-1.0, self)

    def __matmul__(self, other: "FSExpression") -> "FSExpression":
        return Product((self, _as_expr(other)))

    def __mul__(self, alpha) -> "FSExpression":
        if isinstance(alpha, (FSExpression, BandOperator)):
            return NotImplemented
        return Scale(complex(alpha), self)

    __rmul__ = __mul__


def _as_expr(x) -> FSExpression:
    if isinstance(x, FSExpression):
        return x
    if isinstance(x, BandOperator):
        return Leaf(x)
    raise ExpressionError(f"cannot use {type(x).__name__} in an expression")


@dataclass(frozen=True, eq=False)
class Leaf(FSExpression):
    op: BandOperator
    name: str = ""

    def __post_init__(self):
        if not self.op.domain.is_full:
            raise ExpressionError("leaves must be operators on Z")


@dataclass(frozen=True, eq=False)
class Sum(FSExpression):
    children: tuple

    def __post_init__(self):
        object.__setattr__(self, "children", tuple(_as_expr(c) for c in self.children))
        if not self.children:
            raise ExpressionError("empty sum")


@dataclass(frozen=True, eq=False)
class Product(FSExpression):
    factors: tuple

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple(_as_expr(c) for c in self.factors))
        if not self.factors:
            raise ExpressionError("empty product")


@dataclass(frozen=True, eq=False)
class Scale(FSExpression):
    alpha: complex
    child: FSExpression

    def __post_init__(self):
        object.__setattr__(self, "alpha", complex(self.alpha))
        object.__setattr__(self, "child", _as_expr(self.child))


def fold(expr: FSExpression, leaf: Callable, add: Callable, mul: Callable, scale: Callable):
    """Evaluate a tree bottom-up; products are folded left to right."""
    if isinstance(expr, Leaf):
        return leaf(expr)
    if isinstance(expr, Sum):
        vals = [fold(c, leaf, add, mul, scale) for c in expr.children]
        out = vals[0]
        for v in vals[1:]:
            out = add(out, v)
        return out
    if isinstance(expr, Product):
        vals = [fold(c, leaf, add, mul, scale) for c in expr.factors]
        out = vals[0]
        for v in vals[1:]:
            out = mul(out, v)
        return out
    if isinstance(expr, Scale):
        return scale(expr.alpha, fold(expr.child, leaf, add, mul, scale))
    raise ExpressionError(f"unknown node {type(expr).__name__}")


def leaves(expr: FSExpression) -> list[Leaf]:
    out: list[Leaf] = []
    fold(expr, lambda l: out.append(l), lambda a, b: None, lambda a, b: None, lambda a, b: None)
    return out


def expression_p(expr: FSExpression) -> float:
    ps = {leaf.op.p for leaf in leaves(expr)}
    if len(ps) != 1:
        raise ExpressionError(f"leaves mix exponents {sorted(ps)}")
    return ps.pop()


def expression_modulus(expr: FSExpression) -> int:
    """Common residue modulus: lcm of all tail periods of all leaves."""
    return lcm(*(leaf.op.modulus for leaf in leaves(expr)))


def expression_radius(expr: FSExpression) -> int:
    """Largest |index| of any leaf's center."""
    r = 0
    for leaf in leaves(expr):
        lo, hi = leaf.op.center_bounds()
        r = max(r, abs(lo), abs(hi))
    return r


def expression_bandwidth(expr: FSExpression) -> int:
    return fold(expr, lambda l: l.op.bandwidth, max, lambda a, b: a + b, lambda a, b: b)


# -- evaluation -------------------------------------------------------------


def band_product(a: BandOperator, b: BandOperator, cap: int = BANDWIDTH_CAP) -> BandOperator:
    """Symbolic product ``a @ b`` (diagonal convolution)."""
    a._compatible(b)
    if a.bandwidth + b.bandwidth > cap:
        raise OperatorError(f"product bandwidth {a.bandwidth + b.bandwidth} exceeds cap {cap}")
    # (ab)[i, i+k] = sum_{s+t=k} a_s(i) b_t(i+s)
    diags: dict[int, EPS] = {}
    for s, sa in a.diagonals.items():
        for t, sb in b.diagonals.items():
            term = sa * sb.shift(s)
            k = s + t
            diags[k] = diags[k] + term if k in diags else term
    return BandOperator(diags, a.domain, a.p)


def pointwise_limit(expr: FSExpression, cap: int = BANDWIDTH_CAP) -> BandOperator:
    expression_p(expr)
    return fold(expr, lambda l: l.op, lambda x, y: x + y,
                lambda x, y: band_product(x, y, cap), lambda al, x: al * x)


def substitute(expr: FSExpression, leaf_map: Callable[[Leaf], BandOperator],
               cap: int = BANDWIDTH_CAP) -> BandOperator:
    """Evaluate the tree with each leaf replaced by ``leaf_map(leaf)``."""
    return fold(expr, leaf_map, lambda x, y: x + y,
                lambda x, y: band_product(x, y, cap), lambda al, x: al * x)


def finite_section(expr: FSExpression, n: int) -> FiniteMatrix:
    """``A_n`` as a (2n+1) x (2n+1) matrix on rows and columns ``-n..n``."""
    n = int(n)
    if n < 1:
        raise ExpressionError(f"section index must be >= 1, got {n}")
    iv = (-n, n)
    entries = fold(expr, lambda l: materialize(l.op, iv, iv).entries,
                   lambda x, y: x + y, lambda x, y: x @ y, lambda al, x: al * x)
    return FiniteMatrix(iv, iv, entries)


# -- JSON -----------------------------------------------------------------


def expression_from_json(obj, operators: dict[str, BandOperator], path: str = "expression"
                         ) -> FSExpression:
    if not isinstance(obj, dict) or len(obj) == 0:
        raise ExpressionError(f"{path}: expected an expression object")
    if "leaf" in obj:
        name = obj["leaf"]
        if not isinstance(name, str) or name not in operators:
            raise ExpressionError(f"{path}.leaf: unknown operator {name!r}")
        return Leaf(operators[name], name)
    for key, cls in (("sum", Sum), ("product", Product)):
        if key in obj:
            items = obj[key]
            if not isinstance(items, list) or not items:
                raise ExpressionError(f"{path}.{key}: expected a nonempty list")
            return cls(tuple(expression_from_json(c, operators, f"{path}.{key}[{i}]")
                             for i, c in enumerate(items)))
    if "scale" in obj:
        try:
            alpha = scalar_from_json(obj["scale"], f"{path}.scale")
        except OperatorError as exc:
            raise ExpressionError(str(exc)) from None
        if "child" not in obj:
            raise ExpressionError(f"{path}.child: missing")
        return Scale(alpha, expression_from_json(obj["child"], operators, f"{path}.child"))
    raise ExpressionError(f"{path}: expected one of leaf, sum, product, scale; got keys {sorted(obj)}")


def expression_to_json(expr: FSExpression) -> dict:
    if isinstance(expr, Leaf):
        return {"leaf": expr.name}
    if isinstance(expr, Sum):
        return {"sum": [expression_to_json(c) for c in expr.children]}
    if isinstance(expr, Product):
        return {"product": [expression_to_json(c) for c in expr.factors]}
    return {"scale": scalar_to_json(expr.alpha), "child": expression_to_json(expr.child)}


def describe(expr: FSExpression) -> str:
    return fold(expr, lambda l: l.name or "op",
                lambda a, b: f"({a} + {b})", lambda a, b: f"{a}{b}",
                lambda al, x: f"{scalar_to_json(al)}*{x}")


__all__ = [
    "FSExpression", "Leaf", "Sum", "Product", "Scale", "ExpressionError", "BANDWIDTH_CAP",
    "band_product", "pointwise_limit", "substitute", "finite_section", "leaves",
    "expression_p", "expression_modulus", "expression_radius", "expression_bandwidth",
    "expression_from_json", "expression_to_json", "describe",
]
