"""Limit operators of eventually periodic band operators.

For an operator whose diagonals are periodic beyond its center, the translates
``S_{-h} A S_h`` become exactly periodic once ``h`` leaves the center, so every
limit operator is read off the tails.

Residue convention: in direction ``PLUS`` the residue ``r`` modulo ``M`` names
the progression ``h = kM + r`` (k -> +inf); in direction ``MINUS`` it names
``h = -(kM + r)``.  Hence residue ``r`` always corresponds to section indices
``n = r (mod M)``: the lower right corner of ``A_n`` is seen through
``S_{-n} A S_n`` and the top left corner through ``S_n A S_{-n}``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from types import MappingProxyType
from typing import Mapping

from .operator_model import BandOperator, OperatorError
from .periodic import lcm


class Direction(enum.Enum):
    PLUS = "plus"
    MINUS = "minus"


def tail_modulus(op: BandOperator, direction: Direction) -> int:
    periods = op.right_periods() if direction is Direction.PLUS else op.left_periods()
    return lcm(*periods)


def limit_along(op: BandOperator, modulus: int, residue: int, direction: Direction) -> BandOperator:
    """The limit operator along ``h = +-(k * modulus + residue)``."""
    if not op.domain.is_full:
        raise OperatorError("limit operators are taken of operators on Z")
    modulus = int(modulus)
    if modulus < 1:
        raise OperatorError(f"modulus must be positive, got {modulus}")
    rho = tail_modulus(op, direction)
    if modulus % rho:
        raise OperatorError(f"tail period lcm {rho} does not divide modulus {modulus}")
    r = int(residue) % modulus
    if direction is Direction.PLUS:
        diags = {k: s.right_tail(r) for k, s in op.diagonals.items()}
    else:
        diags = {k: s.left_tail(r) for k, s in op.diagonals.items()}
    return BandOperator(diags, op.domain, op.p)


@dataclass(frozen=True)
class LimitOperatorSet:
    direction: Direction
    modulus: int
    members: Mapping[int, BandOperator]

    def __post_init__(self):
        object.__setattr__(self, "members", MappingProxyType(dict(self.members)))

    def distinct(self) -> list[BandOperator]:
        out: list[BandOperator] = []
        for m in self.members.values():
            if not any(m == o for o in out):
                out.append(m)
        return out


def _limit_set(op: BandOperator, direction: Direction) -> LimitOperatorSet:
    rho = tail_modulus(op, direction)
    return LimitOperatorSet(direction, rho,
                            {r: limit_along(op, rho, r, direction) for r in range(rho)})


def limit_plus(op: BandOperator) -> LimitOperatorSet:
    return _limit_set(op, Direction.PLUS)


def limit_minus(op: BandOperator) -> LimitOperatorSet:
    return _limit_set(op, Direction.MINUS)
