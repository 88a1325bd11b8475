"""Stability indicators of composed finite-section sequences.

For a tree ``expr`` with pointwise limit ``A`` the indicator set consists of

* ``A`` itself (kind ``CENTER``, on Z),
* for each residue ``r`` modulo the common period, the tree evaluated with
  every leaf ``B`` replaced by the ``..0`` compression of its limit operator
  along ``h = k rho + r`` (kind ``PLUS_CORNER``: the lower right corner of
  ``A_n`` for ``n = r mod rho``),
* and the mirror image on ``0..`` (kind ``MINUS_CORNER``: the top left corner).

All leaves are sampled along the same progression, so every residue class
gives one coherent pair of corner operators.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

from .limit_ops import Direction, limit_along
from .operator_model import (BandOperator, OperatorDomain, compress, domain_to_json,
                             operator_to_json)
from .periodic import lcm
from .sequence_algebra import (FSExpression, Leaf, describe, expression_modulus, expression_p,
                               leaves, pointwise_limit, substitute)


class Kind(enum.Enum):
    CENTER = "center"
    PLUS_CORNER = "plus_corner"
    MINUS_CORNER = "minus_corner"


PLUS_DOMAIN = OperatorDomain.leq(0)
MINUS_DOMAIN = OperatorDomain.geq(0)


@dataclass(frozen=True, eq=False)
class Indicator:
    """``residues`` is ``None`` when the indicator belongs to every residue class."""

    op: BandOperator
    kind: Kind
    residues: tuple[int, ...] | None = None
    provenance: str = ""

    @property
    def residue(self):
        if self.residues is None:
            return "all"
        return self.residues[0] if len(self.residues) == 1 else list(self.residues)

    def label(self) -> str:
        if self.residues is None:
            return self.kind.value
        return f"{self.kind.value}[r={','.join(map(str, self.residues))}]"

    def same(self, other: "Indicator") -> bool:
        return self.kind is other.kind and self.op == other.op

    def shifted(self, lam: complex) -> "Indicator":
        prov = self.provenance if lam == 0 else f"{self.provenance} - ({lam:g})I"
        return Indicator(self.op.shift_identity(lam), self.kind, self.residues, prov)

    def to_json(self) -> dict:
        return {
            "kind": self.kind.value,
            "residue": self.residue,
            "domain": domain_to_json(self.op.domain),
            "provenance": self.provenance,
            "operator": operator_to_json(self.op),
        }


@dataclass(frozen=True, eq=False)
class IndicatorSet:
    members: tuple[Indicator, ...]
    modulus: int
    provenance: tuple[str, ...] = field(default=())

    def by_residue(self, r: int) -> list[Indicator]:
        r %= self.modulus
        return [m for m in self.members if m.residues is None or r in m.residues]

    @property
    def center(self) -> Indicator:
        return next(m for m in self.members if m.kind is Kind.CENTER)

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def to_json(self) -> dict:
        return {"modulus": self.modulus, "members": [m.to_json() for m in self.members],
                "provenance": list(self.provenance)}


def _dedup(raw: list[Indicator], modulus: int) -> IndicatorSet:
    """Merge structurally equal indicators, collecting their residues."""
    groups: list[tuple[Indicator, set]] = []
    for ind in raw:
        for rep, res in groups:
            if rep.same(ind):
                res.update(range(modulus) if ind.residues is None else ind.residues)
                break
        else:
            groups.append((ind, set(range(modulus)) if ind.residues is None else set(ind.residues)))
    members = []
    for rep, res in groups:
        full = rep.kind is Kind.CENTER or len(res) == modulus
        residues = None if full else tuple(sorted(res))
        members.append(Indicator(rep.op, rep.kind, residues, rep.provenance))
    return IndicatorSet(tuple(members), modulus, tuple(f"{i.label()}: {i.provenance}" for i in raw))


def _corner(expr: FSExpression, modulus: int, residue: int, direction: Direction) -> BandOperator:
    dom = PLUS_DOMAIN if direction is Direction.PLUS else MINUS_DOMAIN
    return substitute(expr, lambda leaf: compress(limit_along(leaf.op, modulus, residue, direction),
                                                  dom))


def _corner_provenance(expr: FSExpression, residue: int, modulus: int, direction: Direction) -> str:
    side = "P-" if direction is Direction.PLUS else "P+"
    names = sorted({leaf.name or "op" for leaf in leaves(expr)})
    sign = "" if direction is Direction.PLUS else "-"
    return (f"{describe(expr)} with each leaf X -> {side} lim(X, h={sign}(k*{modulus}+{residue})) "
            f"{side} [{', '.join(names)}]")


def _raw_members(expr: FSExpression, modulus: int, residues) -> list[Indicator]:
    expression_p(expr)
    raw = [Indicator(pointwise_limit(expr), Kind.CENTER, None, f"pointwise limit of {describe(expr)}")]
    for r in residues:
        for direction, kind in ((Direction.PLUS, Kind.PLUS_CORNER),
                                (Direction.MINUS, Kind.MINUS_CORNER)):
            raw.append(Indicator(_corner(expr, modulus, r, direction), kind, (r,),
                                 _corner_provenance(expr, r, modulus, direction)))
    return raw


def stab_composed(expr: FSExpression) -> IndicatorSet:
    rho = expression_modulus(expr)
    return _dedup(_raw_members(expr, rho, range(rho)), rho)


def stab_pure(op: BandOperator) -> IndicatorSet:
    return stab_composed(Leaf(op, "A"))


def stab_h(expr: FSExpression, modulus: int, residue: int) -> IndicatorSet:
    """Indicators along the progression ``n = k * modulus + residue``."""
    rho = expression_modulus(expr)
    modulus = int(modulus)
    if modulus < 1 or modulus % rho:
        raise ValueError(f"leaf period lcm {rho} does not divide modulus {modulus}")
    r = int(residue) % modulus
    # the limits only depend on r mod rho; keep the requested label
    raw = _raw_members(expr, rho, [r % rho])
    members = [Indicator(i.op, i.kind, None if i.kind is Kind.CENTER else (r,), i.provenance)
               for i in raw]
    return IndicatorSet(tuple(_dedup(members, modulus).members), modulus,
                        tuple(f"{i.label()}: {i.provenance}" for i in members))


def stab_shifted(ind_set: IndicatorSet, lam: complex) -> IndicatorSet:
    """Members ``B - lam I`` with ``I`` the identity on each member's own domain."""
    return IndicatorSet(tuple(m.shifted(lam) for m in ind_set.members), ind_set.modulus,
                        ind_set.provenance)


def same_members(a: IndicatorSet, b: IndicatorSet) -> bool:
    """Structural set equality (kind and operator), ignoring residue labels."""
    return members_subset(a, b) and members_subset(b, a)


def members_subset(a: IndicatorSet, b: IndicatorSet) -> bool:
    return all(any(x.same(y) for y in b.members) for x in a.members)


def common_modulus(*sets: IndicatorSet) -> int:
    return lcm(*(s.modulus for s in sets))
