"""Band operators on l^p(Z) and on half-lines, with eventually periodic diagonals.

``diagonals[k]`` holds the sequence ``i -> A[i, i + k]``.  Entries outside
``domain x domain`` are zero; the stored diagonals are masked accordingly so
that structural equality is meaningful for half-line operators.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Mapping

import numpy as np

from .periodic import ATOL, EventuallyPeriodicSequence, lcm

EPS = EventuallyPeriodicSequence

FULL = "Z"
GEQ = "geq"
LEQ = "leq"


class OperatorError(ValueError):
    """Invalid operator construction or incompatible operands."""


@dataclass(frozen=True)
class OperatorDomain:
    """Index set ``Z``, ``a..`` (kind ``geq``) or ``..b`` (kind ``leq``)."""

    kind: str = FULL
    bound: int = 0

    def __post_init__(self):
        if self.kind not in (FULL, GEQ, LEQ):
            raise OperatorError(f"unknown domain kind {self.kind!r}")
        if self.kind == FULL:
            object.__setattr__(self, "bound", 0)

    @classmethod
    def full(cls) -> "OperatorDomain":
        return cls(FULL)

    @classmethod
    def geq(cls, a: int) -> "OperatorDomain":
        return cls(GEQ, int(a))

    @classmethod
    def leq(cls, b: int) -> "OperatorDomain":
        return cls(LEQ, int(b))

    @property
    def is_full(self) -> bool:
        return self.kind == FULL

    def contains(self, idx):
        idx = np.asarray(idx)
        if self.kind == GEQ:
            return idx >= self.bound
        if self.kind == LEQ:
            return idx <= self.bound
        return np.ones(idx.shape, dtype=bool)

    def translate(self, k: int) -> "OperatorDomain":
        """Domain of ``S_{-k} A S_k`` restricted accordingly (indices move by -k)."""
        return self if self.is_full else OperatorDomain(self.kind, self.bound - k)

    def __str__(self) -> str:
        if self.kind == GEQ:
            return f"{self.bound}.."
        if self.kind == LEQ:
            return f"..{self.bound}"
        return "Z"


Z = OperatorDomain.full()


def parse_p(p) -> float:
    if isinstance(p, str):
        if p.lower() in ("inf", "infinity", "∞"):
            return math.inf
        p = float(p)
    p = float(p)
    if p not in (1.0, 2.0, math.inf):
        raise OperatorError(f"p must be 1, 2 or inf, got {p!r}")
    return p


def dual_p(p: float) -> float:
    return {1.0: math.inf, 2.0: 2.0, math.inf: 1.0}[p]


@dataclass(frozen=True)
class FiniteMatrix:
    """Materialized window; ``rows`` and ``cols`` are inclusive index ranges."""

    rows: tuple[int, int]
    cols: tuple[int, int]
    entries: np.ndarray

    def __post_init__(self):
        rows = (int(self.rows[0]), int(self.rows[1]))
        cols = (int(self.cols[0]), int(self.cols[1]))
        entries = np.asarray(self.entries, dtype=complex)
        if entries.shape != (rows[1] - rows[0] + 1, cols[1] - cols[0] + 1):
            raise OperatorError(f"entries shape {entries.shape} does not match {rows} x {cols}")
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)
        object.__setattr__(self, "entries", entries)

    @classmethod
    def square(cls, entries, start: int = 0) -> "FiniteMatrix":
        entries = np.asarray(entries, dtype=complex)
        n = entries.shape[0]
        return cls((start, start + n - 1), (start, start + n - 1), entries)

    @property
    def shape(self) -> tuple[int, int]:
        return self.entries.shape

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def adjoint(self) -> "FiniteMatrix":
        return FiniteMatrix(self.cols, self.rows, self.entries.conj().T)

    def embedding(self) -> np.ndarray:
        """0/1 matrix with ones where the row index equals the column index."""
        r = np.arange(self.rows[0], self.rows[1] + 1)[:, None]
        c = np.arange(self.cols[0], self.cols[1] + 1)[None, :]
        return (r == c).astype(float)

    def shifted(self, lam: complex) -> "FiniteMatrix":
        """``M - lam * I`` with ``I`` acting on coinciding row/column indices."""
        return FiniteMatrix(self.rows, self.cols, self.entries - lam * self.embedding())

    def bandwidth(self) -> int:
        r, c = np.nonzero(np.abs(self.entries) > 0)
        if len(r) == 0:
            return 0
        return int(np.max(np.abs((r + self.rows[0]) - (c + self.cols[0]))))


def _check_interval(iv, what: str) -> tuple[int, int]:
    lo, hi = int(iv[0]), int(iv[1])
    if hi < lo:
        raise OperatorError(f"empty {what} interval {lo}..{hi}")
    return lo, hi


def _mask_to_domain(k: int, seq: EPS, domain: OperatorDomain) -> EPS:
    # row i, column i + k must both lie in the domain
    if domain.kind == GEQ:
        return seq.masked(lo=domain.bound - min(0, k))
    if domain.kind == LEQ:
        return seq.masked(hi=domain.bound - max(0, k))
    return seq


@dataclass(frozen=True, eq=False)
class BandOperator:
    diagonals: Mapping[int, EPS]
    domain: OperatorDomain = Z
    p: float = 2.0

    def __post_init__(self):
        p = parse_p(self.p)
        diags = {}
        for k, seq in self.diagonals.items():
            if not isinstance(seq, EventuallyPeriodicSequence):
                raise OperatorError(f"diagonal {k} is not an EventuallyPeriodicSequence")
            seq = _mask_to_domain(int(k), seq, self.domain).normalized()
            if not seq.is_zero():
                diags[int(k)] = seq
        object.__setattr__(self, "diagonals", MappingProxyType(dict(sorted(diags.items()))))
        object.__setattr__(self, "p", p)

    # -- constructors -----------------------------------------------------

    @classmethod
    def identity(cls, domain: OperatorDomain = Z, p=2.0) -> "BandOperator":
        return cls({0: EPS.constant(1.0)}, domain, p)

    @classmethod
    def zero(cls, domain: OperatorDomain = Z, p=2.0) -> "BandOperator":
        return cls({}, domain, p)

    @classmethod
    def laurent(cls, coeffs: Mapping[int, complex], p=2.0) -> "BandOperator":
        """Laurent operator ``L[i, j] = a[i - j]``; ``coeffs`` maps ``i - j`` to ``a``."""
        return cls({-d: EPS.constant(a) for d, a in coeffs.items()}, Z, p)

    @classmethod
    def shift(cls, k: int = 1, p=2.0) -> "BandOperator":
        """``S_k`` with ``(S_k x)[i + k] = x[i]``."""
        return cls.laurent({k: 1.0}, p)

    # -- basic properties ---------------------------------------------------

    @property
    def offsets(self) -> tuple[int, ...]:
        return tuple(self.diagonals)

    @property
    def bandwidth(self) -> int:
        return max((abs(k) for k in self.diagonals), default=0)

    def left_periods(self) -> list[int]:
        return [s.left_rho for s in self.diagonals.values()]

    def right_periods(self) -> list[int]:
        return [s.right_rho for s in self.diagonals.values()]

    @property
    def modulus(self) -> int:
        return lcm(*self.left_periods(), *self.right_periods())

    def center_bounds(self) -> tuple[int, int]:
        """Smallest ``lo..hi`` outside of which every diagonal is in its tail."""
        if not self.diagonals:
            return 0, 0
        lo = min(s.center_start for s in self.diagonals.values())
        hi = max(s.center_end for s in self.diagonals.values())
        return lo, max(lo, hi - 1)

    def __eq__(self, other) -> bool:
        if not isinstance(other, BandOperator):
            return NotImplemented
        if self.domain != other.domain or self.p != other.p:
            return False
        if set(self.diagonals) != set(other.diagonals):
            return False
        return all(self.diagonals[k] == other.diagonals[k] for k in self.diagonals)

    __hash__ = None

    def __repr__(self) -> str:
        return f"BandOperator(domain={self.domain}, p={self.p:g}, offsets={list(self.diagonals)})"

    # -- arithmetic -------------------------------------------------------

    def _compatible(self, other: "BandOperator") -> None:
        if self.p != other.p:
            raise OperatorError(f"mixing exponents p={self.p:g} and p={other.p:g}")
        if self.domain != other.domain:
            raise OperatorError(f"domain mismatch: {self.domain} vs {other.domain}")

    def __add__(self, other: "BandOperator") -> "BandOperator":
        self._compatible(other)
        diags = dict(self.diagonals)
        for k, s in other.diagonals.items():
            diags[k] = diags[k] + s if k in diags else s
        return BandOperator(diags, self.domain, self.p)

    def __neg__(self) -> "BandOperator":
        return self * -1.0

    def __sub__(self, other: "BandOperator") -> "BandOperator":
        return self + (-other)

    def __mul__(self, alpha) -> "BandOperator":
        if isinstance(alpha, BandOperator):
            return NotImplemented
        return BandOperator({k: s * complex(alpha) for k, s in self.diagonals.items()},
                            self.domain, self.p)

    __rmul__ = __mul__

    def shift_identity(self, lam: complex) -> "BandOperator":
        """``A - lam I`` with ``I`` the identity on the operator's own domain."""
        return self - lam * BandOperator.identity(self.domain, self.p)


def entry(op: BandOperator, i: int, j: int) -> complex:
    if not (op.domain.contains(i) and op.domain.contains(j)):
        return 0j
    seq = op.diagonals.get(j - i)
    return 0j if seq is None else seq[i]


def materialize(op: BandOperator, rows, cols) -> FiniteMatrix:
    rows = _check_interval(rows, "row")
    cols = _check_interval(cols, "column")
    ridx = np.arange(rows[0], rows[1] + 1)
    out = np.zeros((len(ridx), cols[1] - cols[0] + 1), dtype=complex)
    for k, seq in op.diagonals.items():
        j = ridx + k
        ok = (j >= cols[0]) & (j <= cols[1])
        if not np.any(ok):
            continue
        vals = seq.values(ridx[ok])
        out[np.nonzero(ok)[0], j[ok] - cols[0]] = vals
    # diagonals are masked to the domain already
    return FiniteMatrix(rows, cols, out)


def adjoint(op: BandOperator) -> BandOperator:
    """Conjugate transpose; ``p`` moves to the dual exponent."""
    # (A*)[i, i + k] = conj(A[i + k, i]) = conj(a_{-k}(i + k))
    diags = {-k: s.shift(-k).conj() for k, s in op.diagonals.items()}
    return BandOperator(diags, op.domain, dual_p(op.p))


def shift_conjugate(op: BandOperator, k: int) -> BandOperator:
    """``S_{-k} A S_k``: entry ``(i, j)`` becomes ``A[i + k, j + k]``."""
    return BandOperator({d: s.shift(k) for d, s in op.diagonals.items()},
                        op.domain.translate(k), op.p)


def compress(op: BandOperator, domain: OperatorDomain) -> BandOperator:
    """Restrict to ``domain x domain``."""
    if domain.is_full:
        if not op.domain.is_full:
            raise OperatorError("cannot extend a half-line operator to Z by compression")
        return op
    if not op.domain.is_full:
        if op.domain.kind != domain.kind:
            raise OperatorError(f"cannot compress an operator on {op.domain} to {domain}")
        bound = max(op.domain.bound, domain.bound) if domain.kind == GEQ else \
            min(op.domain.bound, domain.bound)
        domain = OperatorDomain(domain.kind, bound)
    return BandOperator(dict(op.diagonals), domain, op.p)


def semiinfinite_embed(op: BandOperator, c: float) -> BandOperator:
    """Extend an operator on ``a..`` to Z by ``c`` times the identity on ``..a-1``."""
    if op.domain.kind != GEQ:
        raise OperatorError(f"expected an operator on a half-line a.., got {op.domain}")
    c = float(np.real(c))
    if c <= 0:
        raise OperatorError(f"embedding constant must be positive, got {c}")
    a = op.domain.bound
    diags = dict(op.diagonals)
    pad = EPS([c], [], a, [0.0])
    diags[0] = diags[0] + pad if 0 in diags else pad
    return BandOperator(diags, Z, op.p)


def operator_from_entries(f, offsets, lo: int, hi: int, left_period: int, right_period: int,
                          domain: OperatorDomain = Z, p=2.0) -> BandOperator:
    """Build an operator from an entry function ``f(i, j)`` that is eventually
    periodic (periods given) outside rows ``lo..hi-1``."""
    diags = {k: EPS.from_function(lambda i, k=k: f(i, i + k), lo, hi, left_period, right_period)
             for k in offsets}
    return BandOperator(diags, domain, p)


def block_diagonal(block, defect=None, start: int = 0, p=2.0) -> BandOperator:
    """``diag(..., M, M, [defect], M, M, ...)`` with ``M`` a square block.

    Without a defect the blocks tile Z starting at ``start``.  With a square
    ``defect`` matrix its top-left entry sits at index ``start`` and the
    periodic blocks continue on both sides of it.
    """
    block = np.atleast_2d(np.asarray(block, dtype=complex))
    s = block.shape[0]
    if defect is None:
        dlen = 0
        defect = np.zeros((0, 0))
    else:
        defect = np.atleast_2d(np.asarray(defect, dtype=complex))
        dlen = defect.shape[0]
    lo, hi = start, start + dlen

    def where(i):
        if lo <= i < hi:
            return "d", i - lo, lo
        if i >= hi:
            return "b", (i - hi) % s, i - (i - hi) % s
        return "b", (i - lo) % s, i - (i - lo) % s

    def f(i, j):
        wi, ri, oi = where(i)
        wj, rj, oj = where(j)
        if wi != wj or oi != oj:
            return 0.0
        return defect[ri, rj] if wi == "d" else block[ri, rj]

    w = max(s, dlen) - 1
    return operator_from_entries(f, range(-w, w + 1), lo, hi, s, s, Z, p)


# -- JSON ----------------------------------------------------------------


def scalar_to_json(z):
    z = complex(z)
    return z.real if z.imag == 0 else [z.real, z.imag]


def scalar_from_json(v, path: str = "") -> complex:
    if isinstance(v, bool):
        raise OperatorError(f"{path}: expected a number, got a boolean")
    if isinstance(v, (int, float)):
        return complex(v)
    if isinstance(v, (list, tuple)) and len(v) == 2 and all(
            isinstance(x, (int, float)) and not isinstance(x, bool) for x in v):
        return complex(v[0], v[1])
    raise OperatorError(f"{path}: expected a number or [re, im], got {v!r}")


def domain_to_json(d: OperatorDomain):
    if d.kind == GEQ:
        return {"geq": d.bound}
    if d.kind == LEQ:
        return {"leq": d.bound}
    return "Z"


def domain_from_json(v, path: str = "domain") -> OperatorDomain:
    if v == "Z" or v is None:
        return Z
    if isinstance(v, dict) and len(v) == 1:
        (key, b), = v.items()
        if key in (GEQ, LEQ) and isinstance(b, int) and not isinstance(b, bool):
            return OperatorDomain(key, b)
    raise OperatorError(f"{path}: expected \"Z\", {{\"geq\": a}} or {{\"leq\": b}}, got {v!r}")


def p_to_json(p: float):
    return "inf" if math.isinf(p) else int(p)


def operator_to_json(op: BandOperator) -> dict:
    return {
        "domain": domain_to_json(op.domain),
        "p": p_to_json(op.p),
        "diagonals": [
            {
                "offset": k,
                "left": [scalar_to_json(v) for v in s.left_period],
                "center": [scalar_to_json(v) for v in s.center],
                "center_start": s.center_start,
                "right": [scalar_to_json(v) for v in s.right_period],
            }
            for k, s in op.diagonals.items()
        ],
    }


def operator_from_json(obj, path: str = "operator") -> BandOperator:
    if not isinstance(obj, dict):
        raise OperatorError(f"{path}: expected an object")
    domain = domain_from_json(obj.get("domain", "Z"), f"{path}.domain")
    try:
        p = parse_p(obj.get("p", 2))
    except (OperatorError, ValueError) as exc:
        raise OperatorError(f"{path}.p: {exc}") from None
    raw = obj.get("diagonals")
    if not isinstance(raw, list):
        raise OperatorError(f"{path}.diagonals: expected a list")
    diags: dict[int, EPS] = {}
    for n, d in enumerate(raw):
        dp = f"{path}.diagonals[{n}]"
        if not isinstance(d, dict):
            raise OperatorError(f"{dp}: expected an object")
        k = d.get("offset")
        if not isinstance(k, int) or isinstance(k, bool):
            raise OperatorError(f"{dp}.offset: expected an integer")
        parts = {}
        for name in ("left", "center", "right"):
            vals = d.get(name, [] if name == "center" else None)
            if not isinstance(vals, list) or (name != "center" and not vals):
                raise OperatorError(f"{dp}.{name}: expected a nonempty list" if name != "center"
                                    else f"{dp}.center: expected a list")
            parts[name] = [scalar_from_json(v, f"{dp}.{name}[{m}]") for m, v in enumerate(vals)]
        start = d.get("center_start", 0)
        if not isinstance(start, int) or isinstance(start, bool):
            raise OperatorError(f"{dp}.center_start: expected an integer")
        seq = EPS(parts["left"], parts["center"], start, parts["right"])
        if k in diags:
            raise OperatorError(f"{dp}.offset: duplicate offset {k}")
        diags[k] = seq
    return BandOperator(diags, domain, p)
