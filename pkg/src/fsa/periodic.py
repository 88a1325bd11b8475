"""Two-sided scalar sequences with a periodic left tail, a finite center and a
periodic right tail.

These hold the diagonals of band operators.  Index ``i`` of a sequence maps to

* ``center[i - center_start]`` inside the center,
* ``left_period[(i - center_start) % len(left_period)]`` to the left of it,
* ``right_period[(i - center_end) % len(right_period)]`` to the right of it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

ATOL = 1e-12


def lcm(*values: int) -> int:
    out = 1
    for v in values:
        out = out * int(v) // math.gcd(out, int(v))
    return out


def _frozen(values) -> np.ndarray:
    arr = np.array(values, dtype=complex).reshape(-1)
    arr.setflags(write=False)
    return arr


def _close(a, b) -> bool:
    return abs(a - b) <= ATOL


def _minimal_period(arr: np.ndarray) -> np.ndarray:
    n = len(arr)
    for d in range(1, n):
        if n % d == 0 and np.all(np.abs(arr - np.tile(arr[:d], n // d)) <= ATOL):
            return arr[:d]
    return arr


@dataclass(frozen=True, eq=False)
class EventuallyPeriodicSequence:
    left_period: np.ndarray
    center: np.ndarray
    center_start: int
    right_period: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "left_period", _frozen(self.left_period))
        object.__setattr__(self, "center", _frozen(self.center))
        object.__setattr__(self, "right_period", _frozen(self.right_period))
        object.__setattr__(self, "center_start", int(self.center_start))
        if len(self.left_period) == 0 or len(self.right_period) == 0:
            raise ValueError("tail periods must have at least one entry")
        if not (np.all(np.isfinite(self.left_period)) and np.all(np.isfinite(self.center))
                and np.all(np.isfinite(self.right_period))):
            raise ValueError("sequence entries must be finite")

    # -- constructors -----------------------------------------------------

    @classmethod
    def constant(cls, value) -> "EventuallyPeriodicSequence":
        return cls([value], [], 0, [value])

    @classmethod
    def zeros(cls) -> "EventuallyPeriodicSequence":
        return cls.constant(0.0)

    @classmethod
    def periodic(cls, values, phase: int = 0) -> "EventuallyPeriodicSequence":
        """Purely periodic sequence with ``seq[phase + t] = values[t % len(values)]``."""
        return cls(values, [], phase, values).normalized()

    @classmethod
    def from_function(cls, f: Callable[[int], complex], lo: int, hi: int,
                      left_period: int, right_period: int) -> "EventuallyPeriodicSequence":
        """Sample ``f``; it must be ``left_period``-periodic below ``lo`` and
        ``right_period``-periodic from ``hi`` on."""
        left = [f(i) for i in range(lo - left_period, lo)]
        center = [f(i) for i in range(lo, hi)]
        right = [f(i) for i in range(hi, hi + right_period)]
        return cls(left, center, lo, right).normalized()

    # -- lookup -----------------------------------------------------------

    @property
    def center_end(self) -> int:
        return self.center_start + len(self.center)

    @property
    def left_rho(self) -> int:
        return len(self.left_period)

    @property
    def right_rho(self) -> int:
        return len(self.right_period)

    def __getitem__(self, i: int) -> complex:
        return complex(self.values(np.array([i]))[0])

    def values(self, idx) -> np.ndarray:
        idx = np.asarray(idx, dtype=np.int64)
        out = np.empty(idx.shape, dtype=complex)
        s, e = self.center_start, self.center_end
        lm = idx < s
        rm = idx >= e
        cm = ~(lm | rm)
        out[lm] = self.left_period[(idx[lm] - s) % self.left_rho]
        out[rm] = self.right_period[(idx[rm] - e) % self.right_rho]
        out[cm] = self.center[idx[cm] - s]
        return out

    def window(self, lo: int, hi: int) -> np.ndarray:
        """Entries on ``lo..hi`` (inclusive)."""
        return self.values(np.arange(lo, hi + 1))

    # -- structure --------------------------------------------------------

    def normalized(self) -> "EventuallyPeriodicSequence":
        left = _minimal_period(np.array(self.left_period))
        right = _minimal_period(np.array(self.right_period))
        center = np.array(self.center)
        start = self.center_start
        while len(center) and _close(center[-1], right[-1]):
            center = center[:-1]
            right = np.roll(right, 1)
        while len(center) and _close(center[0], left[0]):
            center = center[1:]
            start += 1
            left = np.roll(left, -1)
        if len(center) == 0:
            if len(left) == len(right) and np.all(np.abs(left - right) <= ATOL):
                # purely periodic: pin the boundary at 0
                right = np.roll(right, start)
                return EventuallyPeriodicSequence(right, [], 0, right)
            for _ in range(lcm(len(left), len(right)) + 1):
                if not _close(left[-1], right[-1]):
                    break
                start -= 1
                left = np.roll(left, 1)
                right = np.roll(right, 1)
        return EventuallyPeriodicSequence(left, center, start, right)

    def is_purely_periodic(self) -> bool:
        n = self.normalized()
        return len(n.center) == 0 and n.left_rho == n.right_rho and np.all(
            np.abs(n.left_period - n.right_period) <= ATOL)

    def is_zero(self) -> bool:
        return (np.all(np.abs(self.left_period) <= ATOL) and np.all(np.abs(self.center) <= ATOL)
                and np.all(np.abs(self.right_period) <= ATOL))

    def max_abs(self) -> float:
        return float(max(np.max(np.abs(self.left_period)), np.max(np.abs(self.right_period)),
                         np.max(np.abs(self.center), initial=0.0)))

    def __eq__(self, other) -> bool:
        if not isinstance(other, EventuallyPeriodicSequence):
            return NotImplemented
        # agreement on a window covering both centers plus a common period on
        # each side implies agreement everywhere
        lo = min(self.center_start, other.center_start) - lcm(self.left_rho, other.left_rho)
        hi = max(self.center_end, other.center_end) + lcm(self.right_rho, other.right_rho)
        return bool(np.all(np.abs(self.window(lo, hi) - other.window(lo, hi)) <= ATOL))

    __hash__ = None

    def __repr__(self) -> str:
        def fmt(a):
            return "[" + ", ".join(f"{complex(v).real:g}" if complex(v).imag == 0 else f"{complex(v):g}"
                                   for v in a) + "]"
        return (f"EPS(left={fmt(self.left_period)}, center={fmt(self.center)}@{self.center_start}, "
                f"right={fmt(self.right_period)})")

    # -- arithmetic -------------------------------------------------------

    def shift(self, k: int) -> "EventuallyPeriodicSequence":
        """Sequence ``i -> self[i + k]``."""
        return EventuallyPeriodicSequence(self.left_period, self.center, self.center_start - k,
                                          self.right_period)

    def conj(self) -> "EventuallyPeriodicSequence":
        return EventuallyPeriodicSequence(np.conj(self.left_period), np.conj(self.center),
                                          self.center_start, np.conj(self.right_period))

    def map(self, fn) -> "EventuallyPeriodicSequence":
        return EventuallyPeriodicSequence(fn(self.left_period), fn(self.center), self.center_start,
                                          fn(self.right_period)).normalized()

    def combine(self, other: "EventuallyPeriodicSequence", fn) -> "EventuallyPeriodicSequence":
        lo = min(self.center_start, other.center_start)
        hi = max(self.center_end, other.center_end)
        lrho = lcm(self.left_rho, other.left_rho)
        rrho = lcm(self.right_rho, other.right_rho)
        left_idx = np.arange(lo - lrho, lo)
        mid_idx = np.arange(lo, hi)
        right_idx = np.arange(hi, hi + rrho)
        return EventuallyPeriodicSequence(
            fn(self.values(left_idx), other.values(left_idx)),
            fn(self.values(mid_idx), other.values(mid_idx)),
            lo,
            fn(self.values(right_idx), other.values(right_idx)),
        ).normalized()

    def __add__(self, other):
        if isinstance(other, EventuallyPeriodicSequence):
            return self.combine(other, np.add)
        return self.map(lambda a: a + other)

    def __sub__(self, other):
        if isinstance(other, EventuallyPeriodicSequence):
            return self.combine(other, np.subtract)
        return self.map(lambda a: a - other)

    def __mul__(self, other):
        if isinstance(other, EventuallyPeriodicSequence):
            return self.combine(other, np.multiply)
        return self.map(lambda a: a * other)

    __rmul__ = __mul__

    def __neg__(self):
        return self.map(np.negative)

    def masked(self, lo: int | None = None, hi: int | None = None) -> "EventuallyPeriodicSequence":
        """Zero every entry with index < lo or > hi."""
        out = self
        if hi is not None:
            start = min(out.center_start, hi + 1)
            idx = np.arange(start, hi + 1)
            out = EventuallyPeriodicSequence(out.left_period if start == out.center_start else
                                             out.values(np.arange(start - out.left_rho, start)),
                                             out.values(idx), start, [0.0])
        if lo is not None:
            end = max(out.center_end, lo)
            idx = np.arange(lo, end)
            out = EventuallyPeriodicSequence([0.0], out.values(idx), lo,
                                             out.right_period if end == out.center_end else
                                             out.values(np.arange(end, end + out.right_rho)))
        return out.normalized()

    def right_tail(self, phase: int) -> "EventuallyPeriodicSequence":
        """Purely periodic sequence ``i -> right_period[(i + phase - center_end) % rho]``."""
        t = np.arange(self.right_rho)
        return EventuallyPeriodicSequence.periodic(
            self.right_period[(t + phase - self.center_end) % self.right_rho])

    def left_tail(self, phase: int) -> "EventuallyPeriodicSequence":
        """Purely periodic sequence ``i -> left_period[(i - phase - center_start) % rho]``."""
        t = np.arange(self.left_rho)
        return EventuallyPeriodicSequence.periodic(
            self.left_period[(t - phase - self.center_start) % self.left_rho])
