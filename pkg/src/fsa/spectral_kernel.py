"""Norms, lower norms, inverse norms and pseudospectra.

Finite matrices are handled exactly (up to floating point).  Indicators, which
live on Z or on a half-line, are approached through growing windows:

* ``indicator_norm`` takes square windows anchored at the indicator's corner;
  their norms increase towards the operator norm.
* ``indicator_inv_norm`` takes tall windows: ``m+1`` (or ``2m+1``) columns and
  every row that meets them.  The smallest singular value ``nu_m`` of such a
  window is the exact lower norm of the operator restricted to those columns,
  so it decreases towards ``nu`` as ``m`` grows.

Smallest singular values over a grid of shifts ``lam`` are computed per
connected block of the sparsity pattern.  Small blocks go through a batched
SVD.  Larger banded blocks use bisection on ``sigma`` with a vectorized
positive-definiteness test of ``(M - lam E)^H (M - lam E) - sigma^2``.
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg
from scipy import ndimage
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components
from scipy.spatial.distance import directed_hausdorff

from .indicators import Indicator
from .operator_model import (BandOperator, FiniteMatrix, OperatorDomain, adjoint, materialize)

INF_CAP = 1e12
PIVOT_RTOL = 1e-13
SVD_BLOCK_MAX = 16
BISECTION_STEPS = 34
CHUNK_BYTES = 48 * 2**20


class UnsupportedExponentError(ValueError):
    """Requested quantity is only available for p = 2."""


class GridError(ValueError):
    """Invalid pseudospectrum grid specification."""


class EstimateKind(enum.Enum):
    EXACT = "Exact"
    LOWER_BOUND = "LowerBound"
    UPPER_BOUND = "UpperBound"


@dataclass(frozen=True)
class NormEstimate:
    value: float
    kind: EstimateKind
    window_size: int
    converged: bool
    tolerance_used: float
    history: tuple = field(default=(), compare=False)

    @property
    def is_infinite(self) -> bool:
        return math.isinf(self.value)

    def to_json(self) -> dict:
        return {"value": float_to_json(self.value), "kind": self.kind.value,
                "window_size": self.window_size, "converged": self.converged,
                "tolerance_used": self.tolerance_used}


def float_to_json(x: float):
    return "inf" if math.isinf(x) else float(x)


def _entries(m) -> np.ndarray:
    return m.entries if isinstance(m, FiniteMatrix) else np.asarray(m, dtype=complex)


def _check_p(p) -> float:
    p = float(p) if not isinstance(p, str) else (math.inf if p == "inf" else float(p))
    if p not in (1.0, 2.0, math.inf):
        raise UnsupportedExponentError(f"p must be 1, 2 or inf, got {p}")
    return p


# -- connected blocks -------------------------------------------------------


def blocks(pattern: np.ndarray) -> list[tuple[np.ndarray, np.ndarray]]:
    """Connected blocks of a rectangular sparsity pattern as (rows, cols) index arrays."""
    r, c = pattern.shape
    ii, jj = np.nonzero(pattern)
    graph = coo_matrix((np.ones(len(ii)), (ii, r + jj)), shape=(r + c, r + c))
    _, labels = connected_components(graph, directed=False)
    order = np.argsort(labels, kind="stable")
    cuts = np.nonzero(np.diff(labels[order]))[0] + 1
    out = []
    for group in np.split(order, cuts):
        rows = group[group < r]
        cols = group[group >= r] - r
        out.append((rows, cols))
    return out


def _unique_blocks(mats: list[np.ndarray], pattern: np.ndarray):
    """Yield distinct (sub-blocks, ...) per connected block; zero-row blocks with columns
    are flagged by returning ``None``."""
    seen = {}
    for rows, cols in blocks(pattern):
        if len(cols) == 0:
            continue
        if len(rows) < len(cols):
            yield None
            continue
        subs = tuple(m[np.ix_(rows, cols)] for m in mats)
        key = (subs[0].shape,) + tuple(s.tobytes() for s in subs)
        if key not in seen:
            seen[key] = subs
            yield subs


# -- finite matrices ---------------------------------------------------------


def _sigma_extreme(a: np.ndarray, smallest: bool) -> float:
    """Largest singular value, or the lower norm ``inf ||a x|| / ||x||``."""
    if a.size == 0:
        return 0.0
    pattern = np.abs(a) > 0
    if not smallest:
        vals = [scipy.linalg.svdvals(a[np.ix_(r, c)], check_finite=False)[0]
                for r, c in blocks(pattern) if len(r) and len(c)]
        return float(max(vals, default=0.0))
    out = math.inf
    for sub in _unique_blocks([a], pattern):
        if sub is None:
            return 0.0
        out = min(out, float(scipy.linalg.svdvals(sub[0], check_finite=False)[-1]))
    return out


def op_norm(m, p=2) -> float:
    a = _entries(m)
    p = _check_p(p)
    if a.size == 0:
        return 0.0
    if p == 1.0:
        return float(np.max(np.sum(np.abs(a), axis=0)))
    if math.isinf(p):
        return float(np.max(np.sum(np.abs(a), axis=1)))
    return _sigma_extreme(a, smallest=False)


def lower_norm(m, p=2) -> float:
    if _check_p(p) != 2.0:
        raise UnsupportedExponentError("lower norms are only supported for p = 2")
    a = _entries(m)
    if a.shape[0] < a.shape[1]:
        return 0.0
    return _sigma_extreme(a, smallest=True)


def mu(m, p=2) -> float:
    if _check_p(p) != 2.0:
        raise UnsupportedExponentError("mu is only supported for p = 2")
    a = _entries(m)
    return min(lower_norm(a), lower_norm(a.conj().T))


def _singular(smallest: float, scale: float) -> bool:
    return smallest <= PIVOT_RTOL * max(scale, np.finfo(float).tiny)


def inv_norm(m, p=2) -> float:
    a = _entries(m)
    p = _check_p(p)
    if a.shape[0] != a.shape[1]:
        raise ValueError(f"inverse norm needs a square matrix, got {a.shape}")
    if a.size == 0:
        return 0.0
    scale = float(np.max(np.abs(a)))
    if p == 2.0:
        s = mu(a)
        return math.inf if _singular(s, scale) else 1.0 / s
    with warnings.catch_warnings():
        # exact zero pivots are handled below
        warnings.simplefilter("ignore", scipy.linalg.LinAlgWarning)
        lu, piv = scipy.linalg.lu_factor(a, check_finite=False)
    if _singular(float(np.min(np.abs(np.diag(lu)))), scale):
        return math.inf
    inv = scipy.linalg.lu_solve((lu, piv), np.eye(a.shape[0]), check_finite=False)
    return op_norm(inv, p)


def kappa(m, p=2) -> float:
    inv = inv_norm(m, p)
    if math.isinf(inv):
        return math.inf
    return op_norm(m, p) * inv


def dense_inverse_norm(m, p=2) -> float:
    """Reference value ``||inv(m)||`` through an explicit inverse (no singularity handling)."""
    return op_norm(np.linalg.inv(_entries(m)), p)


# -- windows of indicators ---------------------------------------------------


def _op(target) -> BandOperator:
    return target.op if isinstance(target, Indicator) else target


def column_window(domain: OperatorDomain, m: int) -> tuple[int, int]:
    """``m+1`` indices from a half-line's corner, or ``-m..m`` on Z."""
    if domain.kind == "geq":
        return domain.bound, domain.bound + m
    if domain.kind == "leq":
        return domain.bound - m, domain.bound
    return -m, m


def square_window(target, m: int) -> FiniteMatrix:
    op = _op(target)
    iv = column_window(op.domain, m)
    return materialize(op, iv, iv)


def rect_window(target, m: int) -> FiniteMatrix:
    """Columns on the anchored window, rows on every index they reach."""
    op = _op(target)
    lo, hi = column_window(op.domain, m)
    w = op.bandwidth
    rlo = lo if op.domain.kind == "geq" else lo - w
    rhi = hi if op.domain.kind == "leq" else hi + w
    return materialize(op, (rlo, rhi), (lo, hi))


def window_schedule(op: BandOperator, m_max: int) -> list[int]:
    lo, hi = op.center_bounds()
    radius = max(abs(lo), abs(hi), 0 if op.domain.is_full else abs(op.domain.bound))
    m0 = max(radius + op.bandwidth + 2 * op.modulus, 4)
    out = []
    m = m0
    while m <= m_max:
        out.append(m)
        m *= 2
    if not out or (out[-1] < m_max and len(out) < 3):
        out.append(m_max)
    return out


def _settled(history: list[float], tol: float) -> bool:
    if len(history) < 3:
        return False
    for a, b in ((history[-3], history[-2]), (history[-2], history[-1])):
        if math.isinf(a) or math.isinf(b):
            if a != b:
                return False
            continue
        if abs(b - a) > tol * max(abs(b), np.finfo(float).tiny):
            return False
    return True


def _row_sum_norm(op: BandOperator, p: float) -> float:
    total = None
    for k, s in op.diagonals.items():
        term = s.map(np.abs) if math.isinf(p) else s.shift(-k).map(np.abs)
        total = term if total is None else total + term
    return 0.0 if total is None else total.max_abs()


def indicator_norm(target, p=None, tol: float = 1e-10, m_max: int = 200) -> NormEstimate:
    op = _op(target)
    p = _check_p(op.p if p is None else p)
    if p != 2.0:
        return NormEstimate(_row_sum_norm(op, p), EstimateKind.EXACT, 0, True, 0.0)
    history: list[float] = []
    m = 0
    for m in window_schedule(op, m_max):
        history.append(op_norm(square_window(op, m), 2))
        if _settled(history, tol):
            break
    return NormEstimate(history[-1], EstimateKind.LOWER_BOUND, m, _settled(history, tol), tol,
                        tuple(history))


def rect_lower_norm(target, m: int) -> float:
    return lower_norm(rect_window(target, m))


def indicator_mu(target, m: int) -> float:
    """``min(nu_m(B), nu_m(B*))``; an upper bound for ``mu(B)``."""
    op = _op(target)
    return min(rect_lower_norm(op, m), rect_lower_norm(adjoint(op), m))


def indicator_inv_norm(target, tol: float = 1e-10, m_max: int = 200) -> NormEstimate:
    op = _op(target)
    if op.p != 2.0:
        raise UnsupportedExponentError("indicator inverse norms are only supported for p = 2")
    scale = max((s.max_abs() for s in op.diagonals.values()), default=0.0)
    history: list[float] = []
    m = 0
    for m in window_schedule(op, m_max):
        nu = indicator_mu(op, m)
        history.append(math.inf if _singular(nu, scale) or 1.0 / nu > INF_CAP else 1.0 / nu)
        if math.isinf(history[-1]) or _settled(history, tol):
            break
    converged = math.isinf(history[-1]) or _settled(history, tol)
    return NormEstimate(history[-1], EstimateKind.LOWER_BOUND, m, converged, tol, tuple(history))


# -- smallest singular values over many shifts ------------------------------


def _chunks(n_points: int, per_point_bytes: int):
    size = max(1, CHUNK_BYTES // max(per_point_bytes, 1))
    for start in range(0, n_points, size):
        yield slice(start, min(n_points, start + size))


def _svd_block(mb: np.ndarray, eb: np.ndarray, lams: np.ndarray) -> np.ndarray:
    out = np.empty(len(lams))
    for sl in _chunks(len(lams), 16 * mb.size * 3):
        x = mb[None] - lams[sl, None, None] * eb[None]
        out[sl] = np.linalg.svd(x, compute_uv=False)[:, -1]
    return out


def _band_of(*mats: np.ndarray) -> int:
    b = 0
    for a in mats:
        ii, jj = np.nonzero(np.abs(a) > 0)
        if len(ii):
            b = max(b, int(np.max(np.abs(ii - jj))))
    return b


def _posdef_tridiagonal(shifted: np.ndarray, off2: np.ndarray) -> np.ndarray:
    """Sturm test: is the tridiagonal matrix with diagonal ``shifted`` (c, B) and squared
    subdiagonal moduli ``off2`` (c, B; row 0 unused) positive definite, per column?"""
    tiny = np.finfo(float).tiny
    d = shifted[0].copy()
    ok = d > tiny
    np.maximum(d, tiny, out=d)
    tmp = np.empty_like(d)
    for k in range(1, shifted.shape[0]):
        np.divide(off2[k], d, out=tmp)
        np.subtract(shifted[k], tmp, out=d)
        ok &= d > tiny
        np.maximum(d, tiny, out=d)
    return ok


def _posdef_banded(low: np.ndarray, s2: np.ndarray) -> np.ndarray:
    """``low[j, k]`` = ``H[k, k-j]`` with shape (b+1, c, B); LDL^H without pivoting."""
    b1, c, _ = low.shape
    b = b1 - 1
    tiny = np.finfo(float).tiny
    d = np.zeros((c,) + s2.shape)
    lrow = np.zeros((c, b + 1) + s2.shape, dtype=complex)
    ok = np.ones(s2.shape, dtype=bool)
    for k in range(c):
        for j in range(min(b, k), 0, -1):
            acc = low[j, k].copy()
            for t in range(j + 1, min(b, k) + 1):
                acc -= lrow[k, t] * np.conj(lrow[k - j, t - j]) * d[k - t]
            lrow[k, j] = acc / d[k - j]
        dk = low[0, k].real - s2
        for j in range(1, min(b, k) + 1):
            dk -= np.abs(lrow[k, j]) ** 2 * d[k - j]
        ok &= dk > tiny
        d[k] = np.where(ok, dk, 1.0)
    return ok


def _bisect_block(mb: np.ndarray, eb: np.ndarray, lams: np.ndarray) -> np.ndarray:
    g = mb.conj().T @ mb
    q = eb.conj().T @ mb
    ee = eb.conj().T @ eb
    c = g.shape[0]
    b = _band_of(g, q, ee)
    smax = float(scipy.linalg.svdvals(mb, check_finite=False)[0])
    emax = float(scipy.linalg.svdvals(eb, check_finite=False)[0]) if eb.any() else 0.0
    # lower band coefficients: H[k, k-j] = g - conj(lam) q - lam conj(q^T) + |lam|^2 ee
    idx = np.arange(c)
    coef = []
    for j in range(b + 1):
        rows = idx[j:]
        cols = rows - j
        pad = np.zeros((4, c), dtype=complex)
        pad[0, j:] = g[rows, cols]
        pad[1, j:] = q[rows, cols]
        pad[2, j:] = np.conj(q[cols, rows])
        pad[3, j:] = ee[rows, cols]
        coef.append(pad)
    coef = np.array(coef)  # (b+1, 4, c)
    out = np.empty(len(lams))
    per_point = 16 * c * 2 if b <= 1 else 16 * (b + 1) * c * 3
    for sl in _chunks(len(lams), per_point):
        lam = lams[sl]
        lam2 = np.abs(lam) ** 2
        lo = np.zeros(len(lam))
        hi = (smax + emax * np.abs(lam)) * (1 + 1e-12) + 1e-300
        if b <= 1:
            diag = (coef[0, 0].real[:, None] - 2 * (coef[0, 1][:, None] * np.conj(lam)).real
                    + coef[0, 3].real[:, None] * lam2)
            if b == 1:
                off2 = np.abs(coef[1, 0][:, None] - coef[1, 1][:, None] * np.conj(lam)
                              - coef[1, 2][:, None] * lam + coef[1, 3][:, None] * lam2) ** 2
            else:
                off2 = np.zeros_like(diag)
            test = lambda s2: _posdef_tridiagonal(diag - s2, off2)  # noqa: E731
        else:
            low = (coef[:, 0, :, None] - coef[:, 1, :, None] * np.conj(lam)
                   - coef[:, 2, :, None] * lam + coef[:, 3, :, None] * lam2)
            test = lambda s2: _posdef_banded(low, s2)  # noqa: E731
        for _ in range(BISECTION_STEPS):
            mid = 0.5 * (lo + hi)
            with np.errstate(all="ignore"):  # entries of failed points are discarded
                pd = test(mid * mid)
            lo = np.where(pd, mid, lo)
            hi = np.where(pd, hi, mid)
        out[sl] = 0.5 * (lo + hi)
    return out


def smallest_singular_values(m: np.ndarray, e: np.ndarray, lams) -> np.ndarray:
    """``nu(m - lam e)`` (lower norm) for every ``lam``; ``m`` must have at least as many
    rows as columns for a nonzero result."""
    m = np.asarray(m, dtype=complex)
    e = np.asarray(e, dtype=complex)
    lams = np.asarray(lams, dtype=complex).reshape(-1)
    out = np.full(len(lams), np.inf)
    if m.shape[1] == 0:
        return out
    if m.shape[0] < m.shape[1]:
        return np.zeros(len(lams))
    for sub in _unique_blocks([m, e], (np.abs(m) > 0) | (np.abs(e) > 0)):
        if sub is None:
            return np.zeros(len(lams))
        mb, eb = sub
        if mb.shape[1] <= SVD_BLOCK_MAX:
            vals = _svd_block(mb, eb, lams)
        else:
            vals = _bisect_block(mb, eb, lams)
        np.minimum(out, vals, out=out)
    return out


def shifted_mu(target, lams, window: int = 100) -> np.ndarray:
    """``mu(target - lam I)`` for a finite square matrix, or the windowed estimate
    ``min(nu_m(B - lam), nu_m(B* - conj lam))`` for an indicator (never below ``mu``)."""
    lams = np.asarray(lams, dtype=complex)
    shape = lams.shape
    flat = lams.reshape(-1)
    if isinstance(target, (Indicator, BandOperator)):
        op = _op(target)
        if op.p != 2.0:
            raise UnsupportedExponentError("pseudospectra are only supported for p = 2")
        w = rect_window(op, window)
        wa = rect_window(adjoint(op), window)
        vals = np.minimum(smallest_singular_values(w.entries, w.embedding(), flat),
                          smallest_singular_values(wa.entries, wa.embedding(), np.conj(flat)))
    else:
        a = _entries(target)
        emb = target.embedding() if isinstance(target, FiniteMatrix) else np.eye(*a.shape)
        vals = smallest_singular_values(a, emb, flat)
        if a.shape[0] != a.shape[1]:
            vals = np.minimum(vals, smallest_singular_values(a.conj().T, emb.T, np.conj(flat)))
    return vals.reshape(shape)


# -- pseudospectrum grids ----------------------------------------------------


@dataclass(frozen=True)
class PointSet:
    points: np.ndarray

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=complex).reshape(-1)
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    def __len__(self) -> int:
        return len(self.points)

    def to_json(self) -> list:
        return [[float(z.real), float(z.imag)] for z in self.points]


def _points(s) -> np.ndarray:
    return s.points if isinstance(s, PointSet) else np.asarray(s, dtype=complex).reshape(-1)


@dataclass(frozen=True, eq=False)
class PseudospectrumGrid:
    box: tuple[float, float, float, float]
    resolution: tuple[int, int]
    values: np.ndarray
    epsilons: tuple[float, ...]
    inner_approximation: bool = False
    window: int | None = None

    @property
    def xs(self) -> np.ndarray:
        return np.linspace(self.box[0], self.box[1], self.resolution[0])

    @property
    def ys(self) -> np.ndarray:
        return np.linspace(self.box[2], self.box[3], self.resolution[1])

    def lambdas(self) -> np.ndarray:
        return grid_lambdas(self.box, self.resolution)

    @property
    def cell_diagonal(self) -> float:
        return cell_diagonal(self.box, self.resolution)

    def sublevel(self, eps: float) -> np.ndarray:
        """Closed sublevel mask ``mu <= eps``."""
        return self.values <= eps

    def strict_sublevel(self, eps: float) -> np.ndarray:
        return self.values < eps

    def points(self, eps: float) -> PointSet:
        return PointSet(self.lambdas()[self.sublevel(eps)])

    def csv_rows(self):
        lam = self.lambdas()
        for z, v in zip(lam.reshape(-1), self.values.reshape(-1)):
            yield (float(z.real), float(z.imag), float(v))


def _validate_box(box, resolution):
    if len(box) != 4:
        raise GridError(f"box must be (re_min, re_max, im_min, im_max), got {box!r}")
    re0, re1, im0, im1 = (float(v) for v in box)
    if not all(math.isfinite(v) for v in (re0, re1, im0, im1)) or re1 <= re0 or im1 <= im0:
        raise GridError(f"degenerate box {box!r}")
    nx, ny = (int(v) for v in resolution)
    if nx < 2 or ny < 2:
        raise GridError(f"resolution must be at least 2 x 2, got {resolution!r}")
    return (re0, re1, im0, im1), (nx, ny)


def grid_lambdas(box, resolution) -> np.ndarray:
    box, (nx, ny) = _validate_box(box, resolution)
    xs = np.linspace(box[0], box[1], nx)
    ys = np.linspace(box[2], box[3], ny)
    return xs[None, :] + 1j * ys[:, None]


def cell_diagonal(box, resolution) -> float:
    box, (nx, ny) = _validate_box(box, resolution)
    return math.hypot((box[1] - box[0]) / (nx - 1), (box[3] - box[2]) / (ny - 1))


def pseudo_grid(target, box, resolution, epsilons=(), window: int | None = None
                ) -> PseudospectrumGrid:
    """Samples of ``mu(target - lam I)`` on a rectangular grid (rows: imaginary part)."""
    box, res = _validate_box(box, resolution)
    is_ind = isinstance(target, (Indicator, BandOperator))
    m = (100 if window is None else int(window)) if is_ind else None
    lam = grid_lambdas(box, res)
    vals = shifted_mu(target, lam, window=m or 0)
    return PseudospectrumGrid(box, res, vals, tuple(float(e) for e in epsilons), is_ind, m)


def cluster_centers(grid: PseudospectrumGrid, eps: float) -> PointSet:
    """One representative (the grid minimizer of ``mu``) per connected piece of the
    ``eps``-sublevel set."""
    labels, n = ndimage.label(grid.sublevel(eps))
    if n == 0:
        return PointSet([])
    idx = ndimage.minimum_position(grid.values, labels, index=np.arange(1, n + 1))
    lam = grid.lambdas()
    return PointSet([lam[i] for i in idx])


# -- sets --------------------------------------------------------------------


def hausdorff_distance(s, t) -> float:
    a = _points(s)
    b = _points(t)
    if len(a) == 0 or len(b) == 0:
        raise ValueError("Hausdorff distance needs nonempty point sets")
    pa = np.column_stack([a.real, a.imag])
    pb = np.column_stack([b.real, b.imag])
    return float(max(directed_hausdorff(pa, pb, seed=0)[0], directed_hausdorff(pb, pa, seed=0)[0]))


def mask_hausdorff(grid_lambdas_: np.ndarray, a: np.ndarray, b: np.ndarray) -> float:
    """Hausdorff distance between two grid masks; 0 if both empty, inf if one is."""
    if not a.any() and not b.any():
        return 0.0
    if not a.any() or not b.any():
        return math.inf
    lam = np.asarray(grid_lambdas_)
    if lam.ndim != 2 or min(lam.shape) < 2:
        return hausdorff_distance(lam[a], lam[b])
    # exact Euclidean distance transform on the uniform grid
    step = (float(lam[1, 0].imag - lam[0, 0].imag), float(lam[0, 1].real - lam[0, 0].real))
    to_b = ndimage.distance_transform_edt(~b, sampling=step)
    to_a = ndimage.distance_transform_edt(~a, sampling=step)
    return float(max(to_b[a].max(), to_a[b].max()))


def _tail(sets: list, what: str) -> list:
    if len(sets) < 2:
        raise ValueError(f"{what} needs at least two sets")
    return sets[-math.ceil(len(sets) / 2):]


def _near(points: np.ndarray, other: np.ndarray, tol: float) -> np.ndarray:
    if len(other) == 0 or len(points) == 0:
        return np.zeros(len(points), dtype=bool)
    return np.min(np.abs(points[:, None] - other[None, :]), axis=1) <= tol


def set_limsup(sets, cluster_tol: float) -> PointSet:
    """Union of the last half of the sets, thinned to one point per ``cluster_tol``-cluster
    (later sets take precedence)."""
    tail = [_points(s) for s in _tail(list(sets), "set_limsup")]
    kept: list[complex] = []
    for pts in reversed(tail):
        for z in pts:
            if not kept or np.min(np.abs(np.array(kept) - z)) > cluster_tol:
                kept.append(z)
    return PointSet(kept)


def set_liminf(sets, cluster_tol: float) -> PointSet:
    """Points of the last set lying within ``cluster_tol`` of every set of the last half."""
    tail = [_points(s) for s in _tail(list(sets), "set_liminf")]
    last = tail[-1]
    keep = np.ones(len(last), dtype=bool)
    for pts in tail:
        keep &= _near(last, pts, cluster_tol)
    return PointSet(last[keep])


def grid_limsup(masks) -> np.ndarray:
    tail = _tail(list(masks), "grid_limsup")
    return np.logical_or.reduce(tail)


def grid_liminf(masks) -> np.ndarray:
    tail = _tail(list(masks), "grid_liminf")
    return np.logical_and.reduce(tail)


__all__ = [
    "NormEstimate", "EstimateKind", "PseudospectrumGrid", "PointSet", "UnsupportedExponentError",
    "GridError", "op_norm", "lower_norm", "mu", "inv_norm", "kappa", "indicator_norm",
    "indicator_inv_norm", "indicator_mu", "pseudo_grid", "shifted_mu", "hausdorff_distance",
    "set_limsup", "set_liminf", "grid_limsup", "grid_liminf", "cluster_centers", "rect_window",
    "square_window", "smallest_singular_values", "mask_hausdorff",
]
