"""Sequence-side versus indicator-side asymptotics of finite-section sequences.

Every report pairs sampled values ``s(A_n)`` over a range of ``n`` with the
values of ``s`` on the stability indicators.  The sequence-side limsup is the
maximum over the last half of the sampled range (the range is always recorded).
Residue classes modulo the common period play the role of minimizing
subsequences: ``s`` converges iff all residue classes give the same value.
"""

from __future__ import annotations

import enum
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .indicators import Indicator, IndicatorSet, Kind, stab_composed
from .sequence_algebra import FSExpression, expression_p, finite_section
from .spectral_kernel import (NormEstimate, PointSet, UnsupportedExponentError, cell_diagonal,
                              float_to_json, grid_lambdas, grid_limsup, indicator_inv_norm,
                              indicator_mu, indicator_norm, inv_norm, kappa, mask_hausdorff,
                              op_norm, shifted_mu)

KAPPA_LOWER_LABEL = "max over computed finite set"


class QuantityKind(enum.Enum):
    NORM = "norm"
    INV_NORM = "inv_norm"
    KAPPA = "kappa"
    PSEUDO = "pseudo"


@dataclass(frozen=True)
class Quantity:
    kind: QuantityKind
    epsilon: float | None = None

    def __str__(self) -> str:
        return self.kind.value if self.epsilon is None else f"{self.kind.value}:{self.epsilon:g}"

    @classmethod
    def parse(cls, text: str) -> "Quantity":
        name, _, eps = str(text).partition(":")
        kind = QuantityKind(name)
        if kind is QuantityKind.PSEUDO:
            if not eps:
                raise ValueError("pseudo quantities need an epsilon, e.g. 'pseudo:0.05'")
            return cls(kind, float(eps))
        if eps:
            raise ValueError(f"{name} takes no parameter")
        return cls(kind)


Norm = Quantity(QuantityKind.NORM)
InvNorm = Quantity(QuantityKind.INV_NORM)
Kappa = Quantity(QuantityKind.KAPPA)


def PseudoSet(eps: float) -> Quantity:  # noqa: N802 - mirrors the quantity names
    return Quantity(QuantityKind.PSEUDO, float(eps))


@dataclass(frozen=True)
class Verdict:
    kind: str  # Convergent | Divergent | Inconclusive
    witnesses: tuple[int, ...] = ()
    detail: str = ""

    def to_json(self) -> dict:
        return {"kind": self.kind, "witnesses": list(self.witnesses), "detail": self.detail}


@dataclass
class AsymptoticsReport:
    quantity: Quantity
    n_range: tuple[int, ...]
    sequence_samples: dict
    sequence_limsup: object
    indicator_side: list
    indicator_max: object
    per_residue: dict
    verdict: Verdict
    discrepancy: float
    tolerances: dict
    extras: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "quantity": str(self.quantity),
            "n_range": list(self.n_range),
            "sequence_samples": {str(n): _jsonable(v) for n, v in sorted(self.sequence_samples.items())},
            "sequence_limsup": _jsonable(self.sequence_limsup),
            "indicator_side": self.indicator_side,
            "indicator_max": _jsonable(self.indicator_max),
            "per_residue": {str(r): _jsonable(v) for r, v in sorted(self.per_residue.items())},
            "verdict": self.verdict.to_json(),
            "discrepancy": float_to_json(self.discrepancy),
            "tolerances": {k: _jsonable(v) for k, v in sorted(self.tolerances.items())},
            "extras": {k: _jsonable(v) for k, v in sorted(self.extras.items())
                       if not k.startswith("_")},
        }


def _jsonable(v):
    if isinstance(v, PointSet):
        return v.to_json()
    if isinstance(v, (float, np.floating)):
        return float_to_json(float(v))
    if isinstance(v, (np.integer,)):
        return int(v)
    if isinstance(v, np.bool_):
        return bool(v)
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    return v


# -- helpers -----------------------------------------------------------------


def worker_count(parallel: bool) -> int:
    if not parallel:
        return 1
    env = os.environ.get("FSA_THREADS")
    n = int(env) if env and env.isdigit() and int(env) > 0 else (os.cpu_count() or 1)
    return max(1, n)


def _map(fn, items, workers: int = 1) -> list:
    items = list(items)
    if workers <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def _tail(n_range) -> list[int]:
    ns = sorted(int(n) for n in n_range)
    if not ns:
        raise ValueError("n_range must not be empty")
    return ns[len(ns) // 2:] if len(ns) > 1 else ns


def _close(a: float, b: float, tol: float) -> bool:
    if math.isinf(a) or math.isinf(b):
        return a == b
    return abs(a - b) <= tol * max(1.0, abs(a), abs(b))


def _gap(a: float, b: float) -> float:
    if math.isinf(a) and math.isinf(b):
        return 0.0
    return abs(a - b)


def _scalar_verdict(per_residue: dict, tol: float, converged: bool) -> Verdict:
    items = sorted(per_residue.items())
    lo = min(items, key=lambda t: (t[1], t[0]))
    hi = max(items, key=lambda t: (t[1], -t[0]))
    if _close(lo[1], hi[1], tol):
        if converged:
            return Verdict("Convergent", (), "all residue classes agree")
        return Verdict("Inconclusive", (), f"values agree but window estimates did not settle (tol={tol:g})")
    return Verdict("Divergent", tuple(sorted((lo[0], hi[0]))),
                   f"residue {lo[0]}: {lo[1]:.12g}, residue {hi[0]}: {hi[1]:.12g}")


def _indicator_entry(ind: Indicator, est: NormEstimate) -> dict:
    return {"label": ind.label(), "kind": ind.kind.value, "residue": _jsonable(ind.residue),
            "domain": str(ind.op.domain), "provenance": ind.provenance, **est.to_json()}


def _residue_max(stab: IndicatorSet, values: list[float]) -> dict:
    return {r: max(values[i] for i in _by_member(stab, r)) for r in range(stab.modulus)}


def _by_member(stab: IndicatorSet, r: int) -> list[int]:
    members = stab.by_residue(r)
    return [i for i, ind in enumerate(stab.members) if any(ind is m for m in members)]


# -- scalar quantities -------------------------------------------------------


class Analysis:
    """Caches the indicator set and the per-indicator estimates for one expression."""

    def __init__(self, expr: FSExpression, tol: float = 1e-6, m_max: int = 200,
                 workers: int = 1):
        self.expr = expr
        self.p = expression_p(expr)
        self.tol = float(tol)
        self.est_tol = min(1e-10, self.tol * 1e-3)
        self.m_max = int(m_max)
        self.workers = workers
        self.stab = stab_composed(expr)
        self._norms = None
        self._invs = None
        self._sections: dict[int, object] = {}

    def section(self, n: int):
        if n not in self._sections:
            self._sections[n] = finite_section(self.expr, n)
        return self._sections[n]

    def norms(self) -> list[NormEstimate]:
        if self._norms is None:
            self._norms = _map(lambda ind: indicator_norm(ind, self.p, self.est_tol, self.m_max),
                               self.stab.members, self.workers)
        return self._norms

    def invs(self) -> list[NormEstimate]:
        if self._invs is None:
            if self.p != 2.0:
                raise UnsupportedExponentError("indicator inverse norms need p = 2")
            self._invs = _map(lambda ind: indicator_inv_norm(ind, self.est_tol, self.m_max),
                              self.stab.members, self.workers)
        return self._invs

    def samples(self, fn, n_range) -> dict:
        ns = sorted(int(n) for n in n_range)
        vals = _map(lambda n: fn(self.section(n), self.p), ns, self.workers)
        return dict(zip(ns, vals))


def _scalar_report(an: Analysis, quantity: Quantity, n_range, seq_fn, estimates,
                   ind_values: list[float], extras: dict) -> AsymptoticsReport:
    samples = an.samples(seq_fn, n_range) if n_range else {}
    tail = _tail(samples) if samples else []
    seq = max((samples[n] for n in tail), default=math.nan)
    per_res = _residue_max(an.stab, ind_values)
    ind_max = max(ind_values)
    converged = all(e.converged for e in estimates)
    verdict = _scalar_verdict(per_res, an.tol, converged)
    liminf = min(per_res.values())
    extras = dict(extras)
    extras["liminf"] = liminf
    extras["estimates_converged"] = converged
    if samples:
        extras["sequence_tail"] = tail
    return AsymptoticsReport(
        quantity=quantity, n_range=tuple(sorted(samples)), sequence_samples=samples,
        sequence_limsup=seq,
        indicator_side=[_indicator_entry(i, e) for i, e in zip(an.stab.members, estimates)],
        indicator_max=ind_max, per_residue=per_res, verdict=verdict,
        discrepancy=_gap(seq, ind_max) if samples else math.nan,
        tolerances={"tol": an.tol, "estimator_tol": an.est_tol, "m_max": an.m_max},
        extras=extras)


def limsup_norm(expr, n_range, tol: float = 1e-6, m_max: int = 200, *, analysis=None,
                workers: int = 1) -> AsymptoticsReport:
    an = analysis or Analysis(expr, tol, m_max, workers)
    est = an.norms()
    return _scalar_report(an, Norm, n_range, op_norm, est, [e.value for e in est],
                          {"center_norm": est[0].value})


def limsup_inv_norm(expr, n_range, tol: float = 1e-6, m_max: int = 200, *, analysis=None,
                    workers: int = 1) -> AsymptoticsReport:
    an = analysis or Analysis(expr, tol, m_max, workers)
    est = an.invs()
    vals = [e.value for e in est]
    culprits = [i.label() for i, v in zip(an.stab.members, vals) if math.isinf(v)]
    rep = _scalar_report(an, InvNorm, n_range, inv_norm, est, vals,
                         {"stable": not culprits and all(e.converged for e in est),
                          "non_invertible_indicators": culprits})
    if rep.sequence_samples:
        rep.extras["sequence_infinite_at"] = [n for n, v in rep.sequence_samples.items()
                                              if math.isinf(v)]
    return rep


def limsup_kappa(expr, n_range, tol: float = 1e-6, m_max: int = 200, *, analysis=None,
                 workers: int = 1) -> AsymptoticsReport:
    an = analysis or Analysis(expr, tol, m_max, workers)
    norms = an.norms()
    invs = an.invs()
    nv = [e.value for e in norms]
    iv = [e.value for e in invs]
    kappas = [math.inf if math.isinf(b) else a * b for a, b in zip(nv, iv)]
    lower = max(kappas)
    upper = math.inf if math.isinf(max(iv)) else max(nv) * max(iv)
    per_res = {}
    for r in range(an.stab.modulus):
        idx = _by_member(an.stab, r)
        inv_r = max(iv[i] for i in idx)
        per_res[r] = math.inf if math.isinf(inv_r) else max(nv[i] for i in idx) * inv_r
    formula = max(per_res.values())
    samples = an.samples(kappa, n_range) if n_range else {}
    tail = _tail(samples) if samples else []
    seq = max((samples[n] for n in tail), default=math.nan)
    converged = all(e.converged for e in norms + invs)
    extras = {
        "lower_bound": lower,
        "lower_bound_label": KAPPA_LOWER_LABEL,
        "upper_bound": upper,
        "residue_formula": formula,
        "liminf": min(per_res.values()),
        "estimates_converged": converged,
    }
    if samples:
        extras["sequence_tail"] = tail
        extras["strict_lower_gap"] = bool(not _close(lower, seq, tol) and lower < seq)
        extras["strict_upper_gap"] = bool(not _close(seq, upper, tol) and seq < upper)
        extras["sandwich_holds"] = bool((lower <= seq or _close(lower, seq, tol))
                                        and (seq <= upper or _close(seq, upper, tol)))
    entries = [dict(_indicator_entry(i, n), inv_norm=float_to_json(b), kappa=float_to_json(k))
               for i, n, b, k in zip(an.stab.members, norms, iv, kappas)]
    return AsymptoticsReport(
        quantity=Kappa, n_range=tuple(sorted(samples)), sequence_samples=samples,
        sequence_limsup=seq, indicator_side=entries, indicator_max=formula,
        per_residue=per_res, verdict=_scalar_verdict(per_res, an.tol, converged),
        discrepancy=_gap(seq, formula) if samples else math.nan,
        tolerances={"tol": an.tol, "estimator_tol": an.est_tol, "m_max": an.m_max},
        extras=extras)


# -- pseudospectra -------------------------------------------------------------


class PseudoAnalysis:
    """Grids of ``mu(. - lam I)`` for sections and indicators on one box."""

    def __init__(self, expr: FSExpression, box, resolution, window: int = 100, workers: int = 1,
                 stab: IndicatorSet | None = None):
        if expression_p(expr) != 2.0:
            raise UnsupportedExponentError("pseudospectra are only supported for p = 2")
        self.expr = expr
        self.box = tuple(float(v) for v in box)
        self.resolution = tuple(int(v) for v in resolution)
        self.lams = grid_lambdas(self.box, self.resolution)
        self.window = int(window)
        self.workers = workers
        self.stab = stab or stab_composed(expr)
        self._seq: dict[int, np.ndarray] = {}
        self._ind: list[np.ndarray] | None = None

    @property
    def cell(self) -> float:
        return cell_diagonal(self.box, self.resolution)

    def section_values(self, ns) -> dict[int, np.ndarray]:
        todo = [n for n in sorted(set(int(n) for n in ns)) if n not in self._seq]
        vals = _map(lambda n: shifted_mu(finite_section(self.expr, n), self.lams), todo,
                    self.workers)
        self._seq.update(zip(todo, vals))
        return {n: self._seq[n] for n in sorted(set(int(n) for n in ns))}

    def indicator_values(self) -> list[np.ndarray]:
        if self._ind is None:
            self._ind = _map(lambda ind: shifted_mu(ind, self.lams, self.window),
                             self.stab.members, self.workers)
        return self._ind

    def residue_masks(self, eps: float) -> dict[int, np.ndarray]:
        vals = self.indicator_values()
        out = {}
        for r in range(self.stab.modulus):
            idx = _by_member(self.stab, r)
            out[r] = np.logical_or.reduce([vals[i] <= eps for i in idx])
        return out

    def mask_points(self, mask: np.ndarray) -> PointSet:
        return PointSet(self.lams[mask])

    def distance(self, a: np.ndarray, b: np.ndarray) -> float:
        return mask_hausdorff(self.lams, a, b)


def _set_verdict(pa: PseudoAnalysis, masks: dict[int, np.ndarray], tol: float) -> Verdict:
    worst = (0.0, 0, 0)
    rs = sorted(masks)
    for i, r in enumerate(rs):
        for s in rs[i + 1:]:
            d = pa.distance(masks[r], masks[s])
            if d > worst[0]:
                worst = (d, r, s)
    if worst[0] < tol or len(rs) == 1:
        return Verdict("Convergent", (), f"residue sets within Hausdorff distance {worst[0]:.6g}")
    return Verdict("Divergent", (worst[1], worst[2]),
                   f"Hausdorff distance {worst[0]:.6g} between residues {worst[1]} and {worst[2]}")


def limsup_pseudospectrum(expr, eps: float, box, resolution, n_range, *, window: int = 100,
                          tol: float | None = None, analysis: PseudoAnalysis | None = None,
                          workers: int = 1) -> AsymptoticsReport:
    pa = analysis or PseudoAnalysis(expr, box, resolution, window, workers)
    tol = 2.0 * pa.cell if tol is None else float(tol)
    ns = sorted(int(n) for n in n_range) if n_range else []
    seq_vals = pa.section_values(ns) if ns else {}
    masks = {n: v <= eps for n, v in seq_vals.items()}
    seq_mask = grid_limsup([masks[n] for n in ns]) if len(ns) > 1 else (
        masks[ns[0]] if ns else None)
    ind_vals = pa.indicator_values()
    ind_masks = [v <= eps for v in ind_vals]
    union = np.logical_or.reduce(ind_masks)
    res_masks = pa.residue_masks(eps)
    liminf_mask = np.logical_and.reduce(list(res_masks.values()))
    disc = pa.distance(seq_mask, union) if seq_mask is not None else math.nan
    entries = [{"label": ind.label(), "kind": ind.kind.value, "residue": _jsonable(ind.residue),
                "domain": str(ind.op.domain), "provenance": ind.provenance,
                "grid_points": int(m.sum()), "inner_approximation": True, "window": pa.window}
               for ind, m in zip(pa.stab.members, ind_masks)]
    extras = {
        "epsilon": float(eps),
        "box": list(pa.box),
        "resolution": list(pa.resolution),
        "cell_diagonal": pa.cell,
        "indicator_sets_inner_approximation": True,
        "sequence_limsup_points": int(seq_mask.sum()) if seq_mask is not None else 0,
        "indicator_union_points": int(union.sum()),
        "liminf_points": int(liminf_mask.sum()),
        "per_residue_points": {r: int(m.sum()) for r, m in res_masks.items()},
        "_sequence_masks": masks,
        "_sequence_values": seq_vals,
        "_indicator_values": ind_vals,
        "_sequence_limsup_mask": seq_mask,
        "_indicator_union_mask": union,
        "_residue_masks": res_masks,
        "_liminf_mask": liminf_mask,
    }
    return AsymptoticsReport(
        quantity=PseudoSet(eps), n_range=tuple(ns),
        sequence_samples={n: int(m.sum()) for n, m in masks.items()},
        sequence_limsup=int(seq_mask.sum()) if seq_mask is not None else 0,
        indicator_side=entries, indicator_max=int(union.sum()),
        per_residue={r: int(m.sum()) for r, m in res_masks.items()},
        verdict=_set_verdict(pa, res_masks, tol), discrepancy=disc,
        tolerances={"hausdorff_tol": tol, "window": pa.window}, extras=extras)


# -- verdicts and attribution --------------------------------------------------


def convergence_verdict(expr, quantity: Quantity, tol: float | None = None, *, n_range=(),
                        m_max: int = 200, box=None, resolution=None, window: int = 100,
                        analysis=None, pseudo_analysis=None, workers: int = 1) -> AsymptoticsReport:
    """Per-residue values of ``s`` on the indicator sets; Convergent iff they all agree."""
    if quantity.kind is QuantityKind.PSEUDO:
        if pseudo_analysis is None and (box is None or resolution is None):
            raise ValueError("pseudospectral verdicts need a box and a resolution")
        return limsup_pseudospectrum(expr, quantity.epsilon, box, resolution, n_range,
                                     window=window, tol=tol, analysis=pseudo_analysis,
                                     workers=workers)
    tol = 1e-6 if tol is None else tol
    an = analysis or Analysis(expr, tol, m_max, workers)
    fn = {QuantityKind.NORM: limsup_norm, QuantityKind.INV_NORM: limsup_inv_norm,
          QuantityKind.KAPPA: limsup_kappa}[quantity.kind]
    return fn(expr, n_range, tol, m_max, analysis=an)


def pollution_attribution(expr, lam: complex, eps: float, m: int = 40,
                          stab: IndicatorSet | None = None) -> list[tuple[Indicator, float]]:
    """Indicators ``B`` with windowed ``mu(B - lam I) <= eps``, smallest first."""
    if expression_p(expr) != 2.0:
        raise UnsupportedExponentError("pollution attribution needs p = 2")
    stab = stab or stab_composed(expr)
    hits = []
    for order, ind in enumerate(stab.members):
        val = indicator_mu(ind.op.shift_identity(lam), m)
        if val <= eps:
            hits.append((val, order, ind))
    hits.sort(key=lambda t: (t[0], t[1]))
    return [(ind, val) for val, _, ind in hits]


def classify_attribution(hits: list[tuple[Indicator, float]]) -> str:
    """``none`` (no indicator near lam), ``genuine`` (the pointwise limit qualifies) or
    ``pollution`` (only corner indicators qualify)."""
    if not hits:
        return "none"
    if any(ind.kind is Kind.CENTER for ind, _ in hits):
        return "genuine"
    return "pollution"
