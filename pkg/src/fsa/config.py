"""Experiment configuration files.

A configuration names its operators, combines them in an expression tree and
sets the sampling parameters for each command.  A report written by the CLI
embeds its resolved configuration under ``"config"`` and is accepted as a
configuration itself.
"""

from __future__ import annotations

import copy
import json
import math
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .asymptotics import Quantity
from .operator_model import BandOperator, OperatorError, operator_from_json, scalar_from_json
from .sequence_algebra import ExpressionError, FSExpression, expression_from_json, expression_p

TASKS = ("analyze", "pseudo", "converge", "pollution")


class ConfigError(ValueError):
    """Invalid configuration; the message starts with the offending JSON path."""


@dataclass(frozen=True)
class PseudoSettings:
    box: tuple[float, float, float, float]
    resolution: tuple[int, int]
    epsilons: tuple[float, ...]
    n_range: tuple[int, ...]
    window: int


@dataclass(frozen=True)
class PollutionSettings:
    lambdas: tuple[complex, ...]
    epsilon: float
    window: int


@dataclass(frozen=True, eq=False)
class ExperimentConfig:
    name: str
    operators: dict
    expression: FSExpression
    n_range: tuple[int, ...]
    tol: float
    m_max: int
    pseudo: PseudoSettings | None
    quantities: tuple[Quantity, ...]
    pollution: PollutionSettings | None
    tasks: tuple[str, ...]
    raw: dict

    def to_json(self) -> dict:
        return copy.deepcopy(self.raw)


def bundled_names() -> list[str]:
    root = resources.files("fsa") / "configs"
    return sorted(p.name[:-5] for p in root.iterdir() if p.name.endswith(".json"))


def resolve_path(ref: str) -> Path | None:
    path = Path(ref)
    if path.exists():
        return path
    if path.suffix == "" and ref in bundled_names():
        return Path(str(resources.files("fsa") / "configs" / f"{ref}.json"))
    return None


def load_config(ref: str, n_max: int | None = None, tol: float | None = None) -> ExperimentConfig:
    path = resolve_path(ref)
    if path is None:
        raise ConfigError(f"$: no such config file or bundled example {ref!r} "
                          f"(bundled: {', '.join(bundled_names())})")
    try:
        obj = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise ConfigError(f"$: invalid JSON in {path}: {exc}") from None
    if isinstance(obj, dict) and "config" in obj and "command" in obj:
        obj = obj["config"]
    return parse_config(obj, n_max=n_max, tol=tol)


def _int(v, path: str, minimum: int | None = None) -> int:
    if not isinstance(v, int) or isinstance(v, bool):
        raise ConfigError(f"{path}: expected an integer, got {v!r}")
    if minimum is not None and v < minimum:
        raise ConfigError(f"{path}: must be >= {minimum}, got {v}")
    return v


def _float(v, path: str, positive: bool = False) -> float:
    if not isinstance(v, (int, float)) or isinstance(v, bool) or not math.isfinite(v):
        raise ConfigError(f"{path}: expected a finite number, got {v!r}")
    if positive and v <= 0:
        raise ConfigError(f"{path}: must be positive, got {v}")
    return float(v)


def _range(v, path: str) -> tuple[int, ...]:
    if not isinstance(v, dict):
        raise ConfigError(f"{path}: expected {{\"start\": a, \"stop\": b}}")
    start = _int(v.get("start"), f"{path}.start", 1)
    stop = _int(v.get("stop"), f"{path}.stop", start)
    step = _int(v.get("step", 1), f"{path}.step", 1)
    return tuple(range(start, stop + 1, step))


def parse_config(obj, n_max: int | None = None, tol: float | None = None) -> ExperimentConfig:
    if not isinstance(obj, dict):
        raise ConfigError("$: expected a JSON object")
    raw = copy.deepcopy(obj)
    if n_max is not None:
        if n_max < 1:
            raise ConfigError(f"--n-max: must be >= 1, got {n_max}")
        raw.setdefault("n_range", {"start": 2})["stop"] = int(n_max)
        if raw["n_range"].get("start", 1) > n_max:
            raw["n_range"]["start"] = 1
    if tol is not None:
        raw["tol"] = float(tol)

    name = raw.get("name", "experiment")
    if not isinstance(name, str):
        raise ConfigError("$.name: expected a string")
    ops_raw = raw.get("operators")
    if not isinstance(ops_raw, dict) or not ops_raw:
        raise ConfigError("$.operators: expected a nonempty object of named operators")
    operators: dict[str, BandOperator] = {}
    for key, spec in ops_raw.items():
        try:
            operators[key] = operator_from_json(spec, f"$.operators.{key}")
        except (OperatorError, ValueError) as exc:
            raise ConfigError(str(exc)) from None
    if "expression" not in raw:
        raise ConfigError("$.expression: missing")
    try:
        expr = expression_from_json(raw["expression"], operators, "$.expression")
        expression_p(expr)
    except (ExpressionError, OperatorError) as exc:
        raise ConfigError(str(exc)) from None

    if "n_range" not in raw:
        raise ConfigError("$.n_range: missing")
    n_range = _range(raw["n_range"], "$.n_range")
    tol_v = _float(raw.get("tol", 1e-6), "$.tol", positive=True)
    m_max = _int(raw.get("m_max", 200), "$.m_max", 4)

    pseudo = None
    if "pseudo" in raw:
        ps = raw["pseudo"]
        if not isinstance(ps, dict):
            raise ConfigError("$.pseudo: expected an object")
        box = ps.get("box")
        if not isinstance(box, list) or len(box) != 4:
            raise ConfigError("$.pseudo.box: expected [re_min, re_max, im_min, im_max]")
        box = tuple(_float(v, f"$.pseudo.box[{i}]") for i, v in enumerate(box))
        if box[1] <= box[0] or box[3] <= box[2]:
            raise ConfigError(f"$.pseudo.box: degenerate box {list(box)}")
        res = ps.get("resolution", [201, 201])
        if not isinstance(res, list) or len(res) != 2:
            raise ConfigError("$.pseudo.resolution: expected [nx, ny]")
        res = tuple(_int(v, f"$.pseudo.resolution[{i}]", 2) for i, v in enumerate(res))
        eps = ps.get("epsilons")
        if not isinstance(eps, list) or not eps:
            raise ConfigError("$.pseudo.epsilons: expected a nonempty list")
        eps = tuple(_float(v, f"$.pseudo.epsilons[{i}]", positive=True) for i, v in enumerate(eps))
        pn = _range(ps["n_range"], "$.pseudo.n_range") if "n_range" in ps else n_range[-4:]
        window = _int(ps.get("window", 100), "$.pseudo.window", 1)
        pseudo = PseudoSettings(box, res, eps, pn, window)

    quantities = ("norm", "inv_norm", "kappa")
    conv = raw.get("converge", {})
    if not isinstance(conv, dict):
        raise ConfigError("$.converge: expected an object")
    q_raw = conv.get("quantities", list(quantities))
    if not isinstance(q_raw, list):
        raise ConfigError("$.converge.quantities: expected a list")
    qs = []
    for i, q in enumerate(q_raw):
        try:
            qs.append(Quantity.parse(q))
        except ValueError as exc:
            raise ConfigError(f"$.converge.quantities[{i}]: {exc}") from None
        if qs[-1].epsilon is not None and pseudo is None:
            raise ConfigError(f"$.converge.quantities[{i}]: pseudospectral quantity needs $.pseudo")

    pollution = None
    if "pollution" in raw:
        pl = raw["pollution"]
        if not isinstance(pl, dict):
            raise ConfigError("$.pollution: expected an object")
        lams = pl.get("lambdas")
        if not isinstance(lams, list) or not lams:
            raise ConfigError("$.pollution.lambdas: expected a nonempty list")
        try:
            lam_t = tuple(scalar_from_json(v, f"$.pollution.lambdas[{i}]") for i, v in enumerate(lams))
        except OperatorError as exc:
            raise ConfigError(str(exc)) from None
        pollution = PollutionSettings(
            lam_t, _float(pl.get("epsilon", 0.05), "$.pollution.epsilon", positive=True),
            _int(pl.get("window", 40), "$.pollution.window", 1))

    tasks = raw.get("tasks", list(TASKS))
    if not isinstance(tasks, list) or any(t not in TASKS for t in tasks):
        raise ConfigError(f"$.tasks: expected a list drawn from {list(TASKS)}")

    return ExperimentConfig(name, operators, expr, n_range, tol_v, m_max, pseudo, tuple(qs),
                            pollution, tuple(tasks), raw)
