"""Builders for the standard example operators and sequences."""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .operator_model import BandOperator, block_diagonal, operator_to_json
from .sequence_algebra import FSExpression, Leaf, Product, Scale, Sum

D_BLOCK = np.array([[2.0, 1.0], [0.0, 0.5]])
E_BLOCK = np.array([[2.0, 0.0], [-1.0, 0.5]])
N_KAPPA = (11 + np.sqrt(185)) / 8


def identity(p=2.0) -> BandOperator:
    return BandOperator.identity(p=p)


def shift(k: int = 1, p=2.0) -> BandOperator:
    return BandOperator.shift(k, p)


def flip_block(mu: float) -> np.ndarray:
    return np.array([[mu, 1.0], [1.0, mu]])


def block_flip(mu: float, p=2.0) -> BandOperator:
    """``diag(..., B, B, [1], B, B, ...)`` with the 1 at index 0."""
    return block_diagonal(flip_block(mu), defect=[[1.0]], start=0, p=p)


def kappa_pair(defect: bool) -> tuple[BandOperator, BandOperator]:
    """Block operators built from ``D`` and ``E``; with ``defect`` a 1 sits at index 0,
    otherwise the blocks tile Z starting at 0."""
    if defect:
        return (block_diagonal(D_BLOCK, defect=[[1.0]]), block_diagonal(E_BLOCK, defect=[[1.0]]))
    return block_diagonal(D_BLOCK), block_diagonal(E_BLOCK)


def pure(op: BandOperator, name: str = "A") -> FSExpression:
    return Leaf(op, name)


def kappa_expression(defect: bool) -> FSExpression:
    b, c = kappa_pair(defect)
    return Product((Leaf(b, "B"), Leaf(c, "C")))


def shifted_flip_expression() -> FSExpression:
    return Leaf(block_flip(0.0) + 2.0 * identity(), "A")


def laurent_fs_expression() -> FSExpression:
    """``P_n S_1 P_n P_n S_{-1} P_n + 2 P_n``: a composed Laurent sequence."""
    return Sum((Product((Leaf(shift(1), "S1"), Leaf(shift(-1), "Sm1"))),
                Scale(2.0, Leaf(identity(), "I"))))


# -- bundled experiment configurations ------------------------------------------


def _config(name, description, operators, expression, box, epsilons, *, pseudo_n=(34, 40),
            window=100, lambdas=None, pollution_window=40, quantities=None):
    cfg = {
        "name": name,
        "description": description,
        "operators": {k: operator_to_json(v) for k, v in operators.items()},
        "expression": expression,
        "n_range": {"start": 2, "stop": 40},
        "tol": 1e-6,
        "m_max": 200,
        "pseudo": {"box": list(box), "resolution": [201, 201], "epsilons": list(epsilons),
                   "n_range": {"start": pseudo_n[0], "stop": pseudo_n[1]}, "window": window},
        "converge": {"quantities": quantities or ["norm", "inv_norm", "kappa",
                                                  f"pseudo:{epsilons[0]:g}"]},
        "tasks": ["analyze", "pseudo", "converge"],
    }
    if lambdas is not None:
        cfg["pollution"] = {"lambdas": lambdas, "epsilon": 0.05, "window": pollution_window}
        cfg["tasks"].append("pollution")
    return cfg


def example_configs() -> dict[str, dict]:
    """The bundled configurations, keyed by file stem."""
    leaf = {"leaf": "A"}
    b, c = kappa_pair(True)
    b2, c2 = kappa_pair(False)
    return {
        "identity": _config("identity", "Pure finite sections of the identity.",
                            {"A": identity()}, leaf, (0.0, 2.0, -1.0, 1.0), [0.05],
                            lambdas=[1.0, 3.0]),
        "laurent_shift": _config(
            "laurent_shift", "Pure finite sections of the shift S_1 (unstable: corners are "
            "one-sided shifts).", {"A": shift(1)}, leaf, (-1.2, 1.2, -1.2, 1.2), [0.05],
            pseudo_n=(36, 40), lambdas=[0.0, 0.5]),
        "laurent_fs": _config(
            "laurent_fs", "Composed Laurent sections P_n S_1 P_n P_n S_-1 P_n + 2 P_n.",
            {"S1": shift(1), "Sm1": shift(-1), "I": identity()},
            {"sum": [{"product": [{"leaf": "S1"}, {"leaf": "Sm1"}]},
                     {"scale": 2.0, "child": {"leaf": "I"}}]},
            (1.5, 3.5, -0.5, 0.5), [0.05], lambdas=[2.0, 3.0]),
        "blockflip03": _config("blockflip03", "Symmetric block-flip with mu = 0.3.",
                               {"A": block_flip(0.3)}, leaf, (-1.0, 1.6, -0.5, 0.5), [0.05, 0.1],
                               lambdas=[0.3, 1.0, 5.0]),
        "blockflip07": _config("blockflip07", "Symmetric block-flip with mu = 0.7.",
                               {"A": block_flip(0.7)}, leaf, (-0.6, 2.0, -0.5, 0.5), [0.05],
                               lambdas=[0.7, 1.7]),
        "kappa_a": _config("kappa_a", "Product of D- and E-block operators with a 1 at index 0.",
                           {"B": b, "C": c}, {"product": [{"leaf": "B"}, {"leaf": "C"}]},
                           (-0.5, 4.5, -1.5, 1.5), [0.1], lambdas=[0.25, 4.0]),
        "kappa_b": _config("kappa_b", "Product of D- and E-block operators tiling Z.",
                           {"B": b2, "C": c2}, {"product": [{"leaf": "B"}, {"leaf": "C"}]},
                           (-0.5, 4.5, -1.5, 1.5), [0.1], lambdas=[0.25, 4.0]),
        "shiftedflip": _config("shiftedflip", "Block-flip with mu = 0 plus 2I.",
                               {"A": block_flip(0.0) + 2.0 * identity()}, leaf,
                               (0.5, 3.5, -0.6, 0.6), [0.05], lambdas=[2.0, 1.0]),
    }


def write_bundled(directory) -> None:
    for name, cfg in example_configs().items():
        Path(directory, f"{name}.json").write_text(json.dumps(cfg, sort_keys=True, indent=2) + "\n")
