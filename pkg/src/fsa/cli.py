"""Command line front end: ``fsa analyze|pseudo|converge|pollution``.

Exit codes: 0 on success, 1 on configuration errors, 2 when ``analyze`` finds a
non-invertible (or unsettled) stability indicator.  The report is written in
every case that gets past configuration parsing.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from pathlib import Path

import numpy as np

from .asymptotics import (Analysis, PseudoAnalysis, QuantityKind, classify_attribution,
                          convergence_verdict, limsup_inv_norm, limsup_kappa, limsup_norm,
                          limsup_pseudospectrum, pollution_attribution, worker_count)
from .config import ConfigError, ExperimentConfig, load_config
from .operator_model import scalar_to_json
from .spectral_kernel import float_to_json, mask_hausdorff

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_UNSTABLE = 2


def _write_json(path: Path, obj) -> None:
    path.write_text(json.dumps(obj, sort_keys=True, indent=2) + "\n")


def _write_csv(path: Path, header, rows) -> None:
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([_cell(v) for v in row])


def _cell(v):
    if isinstance(v, float):
        return "inf" if math.isinf(v) else float.__repr__(float(v))
    return v


def _write_grid_csv(path: Path, lam: np.ndarray, values: np.ndarray) -> None:
    cols = [np.asarray(lam.real, float), np.asarray(lam.imag, float), np.asarray(values, float)]
    text = [",".join(row) for row in zip(*(map(_cell, c.tolist()) for c in cols))]
    path.write_text("re,im,mu\n" + "\n".join(text) + "\n")


def _header(cfg: ExperimentConfig, command: str) -> dict:
    return {"command": command, "name": cfg.name, "config": cfg.to_json()}


def cmd_analyze(cfg: ExperimentConfig, out: Path, workers: int = 1) -> int:
    an = Analysis(cfg.expression, cfg.tol, cfg.m_max, workers)
    reports = {
        "norm": limsup_norm(cfg.expression, cfg.n_range, analysis=an),
        "inv_norm": limsup_inv_norm(cfg.expression, cfg.n_range, analysis=an),
        "kappa": limsup_kappa(cfg.expression, cfg.n_range, analysis=an),
    }
    stable = bool(reports["inv_norm"].extras["stable"])
    doc = _header(cfg, "analyze")
    doc["reports"] = {k: r.to_json() for k, r in reports.items()}
    doc["stable"] = stable
    doc["indicators"] = an.stab.to_json()
    _write_json(out / "report.json", doc)
    _write_csv(out / "samples.csv", ["n", "norm", "inv_norm", "kappa"],
               [(n, reports["norm"].sequence_samples[n], reports["inv_norm"].sequence_samples[n],
                 reports["kappa"].sequence_samples[n]) for n in cfg.n_range])
    return EXIT_OK if stable else EXIT_UNSTABLE


def _need_pseudo(cfg: ExperimentConfig):
    if cfg.pseudo is None:
        raise ConfigError("$.pseudo: this command needs a pseudo section")
    return cfg.pseudo


def cmd_pseudo(cfg: ExperimentConfig, out: Path, workers: int = 1) -> int:
    ps = _need_pseudo(cfg)
    pa = PseudoAnalysis(cfg.expression, ps.box, ps.resolution, ps.window, workers)
    summary = _header(cfg, "pseudo")
    summary["epsilons"] = {}
    lam = pa.lams.reshape(-1)
    for n, vals in pa.section_values(ps.n_range).items():
        _write_grid_csv(out / f"grid_n{n}.csv", lam, vals.reshape(-1))
    ind_min = np.minimum.reduce(pa.indicator_values())
    _write_grid_csv(out / "indicator_union.csv", lam, ind_min.reshape(-1))
    for eps in ps.epsilons:
        rep = limsup_pseudospectrum(cfg.expression, eps, ps.box, ps.resolution, ps.n_range,
                                    analysis=pa)
        masks = rep.extras["_sequence_masks"]
        ns = sorted(masks)
        tail = ns[len(ns) // 2:]
        spread = max((mask_hausdorff(pa.lams, masks[a], masks[b])
                      for i, a in enumerate(tail) for b in tail[i + 1:]), default=0.0)
        entry = rep.to_json()
        entry["sequence_tail_hausdorff_spread"] = float_to_json(spread)
        entry["hausdorff_convergent"] = bool(spread < rep.tolerances["hausdorff_tol"])
        summary["epsilons"][f"{eps:g}"] = entry
    _write_json(out / "pseudo.json", summary)
    return EXIT_OK


def cmd_converge(cfg: ExperimentConfig, out: Path, workers: int = 1) -> int:
    an = Analysis(cfg.expression, cfg.tol, cfg.m_max, workers)
    pa = None
    verdicts = {}
    for q in cfg.quantities:
        if q.kind is QuantityKind.PSEUDO:
            ps = _need_pseudo(cfg)
            if pa is None:
                pa = PseudoAnalysis(cfg.expression, ps.box, ps.resolution, ps.window, workers,
                                    stab=an.stab)
            rep = convergence_verdict(cfg.expression, q, n_range=(), pseudo_analysis=pa)
        else:
            rep = convergence_verdict(cfg.expression, q, cfg.tol, n_range=cfg.n_range,
                                      m_max=cfg.m_max, analysis=an)
        verdicts[str(q)] = {
            "verdict": rep.verdict.to_json(),
            "per_residue": rep.to_json()["per_residue"],
            "liminf": rep.to_json()["extras"].get("liminf"),
            "modulus": an.stab.modulus,
        }
    doc = _header(cfg, "converge")
    doc["verdicts"] = verdicts
    _write_json(out / "converge.json", doc)
    return EXIT_OK


def cmd_pollution(cfg: ExperimentConfig, out: Path, workers: int = 1) -> int:
    if cfg.pollution is None:
        raise ConfigError("$.pollution: this command needs a pollution section")
    pl = cfg.pollution
    an = Analysis(cfg.expression, cfg.tol, cfg.m_max, workers)
    results = []
    for lam in pl.lambdas:
        hits = pollution_attribution(cfg.expression, lam, pl.epsilon, pl.window, stab=an.stab)
        results.append({
            "lambda": scalar_to_json(lam),
            "classification": classify_attribution(hits),
            "culprits": [{"label": ind.label(), "kind": ind.kind.value, "domain": str(ind.op.domain),
                          "provenance": ind.provenance, "mu_hat": float(v)} for ind, v in hits],
        })
    doc = _header(cfg, "pollution")
    doc["epsilon"] = pl.epsilon
    doc["window"] = pl.window
    doc["results"] = results
    _write_json(out / "pollution.json", doc)
    return EXIT_OK


COMMANDS = {"analyze": cmd_analyze, "pseudo": cmd_pseudo, "converge": cmd_converge,
            "pollution": cmd_pollution}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fsa", description=__doc__.splitlines()[0])
    parser.add_argument("command", choices=sorted(COMMANDS))
    parser.add_argument("--config", required=True,
                        help="config file, previous report, or bundled example name")
    parser.add_argument("--out", required=True, help="output directory")
    parser.add_argument("--parallel", action="store_true",
                        help="evaluate sections and indicators concurrently (FSA_THREADS bounds workers)")
    parser.add_argument("--n-max", type=int, default=None, help="override the largest section index")
    parser.add_argument("--tol", type=float, default=None, help="override the comparison tolerance")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config, n_max=args.n_max, tol=args.tol)
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        return COMMANDS[args.command](cfg, out, worker_count(args.parallel))
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
