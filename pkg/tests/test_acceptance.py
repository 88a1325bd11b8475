"""Acceptance criteria. Each test prints one ``PASS``/``FAIL`` line for its
criterion (visible with ``pytest -s`` or in ``-v`` output) and then asserts."""

import json
import math
import sys
import time

import numpy as np
import pytest
from oracles import D, E, N

from fsa.asymptotics import (InvNorm, convergence_verdict, limsup_inv_norm, limsup_kappa,
                             limsup_norm)
from fsa.catalog import (block_flip, example_configs, identity, kappa_expression,
                         laurent_fs_expression, shift, shifted_flip_expression)
from fsa.cli import main
from fsa.config import bundled_names
from fsa.indicators import Kind, members_subset, same_members, stab_composed, stab_h, stab_shifted
from fsa.sequence_algebra import Leaf, Scale, finite_section
from fsa.spectral_kernel import (cell_diagonal, cluster_centers, grid_lambdas, hausdorff_distance,
                                 inv_norm, kappa, mask_hausdorff, mu, op_norm, pseudo_grid,
                                 rect_lower_norm, square_window)

NS = range(2, 21)
EXPRESSIONS = {
    "blockflip03": Leaf(block_flip(0.3)),
    "blockflip07": Leaf(block_flip(0.7)),
    "identity": Leaf(identity()),
    "kappa_a": kappa_expression(True),
    "kappa_b": kappa_expression(False),
    "laurent_fs": laurent_fs_expression(),
    "laurent_shift": Leaf(shift(1)),
    "shiftedflip": shifted_flip_expression(),
}


@pytest.fixture
def report(capsys):
    def emit(number, title, checks):
        failed = [name for name, ok in checks if not ok]
        status = "FAIL" if failed else "PASS"
        detail = f" (failed: {', '.join(failed)})" if failed else ""
        with capsys.disabled():
            print(f"\n{status} criterion {number}: {title}{detail}")
        assert not failed
    return emit


def close(a, b, tol):
    return abs(a - b) <= tol


def sigma_min_grid(matrix: np.ndarray, lam: np.ndarray) -> np.ndarray:
    """Dense oracle: smallest singular value of ``matrix - lam I`` at every grid point."""
    eye = np.eye(matrix.shape[0])
    stack = matrix[None, :, :] - lam.reshape(-1)[:, None, None] * eye
    return np.linalg.svd(stack, compute_uv=False)[:, -1].reshape(lam.shape)


# -- 1 -------------------------------------------------------------------------------


def test_block_flip_table(report):
    start = time.perf_counter()
    expr = Leaf(block_flip(0.3))
    box, res = (-1.0, 1.6, -0.2, 0.2), (131, 21)
    tol_grid = cell_diagonal(box, res)
    checks = []
    for n in NS:
        sec = finite_section(expr, n)
        want_inv = 1 / 0.7 if n % 2 == 0 else 10 / 3
        checks.append((f"inv n={n}", close(inv_norm(sec), want_inv, 1e-9)))
        checks.append((f"kappa n={n}", close(kappa(sec), 1.3 * want_inv, 1e-9)))
        centers = cluster_centers(pseudo_grid(sec, box, res), 0.05).points
        want = [-0.7, 1.0, 1.3] + ([0.3] if n % 2 else [])
        checks.append((f"clusters n={n}", len(centers) == len(want)
                       and hausdorff_distance(centers, want) <= tol_grid))
    elapsed = time.perf_counter() - start
    checks.append((f"runtime {elapsed:.2f}s < 5s", elapsed < 5))
    report(1, "block-flip inverse norms, condition numbers and spectral clusters", checks)


# -- 2 -------------------------------------------------------------------------------


def test_kappa_example_a(report):
    start = time.perf_counter()
    expr = kappa_expression(True)
    checks = []
    for n in NS:
        want = N if n % 2 == 0 else 4.0
        checks.append((f"norm n={n}", close(op_norm(finite_section(expr, n)), want, 1e-9)))
    kap = limsup_kappa(expr, NS)
    checks.append(("limsup kappa = 16", close(kap.sequence_limsup, 16.0, 1e-9)))
    checks.append(("odd sample = 16", all(close(kap.sequence_samples[n], 16.0, 1e-9)
                                          for n in NS if n % 2)))
    checks.append(("max ||B|| = 4", close(limsup_norm(expr, NS).indicator_max, 4.0, 1e-9)))
    checks.append(("max ||B^-1|| = 4",
                   close(limsup_inv_norm(expr, NS).indicator_max, 4.0, 1e-9)))
    checks.append(("max kappa(B) = 4N", close(kap.extras["lower_bound"], 4 * N, 1e-9)))
    checks.append(("strict first inequality", kap.extras["lower_bound"] < kap.sequence_limsup - 1e-6))
    de = D @ E
    two = op_norm(de)
    checks.append(("3 < ||DE|| < 13/4", 3 < two < 13 / 4))
    checks.append(("||DE|| <= Frobenius < 13/4", two <= np.linalg.norm(de, "fro") < 13 / 4))
    checks.append(("N = ||DE||", close(two, N, 1e-12)))
    elapsed = time.perf_counter() - start
    checks.append((f"runtime {elapsed:.2f}s < 10s", elapsed < 10))
    report(2, "defect example: norms, limsup kappa 16 and indicator maxima", checks)


# -- 3 -------------------------------------------------------------------------------


def test_kappa_example_b(report):
    expr = kappa_expression(False)
    kap = limsup_kappa(expr, range(2, 41))
    checks = [(f"kappa n={n}", close(v, 4 * N, 1e-9)) for n, v in kap.sequence_samples.items()]
    checks.append(("upper bound 16", close(kap.extras["upper_bound"], 16.0, 1e-9)))
    checks.append(("strict second inequality", kap.sequence_limsup < kap.extras["upper_bound"] - 1e-6))
    report(3, "defect-free example: kappa 4N below the upper bound 16", checks)


# -- 4 -------------------------------------------------------------------------------


def test_convergence_boundary(report):
    checks = []
    for m, want in ((0.1, "Divergent"), (0.3, "Divergent"), (0.49, "Divergent"),
                    (0.5, "Convergent"), (0.7, "Convergent"), (0.9, "Convergent")):
        got = convergence_verdict(Leaf(block_flip(m)), InvNorm, n_range=NS).verdict.kind
        checks.append((f"mu={m} {got}", got == want))
    report(4, "inverse norms converge exactly for mu in [1/2, 1)", checks)


# -- 5 -------------------------------------------------------------------------------


def test_shifted_flip(report):
    expr = shifted_flip_expression()
    checks = [(f"inv n={n}", close(inv_norm(finite_section(expr, n)), 1.0, 1e-9)) for n in NS]
    checks.append(("verdict Convergent",
                   convergence_verdict(expr, InvNorm, n_range=NS).verdict.kind == "Convergent"))
    box, res = (0.5, 3.5, -0.6, 0.6), (61, 25)
    lam = grid_lambdas(box, res)
    masks = {n: sigma_min_grid(finite_section(expr, n).entries, lam) <= 0.05 for n in NS}
    worst = min(mask_hausdorff(lam, masks[a], masks[b])
                for a in NS if a % 2 == 0 for b in NS if b % 2)
    checks.append((f"even/odd Hausdorff distance {worst:.3f} > 0.8", worst > 0.8))
    report(5, "shifted flip: constant inverse norms, divergent pseudospectra", checks)


# -- 6 -------------------------------------------------------------------------------


@pytest.fixture(scope="module")
def bundled_runs(tmp_path_factory):
    out = {}
    for name in bundled_names():
        d = tmp_path_factory.mktemp(name)
        code = main(["analyze", "--config", name, "--out", str(d)])
        assert main(["pseudo", "--config", name, "--out", str(d)]) == 0
        out[name] = (code, json.loads((d / "report.json").read_text()),
                     json.loads((d / "pseudo.json").read_text()))
    return out


def _gap(a, b):
    if a == b:
        return 0.0
    return abs(float(a) - float(b))


def test_limsup_formula_consistency(report, bundled_runs):
    checks = []
    for name, (_, rep, pseudo) in bundled_runs.items():
        cfg = example_configs()[name]
        checks.append((f"{name} n_max 40", cfg["n_range"]["stop"] == 40 and cfg["m_max"] <= 200))
        for q in ("norm", "inv_norm"):
            r = rep["reports"][q]
            checks.append((f"{name} {q}", _gap(r["sequence_limsup"], r["indicator_max"]) <= 1e-6))
        for eps, entry in pseudo["epsilons"].items():
            box, res = entry["extras"]["box"], entry["extras"]["resolution"]
            checks.append((f"{name} eps={eps} 201x201", list(res) == [201, 201]))
            two_cells = 2 * cell_diagonal(box, res)
            checks.append((f"{name} eps={eps} discrepancy {entry['discrepancy']:.4g}",
                           entry["discrepancy"] <= two_cells))
    report(6, "sequence limsup equals indicator maximum on every bundled example", checks)


# -- 7 -------------------------------------------------------------------------------


def test_property_suites(report, bundled_runs):
    rng = np.random.default_rng(20240611)
    checks = []

    members = [m for expr in EXPRESSIONS.values() for m in stab_composed(expr)]
    norms_ok = nu_ok = True
    for m in members:
        norms = [op_norm(square_window(m, k)) for k in range(1, 25)]
        nus = [rect_lower_norm(m, k) for k in range(1, 25)]
        norms_ok &= all(b >= a - 1e-12 for a, b in zip(norms, norms[1:]))
        nu_ok &= all(b <= a + 1e-12 for a, b in zip(nus, nus[1:]))
    checks += [("monotone window norms", norms_ok), ("nonincreasing nu_m", nu_ok)]

    mu_ok = True
    for _ in range(50):
        a = rng.normal(size=(8, 8)) + 1j * rng.normal(size=(8, 8))
        a = np.triu(np.tril(a, 2), -2)
        want = 1 / np.linalg.norm(np.linalg.inv(a), 2)
        mu_ok &= abs(mu(a) - want) <= 1e-9 * (1 + np.linalg.norm(a, 2))
    checks.append(("mu against dense inverse on 50 band windows", mu_ok))

    box, res = (-1.0, 1.6, -0.5, 0.5), (53, 21)
    lam = grid_lambdas(box, res)
    nest_ok = lip_ok = True
    for expr in EXPRESSIONS.values():
        for target in (finite_section(expr, 9), stab_composed(expr).center):
            v = pseudo_grid(target, box, res, window=40).values
            masks = [v <= e for e in (0.01, 0.05, 0.1, 0.3)]
            nest_ok &= all(np.all(a <= b) for a, b in zip(masks, masks[1:]))
            for axis in (0, 1):
                dv = np.abs(np.diff(v, axis=axis))
                dl = np.abs(np.diff(lam, axis=axis))
                lip_ok &= bool(np.all(dv <= dl + 1e-9))
    checks += [("pseudospectra nested in eps", nest_ok), ("mu is 1-Lipschitz", lip_ok)]

    route_ok = True
    for z in rng.normal(size=10) + 1j * rng.normal(size=10):
        for expr in EXPRESSIONS.values():
            direct = stab_composed(expr - Scale(complex(z), Leaf(identity())))
            route_ok &= same_members(stab_shifted(stab_composed(expr), complex(z)), direct)
    checks.append(("lambda-shift route independence on 10 random lambda", route_ok))

    incl_ok = True
    for expr in EXPRESSIONS.values():
        rho = stab_composed(expr).modulus
        for r in range(2 * rho):
            incl_ok &= members_subset(stab_h(expr, 2 * rho, r), stab_h(expr, rho, r % rho))
            incl_ok &= members_subset(stab_h(expr, rho, r % rho), stab_composed(expr))
    checks.append(("subsequence inclusion", incl_ok))

    implication_ok = True
    for name, (_, rep, pseudo) in bundled_runs.items():
        inv_conv = rep["reports"]["inv_norm"]["verdict"]["kind"] == "Convergent"
        for entry in pseudo["epsilons"].values():
            if entry["verdict"]["kind"] == "Convergent":
                implication_ok &= inv_conv
    checks.append(("pseudospectral convergence implies inverse-norm convergence", implication_ok))
    report(7, "property suites", checks)


# -- 8 -------------------------------------------------------------------------------


def test_instability_detection(report, bundled_runs):
    expr = Leaf(shift(1))
    ns = range(2, 41)
    checks = [(f"inv n={n}", inv_norm(finite_section(expr, n)) == math.inf) for n in ns]
    rep = limsup_inv_norm(expr, ns)
    culprits = rep.extras["non_invertible_indicators"]
    checks.append(("unstable", not rep.extras["stable"]))
    checks.append(("driven by a corner indicator",
                   bool(culprits) and all(c != Kind.CENTER.value for c in culprits)
                   and any("corner" in c for c in culprits)))
    code, doc, _ = bundled_runs["laurent_shift"]
    checks.append(("cli exit code 2", code == 2 and not doc["stable"]))
    report(8, "instability of the shift detected through a corner indicator", checks)


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-s"]))
