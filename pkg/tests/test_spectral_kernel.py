import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from oracles import D, E, N, flip_dense, shift_dense, sigma_min

from fsa.catalog import block_flip, identity, kappa_expression, shift, shifted_flip_expression
from fsa.indicators import MINUS_DOMAIN, PLUS_DOMAIN, Indicator, Kind, stab_composed, stab_pure
from fsa.operator_model import BandOperator, FiniteMatrix, compress, materialize
from fsa.periodic import EventuallyPeriodicSequence as EPS
from fsa.sequence_algebra import Leaf, finite_section
from fsa.spectral_kernel import (EstimateKind, GridError, PointSet, UnsupportedExponentError,
                                 cell_diagonal, cluster_centers, dense_inverse_norm,
                                 grid_lambdas, grid_liminf, grid_limsup, hausdorff_distance,
                                 indicator_inv_norm, indicator_mu, indicator_norm, inv_norm, kappa,
                                 lower_norm, mask_hausdorff, mu, op_norm, pseudo_grid,
                                 rect_lower_norm, set_liminf, set_limsup, shifted_mu,
                                 smallest_singular_values, square_window)

B03 = np.array([[0.3, 1.0], [1.0, 0.3]])


def flip_section(mu_, n):
    return finite_section(Leaf(block_flip(mu_)), n)


# -- finite matrices -------------------------------------------------------------


def test_op_norm_examples():
    # [PAPER] ||B|| = 1 + mu; ||DE|| = N
    assert op_norm(B03) == pytest.approx(1.3, abs=1e-12)
    assert op_norm(D @ E) == pytest.approx(N, abs=1e-12)
    assert op_norm(np.zeros((3, 3))) == 0


@pytest.mark.parametrize("p", [1, 2, math.inf])
def test_op_norm_vs_numpy(rng, p):
    a = rng.normal(size=(6, 5)) + 1j * rng.normal(size=(6, 5))
    assert op_norm(a, p) == pytest.approx(np.linalg.norm(a, {1: 1, 2: 2, math.inf: np.inf}[p]))


def test_lower_norm_examples():
    # [PAPER] singular values 1 - mu and 1 + mu
    assert lower_norm(B03) == pytest.approx(0.7, abs=1e-12)
    assert lower_norm(np.eye(4)) == pytest.approx(1.0)
    # [DERIVED] the 3x3 shift section is nilpotent
    assert lower_norm(shift_dense(1, 0, 2)) == pytest.approx(0.0, abs=1e-15)


def test_lower_norm_wide_is_zero():
    assert lower_norm(np.ones((2, 3))) == 0.0


def test_lower_norm_p_restricted():
    with pytest.raises(UnsupportedExponentError):
        lower_norm(B03, 1)
    with pytest.raises(UnsupportedExponentError):
        mu(B03, math.inf)


def test_mu_examples(rng):
    # [PAPER] ||F_n^{-1}|| = 1 / (1 - mu) for even n
    assert mu(flip_section(0.3, 6)) == pytest.approx(0.7, abs=1e-12)
    assert mu(np.diag([1.0, 0.0])) == 0.0
    assert inv_norm(np.diag([1.0, 0.0])) == math.inf
    # [DERIVED] explicit dense inverse
    a = rng.normal(size=(5, 5))
    assert mu(a) == pytest.approx(1 / op_norm(np.linalg.inv(a)), abs=1e-9)


def test_inv_norm_examples():
    # [PAPER] max((1 - mu)^-1, mu^-1) for odd n; ||A_n^{-1}|| = N for even n
    assert inv_norm(flip_section(0.3, 5)) == pytest.approx(10 / 3, abs=1e-12)
    assert inv_norm(finite_section(kappa_expression(True), 4)) == pytest.approx(N, abs=1e-9)
    assert inv_norm(materialize(shift(1), (-4, 4), (-4, 4))) == math.inf


@pytest.mark.parametrize("p", [1, math.inf])
def test_inv_norm_lu_paths(rng, p):
    a = rng.normal(size=(7, 7)) + 4 * np.eye(7)
    assert inv_norm(a, p) == pytest.approx(dense_inverse_norm(a, p), rel=1e-12)
    assert inv_norm(shift_dense(1, 0, 4), p) == math.inf


def test_kappa_examples():
    # [PAPER] (1 + mu) / (1 - mu); 16 for odd n in Example 4.9 a
    assert kappa(flip_section(0.3, 4)) == pytest.approx(1.3 / 0.7, abs=1e-12)
    assert kappa(finite_section(kappa_expression(True), 5)) == pytest.approx(16, abs=1e-9)
    assert kappa(np.eye(3)) == pytest.approx(1.0)
    assert kappa(shift_dense(1, 0, 3)) == math.inf


def test_block_splitting_matches_dense(rng):
    # disconnected blocks, some repeated: compare against a plain SVD
    blocks = [rng.normal(size=(2, 2)) for _ in range(3)]
    big = np.zeros((12, 12))
    for k in range(6):
        big[2 * k:2 * k + 2, 2 * k:2 * k + 2] = blocks[k % 3]
    s = np.linalg.svd(big, compute_uv=False)
    assert op_norm(big) == pytest.approx(s[0], rel=1e-12)
    assert lower_norm(big) == pytest.approx(s[-1], rel=1e-12)


# -- indicators ----------------------------------------------------------------------


def test_indicator_norm_free_jacobi():
    # [DERIVED] sup |2 cos t| = 2, approached by the tridiagonal windows
    jac = BandOperator.laurent({-1: 1.0, 1: 1.0})
    est = indicator_norm(jac, tol=1e-6, m_max=400)
    assert est.value == pytest.approx(2.0, abs=1e-4)
    assert est.kind is EstimateKind.LOWER_BOUND
    for m in (10, 40, 160):
        w = square_window(jac, m).entries
        assert op_norm(w) == pytest.approx(2 * math.cos(math.pi / (2 * m + 2)), abs=1e-12)


def test_indicator_norm_corner():
    # [PAPER] diag(B, B, ...) has norm 1.3
    c = compress(BandOperator(block_flip(0.3).diagonals), MINUS_DOMAIN)
    est = indicator_norm(c, tol=1e-10)
    assert est.value == pytest.approx(1.3, abs=1e-12)
    assert est.converged


def test_indicator_norm_zero():
    assert indicator_norm(BandOperator.zero()).value == 0


@pytest.mark.parametrize("p", [1, math.inf])
def test_indicator_norm_exact_row_sums(p):
    op = BandOperator({0: EPS.constant(2.0), 1: EPS([1.0], [-3.0], 0, [0.5])}, p=p)
    est = indicator_norm(op)
    assert est.kind is EstimateKind.EXACT
    # p = inf: largest row sum; p = 1: largest column sum
    assert est.value == pytest.approx(5.0)


def test_indicator_inv_norm_h():
    # [PAPER] ||H^{-1}|| = 4
    s = stab_composed(kappa_expression(True))
    h = next(m for m in s if m.kind is Kind.MINUS_CORNER and m.residue == 1)
    est = indicator_inv_norm(h, tol=1e-10)
    assert est.value == pytest.approx(4.0, abs=1e-9)
    assert est.converged


def test_indicator_inv_norm_one_sided_shift():
    # [DERIVED] the adjoint window kills e_0 at every m
    t = compress(shift(1), MINUS_DOMAIN)
    est = indicator_inv_norm(t)
    assert est.value == math.inf and est.is_infinite and est.converged
    t = compress(shift(1), PLUS_DOMAIN)
    assert indicator_inv_norm(t).value == math.inf


def test_indicator_inv_norm_identity():
    assert indicator_inv_norm(identity()).value == pytest.approx(1.0)


def test_indicator_inv_norm_p_restricted():
    with pytest.raises(UnsupportedExponentError):
        indicator_inv_norm(BandOperator.identity(p=1))


@pytest.mark.parametrize("expr", [Leaf(block_flip(0.3)), kappa_expression(True),
                                  shifted_flip_expression(), Leaf(shift(1))])
def test_monotone_window_norms(expr):
    for ind in stab_composed(expr):
        norms = [op_norm(square_window(ind, m)) for m in range(1, 30)]
        assert all(b >= a - 1e-12 for a, b in zip(norms, norms[1:]))
        lows = [rect_lower_norm(ind, m) for m in range(1, 30)]
        assert all(b <= a + 1e-12 for a, b in zip(lows, lows[1:]))


# -- grids ---------------------------------------------------------------------------


def test_smallest_singular_values_vs_dense(rng):
    # banded and block inputs through both solver paths
    for band in (0, 1, 3):
        n = 40
        m = np.zeros((n + 2, n), dtype=complex)
        for k in range(-band, band + 1):
            for i in range(n):
                if 0 <= i + k + 1 < n + 2:
                    m[i + k + 1, i] = rng.normal() + 1j * rng.normal()
        e = np.zeros((n + 2, n))
        e[1:n + 1, :] = np.eye(n)
        lams = rng.normal(size=25) + 1j * rng.normal(size=25)
        got = smallest_singular_values(m, e, lams)
        want = [sigma_min(m - lam * e) for lam in lams]
        assert np.allclose(got, want, atol=1e-8)


def test_shifted_mu_matches_sections():
    sec = flip_section(0.3, 7)
    lams = grid_lambdas((-1.0, 1.5, -0.4, 0.4), (11, 5)).ravel()
    got = shifted_mu(sec, lams)
    want = [mu(sec.shifted(lam)) for lam in lams]
    assert np.allclose(got, want, atol=1e-9)


def test_shifted_mu_matches_indicator_mu():
    ind = stab_pure(shift(1)).members[1]
    lams = np.array([0.3, 0.5 + 0.5j, -1.2, 2.0j])
    got = shifted_mu(ind, lams, window=30)
    want = [indicator_mu(ind.op.shift_identity(lam), 30) for lam in lams]
    assert np.allclose(got, want, atol=1e-9)


def test_pseudo_grid_flip_clusters():
    # [PAPER] Spec F_n = {mu +- 1, 1} for even n
    g = pseudo_grid(flip_section(0.0, 8), (-1.5, 1.5, -0.3, 0.3), (61, 13), epsilons=[0.05])
    centers = sorted(np.round(np.array(cluster_centers(g, 0.05).points).real, 6))
    assert centers == [-1.0, 1.0]
    # [PAPER] {1, 2, 3} for odd n of F + 2I
    g = pseudo_grid(finite_section(shifted_flip_expression(), 7), (0.5, 3.5, -0.3, 0.3), (61, 13))
    centers = sorted(np.round(np.array(cluster_centers(g, 0.05).points).real, 6))
    assert centers == [1.0, 2.0, 3.0]


def test_pseudo_grid_identity_disk():
    g = pseudo_grid(finite_section(Leaf(identity()), 3), (0.0, 2.0, -1.0, 1.0), (41, 41))
    lam = g.lambdas()
    assert np.allclose(g.values, np.abs(lam - 1), atol=1e-12)
    assert np.array_equal(g.sublevel(0.3), g.values <= 0.3)
    assert g.sublevel(0.3)[20, 20] and not g.sublevel(0.3)[0, 0]


def test_pseudo_grid_errors():
    with pytest.raises(GridError):
        grid_lambdas((1.0, 0.0, 0.0, 1.0), (5, 5))
    with pytest.raises(GridError):
        grid_lambdas((0.0, 1.0, 0.0, 1.0), (1, 5))


def test_sp_eps_nesting():
    g = pseudo_grid(flip_section(0.3, 5), (-1.0, 1.6, -0.5, 0.5), (41, 21))
    masks = [g.sublevel(e) for e in (0.01, 0.05, 0.1, 0.3)]
    for a, b in zip(masks, masks[1:]):
        assert not np.any(a & ~b)
    assert not np.any(g.strict_sublevel(0.1) & ~g.sublevel(0.1))


def test_mu_lipschitz(rng):
    sec = finite_section(kappa_expression(True), 5)
    lams = rng.normal(size=60) + 1j * rng.normal(size=60)
    vals = shifted_mu(sec, lams)
    for i in range(0, 60, 2):
        assert abs(vals[i] - vals[i + 1]) <= abs(lams[i] - lams[i + 1]) + 1e-12 + 1e-9


def test_cell_diagonal():
    assert cell_diagonal((0, 2, 0, 1), (3, 3)) == pytest.approx(math.hypot(1, 0.5))


# -- sets ---------------------------------------------------------------------------


def test_hausdorff_examples():
    # [PAPER] dist(2, {1, 3}) = 1
    assert hausdorff_distance(PointSet([1, 3]), PointSet([1, 2, 3])) == pytest.approx(1.0)
    s = PointSet([0.5j, 2, -1])
    assert hausdorff_distance(s, s) == 0.0
    with pytest.raises(ValueError):
        hausdorff_distance(PointSet([]), s)


points = st.lists(st.complex_numbers(max_magnitude=5, allow_nan=False, allow_infinity=False),
                  min_size=1, max_size=8)


@given(points, points)
def test_hausdorff_symmetric(a, b):
    assert hausdorff_distance(a, b) == pytest.approx(hausdorff_distance(b, a))


@given(points, points)
def test_hausdorff_brute_force(a, b):
    a, b = np.array(a), np.array(b)
    d = np.abs(a[:, None] - b[None, :])
    assert hausdorff_distance(a, b) == pytest.approx(max(d.min(1).max(), d.min(0).max()), abs=1e-12)


def test_mask_hausdorff(rng):
    lam = grid_lambdas((-1, 2, -0.5, 0.7), (37, 23))
    for _ in range(10):
        a = rng.random(lam.shape) < 0.05
        b = rng.random(lam.shape) < 0.03
        assert mask_hausdorff(lam, a, b) == pytest.approx(hausdorff_distance(lam[a], lam[b]))
    empty = np.zeros(lam.shape, bool)
    assert mask_hausdorff(lam, empty, empty) == 0.0
    assert mask_hausdorff(lam, empty, a) == math.inf


def test_set_limsup_liminf_alternating():
    # [PAPER] alternating {1,3} and {1,2,3}
    sets = [PointSet([1, 3]) if n % 2 else PointSet([1, 2, 3]) for n in range(10)]
    assert sorted(np.array(set_limsup(sets, 0.1).points).real) == [1, 2, 3]
    assert sorted(np.array(set_liminf(sets, 0.1).points).real) == [1, 3]


def test_set_limsup_constant():
    sets = [PointSet([0, 1j])] * 6
    assert sorted(set_limsup(sets, 0.1).points, key=abs) == [0, 1j]
    assert sorted(set_liminf(sets, 0.1).points, key=abs) == [0, 1j]


def test_set_limsup_singletons():
    # [DERIVED] {1/n}: the tail clusters at 0 once 1/n falls below the tolerance
    sets = [PointSet([1 / n]) for n in range(1, 201)]
    up = set_limsup(sets, 0.02)
    assert len(up) == 1 and abs(up.points[0]) < 0.02
    assert abs(set_liminf(sets, 0.02).points[0]) < 0.02


def test_grid_set_ops():
    # only the tail half of the sampled sequence enters
    old = np.array([False, False, False, True])
    a = np.array([True, False, True, False])
    b = np.array([True, True, False, False])
    assert grid_limsup([old, old, a, b]).tolist() == [True, True, True, False]
    assert grid_liminf([old, old, a, b]).tolist() == [True, False, False, False]


def test_finite_matrix_inputs():
    m = FiniteMatrix.square(B03)
    assert op_norm(m) == pytest.approx(1.3)
    ind = Indicator(identity(), Kind.CENTER)
    assert indicator_norm(ind).value == pytest.approx(1.0)


def test_flip_oracle_agrees():
    assert np.allclose(flip_section(0.3, 6).entries, flip_dense(0.3, -6, 6))
