import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from oracles import flip_dense

from fsa.catalog import block_flip, identity
from fsa.operator_model import (BandOperator, OperatorDomain, OperatorError, compress, materialize,
                                shift_conjugate)
from fsa.periodic import EventuallyPeriodicSequence as EPS
from fsa.limit_ops import Direction, limit_along, limit_minus, limit_plus

PLUS, MINUS = Direction.PLUS, Direction.MINUS
B03 = np.array([[0.3, 1.0], [1.0, 0.3]])
LAURENT = BandOperator.laurent({-1: 1.0, 0: 0.5, 2: 2j})


@st.composite
def ops(draw):
    diags = {}
    for k in draw(st.sets(st.integers(-2, 2), min_size=1, max_size=3)):
        vals = st.integers(-3, 3).map(float)
        diags[k] = EPS(draw(st.lists(vals, min_size=1, max_size=3)),
                       draw(st.lists(vals, max_size=4)), draw(st.integers(-3, 3)),
                       draw(st.lists(vals, min_size=1, max_size=3)))
    return BandOperator(diags)


def test_laurent_single_member():
    # [PAPER] limit operators L_g = L
    for lim in (limit_plus(LAURENT), limit_minus(LAURENT)):
        assert lim.modulus == 1
        assert len(lim.distinct()) == 1 and lim.members[0] == LAURENT


def test_flip_two_phases():
    # [DERIVED] S_{-h} F S_h for h = 10, 11 against the members
    f = block_flip(0.3)
    lim = limit_plus(f)
    assert lim.modulus == 2 and len(lim.distinct()) == 2
    w = (-6, 6)
    for h in (10, 11):
        assert np.allclose(materialize(lim.members[h % 2], w, w).entries,
                           flip_dense(0.3, w[0] + h, w[1] + h))
    lim = limit_minus(f)
    assert len(lim.distinct()) == 2
    for h in (10, 11):
        assert np.allclose(materialize(lim.members[h % 2], w, w).entries,
                           flip_dense(0.3, w[0] - h, w[1] - h))


def test_zero_tail():
    op = BandOperator({0: EPS([1.0], [2.0, 3.0], 0, [0.0])})
    assert limit_plus(op).members[0] == BandOperator.zero()


def test_constant_left_tail():
    op = BandOperator({0: EPS([2.5], [1.0], 0, [0.0]), 1: EPS([0.0], [4.0], 0, [1.0])})
    assert limit_minus(op).members[0] == 2.5 * identity()


def test_limit_along_laurent():
    assert limit_along(LAURENT, 1, 0, PLUS) == LAURENT


def test_refined_modulus():
    f = block_flip(0.3)
    assert limit_along(f, 4, 1, PLUS) == limit_along(f, 2, 1, PLUS)
    assert limit_along(f, 4, 2, MINUS) == limit_along(f, 2, 0, MINUS)


def test_residue_convention_block_flip():
    # [PAPER] C, C~ from the even sections, D, D~ from the odd ones; C = diag(B, B, ...),
    # D = diag(mu, B, B, ...) on 0.. and their mirror images on ..0
    f = block_flip(0.3)
    plus, minus = OperatorDomain.leq(0), OperatorDomain.geq(0)
    c = compress(limit_along(f, 2, 0, MINUS), minus)
    c_t = compress(limit_along(f, 2, 0, PLUS), plus)
    d = compress(limit_along(f, 2, 1, MINUS), minus)
    d_t = compress(limit_along(f, 2, 1, PLUS), plus)
    blocks = np.kron(np.eye(3), B03)
    assert np.allclose(materialize(c, (0, 5), (0, 5)).entries, blocks)
    assert np.allclose(materialize(c_t, (-5, 0), (-5, 0)).entries, blocks)
    d_want = np.zeros((7, 7))
    d_want[0, 0] = 0.3
    d_want[1:, 1:] = blocks
    assert np.allclose(materialize(d, (0, 6), (0, 6)).entries, d_want)
    assert np.allclose(materialize(d_t, (-6, 0), (-6, 0)).entries, d_want[::-1, ::-1])


def test_corner_of_sections_matches_convention():
    # the lower right corner of F_n seen through S_{-n}, for n = r mod 2
    f = block_flip(0.3)
    for n in (20, 21):
        corner = flip_dense(0.3, n - 5, n)
        lim = compress(limit_along(f, 2, n % 2, PLUS), OperatorDomain.leq(0))
        assert np.allclose(materialize(lim, (-5, 0), (-5, 0)).entries, corner)
        corner = flip_dense(0.3, -n, -n + 5)
        lim = compress(limit_along(f, 2, n % 2, MINUS), OperatorDomain.geq(0))
        assert np.allclose(materialize(lim, (0, 5), (0, 5)).entries, corner)


def test_errors():
    with pytest.raises(OperatorError):
        limit_along(block_flip(0.3), 3, 0, PLUS)
    with pytest.raises(OperatorError):
        limit_along(BandOperator.identity(OperatorDomain.geq(0)), 1, 0, PLUS)


@given(ops())
def test_members_periodic(op):
    for lim in (limit_plus(op), limit_minus(op)):
        rho = lim.modulus
        m0 = lim.members[0]
        for r, m in lim.members.items():
            assert shift_conjugate(m, rho) == m
            assert m == shift_conjugate(m0, r if lim.direction is PLUS else -r)


@given(ops(), st.integers(0, 5))
def test_finite_step_exactness(op, r):
    lo, hi = op.center_bounds()
    w = (-4, 4)
    for direction, lim in ((PLUS, limit_plus(op)), (MINUS, limit_minus(op))):
        rho = lim.modulus
        member = limit_along(op, rho, r, direction)
        radius = max(abs(lo), abs(hi)) + 9 + op.bandwidth
        h = (radius // rho + 1) * rho + r % rho
        h = h if direction is PLUS else -h
        assert np.allclose(materialize(shift_conjugate(op, h), w, w).entries,
                           materialize(member, w, w).entries)


@given(ops())
def test_member_windows_are_translates(op):
    # every member window reappears in op, so member norms never exceed op norms
    lo, hi = op.center_bounds()
    w = (-3, 3)
    for r, m in limit_plus(op).members.items():
        rho = limit_plus(op).modulus
        h = (abs(hi) + 10) // rho * rho + rho + r
        assert np.allclose(materialize(m, w, w).entries,
                           materialize(op, (w[0] + h, w[1] + h), (w[0] + h, w[1] + h)).entries)


@given(ops(), st.integers(-4, 4))
def test_shift_invariance_of_member_set(op, k):
    a = limit_plus(op).distinct()
    b = limit_plus(shift_conjugate(op, k)).distinct()
    assert len(a) == len(b)
    assert all(any(x == y for y in b) for x in a)
