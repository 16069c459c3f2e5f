"""Cotangent-lift pair on matrix space: momenta, witnesses, Jordan forms."""

import numpy as np
import pytest

from dualpairs import general_linear as gl
from dualpairs.linalg import random_group_element, stream_rng
from dualpairs.pairs import LevelMismatchError


def _point(n, m, seed):
    rng = stream_rng(seed, 2)
    return gl.CotangentPoint(rng.standard_normal((n, m)),
                             rng.standard_normal((n, m)))


def _invertible(k, seed):
    return random_group_element("general_linear", k, seed)


# ---------------------------------------------------------------------------
# points and the lifted actions

def test_point_validation():
    with pytest.raises(ValueError):
        gl.CotangentPoint(np.zeros((2, 2)), np.zeros((3, 2)))
    with pytest.raises(ValueError):
        gl.CotangentPoint(np.zeros(2), np.zeros(2))


def test_act_left_identity():
    pt = _point(3, 2, 120)
    out = gl.act_left(np.eye(3), pt)
    np.testing.assert_array_equal(out.Q, pt.Q)
    np.testing.assert_array_equal(out.P, pt.P)


def test_act_left_scalar():
    pt = gl.CotangentPoint(np.eye(2), np.eye(2))
    out = gl.act_left(2.0 * np.eye(2), pt)
    np.testing.assert_allclose(out.Q, 2.0 * np.eye(2))
    np.testing.assert_allclose(out.P, 0.5 * np.eye(2))


def test_act_composition():
    pt = _point(3, 3, 121)
    A = _invertible(3, 122)
    B = _invertible(3, 123)
    one = gl.act_left(A @ B, pt)
    two = gl.act_left(A, gl.act_left(B, pt))
    np.testing.assert_allclose(one.Q, two.Q, atol=1e-10)
    np.testing.assert_allclose(one.P, two.P, atol=1e-10)


def test_act_right_composition():
    pt = _point(3, 2, 124)
    A = _invertible(2, 125)
    B = _invertible(2, 126)
    one = gl.act_right(pt, A @ B)
    two = gl.act_right(gl.act_right(pt, A), B)
    np.testing.assert_allclose(one.Q, two.Q, atol=1e-10)
    np.testing.assert_allclose(one.P, two.P, atol=1e-10)


def test_act_preserves_canonical_pairing():
    # Tr(P^T Q) is invariant under both lifted actions
    pt = _point(4, 3, 127)
    A = _invertible(4, 128)
    B = _invertible(3, 129)
    before = np.trace(pt.P.T @ pt.Q)
    after_l = gl.act_left(A, pt)
    after_r = gl.act_right(pt, B)
    assert abs(np.trace(after_l.P.T @ after_l.Q) - before) <= 1e-10
    assert abs(np.trace(after_r.P.T @ after_r.Q) - before) <= 1e-10


# ---------------------------------------------------------------------------
# momenta

def test_momentum_identity_point():
    pt = gl.CotangentPoint(np.eye(2), np.eye(2))
    np.testing.assert_array_equal(gl.momentum_left(pt), np.eye(2))
    np.testing.assert_array_equal(gl.momentum_right(pt), np.eye(2))


def test_momentum_nilpotent_hand_case():
    pt = gl.CotangentPoint(np.array([[1.0], [0.0]]), np.array([[0.0], [1.0]]))
    np.testing.assert_array_equal(gl.momentum_left(pt),
                                  np.array([[0.0, 1.0], [0.0, 0.0]]))
    np.testing.assert_array_equal(gl.momentum_right(pt), np.array([[0.0]]))


def test_momenta_share_trace():
    pt = _point(4, 2, 130)
    zl = gl.momentum_left(pt)
    zr = gl.momentum_right(pt)
    assert abs(np.trace(zl) - np.trace(zr)) <= 1e-12


def test_momentum_left_rank_bound():
    pt = _point(5, 2, 131)
    assert np.linalg.matrix_rank(gl.momentum_left(pt)) <= 2


# ---------------------------------------------------------------------------
# witnesses

def test_witness_right_identity():
    pt = _point(3, 2, 132)
    rep = gl.witness_right(pt, pt)
    assert rep.residual <= 1e-12
    np.testing.assert_allclose(rep.witness, np.eye(2), atol=1e-10)


def test_witness_right_recovers_action():
    pt = _point(4, 3, 133)
    B0 = _invertible(3, 134)
    rep = gl.witness_right(pt, gl.act_right(pt, B0))
    assert rep.residual <= 1e-9
    np.testing.assert_allclose(rep.witness, B0, atol=1e-8 * np.linalg.norm(B0))


def test_witness_right_scalar_case():
    pt = gl.CotangentPoint(np.array([[1.0], [0.0]]), np.array([[0.0], [1.0]]))
    pt2 = gl.CotangentPoint(np.array([[2.0], [0.0]]), np.array([[0.0], [0.5]]))
    rep = gl.witness_right(pt, pt2)
    np.testing.assert_allclose(rep.witness, [[2.0]], atol=1e-12)
    assert rep.residual <= 1e-12


def test_witness_right_level_mismatch():
    pt = _point(3, 2, 135)
    other = _point(3, 2, 136)
    with pytest.raises(LevelMismatchError):
        gl.witness_right(pt, other)


def test_witness_right_needs_full_rank():
    pt = gl.CotangentPoint(np.zeros((2, 2)), np.eye(2))
    with pytest.raises(ValueError):
        gl.witness_right(pt, pt)


def test_witness_left_identity():
    pt = _point(3, 3, 137)
    rep = gl.witness_left(pt, pt)
    assert rep.residual <= 1e-10


def test_witness_left_recovers_fiber():
    pt = _point(3, 2, 138)
    A0 = _invertible(3, 139)
    rep = gl.witness_left(pt, gl.act_left(A0, pt))
    assert rep.residual <= 1e-8
    A = rep.witness
    target = gl.act_left(A0, pt)
    np.testing.assert_allclose(A @ pt.Q, target.Q, atol=1e-8)
    np.testing.assert_allclose(np.linalg.solve(A.T, pt.P), target.P, atol=1e-7)


def test_witness_left_square_case_matches_direct_solve():
    pt = _point(2, 2, 140)
    A0 = _invertible(2, 141)
    target = gl.act_left(A0, pt)
    rep = gl.witness_left(pt, target)
    assert rep.residual <= 1e-10
    # square full-rank Q pins A uniquely
    direct = target.Q @ np.linalg.inv(pt.Q)
    np.testing.assert_allclose(rep.witness, direct, atol=1e-8)


def test_witness_left_level_mismatch():
    pt = _point(3, 2, 142)
    with pytest.raises(LevelMismatchError):
        gl.witness_left(pt, _point(3, 2, 143))


# ---------------------------------------------------------------------------
# joint completion

def test_complete_pair_tiny_disjoint_spans():
    # e1 blocks the first span, e2 the second; the sum candidate clears both
    Q1 = np.array([[1.0], [0.0]])
    Q2 = np.array([[0.0], [1.0]])
    X = gl.complete_pair(Q1, Q2)
    assert X.shape == (2, 1)
    assert abs(np.linalg.det(np.hstack([Q1, X]))) > 1e-8
    assert abs(np.linalg.det(np.hstack([Q2, X]))) > 1e-8
    np.testing.assert_allclose(np.abs(X[:, 0]), [np.sqrt(0.5), np.sqrt(0.5)])


def test_complete_pair_single_matrix():
    Q = np.array([[1.0], [0.0], [0.0]])
    X = gl.complete_pair(Q)
    assert abs(np.linalg.det(np.hstack([Q, X]))) > 1e-8


def test_complete_pair_random():
    for trial in range(100):
        rng = stream_rng(144, trial)
        n = int(rng.integers(1, 7))
        m = int(rng.integers(1, n + 1))
        Q1 = rng.standard_normal((n, m))
        Q2 = rng.standard_normal((n, m))
        X = gl.complete_pair(Q1, Q2)
        assert X.shape == (n, n - m)
        assert abs(np.linalg.det(np.hstack([Q1, X]))) > 1e-10
        assert abs(np.linalg.det(np.hstack([Q2, X]))) > 1e-10


# ---------------------------------------------------------------------------
# image membership

def test_in_image_left_full_square():
    assert gl.in_image_left(np.eye(3), 3)


def test_in_image_left_zero():
    assert not gl.in_image_left(np.zeros((3, 3)), 2)


def test_in_image_left_nilpotent():
    zeta = np.array([[0.0, 0.0], [1.0, 0.0]])
    assert gl.in_image_left(zeta, 1)


def test_in_image_right_zero_wide_kernel():
    # n >= 2m leaves room for Q, P with disjoint row spans
    assert gl.in_image_right(np.zeros((2, 2)), 4)
    assert not gl.in_image_right(np.zeros((2, 2)), 2)
    assert not gl.in_image_right(np.zeros((2, 2)), 3)


def test_in_image_right_full():
    assert gl.in_image_right(np.eye(2), 2)


def test_in_image_right_rank_violation():
    assert not gl.in_image_right(np.diag([1.0, 0.0]), 2)


# ---------------------------------------------------------------------------
# Jordan bookkeeping

def test_jordan_data_sorts_blocks():
    jd = gl.JordanData(blocks=((1.0, 1), (3.0, 2), (1.0, 2)),
                       nilpotent=(2, 3), n=10, m=8)
    assert jd.blocks == ((1.0, 2), (3.0, 2), (1.0, 1))
    assert jd.nilpotent == (3, 2)


def test_jordan_data_validation():
    with pytest.raises(ValueError):
        gl.JordanData(blocks=((0.0, 1),), nilpotent=(), n=1, m=1)
    with pytest.raises(ValueError):
        gl.JordanData(blocks=((1.0 - 1j, 2),), nilpotent=(), n=2, m=2)
    with pytest.raises(ValueError):
        gl.JordanData(blocks=((1j, 3),), nilpotent=(), n=3, m=3)  # even only
    with pytest.raises(ValueError):
        gl.JordanData(blocks=(), nilpotent=(1,), n=1, m=0)  # length >= 2
    with pytest.raises(ValueError):
        gl.JordanData(blocks=((2.0, 1),), nilpotent=(), n=2, m=2)  # budget
    with pytest.raises(ValueError):
        gl.JordanData(blocks=(), nilpotent=(2, 2), n=3, m=2)  # nil count


def test_jordan_data_hashable():
    a = gl.JordanData(blocks=((2.0, 1),), nilpotent=(), n=1, m=1)
    b = gl.JordanData(blocks=((2.0, 1),), nilpotent=(), n=1, m=1)
    assert len({a, b}) == 1


def test_build_point_smallest_nilpotent():
    jd = gl.JordanData(blocks=(), nilpotent=(2,), n=2, m=1)
    pt = gl.build_qp_from_jordan(jd)
    zl = gl.momentum_left(pt)
    assert np.count_nonzero(zl) == 1
    assert np.linalg.matrix_rank(zl) == 1 and np.trace(zl) == 0.0
    np.testing.assert_array_equal(zl @ zl, np.zeros((2, 2)))
    np.testing.assert_array_equal(gl.momentum_right(pt), np.array([[0.0]]))


def test_build_point_scalar():
    jd = gl.JordanData(blocks=((5.0, 1),), nilpotent=(), n=1, m=1)
    pt = gl.build_qp_from_jordan(jd)
    np.testing.assert_array_equal(gl.momentum_left(pt), np.array([[5.0]]))
    np.testing.assert_array_equal(gl.momentum_right(pt), np.array([[5.0]]))


def test_build_point_complex_pair():
    jd = gl.JordanData(blocks=((1j, 2),), nilpotent=(), n=4, m=2)
    pt = gl.build_qp_from_jordan(jd)
    zl = gl.momentum_left(pt)
    expected = np.zeros((4, 4))
    expected[0, 1] = 1.0
    expected[1, 0] = -1.0
    np.testing.assert_array_equal(zl, expected)


def test_jordan_correspond_matches_built_momenta():
    jd = gl.JordanData(blocks=((2.0, 1), (1j, 2)), nilpotent=(2,), n=5, m=4)
    zeta, xi = gl.jordan_correspond(jd)
    pt = gl.build_qp_from_jordan(jd)
    np.testing.assert_array_equal(zeta, gl.momentum_left(pt))
    np.testing.assert_array_equal(xi, gl.momentum_right(pt))


def test_jordan_correspond_nilpotent_shift():
    jd = gl.JordanData(blocks=(), nilpotent=(2,), n=2, m=1)
    zeta, xi = gl.jordan_correspond(jd)
    np.testing.assert_array_equal(zeta, [[0.0, 1.0], [0.0, 0.0]])
    np.testing.assert_array_equal(xi, [[0.0]])


# ---------------------------------------------------------------------------
# structure recovery

def test_structure_left_diagonal():
    jd = gl.jordan_structure(np.diag([3.0, 3.0, 0.0]), side="left")
    assert jd.blocks == ((3.0, 1), (3.0, 1))
    assert jd.nilpotent == ()
    assert (jd.n, jd.m) == (3, 2)


def test_structure_left_single_chain():
    z = np.zeros((3, 3))
    z[1, 0] = 1.0
    z[2, 1] = 1.0
    jd = gl.jordan_structure(z, side="left")
    assert jd.blocks == ()
    assert jd.nilpotent == (3,)


def test_structure_right_zero_matrix():
    jd = gl.jordan_structure(np.zeros((1, 1)), side="right", n=2)
    assert jd.blocks == ()
    assert jd.nilpotent == (2,)


@pytest.mark.parametrize("jd", [
    gl.JordanData(blocks=((2.0, 2),), nilpotent=(), n=2, m=2),
    gl.JordanData(blocks=((1j, 2),), nilpotent=(2,), n=4, m=3),
    gl.JordanData(blocks=((2.0, 1),), nilpotent=(3, 2), n=6, m=4),
    gl.JordanData(blocks=((-1.0, 1), (1 + 1j, 2)), nilpotent=(), n=3, m=3),
])
def test_structure_roundtrip(jd):
    zeta, xi = gl.jordan_correspond(jd)
    assert gl.jordan_structure(zeta, side="left") == jd
    assert gl.jordan_structure(xi, side="right", n=jd.n) == jd


def test_structure_float_path_after_conjugation():
    jd = gl.JordanData(blocks=((2.0, 1), (-0.5, 2)), nilpotent=(), n=3, m=3)
    zeta, _ = gl.jordan_correspond(jd)
    A = _invertible(3, 150)
    conj = A @ zeta @ np.linalg.inv(A)
    out = gl.jordan_structure(conj, side="left")
    # float recovery reports clustered eigenvalue means, not snapped values
    assert out.nilpotent == jd.nilpotent and (out.n, out.m) == (3, 3)
    assert [c for _, c in out.blocks] == [c for _, c in jd.blocks]
    key = lambda z: (z.real, z.imag)
    got = sorted((lam for lam, _ in out.blocks), key=key)
    ref = sorted((complex(lam) for lam, _ in jd.blocks), key=key)
    np.testing.assert_allclose(got, ref, atol=1e-8)


def test_structure_float_ambiguity_raises():
    z = np.diag([1.0, 1.0 + 2e-4, 5.0])
    with pytest.raises(ValueError):
        gl.jordan_structure(z, side="left")


def test_structure_right_requires_n():
    with pytest.raises(ValueError):
        gl.jordan_structure(np.zeros((1, 1)), side="right")


def test_structure_rejects_nonsquare():
    with pytest.raises(ValueError):
        gl.jordan_structure(np.zeros((2, 3)), side="left")
