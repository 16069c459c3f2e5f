"""Cross-pair embeddings and restriction diagrams."""

import numpy as np
import pytest

from dualpairs import seesaw, symplectic, unitary
from dualpairs.general_linear import CotangentPoint
from dualpairs.linalg import omega_complex, omega_real, stream_rng


def test_embed_u_zero():
    np.testing.assert_array_equal(seesaw.embed_u_to_sp(np.zeros((2, 2))),
                                  np.zeros((4, 4)))


def test_embed_u_hand_value():
    out = seesaw.embed_u_to_sp(np.array([[1j]]))
    np.testing.assert_array_equal(out, [[0.0, -1.0], [1.0, 0.0]])


def test_embed_u_lands_in_sp():
    rng = stream_rng(160, 0)
    A = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    zeta = A - A.conj().T
    out = seesaw.embed_u_to_sp(zeta)
    J = np.block([[np.zeros((3, 3)), np.eye(3)], [-np.eye(3), np.zeros((3, 3))]])
    assert np.linalg.norm(out.T @ J + J @ out) <= 1e-12


def test_embed_u_bracket_morphism():
    rng = stream_rng(161, 0)
    A = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
    B = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
    x = A - A.conj().T
    y = B - B.conj().T
    left = seesaw.embed_u_to_sp(x @ y - y @ x)
    X = seesaw.embed_u_to_sp(x)
    Y = seesaw.embed_u_to_sp(y)
    np.testing.assert_allclose(left, X @ Y - Y @ X, atol=1e-12)


def test_embed_u_rejects_non_anti_hermitian():
    with pytest.raises(ValueError):
        seesaw.embed_u_to_sp(np.eye(2))


def test_embed_gl_identity():
    out = seesaw.embed_gl_to_sp(np.eye(2))
    expected = np.zeros((4, 4))
    expected[0, 0] = expected[1, 1] = 1.0
    expected[2, 2] = expected[3, 3] = -1.0
    np.testing.assert_array_equal(out, expected)


def test_embed_gl_shift_placement():
    z = np.array([[0.0, 1.0], [0.0, 0.0]])
    out = seesaw.embed_gl_to_sp(z)
    expected = np.zeros((4, 4))
    expected[0, 1] = 1.0
    expected[3, 2] = -1.0
    np.testing.assert_array_equal(out, expected)


def test_embed_gl_bracket_morphism():
    rng = stream_rng(162, 0)
    x = rng.standard_normal((3, 3))
    y = rng.standard_normal((3, 3))
    left = seesaw.embed_gl_to_sp(x @ y - y @ x)
    X = seesaw.embed_gl_to_sp(x)
    Y = seesaw.embed_gl_to_sp(y)
    np.testing.assert_allclose(left, X @ Y - Y @ X, atol=1e-12)


def test_embed_gl_rejects_nonsquare():
    with pytest.raises(ValueError):
        seesaw.embed_gl_to_sp(np.zeros((2, 3)))


def test_embedding_tag_dispatch():
    z = np.array([[1j]])
    np.testing.assert_array_equal(seesaw.EmbeddingTag("u_to_sp", 1).apply(z),
                                  seesaw.embed_u_to_sp(z))
    w = np.array([[2.0]])
    np.testing.assert_array_equal(
        seesaw.EmbeddingTag("gl_to_sp", 1).apply(w),
        seesaw.embed_gl_to_sp(w))
    with pytest.raises(ValueError):
        seesaw.EmbeddingTag("o_to_sp", 1)
    with pytest.raises(ValueError):
        seesaw.EmbeddingTag("u_to_sp", 0)


def test_complex_to_real_stacking():
    np.testing.assert_array_equal(seesaw.complex_to_real(np.zeros((2, 1), complex)),
                                  np.zeros((4, 1)))
    np.testing.assert_array_equal(seesaw.complex_to_real(np.array([[1j]])),
                                  [[0.0], [1.0]])


def test_complex_to_real_preserves_form():
    rng = stream_rng(163, 0)
    E = rng.standard_normal((3, 2)) + 1j * rng.standard_normal((3, 2))
    F = rng.standard_normal((3, 2)) + 1j * rng.standard_normal((3, 2))
    assert abs(omega_complex(E, F) -
               omega_real(seesaw.complex_to_real(E), seesaw.complex_to_real(F))) <= 1e-12


def test_complex_to_real_intertwines_action():
    rng = stream_rng(164, 0)
    E = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
    A = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
    zeta = A - A.conj().T
    lhs = seesaw.complex_to_real(zeta @ E)
    rhs = seesaw.embed_u_to_sp(zeta) @ seesaw.complex_to_real(E)
    np.testing.assert_allclose(lhs, rhs, atol=1e-12)


def test_restrict_u_fixed_on_real_skew():
    mu = np.array([[0.0, 2.0], [-2.0, 0.0]], dtype=complex)
    np.testing.assert_allclose(seesaw.restrict_u_to_o(mu),
                               [[0.0, 2.0], [-2.0, 0.0]])


def test_restrict_u_takes_real_part():
    mu = np.array([[1j, 1.0], [-1.0, -1j]])
    np.testing.assert_allclose(seesaw.restrict_u_to_o(mu),
                               [[0.0, 1.0], [-1.0, 0.0]])


def test_restrict_gl_takes_skew_part():
    xi = np.array([[0.0, 1.0], [0.0, 0.0]])
    np.testing.assert_allclose(seesaw.restrict_gl_to_o(xi),
                               [[0.0, 0.5], [-0.5, 0.0]])


def test_diagram_u_zero_point():
    out = seesaw.check_diagram_sp_u(np.zeros((2, 1), dtype=complex))
    assert out["left"] <= 1e-15 and out["right"] <= 1e-15


def test_diagram_u_scalar():
    out = seesaw.check_diagram_sp_u(np.array([[1.0 + 0j]]))
    assert out["left"] <= 1e-14 and out["right"] <= 1e-14


def test_diagram_u_random():
    for trial in range(20):
        rng = stream_rng(165, trial)
        n = int(rng.integers(1, 5))
        m = int(rng.integers(1, 5))
        E = rng.standard_normal((n, m)) + 1j * rng.standard_normal((n, m))
        out = seesaw.check_diagram_sp_u(E)
        assert out["left"] <= 1e-11
        assert out["right"] <= 1e-11


def test_diagram_gl_zero_point():
    pt = CotangentPoint(np.zeros((2, 1)), np.zeros((2, 1)))
    out = seesaw.check_diagram_sp_gl(pt)
    assert out["left"] <= 1e-15 and out["right"] <= 1e-15


def test_diagram_gl_identity_point():
    pt = CotangentPoint(np.eye(1), np.eye(1))
    out = seesaw.check_diagram_sp_gl(pt)
    assert out["left"] <= 1e-14 and out["right"] <= 1e-14


def test_diagram_gl_random():
    for trial in range(20):
        rng = stream_rng(166, trial)
        n = int(rng.integers(1, 5))
        m = int(rng.integers(1, n + 1))
        pt = CotangentPoint(rng.standard_normal((n, m)),
                            rng.standard_normal((n, m)))
        out = seesaw.check_diagram_sp_gl(pt)
        assert out["left"] <= 1e-11
        assert out["right"] <= 1e-11


def test_diagram_gl_right_identity_direct():
    # the restricted right momentum is the skew part of P^T Q, which is the
    # right momentum of the stacked realization
    rng = stream_rng(167, 0)
    Q = rng.standard_normal((3, 2))
    P = rng.standard_normal((3, 2))
    stacked = np.vstack([Q, P])
    np.testing.assert_allclose(
        0.5 * (P.T @ Q - Q.T @ P),
        symplectic.momentum_right(stacked), atol=1e-12)


def test_diagram_u_left_pairing_hand_case():
    # E = 3 + 2i: against the generator i both models pair to -13/2
    E = np.array([[3.0 + 2.0j]])
    ju = unitary.momentum_left(E)
    assert abs(np.real(np.trace(ju @ np.array([[1j]]))) + 6.5) <= 1e-13
    jsp = symplectic.momentum_left(seesaw.complex_to_real(E))
    emb = seesaw.embed_u_to_sp(np.array([[1j]]))
    assert abs(np.trace(jsp @ emb) + 6.5) <= 1e-13


def test_diagram_u_right_restriction_direct():
    rng = stream_rng(168, 0)
    E = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
    lhs = seesaw.restrict_u_to_o(unitary.momentum_right(E))
    rhs = symplectic.momentum_right(seesaw.complex_to_real(E))
    np.testing.assert_allclose(lhs, rhs, atol=1e-12)
