"""Algebra embeddings linking the three pairs, with diagram checks.

u(n) and gl(n,R) sit inside sp(2n,R) through

    zeta1 + i zeta2  ->  [[zeta1, -zeta2], [zeta2, zeta1]],
    zeta             ->  [[zeta, 0], [0, -zeta^T]],

matching the identification of a complex n x m matrix E1 + i E2 with
the real stack [E1; E2] (and of a pair (Q, P) with [Q; P]).  Dually,
o(m) sits inside u(m) and gl(m,R), and under the trace-form
identifications the restriction maps are the real part and the skew
part.  The two check functions evaluate both legs of the resulting
momentum-map diagrams and report residuals.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import DEFAULT_TOL, Tolerances, trace_pairing
from .pairs import algebra_basis
from . import general_linear, symplectic, unitary


def _require_anti_hermitian(zeta: np.ndarray, name: str):
    err = float(np.linalg.norm(zeta + np.conj(zeta).T))
    if err > 1e-10 * max(1.0, float(np.linalg.norm(zeta))):
        raise ValueError(f"{name} must be anti-Hermitian (residual {err:.3e})")


def embed_u_to_sp(zeta: np.ndarray) -> np.ndarray:
    """Real 2n x 2n image of an anti-Hermitian matrix; a Lie-algebra
    morphism into sp(2n,R)."""
    zeta = np.asarray(zeta, dtype=complex)
    _require_anti_hermitian(zeta, "embed_u_to_sp input")
    z1, z2 = np.real(zeta), np.imag(zeta)
    return np.block([[z1, -z2], [z2, z1]])


def embed_gl_to_sp(zeta: np.ndarray) -> np.ndarray:
    """Block-diagonal image [[zeta, 0], [0, -zeta^T]] in sp(2n,R)."""
    zeta = np.asarray(zeta, dtype=float)
    if zeta.ndim != 2 or zeta.shape[0] != zeta.shape[1]:
        raise ValueError("expected a square real matrix")
    n = zeta.shape[0]
    out = np.zeros((2 * n, 2 * n))
    out[:n, :n] = zeta
    out[n:, n:] = -zeta.T
    return out


@dataclass(frozen=True)
class EmbeddingTag:
    """Which embedding to apply; kind is 'u_to_sp' or 'gl_to_sp'."""

    kind: str
    n: int

    def __post_init__(self):
        if self.kind not in ("u_to_sp", "gl_to_sp"):
            raise ValueError("kind must be 'u_to_sp' or 'gl_to_sp'")
        if self.n < 1:
            raise ValueError("n must be at least 1")

    def apply(self, zeta: np.ndarray) -> np.ndarray:
        fn = embed_u_to_sp if self.kind == "u_to_sp" else embed_gl_to_sp
        return fn(zeta)


def complex_to_real(E: np.ndarray) -> np.ndarray:
    """Stack [Re E; Im E]; a symplectomorphism onto the real model."""
    E = np.asarray(E, dtype=complex)
    return np.vstack([np.real(E), np.imag(E)])


def _check_adjoint_relation(out: np.ndarray, mu: np.ndarray):
    # the restriction is correct iff it pairs like the original against
    # every real skew matrix; verified rather than trusted
    m = out.shape[0]
    worst = 0.0
    for eta in algebra_basis("o", m):
        worst = max(worst, abs(trace_pairing(out, eta) - trace_pairing(mu, eta)))
    scale = max(1.0, float(np.linalg.norm(mu)))
    if worst > 1e-12 * scale:
        raise ValueError(f"restriction failed its pairing contract ({worst:.3e})")


def restrict_u_to_o(mu: np.ndarray, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Real part of an anti-Hermitian matrix, the dual of o(m) in u(m)."""
    mu = np.asarray(mu, dtype=complex)
    _require_anti_hermitian(mu, "restrict_u_to_o input")
    out = np.real(mu).copy()
    _check_adjoint_relation(out, mu)
    return out


def restrict_gl_to_o(xi: np.ndarray, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Skew part (xi - xi^T)/2, the dual of o(m) in gl(m,R)."""
    xi = np.asarray(xi, dtype=float)
    if xi.ndim != 2 or xi.shape[0] != xi.shape[1]:
        raise ValueError("expected a square real matrix")
    out = 0.5 * (xi - xi.T)
    _check_adjoint_relation(out, xi)
    return out


def check_diagram_sp_u(E: np.ndarray, tol: Tolerances = DEFAULT_TOL) -> dict:
    """Residuals of the two momentum identities tying the complex and
    real models of a point.

    left: the sp momentum of the stacked point pairs with embedded
    algebra elements exactly like the complex momentum pairs with the
    originals; right: restricting the complex right momentum gives the
    real right momentum on the nose.
    """
    E = np.asarray(E, dtype=complex)
    n = E.shape[0]
    Er = complex_to_real(E)
    j_sp = symplectic.momentum_left(Er)
    j_u = unitary.momentum_left(E)
    left = 0.0
    for b in algebra_basis("u", n):
        left = max(left, abs(trace_pairing(j_sp, embed_u_to_sp(b))
                             - trace_pairing(j_u, b)))
    right = float(np.linalg.norm(
        restrict_u_to_o(unitary.momentum_right(E), tol)
        - symplectic.momentum_right(Er)))
    return {"left": left, "right": right}


def check_diagram_sp_gl(pt, tol: Tolerances = DEFAULT_TOL) -> dict:
    """Same two residuals for a (Q, P) point stacked into [Q; P]."""
    Q = np.asarray(pt.Q, dtype=float)
    P = np.asarray(pt.P, dtype=float)
    n = Q.shape[0]
    Er = np.vstack([Q, P])
    j_sp = symplectic.momentum_left(Er)
    j_gl = general_linear.momentum_left(pt)
    left = 0.0
    for b in algebra_basis("gl", n):
        left = max(left, abs(trace_pairing(j_sp, embed_gl_to_sp(b))
                             - trace_pairing(j_gl, b)))
    right = float(np.linalg.norm(
        restrict_gl_to_o(general_linear.momentum_right(pt), tol)
        - symplectic.momentum_right(Er)))
    return {"left": left, "right": right}
