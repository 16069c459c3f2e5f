"""Pair-agnostic layer: instances, momentum dispatch and structure checks.

A DualPairInstance bundles one of the three supported commuting-action
geometries with a concrete manifold point:

* ``unitary``        complex n x m matrices, groups U(n) and U(m)
* ``symplectic``     real 2n x m matrices of rank m, groups Sp(2n,R), O(m)
* ``general_linear`` pairs (Q, P) of real rank-m n x m matrices,
                     groups GL(n,R) acting on the left, GL(m,R) on the right

The checks in this module exercise the general theory: equivariance of
the momentum maps, invariance of each level set under the opposite
group, the pairing identity tying the ambient symplectic form to the
algebra bracket, and the orbit-dimension bookkeeping behind the duality.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

import numpy as np

from .linalg import (
    DEFAULT_TOL,
    Tolerances,
    omega_complex,
    omega_real,
    rank_tol,
    standard_J,
    trace_pairing,
)

PAIR_IDS = ("unitary", "symplectic", "general_linear")


@dataclass(frozen=True)
class MomentumValue:
    """A Lie-algebra-valued momentum, tagged with side and algebra."""

    side: str
    algebra: str  # "u", "o", "sp" or "gl"
    value: np.ndarray

    def identity_residual(self) -> float:
        """Distance of the value from its algebra's defining identity."""
        v = self.value
        scale = max(1.0, float(np.linalg.norm(v)))
        if self.algebra == "u":
            return float(np.linalg.norm(v + np.conj(v).T)) / scale
        if self.algebra == "o":
            return float(np.linalg.norm(v + v.T)) / scale
        if self.algebra == "sp":
            J = standard_J(v.shape[0] // 2)
            return float(np.linalg.norm(v.T @ J + J @ v)) / scale
        if self.algebra == "gl":
            return 0.0
        raise ValueError(f"unknown algebra tag {self.algebra!r}")


class LevelMismatchError(ValueError):
    """Two points expected on one momentum level set are not on it."""


def require_level_match(ja, jb, tol, what: str):
    """Raise LevelMismatchError unless the two momentum values agree."""
    scale = max(1.0, float(np.linalg.norm(ja)), float(np.linalg.norm(jb)))
    err = float(np.linalg.norm(ja - jb))
    if err > max(tol.eq_tol, 1e-8) * scale:
        raise LevelMismatchError(
            f"{what} momenta differ (residual {err / scale:.3e}); "
            "the points are not on a common level set"
        )


@dataclass(frozen=True)
class WitnessReport:
    """A group element mapping one level-set point to another.

    residual is ||g.x - x'|| / max(1, ||x'||) in the Frobenius norm of
    the point container; cond carries the condition number of the linear
    solve behind the witness when one is involved (general linear pair).
    """

    witness: np.ndarray
    residual: float
    side: str
    cond: float | None = None


@dataclass(frozen=True)
class DualPairInstance:
    pair_id: str
    n: int
    m: int
    point: Any
    tol: Tolerances = field(default=DEFAULT_TOL, compare=False)

    def __post_init__(self):
        if self.pair_id not in PAIR_IDS:
            raise ValueError(f"unknown pair id {self.pair_id!r}")
        n, m = self.n, self.m
        if self.pair_id == "unitary":
            E = np.asarray(self.point)
            if E.shape != (n, m):
                raise ValueError(f"point shape {E.shape} does not match ({n},{m})")
            object.__setattr__(self, "point", E.astype(complex))
        elif self.pair_id == "symplectic":
            E = np.asarray(self.point, dtype=float)
            if E.shape != (2 * n, m):
                raise ValueError(f"point shape {E.shape} does not match ({2 * n},{m})")
            if m > 2 * n:
                raise ValueError("m must be at most 2n")
            if rank_tol(E, self.tol) != m:
                raise ValueError("symplectic pair points must have rank m")
            object.__setattr__(self, "point", E)
        else:
            pt = self.point
            if not (hasattr(pt, "Q") and hasattr(pt, "P")):
                raise ValueError("general_linear point must carry Q and P")
            if pt.Q.shape != (n, m) or pt.P.shape != (n, m):
                raise ValueError("Q and P must both be n x m")
            if m > n:
                raise ValueError("m must be at most n")

    def ambient_dim(self) -> int:
        """Real dimension of the underlying symplectic vector space."""
        return 2 * self.n * self.m

    def full_rank(self) -> bool:
        if self.pair_id == "unitary":
            return rank_tol(self.point, self.tol) == min(self.n, self.m)
        if self.pair_id == "symplectic":
            return rank_tol(self.point, self.tol) == self.m
        return (
            rank_tol(self.point.Q, self.tol) == self.m
            and rank_tol(self.point.P, self.tol) == self.m
        )


# ---------------------------------------------------------------------------
# algebra bases

def _unit(n, i, j, dtype=float):
    M = np.zeros((n, n), dtype=dtype)
    M[i, j] = 1
    return M


def algebra_basis(algebra: str, size: int) -> list[np.ndarray]:
    """Fixed enumerated basis of u(n), o(m), sp(2n,R) or gl(n,R).

    Orderings are part of the contract (orbit-dimension computations and
    oracle solves must be reproducible):

    * u(n): i E_kk for k ascending, then for each k < l the pair
      E_kl - E_lk, i(E_kl + E_lk)
    * o(m): E_kl - E_lk for k < l, row-major
    * sp(2n): [[A,0],[0,-A^T]] over all unit A, then [[0,B],[0,0]] over
      the symmetric basis, then [[0,0],[C,0]] likewise
    * gl(n): unit matrices E_ij row-major
    """
    out: list[np.ndarray] = []
    if algebra == "u":
        n = size
        for k in range(n):
            out.append(1j * _unit(n, k, k, complex))
        for k in range(n):
            for l in range(k + 1, n):
                out.append(_unit(n, k, l, complex) - _unit(n, l, k, complex))
                out.append(1j * (_unit(n, k, l, complex) + _unit(n, l, k, complex)))
        return out
    if algebra == "o":
        m = size
        for k in range(m):
            for l in range(k + 1, m):
                out.append(_unit(m, k, l) - _unit(m, l, k))
        return out
    if algebra == "sp":
        if size % 2 != 0:
            raise ValueError("sp size must be even")
        n = size // 2
        for i in range(n):
            for j in range(n):
                M = np.zeros((size, size))
                M[i, j] = 1
                M[n + j, n + i] = -1
                out.append(M)
        for i in range(n):
            for j in range(i, n):
                M = np.zeros((size, size))
                M[i, n + j] = 1
                M[j, n + i] = 1
                out.append(M)
        for i in range(n):
            for j in range(i, n):
                M = np.zeros((size, size))
                M[n + i, j] = 1
                M[n + j, i] = 1
                out.append(M)
        return out
    if algebra == "gl":
        n = size
        for i in range(n):
            for j in range(n):
                out.append(_unit(n, i, j))
        return out
    raise ValueError(f"unknown algebra tag {algebra!r}")


def bracket(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a @ b - b @ a


def algebra_tag(pair_id: str, side: str) -> str:
    tags = {
        "unitary": ("u", "u"),
        "symplectic": ("sp", "o"),
        "general_linear": ("gl", "gl"),
    }
    left, right = tags[pair_id]
    return left if side == "left" else right


def algebra_size(inst: DualPairInstance, side: str) -> int:
    if side == "left":
        return 2 * inst.n if inst.pair_id == "symplectic" else inst.n
    return inst.m


# ---------------------------------------------------------------------------
# dispatch

def momentum(inst: DualPairInstance, side: str) -> MomentumValue:
    """The Lie-algebra-valued momentum map of the requested side."""
    from . import general_linear, symplectic, unitary

    if side not in ("left", "right"):
        raise ValueError("side must be 'left' or 'right'")
    mod = {
        "unitary": unitary,
        "symplectic": symplectic,
        "general_linear": general_linear,
    }[inst.pair_id]
    fn = mod.momentum_left if side == "left" else mod.momentum_right
    return MomentumValue(side, algebra_tag(inst.pair_id, side), fn(inst.point))


def act(inst: DualPairInstance, side: str, g: np.ndarray) -> DualPairInstance:
    """Apply a group element on the given side, returning a new instance."""
    from . import general_linear

    g = np.asarray(g)
    size = algebra_size(inst, side)
    if g.shape != (size, size):
        raise ValueError(f"group element shape {g.shape}, expected ({size},{size})")
    if inst.pair_id == "general_linear":
        if side == "left":
            pt = general_linear.act_left(g, inst.point)
        else:
            pt = general_linear.act_right(inst.point, g)
        return DualPairInstance(inst.pair_id, inst.n, inst.m, pt, inst.tol)
    _check_group_membership(inst.pair_id, side, g)
    point = g @ inst.point if side == "left" else inst.point @ g
    return DualPairInstance(inst.pair_id, inst.n, inst.m, point, inst.tol)


def _check_group_membership(pair_id: str, side: str, g: np.ndarray):
    k = g.shape[0]
    if pair_id == "unitary":
        err = np.linalg.norm(np.conj(g).T @ g - np.eye(k))
    elif side == "left":  # Sp(2n, R)
        J = standard_J(k // 2)
        err = np.linalg.norm(g.T @ J @ g - J)
    else:  # O(m)
        err = np.linalg.norm(g.T @ g - np.eye(k))
    if err > 1e-6 * max(1.0, float(np.linalg.norm(g))):
        raise ValueError("matrix is not in the expected group")


def infinitesimal_action(inst: DualPairInstance, side: str, xi: np.ndarray):
    """Tangent vector of the one-parameter flow of xi through the point.

    Left actions differentiate to xi.x; right actions to x.xi.  For the
    cotangent-lift actions of the general linear pair the momentum
    conventions give (xi Q, -xi^T P) on the left and (Q xi, -P xi^T) on
    the right.
    """
    if inst.pair_id == "general_linear":
        Q, P = inst.point.Q, inst.point.P
        if side == "left":
            return (xi @ Q, -xi.T @ P)
        return (Q @ xi, -P @ xi.T)
    if side == "left":
        return xi @ inst.point
    return inst.point @ xi


def tangent_omega(inst: DualPairInstance, t1, t2) -> float:
    """Ambient symplectic form evaluated on two tangent vectors."""
    if inst.pair_id == "unitary":
        return omega_complex(t1, t2)
    if inst.pair_id == "symplectic":
        return omega_real(t1, t2)
    return omega_real(np.vstack(t1), np.vstack(t2))


def _vectorize_tangent(inst: DualPairInstance, t) -> np.ndarray:
    if inst.pair_id == "unitary":
        return np.concatenate([np.real(t).ravel(), np.imag(t).ravel()])
    if inst.pair_id == "symplectic":
        return np.asarray(t, dtype=float).ravel()
    return np.concatenate([t[0].ravel(), t[1].ravel()])


# ---------------------------------------------------------------------------
# structural checks

def check_equivariance(inst: DualPairInstance, side: str, g: np.ndarray,
                       tol: Tolerances = DEFAULT_TOL) -> float:
    """Relative defect of j(g.x) against conjugation of j(x) by g.

    The left momentum transforms as g j g^-1, the right one as
    g^-1 j g; both follow from the trace-form identification of the
    coadjoint action with matrix conjugation.
    """
    j_before = momentum(inst, side).value
    j_after = momentum(act(inst, side, g), side).value
    if side == "left":
        # g j g^-1, computed as the solution of X g = g j
        expected = np.linalg.solve(g.T, (g @ j_before).T).T
    else:
        expected = np.linalg.solve(g, j_before @ g)
    return float(np.linalg.norm(j_after - expected) / max(1.0, np.linalg.norm(expected)))


def check_level_invariance(inst: DualPairInstance, side: str, g_opposite: np.ndarray,
                           tol: Tolerances = DEFAULT_TOL) -> float:
    """Relative change of j_side under the opposite group's action."""
    other = "right" if side == "left" else "left"
    j_before = momentum(inst, side).value
    j_after = momentum(act(inst, other, g_opposite), side).value
    return float(np.linalg.norm(j_after - j_before) / max(1.0, np.linalg.norm(j_before)))


def check_pairing_identity(inst: DualPairInstance, xi: np.ndarray, zeta: np.ndarray,
                           side: str, tol: Tolerances = DEFAULT_TOL) -> float:
    """|Omega(xi.x, zeta.x) - eps <<j(x), [xi, zeta]>>|, eps = +/-1.

    The sign is +1 for the left action and -1 for the right action; the
    right-hand side is the Kostant pairing of the momentum value with
    the bracket, written through the trace form.
    """
    t1 = infinitesimal_action(inst, side, xi)
    t2 = infinitesimal_action(inst, side, zeta)
    lhs = tangent_omega(inst, t1, t2)
    eps = 1.0 if side == "left" else -1.0
    rhs = eps * trace_pairing(momentum(inst, side).value, bracket(xi, zeta))
    return abs(lhs - rhs)


def check_lie_weinstein(inst: DualPairInstance, tol: Tolerances = DEFAULT_TOL) -> dict:
    """Orbit-dimension bookkeeping at a full-rank point.

    Returns dim of both group orbits through the point, the ambient
    dimension (the three must satisfy dim_left + dim_right = ambient),
    and the largest symplectic product between tangent directions of
    the two orbits, which must vanish since each momentum map is
    constant along the other group's orbits.
    """
    if not inst.full_rank():
        raise ValueError("orbit-dimension check requires a full-rank point")
    tangents = {}
    for side in ("left", "right"):
        basis = algebra_basis(algebra_tag(inst.pair_id, side), algebra_size(inst, side))
        tangents[side] = [infinitesimal_action(inst, side, b) for b in basis]
    dims = {}
    for side in ("left", "right"):
        if not tangents[side]:
            # zero-dimensional algebra (orthogonal side at m = 1)
            dims[side] = 0
            continue
        cols = np.column_stack([_vectorize_tangent(inst, t) for t in tangents[side]])
        dims[side] = rank_tol(cols, tol)
    cross = 0.0
    for t1 in tangents["left"]:
        for t2 in tangents["right"]:
            cross = max(cross, abs(tangent_omega(inst, t1, t2)))
    return {
        "dim_left_orbit": dims["left"],
        "dim_right_orbit": dims["right"],
        "ambient_dim": inst.ambient_dim(),
        "cross_omega_residual": cross,
    }


def orbit_correspondence(inst: DualPairInstance):
    """Matched canonical orbit labels for both momenta.

    unitary          both labels are the singular-value multiset, padded
                     with zeros to the side's matrix size
    symplectic       both labels carry (p, sigma_1..sigma_p); the shared
                     invariants object is returned for each side
    general_linear   both labels carry the Jordan data of the left
                     momentum (the right canonical form is determined by
                     dropping one from each nilpotent block size)
    """
    from . import general_linear, symplectic

    if inst.pair_id == "unitary":
        s = np.linalg.svd(inst.point, compute_uv=False)
        left = np.concatenate([s, np.zeros(inst.n - len(s))])
        right = np.concatenate([s, np.zeros(inst.m - len(s))])
        return left, right
    if inst.pair_id == "symplectic":
        _, _, _, inv = symplectic.symplectic_svd(inst.point, tol=inst.tol)
        return inv, inv
    zeta = general_linear.momentum_left(inst.point)
    jd = general_linear.jordan_structure(zeta, side="left")
    return jd, jd
