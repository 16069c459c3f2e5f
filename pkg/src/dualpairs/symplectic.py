"""The commuting Sp(2n,R) x O(m) actions on rank-m real 2n x m matrices.

Momentum maps for the form Tr(E^T J F):

    left  E -> -1/2 E E^T J    in sp(2n,R),
    right E -> -1/2 E^T J E    in o(m).

The module also provides the constructive isometry-extension solver for
the symplectic form (the engine behind the left witness), an SVD-like
factorization E = S D O with S symplectic, O orthogonal and D a sparse
template, and the matched orbit normal forms read off from D.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import (
    DEFAULT_TOL,
    Tolerances,
    isometry_between,
    rank_tol,
    relative_diff,
    skew_canonical,
    standard_J,
)
from .pairs import WitnessReport, require_level_match as _require_level_match


def momentum_left(E: np.ndarray) -> np.ndarray:
    E = np.asarray(E, dtype=float)
    J = standard_J(E.shape[0] // 2)
    return -0.5 * (E @ E.T @ J)


def momentum_right(E: np.ndarray) -> np.ndarray:
    E = np.asarray(E, dtype=float)
    J = standard_J(E.shape[0] // 2)
    return -0.5 * (E.T @ J @ E)


@dataclass(frozen=True)
class SpOrbitInvariants:
    """Orbit label (p, sigma_1 >= ... >= sigma_p > 0, q, r) plus dims.

    p counts coupled column pairs, q = m - 2p is forced by the rank
    condition and r = n - m + p is the ambient slack; both must be
    nonnegative.
    """

    p: int
    sigmas: tuple
    q: int
    r: int
    n: int
    m: int

    def __post_init__(self):
        if len(self.sigmas) != self.p:
            raise ValueError("sigma count must equal p")
        if any(s <= 0 for s in self.sigmas):
            raise ValueError("sigmas must be strictly positive")
        if list(self.sigmas) != sorted(self.sigmas, reverse=True):
            raise ValueError("sigmas must be sorted descending")
        if self.q != self.m - 2 * self.p or self.q < 0:
            raise ValueError("q must equal m - 2p >= 0")
        if self.r != self.n - self.m + self.p or self.r < 0:
            raise ValueError("r must equal n - m + p >= 0")

    def to_obj(self) -> dict:
        return {
            "p": self.p,
            "sigmas": [float(s) for s in self.sigmas],
            "q": self.q,
            "r": self.r,
        }


def build_template(inv: SpOrbitInvariants) -> np.ndarray:
    """The sparse 2n x m factor D determined by the invariants.

    Columns split (p | q | p); rows split (p | q | r | p | q | r).  The
    first p columns carry sigma_i at the top, the next q are standard
    basis columns, the last p carry sigma_i in the lower half.
    """
    p, q, n, m = inv.p, inv.q, inv.n, inv.m
    D = np.zeros((2 * n, m))
    for i, s in enumerate(inv.sigmas):
        D[i, i] = s
        D[n + i, p + q + i] = s
    for j in range(q):
        D[p + j, p + j] = 1.0
    return D


# ---------------------------------------------------------------------------
# constructive isometry extension for the symplectic form

def _sym_gs(G0: np.ndarray, rad_tol: float):
    """Symplectic Gram-Schmidt on an abstract Gram matrix.

    Returns (T, pairs, radical): T is the change of coordinates such
    that in the transformed family the listed (i, j) positions satisfy
    omega(col_i, col_j) = 1 and couple to nothing else, and the radical
    positions couple to nothing at all (below rad_tol).
    """
    k = G0.shape[0]
    T = np.eye(k)
    free = list(range(k))
    pairs = []
    while True:
        G = T.T @ G0 @ T
        best_ij = None
        best = rad_tol
        for ai, i in enumerate(free):
            for j in free[ai + 1:]:
                if abs(G[i, j]) > best:
                    best = abs(G[i, j])
                    best_ij = (i, j)
        if best_ij is None:
            break
        i, j = best_ij
        T[:, j] = T[:, j] / G[i, j]
        G = T.T @ G0 @ T
        for u in free:
            if u == i or u == j:
                continue
            T[:, u] = T[:, u] - G[u, j] * T[:, i] + G[u, i] * T[:, j]
        pairs.append((i, j))
        free.remove(i)
        free.remove(j)
    return T, pairs, free


def _radical_partner(L: np.ndarray, J: np.ndarray, row: int) -> np.ndarray:
    """Minimum-norm p with omega(L_col, p) = delta(col, row)."""
    A = L.T @ J
    c = np.zeros(A.shape[0])
    c[row] = 1.0
    p, *_ = np.linalg.lstsq(A, c, rcond=None)
    return p


def _complete_darboux(L_pairs: list, J: np.ndarray):
    """Darboux pairs spanning the omega-complement of an existing family.

    L_pairs lists the current Darboux family as (a, b) tuples with
    omega(a, b) = 1.  Candidate directions come from standard basis
    vectors scanned in index order, pushed into the complement with the
    symplectic projector, and kept while linearly independent; the
    collected set is then organized into pairs by Gram-Schmidt for the
    restricted form.
    """
    dim = J.shape[0]
    kept = []
    kept_orth = []  # Euclidean orthonormal shadow for independence tests
    for idx in range(dim):
        if 2 * len(L_pairs) + len(kept) >= dim:
            break
        u = np.zeros(dim)
        u[idx] = 1.0
        for a, b in L_pairs:
            u = u - (u @ J @ b) * a + (u @ J @ a) * b
        v = u.copy()
        for w in kept_orth:
            v = v - (w @ v) * w
        nv = np.linalg.norm(v)
        if nv > 1e-8:
            kept.append(u)
            kept_orth.append(v / nv)
    need = dim - 2 * len(L_pairs)
    if len(kept) != need:
        raise ValueError("failed to span the symplectic complement")
    if need == 0:
        return []
    C = np.column_stack(kept)
    G = C.T @ J @ C
    T, pairs, radical = _sym_gs(G, rad_tol=1e-10 * max(1.0, float(np.abs(G).max())))
    if radical:
        raise ValueError("degenerate restricted form on the complement")
    CT = C @ T
    return [(CT[:, i], CT[:, j]) for i, j in pairs]


def witt_extend(basis_src, basis_dst, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Symplectic matrix S with S @ src_i = dst_i for two matched families.

    Both families must be linearly independent and have equal pairwise
    symplectic products.  The classical extension theorem guarantees S
    exists; this builds one deterministically:

    1. run Gram-Schmidt for the symplectic form on the source Gram,
       applying the same column transform to both families,
    2. adjoin a partner vector to every radical direction (a
       minimum-norm solve keeps it clear of everything processed),
    3. complete each side to a full Darboux basis and map one onto the
       other.
    """
    V = np.column_stack([np.asarray(v, dtype=float) for v in basis_src]) \
        if not isinstance(basis_src, np.ndarray) else np.asarray(basis_src, dtype=float)
    W = np.column_stack([np.asarray(v, dtype=float) for v in basis_dst]) \
        if not isinstance(basis_dst, np.ndarray) else np.asarray(basis_dst, dtype=float)
    if V.shape != W.shape:
        raise ValueError("source and destination families differ in shape")
    dim, k = V.shape
    if dim % 2 != 0:
        raise ValueError("ambient dimension must be even")
    if k > dim:
        raise ValueError("too many vectors")
    J = standard_J(dim // 2)
    if k > 0:
        if rank_tol(V, tol) < k or rank_tol(W, tol) < k:
            raise ValueError("input families must be linearly independent")
        Gv = V.T @ J @ V
        Gw = W.T @ J @ W
        scale = max(1.0, float(np.abs(Gv).max()))
        if np.abs(Gv - Gw).max() > max(tol.eq_tol, 1e-8) * scale:
            raise ValueError("pairwise symplectic products do not match")
    else:
        return np.eye(dim)

    scale = max(1.0, float(np.abs(Gv).max()))
    T, gs_pairs, radical = _sym_gs(Gv, rad_tol=1e-9 * scale)
    VT = V @ T
    WT = W @ T

    def build_side(M):
        pairs = [(M[:, i], M[:, j]) for i, j in gs_pairs]
        cols = [M[:, t] for t in range(k)]
        for rpos in radical:
            L = np.column_stack(cols)
            p = _radical_partner(L, J, rpos)
            pairs.append((M[:, rpos], p))
            cols.append(p)
        pairs = pairs + _complete_darboux(pairs, J)
        B = np.empty((dim, dim))
        for t, (a, b) in enumerate(pairs):
            B[:, 2 * t] = a
            B[:, 2 * t + 1] = b
        return B

    BV = build_side(VT)
    BW = build_side(WT)
    return BW @ np.linalg.inv(BV)


# ---------------------------------------------------------------------------
# witnesses and the template factorization

def _require_rank_m(E, tol, who):
    if rank_tol(E, tol) != E.shape[1]:
        raise ValueError(f"{who} requires full column rank")


def witness_left(E: np.ndarray, E_prime: np.ndarray,
                 tol: Tolerances = DEFAULT_TOL) -> WitnessReport:
    """S in Sp(2n,R) with S E close to E_prime, given equal right momenta.

    Equal right momenta mean the two column families have equal
    pairwise symplectic products, so the extension solver applies
    directly (full column rank keeps the families independent).
    """
    E = np.asarray(E, dtype=float)
    E_prime = np.asarray(E_prime, dtype=float)
    _require_rank_m(E, tol, "witness_left")
    _require_rank_m(E_prime, tol, "witness_left")
    _require_level_match(momentum_right(E), momentum_right(E_prime), tol, "right")
    S = witt_extend(E, E_prime, tol)
    return WitnessReport(S, relative_diff(S @ E, E_prime), "left")


def witness_right(E: np.ndarray, E_prime: np.ndarray,
                  tol: Tolerances = DEFAULT_TOL) -> WitnessReport:
    """O in O(m) with E O^T close to E_prime, given equal left momenta.

    Equal left momenta force E E^T = E_prime E_prime^T, i.e. the rows of
    the two matrices have equal Euclidean Gram matrices; the orthogonal
    map matching rows is built by isometry extension.  The returned O
    satisfies E_prime = E @ O.T (O.T is the acting right group element).
    """
    E = np.asarray(E, dtype=float)
    E_prime = np.asarray(E_prime, dtype=float)
    _require_rank_m(E, tol, "witness_right")
    _require_rank_m(E_prime, tol, "witness_right")
    _require_level_match(momentum_left(E), momentum_left(E_prime), tol, "left")
    O = isometry_between(E.T, E_prime.T, tol)
    return WitnessReport(O, relative_diff(E @ O.T, E_prime), "right")


def symplectic_svd(E: np.ndarray, tol: Tolerances = DEFAULT_TOL):
    """Factor a rank-m matrix as E = S D O, SVD-like for the form J.

    S is symplectic, O orthogonal, and D the sparse template of
    ``build_template``; the sigma values in D are the symplectic
    singular values of E.  Algorithm: put the right momentum into skew
    canonical form to get O and the sigmas, then extend the column
    correspondence D -> E O^T to a symplectic matrix (both families
    have identical pairwise products by construction).

    Returns (S, D, O, invariants).
    """
    E = np.asarray(E, dtype=float)
    two_n, m = E.shape
    n = two_n // 2
    _require_rank_m(E, tol, "symplectic_svd")
    xi = momentum_right(E)
    O0, a_vals = skew_canonical(xi, tol)
    # xi is quadratic in E, so its noise floor sits at eps * |E|^2; pairs
    # below that are roundoff from an isotropic plane, not structure.
    # skew_canonical alone cannot see this (it only knows |xi|), and the
    # dropped pairs sit at the tail of its descending order, so trimming
    # them turns their rows into kernel rows without reshuffling O0.
    smax = float(np.linalg.norm(E, 2))
    floor = tol.rank_tol_factor * m * np.finfo(float).eps * smax * smax
    a_vals = [a for a in a_vals if a > floor]
    p = len(a_vals)
    q = m - 2 * p
    r = n - m + p
    if q < 0 or r < 0:
        raise ValueError("rank condition violated: inconsistent invariants")
    sigmas = tuple(float(np.sqrt(2.0 * a)) for a in a_vals)
    inv = SpOrbitInvariants(p, sigmas, q, r, n, m)

    # reorder the canonical-form rows so the conjugated momentum matches
    # the template's block layout: pair (2a, 2a+1) goes to rows (p+q+a, a),
    # kernel rows fill the middle block
    src = np.empty(m, dtype=int)
    for a in range(p):
        src[a] = 2 * a + 1
        src[p + q + a] = 2 * a
    for b in range(q):
        src[p + b] = 2 * p + b
    Pi = np.zeros((m, m))
    for i in range(m):
        Pi[i, src[i]] = 1.0
    O = Pi @ O0

    D = build_template(inv)
    S = witt_extend(D, E @ O.T, tol)
    recon = relative_diff(S @ D @ O, E)
    if recon > 1e-6:
        raise ValueError(f"factorization failed to reconstruct (residual {recon:.3e})")
    return S, D, O, inv


# ---------------------------------------------------------------------------
# orbit normal forms

def normal_form_left(inv: SpOrbitInvariants) -> np.ndarray:
    """Canonical sp(2n,R) momentum value for the invariants.

    Block pattern on the (p|q|r|p|q|r) partition: -sigma_i^2/2 at
    (i, n+i), +sigma_i^2/2 at (n+i, i), the q nilpotent cells -1/2 at
    (p+j, n+p+j), zeros elsewhere.  Computed as the left momentum of the
    template so equality with momenta of template-built points is exact.
    """
    return momentum_left(build_template(inv))


def normal_form_right(inv: SpOrbitInvariants) -> np.ndarray:
    """Canonical o(m) momentum value: -sigma_i^2/2 coupling cells at
    (i, p+q+i), the mirrored positive cells below, and a q x q zero
    block in the middle of the partition (p|q|p)."""
    return momentum_right(build_template(inv))


def correspond(inv: SpOrbitInvariants):
    """The matched pair of canonical momentum values."""
    return normal_form_left(inv), normal_form_right(inv)
