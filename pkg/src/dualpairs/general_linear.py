"""The commuting GL(n,R) x GL(m,R) actions on pairs (Q, P) of n x m
matrices, with momentum maps

    left  (Q, P) -> Q P^T    in gl(n,R),
    right (Q, P) -> P^T Q    in gl(m,R)

for the pairing <a, b> = Tr(a b).  A acts on the left by
(A Q, A^-T P), B on the right by (Q B, P B^-T); both leave the opposite
momentum fixed.

The orbit bookkeeping is by real Jordan type: an orbit of full-rank
pairs is labelled by nonzero eigenvalue blocks (lambda, c) together
with nilpotent sizes d >= 2, subject to sum c + sum (d - 1) = m and at
most n - m nilpotent blocks.  ``build_qp_from_jordan`` realizes a label
as a sparse (Q, P), ``jordan_structure`` recovers the label from either
momentum value, and ``jordan_correspond`` emits the matched pair of
canonical values.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import DEFAULT_TOL, Tolerances, rank_tol, relative_diff
from .pairs import WitnessReport, require_level_match as _require_level_match


@dataclass(frozen=True)
class CotangentPoint:
    """A configuration-momentum pair of real n x m matrices."""

    Q: np.ndarray
    P: np.ndarray

    def __post_init__(self):
        Q = np.asarray(self.Q, dtype=float)
        P = np.asarray(self.P, dtype=float)
        if Q.ndim != 2 or Q.shape != P.shape:
            raise ValueError("Q and P must be matrices of equal shape")
        object.__setattr__(self, "Q", Q)
        object.__setattr__(self, "P", P)


def act_left(A: np.ndarray, pt: CotangentPoint) -> CotangentPoint:
    A = np.asarray(A, dtype=float)
    return CotangentPoint(A @ pt.Q, np.linalg.solve(A.T, pt.P))


def act_right(pt: CotangentPoint, B: np.ndarray) -> CotangentPoint:
    B = np.asarray(B, dtype=float)
    return CotangentPoint(pt.Q @ B, np.linalg.solve(B, pt.P.T).T)


def momentum_left(pt: CotangentPoint) -> np.ndarray:
    return pt.Q @ pt.P.T


def momentum_right(pt: CotangentPoint) -> np.ndarray:
    return pt.P.T @ pt.Q


# ---------------------------------------------------------------------------
# witnesses

def _require_full_rank(pt: CotangentPoint, tol: Tolerances, who: str):
    m = pt.Q.shape[1]
    if rank_tol(pt.Q, tol) != m or rank_tol(pt.P, tol) != m:
        raise ValueError(f"{who} requires both Q and P of full column rank")


def witness_right(pt: CotangentPoint, pt_prime: CotangentPoint,
                  tol: Tolerances = DEFAULT_TOL) -> WitnessReport:
    """B with (Q B, P B^-T) close to (Q', P'), given equal left momenta.

    B is the least-squares solution of Q B = Q', i.e. the normal
    equation value (Q^T Q)^-1 Q^T Q'.  For genuinely related points B
    is invertible and also transports P; both residuals are reported.
    """
    _require_full_rank(pt, tol, "witness_right")
    _require_full_rank(pt_prime, tol, "witness_right")
    _require_level_match(momentum_left(pt), momentum_left(pt_prime), tol, "left")
    B, *_ = np.linalg.lstsq(pt.Q, pt_prime.Q, rcond=None)
    res_q = relative_diff(pt.Q @ B, pt_prime.Q)
    try:
        res_p = relative_diff(np.linalg.solve(B, pt.P.T).T, pt_prime.P)
    except np.linalg.LinAlgError:
        res_p = np.inf
    return WitnessReport(B, max(res_q, res_p), "right",
                         cond=float(np.linalg.cond(pt.Q)))


def complete_pair(M1: np.ndarray, M2: np.ndarray = None,
                  tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Columns X making [M1 X] (and [M2 X], if given) invertible.

    Candidates are scanned in a fixed order: the standard basis vectors
    by index, then normalized sums e_i + e_j for i < j.  A candidate is
    kept when its residual against each matrix's column span plus the
    kept columns exceeds a fixed threshold.  The second tier makes the
    scan total: whenever two proper subspaces each swallow some basis
    vector, a sum of two basis vectors avoids both.
    """
    M1 = np.asarray(M1, dtype=float)
    n, m = M1.shape
    sides = [M1]
    if M2 is not None:
        M2 = np.asarray(M2, dtype=float)
        if M2.shape != (n, m):
            raise ValueError("the two matrices must have equal shape")
        sides.append(M2)
    bases = []
    for M in sides:
        if rank_tol(M, tol) != m:
            raise ValueError("complete_pair requires full column rank")
        q = np.linalg.qr(M)[0] if m > 0 else np.zeros((n, 0))
        bases.append([q[:, t].copy() for t in range(m)])

    def candidates():
        for i in range(n):
            c = np.zeros(n)
            c[i] = 1.0
            yield c
        for i in range(n):
            for j in range(i + 1, n):
                c = np.zeros(n)
                c[i] = c[j] = np.sqrt(0.5)
                yield c

    kept = []
    while len(kept) < n - m:
        for c in candidates():
            ok = True
            shadows = []
            for base in bases:
                v = c.copy()
                for _ in range(2):
                    for w in base:
                        v = v - (w @ v) * w
                nv = np.linalg.norm(v)
                if nv <= 1e-8:
                    ok = False
                    break
                shadows.append(v / nv)
            if ok:
                kept.append(c)
                for base, v in zip(bases, shadows):
                    base.append(v)
                break
        else:
            raise ValueError("failed to complete to an invertible matrix")
    return np.column_stack(kept) if kept else np.zeros((n, 0))


def witness_left(pt: CotangentPoint, pt_prime: CotangentPoint,
                 tol: Tolerances = DEFAULT_TOL) -> WitnessReport:
    """A with (A Q, A^-T P) close to (Q', P'), given equal right momenta.

    Construction: pick one completion Y valid for both P and P', so
    C^T = [P Y][P' Y]^-1 satisfies C^T P' = P and fixes Y.  Any X
    completing both Q and C^-1 Q' then yields A = [Q' CX][Q X]^-1,
    which maps Q to Q' and, because P'^T C X = P^T X, transports P as
    well.  The report's cond field is the larger condition number of
    the two completed matrices that get inverted.
    """
    _require_full_rank(pt, tol, "witness_left")
    _require_full_rank(pt_prime, tol, "witness_left")
    _require_level_match(momentum_right(pt), momentum_right(pt_prime), tol, "right")
    Q, P = pt.Q, pt.P
    Q2, P2 = pt_prime.Q, pt_prime.P
    Y = complete_pair(P, P2, tol)
    PY = np.column_stack([P, Y]) if Y.size else P
    P2Y = np.column_stack([P2, Y]) if Y.size else P2
    C = (PY @ np.linalg.inv(P2Y)).T
    X = complete_pair(Q, np.linalg.solve(C, Q2), tol)
    QX = np.column_stack([Q, X]) if X.size else Q
    Q2X = np.column_stack([Q2, C @ X]) if X.size else Q2
    A = Q2X @ np.linalg.inv(QX)
    res_q = relative_diff(A @ Q, Q2)
    res_p = relative_diff(np.linalg.solve(A.T, P), P2)
    cond = max(float(np.linalg.cond(QX)), float(np.linalg.cond(P2Y)))
    return WitnessReport(A, max(res_q, res_p), "left", cond=cond)


# ---------------------------------------------------------------------------
# momentum images

def in_image_left(zeta: np.ndarray, m: int, tol: Tolerances = DEFAULT_TOL) -> bool:
    """Whether an n x n value is the left momentum of a full-rank pair:
    the rank must be exactly m."""
    zeta = np.asarray(zeta, dtype=float)
    if zeta.ndim != 2 or zeta.shape[0] != zeta.shape[1]:
        raise ValueError("expected a square matrix")
    if not 0 <= m <= zeta.shape[0]:
        raise ValueError("m out of range")
    return rank_tol(zeta, tol) == m


def in_image_right(xi: np.ndarray, n: int, tol: Tolerances = DEFAULT_TOL) -> bool:
    """Whether an m x m value is the right momentum of a full-rank pair
    with n rows: the rank can drop at most n - m below full."""
    xi = np.asarray(xi, dtype=float)
    if xi.ndim != 2 or xi.shape[0] != xi.shape[1]:
        raise ValueError("expected a square matrix")
    m = xi.shape[0]
    if n < m:
        raise ValueError("ambient row count must be at least m")
    return rank_tol(xi, tol) >= 2 * m - n


# ---------------------------------------------------------------------------
# Jordan-type orbit labels

@dataclass(frozen=True)
class JordanData:
    """Orbit label: eigenvalue blocks plus nilpotent sizes.

    blocks lists (lambda, c) with lambda nonzero, Im lambda >= 0, and c
    the real block size (even when lambda is strictly complex).
    nilpotent lists sizes d >= 2.  Constraints: the column budget
    sum c + sum (d - 1) = m, and at most n - m nilpotent entries.
    Stored sorted (blocks by size descending then by eigenvalue,
    nilpotent descending) so equal labels compare equal.
    """

    blocks: tuple
    nilpotent: tuple
    n: int
    m: int

    def __post_init__(self):
        blocks = tuple(
            (complex(complex(lam).real + 0.0, complex(lam).imag + 0.0), int(c))
            for lam, c in self.blocks
        )
        blocks = tuple(sorted(blocks, key=lambda bc: (-bc[1], bc[0].real, bc[0].imag)))
        nil = tuple(sorted((int(d) for d in self.nilpotent), reverse=True))
        object.__setattr__(self, "blocks", blocks)
        object.__setattr__(self, "nilpotent", nil)
        if not 0 <= self.m <= self.n:
            raise ValueError("need 0 <= m <= n")
        for lam, c in blocks:
            if lam == 0:
                raise ValueError("eigenvalue blocks must be nonzero")
            if lam.imag < 0:
                raise ValueError("use the representative with Im lambda >= 0")
            if lam.imag > 0 and c % 2 != 0:
                raise ValueError("complex eigenvalues need even real size")
            if c < 1:
                raise ValueError("block size must be positive")
        for d in nil:
            if d < 2:
                raise ValueError("nilpotent sizes must be at least 2")
        budget = sum(c for _, c in blocks) + sum(d - 1 for d in nil)
        if budget != self.m:
            raise ValueError(f"block sizes fill {budget} columns, expected {self.m}")
        if len(nil) > self.n - self.m:
            raise ValueError("too many nilpotent blocks for the ambient size")

    def to_obj(self) -> dict:
        return {
            "blocks": [[lam.real, lam.imag, c] for lam, c in self.blocks],
            "nilpotent": list(self.nilpotent),
            "n": self.n,
            "m": self.m,
        }


def _real_jordan_block(lam: complex, c: int) -> np.ndarray:
    """Real Jordan cell: for real lambda the usual upper block; for
    a + bi the 2 x 2 rotation-scaling cells [[a, b], [-b, a]] on the
    diagonal with identity cells above."""
    a, b = lam.real, lam.imag
    B = np.zeros((c, c))
    if b == 0:
        for t in range(c):
            B[t, t] = a
            if t + 1 < c:
                B[t, t + 1] = 1.0
    else:
        s = c // 2
        for t in range(s):
            B[2 * t, 2 * t] = a
            B[2 * t, 2 * t + 1] = b
            B[2 * t + 1, 2 * t] = -b
            B[2 * t + 1, 2 * t + 1] = a
            if t + 1 < s:
                B[2 * t, 2 * t + 2] = 1.0
                B[2 * t + 1, 2 * t + 3] = 1.0
    return B


def build_qp_from_jordan(jd: JordanData) -> CotangentPoint:
    """Sparse full-rank realization of an orbit label.

    Q stacks the real Jordan cells, then for each nilpotent size d a
    d x (d-1) identity-on-top column group, then zero rows; P stacks
    identities, identity-on-bottom groups and zero rows.  The momenta
    come out block diagonal: Q P^T has the cells, the size-d upper
    nilpotent blocks and zeros; P^T Q has the cells and size-(d-1)
    blocks.
    """
    n, m = jd.n, jd.m
    Q = np.zeros((n, m))
    P = np.zeros((n, m))
    row = col = 0
    for lam, c in jd.blocks:
        Q[row:row + c, col:col + c] = _real_jordan_block(lam, c)
        P[row:row + c, col:col + c] = np.eye(c)
        row += c
        col += c
    for d in jd.nilpotent:
        Q[row:row + d - 1, col:col + d - 1] = np.eye(d - 1)
        P[row + 1:row + d, col:col + d - 1] = np.eye(d - 1)
        row += d
        col += d - 1
    return CotangentPoint(Q, P)


def jordan_correspond(jd: JordanData):
    """The matched canonical momentum values (left n x n, right m x m)."""
    pt = build_qp_from_jordan(jd)
    return momentum_left(pt), momentum_right(pt)


def _chain_to_counts(nullities):
    """Jordan block counts from a nullity chain nu_1 <= nu_2 <= ...

    The count of size-s blocks is 2 nu_s - nu_(s-1) - nu_(s+1), with
    nu_0 = 0 and the chain continued as constant past its end.
    """
    nu = [0] + list(nullities)
    nu.append(nu[-1])
    counts = {}
    for s in range(1, len(nu) - 1):
        c = 2 * nu[s] - nu[s - 1] - nu[s + 1]
        if c < 0:
            raise ValueError("inconsistent nullity chain")
        if c > 0:
            counts[s] = c
    return counts


def _structure_exact(M_int, side: str, n: int, m: int) -> JordanData:
    import sympy

    sm = sympy.Matrix(M_int)
    size = sm.shape[0]
    blocks = []
    nilpotent = []
    for lam, alg_mult in sm.eigenvals().items():
        lam_c = complex(sympy.N(lam, 30))
        if lam_c.imag < -1e-25:
            continue  # handled through the conjugate eigenvalue
        A = sm - lam * sympy.eye(size)
        nullities = []
        power = sympy.eye(size)
        while True:
            power = power * A
            nu = size - power.rank()
            if nullities and nu == nullities[-1]:
                break
            nullities.append(nu)
            if nu >= alg_mult:
                break
        counts = _chain_to_counts(nullities)
        is_zero = lam.is_zero
        for s, cnt in counts.items():
            if is_zero:
                if side == "left":
                    if s >= 2:
                        nilpotent.extend([s] * cnt)
                else:
                    nilpotent.extend([s + 1] * cnt)
            elif abs(lam_c.imag) <= 1e-25:
                blocks.extend([(complex(lam_c.real, 0.0), s)] * cnt)
            else:
                blocks.extend([(lam_c, 2 * s)] * cnt)
    return JordanData(tuple(blocks), tuple(nilpotent), n, m)


def _cluster_eigenvalues(eigs, delta):
    """Single-linkage clusters of points in the complex plane."""
    order = sorted(range(len(eigs)), key=lambda i: (eigs[i].real, eigs[i].imag))
    clusters = []
    for i in order:
        z = eigs[i]
        hit = None
        for cl in clusters:
            if any(abs(z - w) <= delta for w in cl):
                hit = cl
                break
        if hit is None:
            clusters.append([z])
        else:
            hit.append(z)
    # merge transitively linked clusters
    merged = True
    while merged:
        merged = False
        for a in range(len(clusters)):
            for b in range(a + 1, len(clusters)):
                if any(abs(z - w) <= delta
                       for z in clusters[a] for w in clusters[b]):
                    clusters[a].extend(clusters[b])
                    del clusters[b]
                    merged = True
                    break
            if merged:
                break
    return clusters


def _structure_float(M, side: str, n: int, m: int,
                     tol: Tolerances) -> JordanData:
    """Best-effort structure from floating-point data.

    Eigenvalues within 1e-6 of each other (relative to the spectral
    radius) are treated as one, clusters closer than 1e-3 raise, and
    anything wider counts as distinct.  This resolves spectra separated
    beyond the eigensolver's backward error; defective blocks deeper
    than size 4 carried by noisy data can scatter past the guard band
    and should be supplied as exact integral matrices instead.
    """
    size = M.shape[0]
    eigs = np.linalg.eigvals(M)
    scale = max(1.0, float(np.abs(eigs).max()) if size else 1.0)
    delta = 1e-6 * scale
    clusters = _cluster_eigenvalues(list(eigs), delta)
    centers = [complex(np.mean(cl)) for cl in clusters]
    for a in range(len(centers)):
        for b in range(a + 1, len(centers)):
            gap = abs(centers[a] - centers[b])
            if gap < 1e-3 * scale:
                raise ValueError(
                    f"eigenvalue clusters {gap:.2e} apart cannot be separated "
                    "reliably; provide exact integer data or a "
                    "better-conditioned value"
                )
    blocks = []
    nilpotent = []
    for cl, center in zip(clusters, centers):
        if abs(center) <= delta:
            center = 0.0 + 0.0j
        elif abs(center.imag) <= delta:
            center = complex(center.real, 0.0)
        if center.imag < 0:
            continue  # handled through the conjugate cluster
        A = M - center * np.eye(size)
        mult = len(cl)
        nullities = []
        power = np.eye(size, dtype=A.dtype)
        while True:
            power = power @ A
            nu = size - rank_tol(power, tol)
            if nullities and nu <= nullities[-1]:
                break
            nullities.append(nu)
            if nu >= mult:
                break
        counts = _chain_to_counts(nullities)
        for s, cnt in counts.items():
            if center == 0:
                if side == "left":
                    if s >= 2:
                        nilpotent.extend([s] * cnt)
                else:
                    nilpotent.extend([s + 1] * cnt)
            elif center.imag == 0:
                blocks.extend([(center, s)] * cnt)
            else:
                blocks.extend([(center, 2 * s)] * cnt)
    return JordanData(tuple(blocks), tuple(nilpotent), n, m)


def jordan_structure(value: np.ndarray, side: str, n: int = None,
                     tol: Tolerances = DEFAULT_TOL) -> JordanData:
    """Recover the orbit label from a momentum value.

    side="left" takes the n x n value (m is its rank); side="right"
    takes the m x m value and needs the ambient row count n.  Exactly
    integral input is analyzed in exact arithmetic; otherwise
    eigenvalues are clustered, and the call raises when clusters are
    too close to tell apart.  Raises ValueError when the value is not
    a momentum of a full-rank pair (wrong rank profile).
    """
    value = np.asarray(value, dtype=float)
    if value.ndim != 2 or value.shape[0] != value.shape[1]:
        raise ValueError("expected a square matrix")
    if side == "left":
        n = value.shape[0]
        m = rank_tol(value, tol)
    elif side == "right":
        if n is None:
            raise ValueError("side='right' needs the ambient row count n")
        m = value.shape[0]
        if n < m:
            raise ValueError("ambient row count must be at least m")
    else:
        raise ValueError("side must be 'left' or 'right'")
    rounded = np.round(value)
    if np.array_equal(rounded, value):
        M_int = [[int(x) for x in row] for row in rounded]
        return _structure_exact(M_int, side, n, m)
    return _structure_float(value, side, n, m, tol)
