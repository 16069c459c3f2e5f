"""The commuting U(n) x U(m) actions on complex n x m matrices.

Left multiplication by U(n) and right multiplication by U(m) commute,
and both are Hamiltonian for the form Im Tr(E^dagger F).  The two
momentum maps are quadratic,

    left  E -> (i/2) E E^dagger    in u(n),
    right E -> (i/2) E^dagger E    in u(m),

each level set of one map is an orbit of the other group, and the
matched orbits are labelled by the singular values of E.
"""

from __future__ import annotations

import numpy as np

from .linalg import DEFAULT_TOL, Tolerances, isometry_between, rank_tol, relative_diff
from .pairs import WitnessReport, require_level_match as _require_level_match


def momentum_left(E: np.ndarray) -> np.ndarray:
    """(i/2) E E^dagger, anti-Hermitian by construction."""
    E = np.asarray(E, dtype=complex)
    return 0.5j * (E @ np.conj(E).T)


def momentum_right(E: np.ndarray) -> np.ndarray:
    """(i/2) E^dagger E."""
    E = np.asarray(E, dtype=complex)
    return 0.5j * (np.conj(E).T @ E)


def witness_left(E: np.ndarray, E_prime: np.ndarray,
                 tol: Tolerances = DEFAULT_TOL) -> WitnessReport:
    """U in U(n) with U E close to E_prime, given equal right momenta.

    Equal right momenta mean equal column Gram matrices, so mapping
    columns of E to the matching columns of E_prime is an isometry of
    spans; it is extended to all of C^n along deterministic orthonormal
    complement bases.  Rank-deficient inputs are fine.
    """
    E = np.asarray(E, dtype=complex)
    E_prime = np.asarray(E_prime, dtype=complex)
    _require_level_match(momentum_right(E), momentum_right(E_prime), tol, "right")
    U = isometry_between(E, E_prime, tol)
    return WitnessReport(U, relative_diff(U @ E, E_prime), "left")


def witness_right(E: np.ndarray, E_prime: np.ndarray,
                  tol: Tolerances = DEFAULT_TOL) -> WitnessReport:
    """V in U(m) with E V close to E_prime, given equal left momenta.

    Runs the left construction on conjugate transposes: W E^dagger =
    E_prime^dagger gives V = W^dagger.
    """
    E = np.asarray(E, dtype=complex)
    E_prime = np.asarray(E_prime, dtype=complex)
    _require_level_match(momentum_left(E), momentum_left(E_prime), tol, "left")
    W = isometry_between(np.conj(E).T, np.conj(E_prime).T, tol)
    V = np.conj(W).T
    return WitnessReport(V, relative_diff(E @ V, E_prime), "right")


def orbit_invariants(E: np.ndarray) -> np.ndarray:
    """Singular values of E, descending.

    The left momentum lies in the adjoint orbit of
    diag((i/2) s_1^2, ..., (i/2) s_k^2, 0, ...) in u(n) and the right
    momentum in the matching orbit in u(m), so the list labels both
    orbits at once.
    """
    return np.linalg.svd(np.asarray(E, dtype=complex), compute_uv=False)


def jacobian_rank_right(E: np.ndarray, tol: Tolerances = DEFAULT_TOL) -> int:
    """Rank of the differential of the right momentum map at E.

    The differential sends X to (i/2)(X^dagger E + E^dagger X); the rank
    is computed over a real basis of the domain.  With k zero singular
    values the observed rank is m^2 - k^2, so the map has full rank m^2
    exactly when E has full column rank.
    """
    E = np.asarray(E, dtype=complex)
    n, m = E.shape
    cols = []
    Ed = np.conj(E).T
    for i in range(n):
        for j in range(m):
            for val in (1.0, 1.0j):
                X = np.zeros((n, m), dtype=complex)
                X[i, j] = val
                T = 0.5j * (np.conj(X).T @ E + Ed @ X)
                cols.append(np.concatenate([np.real(T).ravel(), np.imag(T).ravel()]))
    return rank_tol(np.column_stack(cols), tol)
