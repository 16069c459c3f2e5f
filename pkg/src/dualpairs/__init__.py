"""Momentum maps, transitivity witnesses and orbit normal forms for
three commuting matrix group actions: U(n) x U(m) on complex matrices,
Sp(2n,R) x O(m) on real matrices, and GL(n,R) x GL(m,R) on pairs
(Q, P).

Each pair lives in its own module (``unitary``, ``symplectic``,
``general_linear``); ``pairs`` holds the shared instance container and
verification checks, ``seesaw`` ties the three together through algebra
embeddings, and ``cli`` is the command-line harness.
"""

from . import cli, general_linear, jsonio, linalg, pairs, seesaw, symplectic, unitary
from .linalg import DEFAULT_TOL, Tolerances
from .pairs import (
    PAIR_IDS,
    DualPairInstance,
    LevelMismatchError,
    MomentumValue,
    WitnessReport,
    act,
    check_equivariance,
    check_level_invariance,
    check_lie_weinstein,
    check_pairing_identity,
    momentum,
    orbit_correspondence,
)

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_TOL",
    "DualPairInstance",
    "LevelMismatchError",
    "MomentumValue",
    "PAIR_IDS",
    "Tolerances",
    "WitnessReport",
    "act",
    "check_equivariance",
    "check_level_invariance",
    "check_lie_weinstein",
    "check_pairing_identity",
    "cli",
    "general_linear",
    "jsonio",
    "linalg",
    "momentum",
    "orbit_correspondence",
    "pairs",
    "seesaw",
    "symplectic",
    "unitary",
    "__version__",
]
