"""Command-line front end.

Subcommands: ``gen`` writes random instances (optionally with a
same-level partner), ``momentum``/``witness``/``orbit`` operate on
instance files, and ``suite`` runs the registered verification battery
and writes a JSON report.

All randomness flows through a counter-based generator keyed by
(master seed, stream index), so identical commands reproduce identical
bytes.  Exit codes: 0 success, 1 failed check or momentum mismatch,
2 malformed input.

Instance files are JSON objects {"kind", "n", "m", ...} holding either
a single "matrix" (complex for the unitary pair, 2n x m real for the
symplectic pair) or a "Q"/"P" pair for the general linear pair.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

import numpy as np

from . import general_linear, seesaw, symplectic, unitary
from .jsonio import matrix_from_obj, matrix_to_obj, report_record
from .linalg import (
    DEFAULT_TOL,
    omega_complex,
    omega_real,
    random_group_element,
    rank_tol,
    relative_diff,
    standard_J,
    stream_rng,
)
from .pairs import (
    PAIR_IDS,
    DualPairInstance,
    LevelMismatchError,
    act,
    algebra_basis,
    algebra_size,
    algebra_tag,
    bracket,
    check_equivariance,
    check_level_invariance,
    check_lie_weinstein,
    check_pairing_identity,
    momentum,
)

_PAIR_ALIASES = {
    "unitary": "unitary",
    "u": "unitary",
    "symplectic": "symplectic",
    "sp": "symplectic",
    "gl": "general_linear",
    "general_linear": "general_linear",
    "general-linear": "general_linear",
}

_DIM_LIMIT = 16


def _normalize_pair(name: str) -> str:
    try:
        return _PAIR_ALIASES[name]
    except KeyError:
        raise ValueError(f"unknown pair {name!r}; use unitary, symplectic or gl")


def _validate_dims(pair: str, n: int, m: int):
    if not (1 <= n <= _DIM_LIMIT and 1 <= m <= _DIM_LIMIT):
        raise ValueError(f"dimensions must lie in 1..{_DIM_LIMIT}")
    if pair == "symplectic" and m > 2 * n:
        raise ValueError("the symplectic pair needs m <= 2n")
    if pair == "general_linear" and m > n:
        raise ValueError("the general linear pair needs m <= n")


def _dump_json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _instance_payload(inst: DualPairInstance) -> dict:
    out = {"kind": inst.pair_id, "n": inst.n, "m": inst.m}
    if inst.pair_id == "general_linear":
        out["Q"] = matrix_to_obj(inst.point.Q)
        out["P"] = matrix_to_obj(inst.point.P)
    else:
        out["matrix"] = matrix_to_obj(inst.point)
    return out


def _load_instance(path: str, pair: str = None) -> DualPairInstance:
    obj = json.loads(Path(path).read_text())
    if not isinstance(obj, dict) or "kind" not in obj:
        raise ValueError(f"{path}: not an instance file")
    kind = obj["kind"]
    if kind not in PAIR_IDS:
        raise ValueError(f"{path}: unknown kind {kind!r}")
    if pair is not None and kind != pair:
        raise ValueError(f"{path}: holds a {kind} instance, expected {pair}")
    n, m = int(obj["n"]), int(obj["m"])
    if kind == "general_linear":
        point = general_linear.CotangentPoint(
            matrix_from_obj(obj["Q"]), matrix_from_obj(obj["P"]))
    else:
        point = matrix_from_obj(obj["matrix"])
    return DualPairInstance(kind, n, m, point)


def _random_instance(pair: str, n: int, m: int, seed: int,
                     stream: int) -> DualPairInstance:
    rng = stream_rng(seed, stream)
    if pair == "unitary":
        point = rng.standard_normal((n, m)) + 1j * rng.standard_normal((n, m))
    elif pair == "symplectic":
        point = rng.standard_normal((2 * n, m))
    else:
        point = general_linear.CotangentPoint(
            rng.standard_normal((n, m)), rng.standard_normal((n, m)))
    return DualPairInstance(pair, n, m, point)


def _side_group(pair: str, side: str, n: int, m: int):
    if pair == "unitary":
        return "unitary", n if side == "left" else m
    if pair == "symplectic":
        return ("symplectic", 2 * n) if side == "left" else ("orthogonal", m)
    return "general_linear", n if side == "left" else m


def _random_side_element(pair, side, n, m, seed, stream):
    group, dim = _side_group(pair, side, n, m)
    return random_group_element(group, dim, seed, stream)


# ---------------------------------------------------------------------------
# gen

def _random_jordan(n: int, m: int, rng) -> general_linear.JordanData:
    t_max = min(m, n - m)
    t = int(rng.integers(0, t_max + 1))
    budget = m - t
    palette = [1.0, -1.0, 2.0, -2.0, 3.0]
    blocks = []
    while budget > 0:
        if budget >= 2 and rng.random() < 0.3:
            lam = complex(palette[int(rng.integers(0, len(palette)))], 1.0)
            c = 2
        else:
            c = int(rng.integers(1, budget + 1))
            lam = complex(palette[int(rng.integers(0, len(palette)))], 0.0)
        blocks.append((lam, c))
        budget -= c
    return general_linear.JordanData(tuple(blocks), (2,) * t, n, m)


def _random_unimodular(n: int, rng) -> np.ndarray:
    A = np.eye(n)
    if n >= 2:
        for _ in range(3):
            i = int(rng.integers(0, n))
            j = int(rng.integers(0, n - 1))
            if j >= i:
                j += 1
            A[i, :] += int(rng.integers(-2, 3)) * A[j, :]
    return A


def _exact_integer_left_act(A: np.ndarray,
                            pt: general_linear.CotangentPoint):
    """Left action by an integer unimodular matrix with the inverse
    transpose snapped back to exact integers, so P^T Q is preserved
    bit for bit."""
    invAT = np.round(np.linalg.inv(A.T))
    if not np.array_equal(A.T @ invAT, np.eye(A.shape[0])):
        raise ValueError("matrix is not integrally invertible")
    return general_linear.CotangentPoint(A @ pt.Q, invAT @ pt.P)


def _normal_form_instances(pair: str, n: int, m: int, seed: int):
    rng = stream_rng(seed, 2)
    if pair == "unitary":
        k = min(n, m)
        sig = np.sort(rng.uniform(0.5, 2.0, size=k))[::-1]
        T = np.zeros((n, m), dtype=complex)
        for i, s in enumerate(sig):
            T[i, i] = s
        g1 = random_group_element("unitary", n, seed, 3)
        g2 = random_group_element("unitary", n, seed, 4)
        points = g1 @ T, g2 @ T
    elif pair == "symplectic":
        p = int(rng.integers(max(0, m - n), m // 2 + 1))
        sig = tuple(np.sort(rng.uniform(0.7, 1.8, size=p))[::-1])
        inv = symplectic.SpOrbitInvariants(p, sig, m - 2 * p, n - m + p, n, m)
        D = symplectic.build_template(inv)
        g1 = random_group_element("symplectic", 2 * n, seed, 3)
        g2 = random_group_element("symplectic", 2 * n, seed, 4)
        points = g1 @ D, g2 @ D
    else:
        jd = _random_jordan(n, m, rng)
        pt = general_linear.build_qp_from_jordan(jd)
        points = (_exact_integer_left_act(_random_unimodular(n, rng), pt),
                  _exact_integer_left_act(_random_unimodular(n, rng), pt))
    return (DualPairInstance(pair, n, m, points[0]),
            DualPairInstance(pair, n, m, points[1]))


def cmd_gen(args) -> int:
    _resolve_dims(args)
    pair = _normalize_pair(args.pair)
    if args.n is None or args.m is None:
        raise ValueError("gen needs dimensions: positional n m or --n/--m")
    n, m = args.n, args.m
    _validate_dims(pair, n, m)
    base = args.out or f"{pair}_{n}x{m}_s{args.seed}"
    if base.endswith(".json"):
        base = base[:-5]
    if args.partner == "normal-form":
        inst, partner = _normal_form_instances(pair, n, m, args.seed)
    else:
        inst = _random_instance(pair, n, m, args.seed, 0)
        partner = None
        if args.partner is not None:
            side = "left" if args.partner == "fiber-left" else "right"
            g = _random_side_element(pair, side, n, m, args.seed, 1)
            partner = act(inst, side, g)
    files = [(Path(base + ".json"), inst)]
    if partner is not None:
        files.append((Path(base + ".partner.json"), partner))
    for path, item in files:
        path.write_text(_dump_json(_instance_payload(item)))
        print(path)
    return 0


# ---------------------------------------------------------------------------
# momentum / witness / orbit

def cmd_momentum(args) -> int:
    pair = _normalize_pair(args.pair) if args.pair else None
    inst = _load_instance(args.file, pair)
    mv = momentum(inst, args.side)
    payload = {
        "pair": inst.pair_id,
        "side": args.side,
        "algebra": mv.algebra,
        "value": matrix_to_obj(mv.value),
        "identity_residual": float(mv.identity_residual()),
    }
    sys.stdout.write(_dump_json(payload))
    return 0


def _defining_residual(pair: str, side: str, W: np.ndarray) -> float:
    if pair == "unitary" or (pair == "symplectic" and side == "right"):
        return float(np.linalg.norm(np.conj(W).T @ W - np.eye(W.shape[0])))
    if pair == "symplectic":
        J = standard_J(W.shape[0] // 2)
        return float(np.linalg.norm(W.T @ J @ W - J))
    return 0.0 if rank_tol(W, DEFAULT_TOL) == W.shape[0] else 1.0


def cmd_witness(args) -> int:
    pair = _normalize_pair(args.pair) if args.pair else None
    inst_a = _load_instance(args.file_a, pair)
    inst_b = _load_instance(args.file_b, inst_a.pair_id)
    if (inst_a.n, inst_a.m) != (inst_b.n, inst_b.m):
        raise ValueError("the two instances have different dimensions")
    mod = {"unitary": unitary, "symplectic": symplectic,
           "general_linear": general_linear}[inst_a.pair_id]
    fn = mod.witness_left if args.side == "left" else mod.witness_right
    rep = fn(inst_a.point, inst_b.point)
    payload = {
        "pair": inst_a.pair_id,
        "side": args.side,
        "witness": matrix_to_obj(rep.witness),
        "residual": float(rep.residual),
        "defining_residual": _defining_residual(inst_a.pair_id, args.side,
                                                rep.witness),
    }
    if rep.cond is not None:
        payload["cond"] = float(rep.cond)
    sys.stdout.write(_dump_json(payload))
    return 0 if rep.residual <= 1e-6 else 1


def cmd_orbit(args) -> int:
    pair = _normalize_pair(args.pair) if args.pair else None
    inst = _load_instance(args.file, pair)
    n, m = inst.n, inst.m
    if inst.pair_id == "unitary":
        sig = unitary.orbit_invariants(inst.point)
        T = np.zeros((n, m), dtype=complex)
        for i, s in enumerate(sig):
            T[i, i] = s
        label = {"sigmas": [float(s) for s in sig]}
        nfl, nfr = unitary.momentum_left(T), unitary.momentum_right(T)
    elif inst.pair_id == "symplectic":
        _, _, _, inv = symplectic.symplectic_svd(inst.point)
        label = inv.to_obj()
        nfl, nfr = symplectic.correspond(inv)
    else:
        if not inst.full_rank():
            raise ValueError("orbit labelling needs full-rank Q and P")
        jd = general_linear.jordan_structure(
            general_linear.momentum_left(inst.point), side="left")
        label = jd.to_obj()
        nfl, nfr = general_linear.jordan_correspond(jd)
    payload = {
        "pair": inst.pair_id,
        "label": label,
        "normal_form_left": matrix_to_obj(nfl),
        "normal_form_right": matrix_to_obj(nfr),
    }
    sys.stdout.write(_dump_json(payload))
    return 0


# ---------------------------------------------------------------------------
# suite

_SUITE_DIMS = {
    "unitary": [(2, 2), (3, 2), (4, 3), (2, 1), (3, 3)],
    "symplectic": [(2, 2), (2, 3), (3, 4), (2, 4), (3, 2)],
    "general_linear": [(2, 2), (3, 2), (4, 3), (3, 1), (4, 2)],
}


def _run_sampler(pair):
    def run(seed, base, dims):
        n, m = dims
        worst = 0.0
        for side in ("left", "right"):
            group, dim = _side_group(pair, side, n, m)
            g = random_group_element(group, dim, seed,
                                     base * 8 + (1 if side == "left" else 2))
            if group == "symplectic":
                J = standard_J(dim // 2)
                worst = max(worst, float(np.linalg.norm(g.T @ J @ g - J)))
            elif group == "general_linear":
                worst = max(worst, 0.0 if rank_tol(g, DEFAULT_TOL) == dim else 1.0)
            else:
                worst = max(worst, float(np.linalg.norm(
                    np.conj(g).T @ g - np.eye(dim))))
        return worst
    return run


def _run_equivariance(pair, side):
    def run(seed, base, dims):
        n, m = dims
        inst = _random_instance(pair, n, m, seed, base * 8)
        g = _random_side_element(pair, side, n, m, seed, base * 8 + 1)
        return check_equivariance(inst, side, g)
    return run


def _run_level(pair, side):
    def run(seed, base, dims):
        n, m = dims
        inst = _random_instance(pair, n, m, seed, base * 8)
        other = "right" if side == "left" else "left"
        g = _random_side_element(pair, other, n, m, seed, base * 8 + 1)
        return check_level_invariance(inst, side, g)
    return run


def _random_algebra_element(inst, side, rng):
    basis = algebra_basis(algebra_tag(inst.pair_id, side),
                          algebra_size(inst, side))
    coeffs = rng.standard_normal(len(basis))
    out = np.zeros_like(basis[0])
    for c, b in zip(coeffs, basis):
        out = out + c * b
    return out


def _run_pairing(pair, side):
    def run(seed, base, dims):
        n, m = dims
        inst = _random_instance(pair, n, m, seed, base * 8)
        rng = stream_rng(seed, base * 8 + 3)
        xi = _random_algebra_element(inst, side, rng)
        zeta = _random_algebra_element(inst, side, rng)
        return check_pairing_identity(inst, xi, zeta, side)
    return run


def _run_lie_weinstein(pair):
    def run(seed, base, dims):
        n, m = dims
        inst = _random_instance(pair, n, m, seed, base * 8)
        out = check_lie_weinstein(inst)
        defect = abs(out["dim_left_orbit"] + out["dim_right_orbit"]
                     - out["ambient_dim"])
        return max(float(defect), out["cross_omega_residual"])
    return run


def _run_witness(pair, side):
    def run(seed, base, dims):
        n, m = dims
        inst = _random_instance(pair, n, m, seed, base * 8)
        g = _random_side_element(pair, side, n, m, seed, base * 8 + 1)
        inst2 = act(inst, side, g)
        mod = {"unitary": unitary, "symplectic": symplectic,
               "general_linear": general_linear}[pair]
        fn = mod.witness_left if side == "left" else mod.witness_right
        rep = fn(inst.point, inst2.point)
        return max(rep.residual, _defining_residual(pair, side, rep.witness))
    return run


def _run_svd(seed, base, dims):
    n, m = dims
    inst = _random_instance("symplectic", n, m, seed, base * 8)
    S, D, O, _ = symplectic.symplectic_svd(inst.point)
    return relative_diff(S @ D @ O, inst.point)


def _run_nf_charpoly(seed, base, dims):
    n, m = dims
    inst = _random_instance("symplectic", n, m, seed, base * 8)
    _, _, _, inv = symplectic.symplectic_svd(inst.point)
    c1 = np.poly(symplectic.momentum_left(inst.point))
    c2 = np.poly(symplectic.normal_form_left(inv))
    return float(np.abs(c1 - c2).max() / max(1.0, np.abs(c2).max()))


def _run_rank_profile(seed, base, dims):
    n, m = dims
    inst = _random_instance("general_linear", n, m, seed, base * 8)
    zeta = general_linear.momentum_left(inst.point)
    xi = general_linear.momentum_right(inst.point)
    ok = (general_linear.in_image_left(zeta, m)
          and general_linear.in_image_right(xi, n))
    return 0.0 if ok else 1.0


def _run_jordan_roundtrip(seed, base, dims):
    n, m = dims
    rng = stream_rng(seed, base * 8 + 4)
    jd = _random_jordan(n, m, rng)
    zeta, xi = general_linear.jordan_correspond(jd)
    back_l = general_linear.jordan_structure(zeta, side="left")
    back_r = general_linear.jordan_structure(xi, side="right", n=n)
    return 0.0 if back_l == jd and back_r == jd else 1.0


def _run_seesaw_u(seed, base, dims):
    n, m = dims
    inst = _random_instance("unitary", n, m, seed, base * 8)
    res = seesaw.check_diagram_sp_u(inst.point)
    return max(res["left"], res["right"])


def _run_seesaw_gl(seed, base, dims):
    n, m = dims
    inst = _random_instance("general_linear", n, m, seed, base * 8)
    res = seesaw.check_diagram_sp_gl(inst.point)
    return max(res["left"], res["right"])


def _run_omega_real(seed, base, dims):
    n, m = dims
    rng = stream_rng(seed, base * 8)
    E = rng.standard_normal((n, m)) + 1j * rng.standard_normal((n, m))
    F = rng.standard_normal((n, m)) + 1j * rng.standard_normal((n, m))
    return abs(omega_complex(E, F)
               - omega_real(seesaw.complex_to_real(E), seesaw.complex_to_real(F)))


def _run_morphism_u(seed, base, dims):
    n, _ = dims
    rng = stream_rng(seed, base * 8)
    X = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    Y = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    a, b = 0.5 * (X - np.conj(X).T), 0.5 * (Y - np.conj(Y).T)
    lhs = seesaw.embed_u_to_sp(bracket(a, b))
    rhs = bracket(seesaw.embed_u_to_sp(a), seesaw.embed_u_to_sp(b))
    return float(np.linalg.norm(lhs - rhs))


def _run_morphism_gl(seed, base, dims):
    n, _ = dims
    rng = stream_rng(seed, base * 8)
    a = rng.standard_normal((n, n))
    b = rng.standard_normal((n, n))
    lhs = seesaw.embed_gl_to_sp(bracket(a, b))
    rhs = bracket(seesaw.embed_gl_to_sp(a), seesaw.embed_gl_to_sp(b))
    return float(np.linalg.norm(lhs - rhs))


def _build_registry():
    reg = []
    for pair in PAIR_IDS:
        reg.append(("sampler_membership", pair, 1e-9, _run_sampler(pair)))
        for side in ("left", "right"):
            reg.append((f"equivariance_{side}", pair, 1e-9,
                        _run_equivariance(pair, side)))
            reg.append((f"level_invariance_{side}", pair, 1e-9,
                        _run_level(pair, side)))
            reg.append((f"pairing_identity_{side}", pair, 1e-9,
                        _run_pairing(pair, side)))
        reg.append(("lie_weinstein", pair, 1e-10, _run_lie_weinstein(pair)))
        for side in ("left", "right"):
            reg.append((f"witness_{side}", pair, 1e-7, _run_witness(pair, side)))
    reg.append(("svd_reconstruction", "symplectic", 1e-8, _run_svd))
    reg.append(("normal_form_charpoly", "symplectic", 1e-6, _run_nf_charpoly))
    reg.append(("momentum_rank_profile", "general_linear", 0.5,
                _run_rank_profile))
    reg.append(("jordan_roundtrip", "general_linear", 0.5,
                _run_jordan_roundtrip))
    reg.append(("seesaw_diagram_u", "unitary", 1e-10, _run_seesaw_u))
    reg.append(("seesaw_diagram_gl", "general_linear", 1e-10, _run_seesaw_gl))
    reg.append(("omega_realification", "unitary", 1e-12, _run_omega_real))
    reg.append(("embedding_morphism_u", "unitary", 1e-12, _run_morphism_u))
    reg.append(("embedding_morphism_gl", "general_linear", 1e-12,
                _run_morphism_gl))
    return reg


def cmd_suite(args) -> int:
    config = {}
    if args.config:
        config = json.loads(Path(args.config).read_text())
        if not isinstance(config, dict):
            raise ValueError("config file must hold a JSON object")
    pairs = config.get("pairs", list(PAIR_IDS))
    if args.pair:
        pairs = [_normalize_pair(args.pair)]
    pairs = [_normalize_pair(p) for p in pairs]
    trials = args.trials if args.trials is not None else int(config.get("trials", 3))
    seed = args.seed if args.seed is not None else int(config.get("seed", 0))
    tol_override = args.tol if args.tol is not None else config.get("tol")
    out = args.out or config.get("out", "suite_report.json")
    if trials < 1:
        raise ValueError("trials must be at least 1")

    t0 = time.perf_counter()
    records = []
    for idx, (check, pair, default_thr, runner) in enumerate(_build_registry()):
        if pair not in pairs:
            continue
        threshold = default_thr if tol_override is None else float(tol_override)
        dims_cycle = _SUITE_DIMS[pair]
        for t in range(trials):
            dims = dims_cycle[t % len(dims_cycle)]
            base = idx * 1000 + t
            residual = float(runner(seed, base, dims))
            records.append(report_record(check, pair, list(dims), base,
                                         residual, residual <= threshold))
    records.sort(key=lambda r: (r["check"], r["pair"], str(r["dims"]), r["seed"]))
    passed = sum(1 for r in records if r["pass"])
    report = {
        "config": {"pairs": sorted(pairs), "seed": seed, "trials": trials,
                   "tol": tol_override},
        "records": records,
        "summary": {"total": len(records), "passed": passed,
                    "failed": len(records) - passed},
    }
    Path(out).write_text(_dump_json(report))
    wall = time.perf_counter() - t0
    print(f"{passed}/{len(records)} checks passed; wall {wall:.2f}s; "
          f"report -> {out}")
    return 0 if passed == len(records) else 1


# ---------------------------------------------------------------------------
# argument parsing

def _add_dims(p):
    p.add_argument("pair_pos", nargs="?", metavar="pair")
    p.add_argument("n_pos", nargs="?", type=int, metavar="n")
    p.add_argument("m_pos", nargs="?", type=int, metavar="m")
    p.add_argument("--pair")
    p.add_argument("--n", type=int)
    p.add_argument("--m", type=int)


def _resolve_dims(args):
    args.pair = args.pair or args.pair_pos
    args.n = args.n if args.n is not None else args.n_pos
    args.m = args.m if args.m is not None else args.m_pos
    if args.pair is None:
        raise ValueError("a pair is required: unitary, symplectic or gl")


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="dualpairs",
        description="momentum maps, witnesses and orbit normal forms "
                    "for three matrix dual pairs")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="write a random instance file")
    _add_dims(p)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--partner",
                   choices=["fiber-left", "fiber-right", "normal-form"])
    p.add_argument("--out")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("momentum", help="momentum value of an instance file")
    p.add_argument("file")
    p.add_argument("--pair")
    p.add_argument("--side", required=True, choices=["left", "right"])
    p.set_defaults(func=cmd_momentum)

    p = sub.add_parser("witness",
                       help="group element linking two same-level instances")
    p.add_argument("file_a")
    p.add_argument("file_b")
    p.add_argument("--pair")
    p.add_argument("--side", required=True, choices=["left", "right"])
    p.set_defaults(func=cmd_witness)

    p = sub.add_parser("orbit",
                       help="orbit label and both canonical momentum values")
    p.add_argument("file")
    p.add_argument("--pair")
    p.set_defaults(func=cmd_orbit)

    p = sub.add_parser("suite", help="run the verification battery")
    p.add_argument("--pair")
    p.add_argument("--trials", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--tol", type=float)
    p.add_argument("--out")
    p.add_argument("--config", help="JSON file with pairs/trials/seed/tol/out")
    p.set_defaults(func=cmd_suite)
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.func(args)
    except LevelMismatchError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (ValueError, KeyError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
