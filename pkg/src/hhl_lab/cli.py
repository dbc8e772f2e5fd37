"""Command-line front end.

Exit status: 0 on success, 1 on numerical/domain errors, 2 on bad usage or
malformed input files.  JSON floats use Python's shortest round-trip repr;
CSV floats use 17 significant digits.  Wall-clock times are only written
with ``--timing`` so that repeated runs produce identical files.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys

import numpy as np

from . import clock, fileio, observables, pipeline
from .errors import FormatError, HHLError
from .filters import FilterSpec, flag_state
from .linalg import condition_number, eig_hermitian
from .phase_estimation import alpha_closed_form, concentration_bound
from .qstate import dump_state

PROG = "hhl-lab"


# ---------------------------------------------------------------------------
# output helpers


def _clean(obj):
    if isinstance(obj, float):
        return obj if math.isfinite(obj) else None
    if isinstance(obj, (np.floating, np.integer, np.bool_)):
        return _clean(obj.item())
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    return obj


def _json_text(obj) -> str:
    return json.dumps(_clean(obj), indent=2, sort_keys=True) + "\n"


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([f"{v:.17g}" if isinstance(v, float) else v for v in row])
    return buf.getvalue()


def _emit(text: str, path: str | None):
    if path in (None, "-"):
        sys.stdout.write(text)
        return
    try:
        with open(path, "w") as fh:
            fh.write(text)
    except OSError as exc:
        raise FormatError(f"cannot write file: {exc.strerror}", path) from None


def _float_list(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


# ---------------------------------------------------------------------------
# commands


def _config(args, kappa=None) -> pipeline.HHLConfig:
    return pipeline.HHLConfig.create(
        args.kappa if kappa is None else kappa,
        epsilon=args.epsilon,
        t0=args.t0,
        c_t=args.t0_const,
        mode=getattr(args, "mode", "filtered"),
        c_simple=getattr(args, "c_simple", None),
        T=args.clock_dim,
        seed=args.seed if args.seed is not None else 0,
    )


def cmd_solve(args):
    a = fileio.load_sparse_matrix(args.matrix)
    b = fileio.load_vector(args.rhs)
    cfg = _config(args)
    eig = eig_hermitian(a)
    rep = pipeline.solve(a, b, cfg, amplify=not args.no_amplify, eig=eig)
    if args.dump_state:
        joint = pipeline.u_invert(b, a, cfg, eig=eig)
        _emit(dump_state(joint), args.dump_state)
    d = rep.to_dict(timing=args.timing)
    d["seed"] = cfg.seed
    _emit(_json_text(d), args.report)


def cmd_solve_general(args):
    a = fileio.load_general_matrix(args.matrix)
    b = fileio.load_vector(args.rhs)
    cfg = _config(args)
    rep = pipeline.solve_general(a, b, cfg, amplify=not args.no_amplify)
    oracle = pipeline.general_exact_solution(a, b, cfg.kappa)
    d = rep.to_dict(timing=args.timing)
    d["seed"] = cfg.seed
    d["x_exact_vs_embedding_oracle"] = float(np.linalg.norm(rep.x_exact - oracle))
    _emit(_json_text(d), args.report)


def cmd_phase_scan(args):
    if args.deltas:
        deltas = np.array(args.deltas, dtype=float)
    else:
        deltas = np.linspace(args.delta_min, args.delta_max, args.points)
    rows = []
    for T in args.T:
        alpha = alpha_closed_form(deltas, T)
        with np.errstate(divide="ignore"):
            bound = concentration_bound(deltas)
        for d, a, bd in zip(deltas, np.atleast_1d(alpha), np.atleast_1d(bound)):
            rows.append([float(d), T, float(a.real), float(a.imag), float(abs(a) ** 2), float(bd)])
    _emit(_csv_text(["delta", "T", "re_alpha", "im_alpha", "abs2", "bound"], rows), args.out)


def cmd_filter_scan(args):
    spec = FilterSpec(args.kappa, args.mode, args.c_simple)
    lam = np.linspace(args.lambda_min, args.lambda_max, args.points)
    f, g = spec.amplitudes(lam)
    eta = args.step
    dh = np.linalg.norm(flag_state(lam + eta, spec) - flag_state(lam - eta, spec), axis=-1) / (2 * eta)
    rows = [[float(a), float(b), float(c), float(b * b + c * c), float(d)] for a, b, c, d in zip(lam, f, g, dh)]
    _emit(_csv_text(["lambda", "f", "g", "f2_plus_g2", "dh_norm"], rows), args.out)


def random_instance(n: int, kappa: float, rng):
    """Hermitian matrix with spectrum in [1/kappa, 1] (both ends attained) and a random b."""
    rng = np.random.default_rng(rng)
    z = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    q, _ = np.linalg.qr(z)
    lam = rng.uniform(1.0 / kappa, 1.0, n)
    lam[0], lam[-1] = 1.0 / kappa, 1.0
    a = (q * lam) @ q.conj().T
    a = 0.5 * (a + a.conj().T)
    b = rng.normal(size=n) + 1j * rng.normal(size=n)
    return a, b / np.linalg.norm(b)


def cmd_error_scan(args):
    if args.matrix:
        if not args.rhs:
            raise FormatError("--matrix needs --rhs")
        a = fileio.load_sparse_matrix(args.matrix)
        b = fileio.load_vector(args.rhs)
    else:
        a, b = random_instance(args.random, args.kappa, args.seed)
    eig = eig_hermitian(a)
    rows = []
    for t0 in args.t0_list:
        cfg = pipeline.HHLConfig.create(args.kappa, t0=t0, mode=args.mode, c_t=args.t0_const)
        rep = pipeline.solve(a, b, cfg, amplify=False, eig=eig)
        c = rep.claims
        rows.append([float(t0), cfg.T, c["claim1"], c["claim2"], c["claim3"], rep.system_distance, rep.p_tilde, rep.p_exact])
    header = ["t0", "T", "claim1", "claim2", "claim3", "system_distance", "p_tilde", "p_exact"]
    _emit(_csv_text(header, rows), args.out)


def format_hermitian(a: np.ndarray, note: str = "") -> str:
    """Sparse-format text for a dense Hermitian array (no norm check)."""
    a = np.asarray(a, dtype=complex)
    nnz = int(np.max(np.count_nonzero(a, axis=1)))
    lines = [f"# {note}"] if note else []
    lines.append(f"{a.shape[0]} {nnz}")
    for i, j in zip(*np.nonzero(np.triu(a))):
        z = a[i, j]
        lines.append(f"{i} {j} {z.real:.17g} {0.0 if i == j else z.imag:.17g}")
    return "\n".join(lines) + "\n"


def cmd_reduce(args):
    circ = fileio.load_circuit(args.circuit)
    mats = clock.build_inversion_matrix(circ)
    if args.emit == "matrix":
        scale = float(np.linalg.norm(mats.A_herm, 2))
        text = format_hermitian(mats.A_herm / scale, f"clock inversion matrix A_herm divided by {scale!r}")
        _emit(text, args.out)
        return
    T = circ.T
    U3T = np.linalg.matrix_power(mats.U, 3 * T)
    series = clock.series_inverse(mats.U, T)
    kappa = condition_number(mats.A_herm)
    stats = {
        "n": circ.n,
        "T": T,
        "dim_U": mats.U.shape[0],
        "dim_A_herm": mats.A_herm.shape[0],
        "kappa_A_herm": kappa,
        "two_T": 2 * T,
        "kappa_within_2T": kappa <= 2 * T,
        "U_power_3T_error": float(np.max(np.abs(U3T - np.eye(U3T.shape[0])))),
        "unitarity_error": float(np.max(np.abs(mats.U.conj().T @ mats.U - np.eye(U3T.shape[0])))),
        "series_inverse_error": float(np.max(np.abs(series - np.linalg.inv(mats.A_inv)))),
        "window_probability": clock.window_probability(),
    }
    _emit(_json_text(stats), args.out)


def cmd_simulate_circuit(args):
    circ = fileio.load_circuit(args.circuit)
    st = clock.simulate_via_inversion(circ, args.shots, args.seed)
    d = st.to_dict()
    d["seed"] = args.seed
    p = st.m0_zero_expected
    sigma = math.sqrt(max(p * (1 - p), 1e-300) / args.shots) if args.shots else float("nan")
    d["m0_zero_frequency"] = st.m0_zero_count / args.shots if args.shots else None
    d["m0_z_score"] = (st.m0_zero_count / args.shots - p) / sigma if args.shots else None
    if not args.skip_embedding:
        emb = clock.build_first_qubit_embedding(circ)
        d["embedding_dim"] = emb.dim
        d["designated_qubit_zero_probability"] = clock.designated_qubit_zero_probability(emb)
    _emit(_json_text(d), args.report)


def cmd_swap_test(args):
    a = fileio.load_state_or_vector(args.state_a)
    b = fileio.load_state_or_vector(args.state_b)
    r = observables.swap_test(a.amplitudes, b.amplitudes, args.shots, args.seed)
    d = dict(r.__dict__)
    d["seed"] = args.seed
    _emit(_json_text(d), args.report)


def cmd_observe(args):
    a = fileio.load_sparse_matrix(args.matrix)
    b = fileio.load_vector(args.rhs)
    m = fileio.load_general_matrix(args.M)
    cfg = _config(args)
    rep = pipeline.solve(a, b, cfg, amplify=False)
    est = observables.estimate_observable(rep.x_tilde, m, args.shots, args.seed)
    exact_on_x = float(np.real(np.vdot(rep.x_exact, m @ rep.x_exact))) if m.shape[0] == rep.x_exact.size else None
    d = {
        "estimate": est.value,
        "stderr": est.stderr,
        "exact_on_x_tilde": est.exact,
        "exact_on_x": exact_on_x,
        "shots": est.shots,
        "seed": args.seed,
        "distance": rep.distance,
        "system_distance": rep.system_distance,
        "p_tilde": rep.p_tilde,
    }
    _emit(_json_text(d), args.report)


def cmd_cost_model(args):
    cost = clock.hamiltonian_sim_cost(args.N, args.s, args.t0, args.epsH)
    _emit(_json_text({"N": args.N, "s": args.s, "t0": args.t0, "epsH": args.epsH, "cost": cost}), args.out)


# ---------------------------------------------------------------------------
# parser


def _add_hhl_flags(p, *, mode=True):
    p.add_argument("--kappa", type=float, required=True, help="condition-number cutoff (>= 1)")
    p.add_argument("--epsilon", type=float, default=None, help="target error; t0 = t0-const * kappa / epsilon")
    p.add_argument("--t0", type=float, default=None, help="evolution time (overrides --epsilon)")
    p.add_argument("--t0-const", type=float, default=pipeline.DEFAULT_CT, help="constant c_t in t0 = c_t kappa / epsilon (default 10)")
    p.add_argument("--T", dest="clock_dim", type=int, default=None, help="clock dimension (default: power of two >= 16 t0)")
    if mode:
        p.add_argument("--mode", choices=["filtered", "simple"], default="filtered", help="flag rotation (default filtered)")
        p.add_argument("--c-simple", type=float, default=None, help="constant C for simple mode (default 1/(2 kappa))")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog=PROG, description="Exact statevector laboratory for quantum matrix inversion.")
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")

    p = sub.add_parser("solve", help="run the inversion pipeline on a sparse Hermitian matrix")
    p.add_argument("--matrix", required=True, help="sparse Hermitian matrix file")
    p.add_argument("--rhs", required=True, help="right-hand side vector file")
    _add_hhl_flags(p)
    p.add_argument("--seed", type=int, required=True, help="seed for the amplification measurements")
    p.add_argument("--no-amplify", action="store_true", help="skip the amplitude-amplification schedule")
    p.add_argument("--report", default=None, help="JSON report path (default stdout)")
    p.add_argument("--dump-state", default=None, help="write the joint post-U_invert state here")
    p.add_argument("--timing", action="store_true", help="include wall_time in the report")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("solve-general", help="solve a rectangular system through the Hermitian embedding")
    p.add_argument("--matrix", required=True, help="general matrix file ('M N' header)")
    p.add_argument("--rhs", required=True, help="right-hand side vector file (length M)")
    _add_hhl_flags(p, mode=False)
    p.add_argument("--seed", type=int, default=0, help="seed for the amplification measurements")
    p.add_argument("--no-amplify", action="store_true", help="skip the amplitude-amplification schedule")
    p.add_argument("--report", default=None, help="JSON report path (default stdout)")
    p.add_argument("--timing", action="store_true", help="include wall_time in the report")
    p.set_defaults(func=cmd_solve_general)

    p = sub.add_parser("phase-scan", help="tabulate the phase-estimation kernel alpha(delta, T)")
    p.add_argument("--T", type=_int_list, default=[128], help="comma-separated clock dimensions (default 128)")
    p.add_argument("--deltas", type=_float_list, default=None, help="explicit comma-separated delta values")
    p.add_argument("--delta-min", type=float, default=-40.0, help="start of the delta grid (default -40)")
    p.add_argument("--delta-max", type=float, default=40.0, help="end of the delta grid (default 40)")
    p.add_argument("--points", type=int, default=161, help="number of grid points (default 161)")
    p.add_argument("--out", default=None, help="CSV path (default stdout)")
    p.set_defaults(func=cmd_phase_scan)

    p = sub.add_parser("filter-scan", help="tabulate the filter functions f, g")
    p.add_argument("--kappa", type=float, required=True, help="condition-number cutoff (>= 1)")
    p.add_argument("--mode", choices=["filtered", "simple"], default="filtered", help="flag rotation (default filtered)")
    p.add_argument("--c-simple", type=float, default=None, help="constant C for simple mode (default 1/(2 kappa))")
    p.add_argument("--lambda-min", type=float, default=-1.0, help="start of the lambda grid (default -1)")
    p.add_argument("--lambda-max", type=float, default=1.0, help="end of the lambda grid (default 1)")
    p.add_argument("--points", type=int, default=201, help="number of grid points (default 201)")
    p.add_argument("--step", type=float, default=1e-6, help="finite-difference step for |h'|")
    p.add_argument("--out", default=None, help="CSV path (default stdout)")
    p.set_defaults(func=cmd_filter_scan)

    p = sub.add_parser("error-scan", help="pipeline error against t0")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--matrix", help="sparse Hermitian matrix file (with --rhs)")
    src.add_argument("--random", type=int, metavar="N", help="random N x N instance with spectrum in [1/kappa, 1]")
    p.add_argument("--rhs", default=None, help="right-hand side vector file (with --matrix)")
    p.add_argument("--kappa", type=float, required=True, help="condition-number cutoff (>= 1)")
    p.add_argument("--t0", dest="t0_list", type=_float_list, required=True, help="comma-separated t0 values")
    p.add_argument("--t0-const", type=float, default=pipeline.DEFAULT_CT, help="constant c_t used to report epsilon = c_t kappa / t0")
    p.add_argument("--mode", choices=["filtered", "simple"], default="filtered", help="flag rotation (default filtered)")
    p.add_argument("--seed", type=int, default=0, help="seed for --random")
    p.add_argument("--out", default=None, help="CSV path (default stdout)")
    p.set_defaults(func=cmd_error_scan)

    p = sub.add_parser("reduce", help="build the clock inversion matrices of a circuit")
    p.add_argument("--circuit", required=True, help="circuit file")
    p.add_argument("--emit", choices=["matrix", "stats"], default="stats", help="write the normalized Hermitian matrix or summary stats (default stats)")
    p.add_argument("--out", default=None, help="output path (default stdout)")
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("simulate-circuit", help="simulate a circuit by inverting its clock matrix")
    p.add_argument("--circuit", required=True, help="circuit file")
    p.add_argument("--shots", type=int, default=10_000, help="number of measurement shots (default 10000)")
    p.add_argument("--seed", type=int, required=True, help="seed for the sampled measurements")
    p.add_argument("--skip-embedding", action="store_true", help="skip the 18 T 2^n first-qubit embedding")
    p.add_argument("--report", default=None, help="JSON report path (default stdout)")
    p.set_defaults(func=cmd_simulate_circuit)

    p = sub.add_parser("swap-test", help="SWAP test between two states")
    p.add_argument("--state-a", required=True, help="vector file or state dump")
    p.add_argument("--state-b", required=True, help="vector file or state dump")
    p.add_argument("--shots", type=int, default=10_000, help="number of measurement shots (default 10000)")
    p.add_argument("--seed", type=int, required=True, help="seed for the sampled measurements")
    p.add_argument("--report", default=None, help="JSON report path (default stdout)")
    p.set_defaults(func=cmd_swap_test)

    p = sub.add_parser("observe", help="estimate <x|M|x> on the pipeline solution")
    p.add_argument("--matrix", required=True, help="sparse Hermitian matrix file")
    p.add_argument("--rhs", required=True, help="right-hand side vector file")
    p.add_argument("--M", required=True, help="observable, general matrix format")
    _add_hhl_flags(p)
    p.add_argument("--shots", type=int, default=10_000, help="number of measurement shots (default 10000)")
    p.add_argument("--seed", type=int, required=True, help="seed for the sampled measurements")
    p.add_argument("--report", default=None, help="JSON report path (default stdout)")
    p.set_defaults(func=cmd_observe)

    p = sub.add_parser("cost-model", help="evaluate the sparse Hamiltonian simulation cost formula")
    p.add_argument("--N", type=float, required=True, help="matrix dimension")
    p.add_argument("--s", type=float, required=True, help="row sparsity")
    p.add_argument("--t0", type=float, required=True, help="evolution time")
    p.add_argument("--epsH", type=float, required=True, help="simulation error")
    p.add_argument("--out", default=None, help="JSON path (default stdout)")
    p.set_defaults(func=cmd_cost_model)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        args.func(args)
    except FormatError as exc:
        print(f"{PROG}: error: {exc}", file=sys.stderr)
        return 2
    except (HHLError, ValueError) as exc:
        print(f"{PROG}: error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
