"""Command-line surface: reproducible experiments and verification suites.

Outputs are data (CSV primary, JSON mirror), never plots.  Every output
embeds a provenance header (command, seed, version) and identical
invocations, seed included, produce byte-identical files.  Exit codes:
0 success, 1 verification failure, 2 usage or input error.
"""

from __future__ import annotations

import argparse
import io
import json
import sys
from math import comb

import numpy as np

from . import __version__
from .bipartite import build_gamma, schmidt_decompose
from .fock import BasisCapExceeded, Statistics, basis_cap, basis_dimension, enumerate_basis
from .measure import annihilation_measurement, check_majorization, verify_mixture_identity
from .numerics import clamp_spectrum, entropy as spectral_entropy
from .pairing import PairingModel, default_g_grid, sweep
from .states import load_state
from .verify import SUITES, run_suite

_FLOAT_FORMAT = "{:.12g}"


def _fmt(value) -> str:
    if isinstance(value, (float, np.floating)):
        return _FLOAT_FORMAT.format(float(value))
    return str(value)


def _logical_argv(argv: list[str]) -> list[str]:
    # the output destination is not part of the run configuration
    kept, skip = [], False
    for tok in argv:
        if skip:
            skip = False
            continue
        if tok == "--output":
            skip = True
            continue
        if tok.startswith("--output="):
            continue
        kept.append(tok)
    return kept


def _provenance_lines(args: argparse.Namespace, seed: int) -> list[str]:
    return [
        f"# command: schmidtfock {' '.join(_logical_argv(args.raw_argv))}",
        f"# seed: {seed}",
        f"# version: {__version__}",
    ]


def _write_output(text: str, path: str | None) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def _emit_csv(args, seed: int, header: list[str], rows: list[list]) -> None:
    buf = io.StringIO()
    for line in _provenance_lines(args, seed):
        buf.write(line + "\n")
    buf.write(",".join(header) + "\n")
    for row in rows:
        buf.write(",".join(_fmt(v) for v in row) + "\n")
    _write_output(buf.getvalue(), args.output)


def _emit_json(args, seed: int, payload: dict) -> None:
    payload = dict(payload)
    payload.setdefault("command", f"schmidtfock {' '.join(_logical_argv(args.raw_argv))}")
    payload.setdefault("seed", seed)
    payload.setdefault("version", __version__)
    _write_output(json.dumps(payload, indent=1, sort_keys=True) + "\n", args.output)


def _parse_int_list(text: str) -> list[int]:
    try:
        return [int(tok) for tok in text.split(",") if tok.strip() != ""]
    except ValueError as exc:
        raise ValueError(f"expected a comma-separated integer list, got {text!r}") from exc


# --- subcommand handlers ------------------------------------------------------


def _cmd_basis(args) -> int:
    stats = Statistics.parse(args.statistics)
    dim = basis_dimension(stats, args.d, args.M)
    if args.list:
        basis = enumerate_basis(stats, args.d, args.M)
        rows = [[i, " ".join(map(str, occ))] for i, occ in enumerate(basis.occupations.tolist())]
        header = ["index", "occupation"]
    else:
        rows = [[stats.value, args.d, args.M, dim]]
        header = ["statistics", "d", "M", "dimension"]
    if args.format == "json":
        payload = {"statistics": stats.value, "d": args.d, "M": args.M, "dimension": dim}
        if args.list:
            basis = enumerate_basis(stats, args.d, args.M)
            payload["states"] = basis.occupations.tolist()
        _emit_json(args, args.seed, payload)
    else:
        _emit_csv(args, args.seed, header, rows)
    return 0


def _load_state_checked(path: str):
    with open(path) as fh:
        payload = json.load(fh)
    stats = Statistics.parse(payload.get("statistics", ""))
    d = int(payload.get("modes", 0))
    N = int(payload.get("particles", -1))
    dim = basis_dimension(stats, d, N)
    if dim > basis_cap():
        raise BasisCapExceeded(
            f"state file needs a basis of {dim} states, above the cap of {basis_cap()}"
        )
    return load_state(path)


def _cmd_analyze(args) -> int:
    state = _load_state_checked(args.statefile)
    if not state.normalized:
        state = state.normalized_copy()
    N = state.particles
    m_values = _parse_int_list(args.M)
    for M in m_values:
        if not 1 <= M <= N:
            raise ValueError(f"M={M} outside 1..N={N}")
    subspace = _parse_int_list(args.subspace) if args.subspace else None
    per_m = {}
    rows = []
    for M in m_values:
        schmidt = schmidt_decompose(build_gamma(state, M))
        lambdas = schmidt.sigma**2
        probs = clamp_spectrum(lambdas) / comb(N, M)
        entropy_vn = spectral_entropy(probs, "von_neumann", check_normalized=False)
        entropy_lin = spectral_entropy(probs, "linear", check_normalized=False)
        per_m[str(M)] = {
            "rank": schmidt.rank,
            "sigma": [float(s) for s in schmidt.sigma],
            "lambda": [float(v) for v in lambdas],
            "entropy_von_neumann": entropy_vn,
            "entropy_linear": entropy_lin,
        }
        for nu in range(schmidt.rank):
            rows.append(
                [M, schmidt.rank, entropy_vn, entropy_lin, nu, schmidt.sigma[nu], lambdas[nu]]
            )
    payload = {"particles": N, "modes": state.d, "per_M": per_m}
    if subspace is not None:
        from .blocks import blocked_rdm, sector_number

        ns = sector_number(state, tuple(subspace), atol=args.sector_tol)
        if ns is None:
            raise ValueError(
                "state does not conserve the particle number in the requested "
                "subspace (try a looser --sector-tol)"
            )
        payload["subspace"] = {"members": subspace, "particles": ns, "blocks": {}}
        for M in m_values:
            block_info = []
            for b in blocked_rdm(state, tuple(subspace), M, atol=args.sector_tol):
                spec = b.spectrum().values
                block_info.append(
                    {"m": b.m, "l": b.l, "trace": b.trace(), "lambda": [float(v) for v in spec]}
                )
                for i, v in enumerate(spec):
                    rows.append([M, f"block({b.m},{b.l})", b.trace(), "", i, "", v])
            payload["subspace"]["blocks"][str(M)] = block_info
    if args.format == "json":
        _emit_json(args, args.seed, payload)
    else:
        header = ["M", "rank", "entropy_vn", "entropy_linear", "nu", "sigma", "lambda"]
        _emit_csv(args, args.seed, header, rows)
    return 0


def _cmd_measure(args) -> int:
    state = _load_state_checked(args.statefile)
    if not state.normalized:
        state = state.normalized_copy()
    N = state.particles
    M = args.survivors
    if not 1 <= M <= N - 1:
        raise ValueError(f"--survivors must satisfy 1 <= M <= N-1={N - 1}")
    L = args.L if args.L is not None else min(1, M)
    if not 1 <= L <= M:
        raise ValueError(f"--L must satisfy 1 <= L <= M={M}")
    ensemble = annihilation_measurement(state, M)
    residual = verify_mixture_identity(state, M, L, ensemble)
    report = check_majorization(state, M, L, ensemble)
    ok = report.holds and residual < 1e-9 and all(
        report.entropy_decreased(kind) for kind in report.entropy_before
    )
    if args.format == "json":
        payload = {
            "check": "measurement_monotonicity",
            "instances": 1,
            "failures": [] if ok else [f"residual={residual:.3e}, margin={report.min_margin:.3e}"],
            "min_margin": report.min_margin,
            "survivors": M,
            "L": L,
            "mixture_residual": residual,
            "entropy_before": report.entropy_before,
            "entropy_after": report.entropy_after,
            "branches": [
                {"label": b.label, "probability": b.probability} for b in ensemble.branches
            ],
        }
        _emit_json(args, args.seed, payload)
    else:
        rows = [[b.label.replace(",", " "), b.probability] for b in ensemble.branches]
        rows.append(["mixture_residual", residual])
        rows.append(["majorization_min_margin", report.min_margin])
        for kind in report.entropy_before:
            rows.append([f"entropy_before_{kind}", report.entropy_before[kind]])
            rows.append([f"entropy_after_{kind}", report.entropy_after[kind]])
        _emit_csv(args, args.seed, ["quantity", "value"], rows)
    return 0 if ok else 1


def _cmd_transfer(args) -> int:
    from .verify import suite_transfer

    result = suite_transfer(args.instances, args.seed)
    payload = result.as_report()
    if args.format == "csv":
        rows = [
            ["check", payload["check"]],
            ["instances", payload["instances"]],
            ["min_margin", payload["min_margin"]],
            ["failures", ";".join(payload["failures"])],
        ]
        _emit_csv(args, args.seed, ["quantity", "value"], rows)
    else:
        _emit_json(args, args.seed, payload)
    return 0 if not payload["failures"] else 1


def _cmd_verify(args) -> int:
    names = sorted(SUITES) if args.suite == "all" else [args.suite]
    reports = []
    failed = False
    for name in names:
        result = run_suite(name, args.instances, args.seed)
        reports.append(result.as_report())
        failed = failed or bool(result.failures)
    payload = reports[0] if len(reports) == 1 else {"check": "all", "suites": reports,
                                                    "seed": args.seed,
                                                    "instances": args.instances,
                                                    "failures": [f for r in reports for f in r["failures"]],
                                                    "min_margin": min(r["min_margin"] for r in reports)}
    if args.format == "csv":
        rows = []
        for rep in reports if len(reports) > 1 else [payload]:
            rows.append([rep["check"], rep["instances"], rep["min_margin"],
                         ";".join(rep["failures"])])
        _emit_csv(args, args.seed, ["check", "instances", "min_margin", "failures"], rows)
    else:
        _emit_json(args, args.seed, payload)
    return 1 if failed else 0


_SWEEP_COLUMNS = {
    "sweep-spectrum": ("spectrum1", "spectrum2_blocks"),
    "sweep-entropy": ("entropy_increments",),
    "sweep-overlap": ("overlap_k",),
}


def _cmd_sweep(args) -> int:
    stats = Statistics.parse(args.statistics)
    model = PairingModel(stats, args.n, args.m, eps=args.eps, coupling=0.0)
    observables = _SWEEP_COLUMNS[args.command]
    k_list = _parse_int_list(args.k) if args.command == "sweep-overlap" else (1,)
    grid = default_g_grid(args.g_points, args.g_min, args.g_max)
    table = sweep(model, grid, observables=observables, k_list=k_list, jobs=args.jobs)
    keep = [c for c in table.columns if c != "energy" or args.energy]
    idx = [table.columns.index(c) for c in keep]
    if args.format == "json":
        payload = {
            "statistics": stats.value,
            "n": args.n,
            "m": args.m,
            "columns": keep,
            "rows": [[float(v) for v in row[idx]] for row in table.rows],
        }
        _emit_json(args, args.seed, payload)
    else:
        _emit_csv(args, args.seed, keep, [list(row[idx]) for row in table.rows])
    return 0


# --- parser -------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="schmidtfock",
        description="Fock-space Schmidt decompositions, reduced densities and pairing sweeps",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--output", default=None, help="output file (default stdout)")
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("--seed", type=int, default=0, help="seed recorded in the output")

    p_basis = sub.add_parser("basis", help="basis dimensions and listings")
    p_basis.add_argument("--statistics", required=True, choices=("boson", "fermion"))
    p_basis.add_argument("--d", type=int, required=True)
    p_basis.add_argument("--M", type=int, required=True)
    p_basis.add_argument("--list", action="store_true", help="list the configurations")
    add_common(p_basis)
    p_basis.set_defaults(handler=_cmd_basis)

    p_an = sub.add_parser("analyze", help="spectra, entropies and Schmidt ranks of a state file")
    p_an.add_argument("statefile")
    p_an.add_argument("--M", required=True, help="comma-separated list of M values")
    p_an.add_argument("--subspace", default=None,
                      help="comma-separated mode subset: also report sector blocks")
    p_an.add_argument("--sector-tol", type=float, default=1e-12, dest="sector_tol",
                      help="amplitude tolerance for the sector check on file states")
    add_common(p_an)
    p_an.set_defaults(handler=_cmd_analyze)

    p_me = sub.add_parser("measure", help="annihilation measurement ensemble and monotonicity")
    p_me.add_argument("statefile")
    p_me.add_argument("--survivors", type=int, required=True, help="particles M left per branch")
    p_me.add_argument("--L", type=int, default=None, help="body count for the monotonicity check")
    add_common(p_me)
    p_me.set_defaults(handler=_cmd_measure)

    p_tr = sub.add_parser("transfer", help="particle-transfer entropy-bound check")
    p_tr.add_argument("--instances", type=int, default=100)
    add_common(p_tr)
    p_tr.set_defaults(handler=_cmd_transfer)

    p_ve = sub.add_parser("verify", help="randomized invariant suites")
    p_ve.add_argument("--suite", required=True, choices=tuple(sorted(SUITES)) + ("all",))
    p_ve.add_argument("--instances", type=int, default=50)
    add_common(p_ve)
    p_ve.set_defaults(handler=_cmd_verify)

    for name, helptext in (
        ("sweep-spectrum", "reduced-density block eigenvalues across the coupling grid"),
        ("sweep-entropy", "block entropy increments across the coupling grid"),
        ("sweep-overlap", "truncated-expansion overlaps across the coupling grid"),
    ):
        p_sw = sub.add_parser(name, help=helptext)
        p_sw.add_argument("--statistics", required=True, choices=("boson", "fermion"))
        p_sw.add_argument("--n", type=int, required=True, help="pair levels")
        p_sw.add_argument("--m", type=int, required=True, help="pair count")
        p_sw.add_argument("--eps", type=float, default=1.0, help="level spacing")
        p_sw.add_argument("--g-points", type=int, default=60, dest="g_points")
        p_sw.add_argument("--g-min", type=float, default=1e-2, dest="g_min")
        p_sw.add_argument("--g-max", type=float, default=1e2, dest="g_max")
        p_sw.add_argument("--jobs", type=int, default=1, help="parallel grid evaluation")
        p_sw.add_argument("--energy", action="store_true", help="include the energy column")
        if name == "sweep-overlap":
            p_sw.add_argument("--k", default="1", help="comma-separated truncation orders")
        add_common(p_sw)
        p_sw.set_defaults(handler=_cmd_sweep)
    return parser


def run(argv) -> int:
    """Entry point; returns 0 on success, 1 on verification failure, 2 on usage error."""
    argv = list(argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        code = exc.code if isinstance(exc.code, int) else 0
        return code
    args.raw_argv = argv
    try:
        return args.handler(args)
    except BrokenPipeError:
        return 0
    except (ValueError, KeyError, OSError, json.JSONDecodeError, BasisCapExceeded) as exc:
        print(f"schmidtfock: error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run(sys.argv[1:]))
