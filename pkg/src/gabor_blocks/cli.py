"""Command-line entry point: ``gabor-blocks <command> [options]``.

Exit codes: 0 frame / success, 1 usage or parse error, 2 not a frame,
3 reconstruction residual above ``--threshold``.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import sys
from pathlib import Path

import numpy as np

from . import bench as benchmod
from .blockdiag import ROUTES, BlockDiagonalization, block_equivalence_route
from .core import GaborSystem, PrecheckVerdict, frame_bounds, support_frame_precheck
from .cyclotomic import divisor_set, find_tiling_complement, predicted_zero_diagonals
from .docio import (
    DocumentError,
    SystemDocument,
    emit_document,
    emit_signals,
    matrix_to_csv,
    parse_document,
    parse_signals,
)
from .errors import GaborError, NotAFrameError
from .numerics import ToleranceConfig
from .reconstruct import build_plan, reconstruct, reconstruct_dense_oracle
from .structure import cyclic_subgroup, detect_subgroup, diagonal_support, frame_operator_factored
from .windows import interlace_is_diagonal, interlaced_window

log = logging.getLogger("gabor_blocks")

EXIT_OK, EXIT_USAGE, EXIT_NOT_FRAME, EXIT_RESIDUAL = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _read(path):
    if path is None or path == "-":
        return sys.stdin.read(), "<stdin>"
    try:
        return Path(path).read_text(), str(path)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _write(path, text: str):
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _load_system(args) -> GaborSystem:
    text, source = _read(args.input)
    return parse_document(text, source).to_system()


def _int_list(text: str) -> list[int]:
    try:
        return [int(t) for t in text.replace(",", " ").split()]
    except ValueError:
        raise UsageError(f"expected a comma-separated integer list, got {text!r}") from None


def route_name(bd: BlockDiagonalization) -> str:
    kind = bd.transform.kind
    if kind == "identity":
        return "identity/diagonal" if bd.ell == bd.n else "dense"
    return "block-fourier" if kind == "block_fourier" else "permutation"


def _subgroup_json(info) -> dict:
    return {"is_subgroup": info.is_subgroup, "order": info.order, "generator": info.generator}


def analyze_system(sys_: GaborSystem, cfg: ToleranceConfig, route: str = "auto") -> dict:
    n = sys_.N
    s = frame_operator_factored(sys_)
    verdict = frame_bounds(s, cfg)
    bd = block_equivalence_route(sys_, cfg, route)
    predicted = predicted_zero_diagonals(n, sys_.L)
    measured = diagonal_support(s, cfg).zeros()
    return {
        "N": n,
        "L": list(sys_.L),
        "K": list(sys_.K),
        "L_subgroup": _subgroup_json(detect_subgroup(sys_.L, n)),
        "K_subgroup": _subgroup_json(detect_subgroup(sys_.K, n)),
        "route": route_name(bd),
        "ell": bd.ell,
        "block_sizes": bd.block_sizes,
        "is_frame": verdict.is_frame,
        "lower_bound": verdict.lower_bound,
        "upper_bound": verdict.upper_bound,
        "precheck": support_frame_precheck(sys_, cfg).value,
        "divisor_set": list(divisor_set(n, sys_.L)),
        "predicted_zero_diagonals": list(predicted),
        "measured_zero_diagonals": list(measured),
        "prediction_sound": set(predicted) <= set(measured),
    }


def cmd_analyze(args, cfg) -> int:
    report = analyze_system(_load_system(args), cfg, args.route)
    if args.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["field", "value"])
        for k, v in report.items():
            w.writerow([k, json.dumps(v)])
        _write(args.output, buf.getvalue())
    else:
        _write(args.output, json.dumps(report, indent=2) + "\n")
    if not report["is_frame"]:
        reason = "support pre-check" if report["precheck"] == PrecheckVerdict.CANNOT_BE_FRAME.value else "singular frame operator"
        print(f"not a frame ({reason})", file=sys.stderr)
        return EXIT_NOT_FRAME
    return EXIT_OK


def cmd_window(args, cfg) -> int:
    n, p, r = args.N, args.p, args.r
    if p <= 1 or n % p:
        raise UsageError(f"p={p} must divide N={n} and exceed 1")
    if r < 1 or n % r:
        raise UsageError(f"r={r} must divide N={n}")
    if n > p * p:
        raise UsageError(f"N={n} exceeds p**2={p * p}")
    g = interlaced_window(n, p, args.family, cfg)
    sys_ = GaborSystem(g, cyclic_subgroup(n, r), cyclic_subgroup(n, p))
    meta = {"p": p, "r": r, "family": args.family, "diagonal_predicted": interlace_is_diagonal(n, p, r)}
    _write(args.output, emit_document(SystemDocument.from_system(sys_, meta)))
    return EXIT_OK


def cmd_reconstruct(args, cfg) -> int:
    sys_ = _load_system(args)
    if args.signals is None:
        rng = np.random.default_rng(args.seed)
        signals = [rng.standard_normal(sys_.N) + 1j * rng.standard_normal(sys_.N)]
    else:
        text, source = _read(args.signals)
        signals = parse_signals(text, sys_.N, source)
    try:
        plan = build_plan(sys_, cfg, route=args.route)
    except NotAFrameError as exc:
        print(f"not a frame: {exc}", file=sys.stderr)
        return EXIT_NOT_FRAME
    out = [reconstruct(plan, x) for x in signals]
    residual = max((float(np.max(np.abs(y - x))) for x, y in zip(signals, out)), default=0.0)
    oracle_gap = max(
        (float(np.max(np.abs(y - reconstruct_dense_oracle(sys_, x, cfg)))) for x, y in zip(signals, out)),
        default=0.0,
    )
    _write(args.output, emit_signals(out))
    report = {"signals": len(out), "route": route_name(plan.blockdiag), "max_residual": residual, "max_oracle_gap": oracle_gap}
    print(json.dumps(report), file=sys.stderr if args.output in (None, "-") else sys.stdout)
    if args.threshold is not None and residual > args.threshold:
        return EXIT_RESIDUAL
    return EXIT_OK


def cmd_bench(args, cfg) -> int:
    sizes = _int_list(args.sizes)
    routes = benchmod.BENCH_ROUTES if args.route == "auto" else (args.route,)
    rows = benchmod.run_bench(sizes, routes, args.reps, args.seed, cfg)
    if args.format == "json":
        _write(args.output, json.dumps([r.as_dict() for r in rows], indent=2) + "\n")
    else:
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=benchmod.CSV_COLUMNS, lineterminator="\n")
        w.writeheader()
        for r in rows:
            w.writerow(r.as_dict())
        _write(args.output, buf.getvalue())
    return EXIT_OK


def cmd_blocks(args, cfg) -> int:
    bd = block_equivalence_route(_load_system(args), cfg, args.route)
    if args.format == "csv":
        parts = [f"# block {i} ({b.shape[0]}x{b.shape[0]})\n" + matrix_to_csv(b) for i, b in enumerate(bd.blocks)]
        _write(args.output, "".join(parts))
        return EXIT_OK
    t = bd.transform
    doc = {
        "route": route_name(bd),
        "transform": {"kind": t.kind, "permutation": list(t.permutation) if t.permutation else None, "m": t.m, "k": t.k},
        "ell": bd.ell,
        "blocks": [[[[z.real, z.imag] for z in row] for row in b] for b in bd.blocks],
    }
    _write(args.output, json.dumps(doc) + "\n")
    return EXIT_OK


def cmd_zeros(args, cfg) -> int:
    if args.input is not None:
        sys_ = _load_system(args)
        n, L = sys_.N, list(sys_.L)
    else:
        if args.N is None or args.L is None:
            raise UsageError("zeros needs --input or both --N and --L")
        n, L = args.N, _int_list(args.L)
        if not L:
            raise UsageError("--L must be nonempty")
    report = {"N": n, "L": sorted({x % n for x in L}), "divisor_set": list(divisor_set(n, L)),
              "predicted_zero_diagonals": list(predicted_zero_diagonals(n, L))}
    if args.input is not None:
        report["measured_zero_diagonals"] = list(diagonal_support(frame_operator_factored(sys_), cfg).zeros())
    _write(args.output, json.dumps(report) + "\n")
    return EXIT_OK


def cmd_tile(args, cfg) -> int:
    A = _int_list(args.A)
    if not A:
        raise UsageError("--A must be nonempty")
    comp = find_tiling_complement(A, args.N)
    report = {"N": args.N, "A": sorted({a % args.N for a in A}), "complement": None if comp is None else list(comp),
              "divisor_set": list(divisor_set(args.N, A))}
    _write(args.output, json.dumps(report) + "\n")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", help="system document (JSON); '-' for stdin")
    common.add_argument("--output", help="output path; stdout when omitted")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--zero-tol", type=float, default=ToleranceConfig().zero_tol)
    common.add_argument("--route", choices=ROUTES, default="auto")
    common.add_argument("--format", choices=("json", "csv"), default=None, help="default json (csv for bench)")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="gabor-blocks", description="Block-structured finite Gabor frame toolkit.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", parents=[common], help="structure and frame report for a system")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("window", parents=[common], help="interlaced window system document")
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--p", type=int, required=True, help="order of the translation subgroup")
    p.add_argument("--r", type=int, default=None, help="order of the modulation subgroup (default p)")
    p.add_argument("--family", choices=("basis", "fourier"), default="fourier")
    p.set_defaults(func=cmd_window)

    p = sub.add_parser("reconstruct", parents=[common], help="blockwise reconstruction of signals")
    p.add_argument("--signals", help="JSON-lines signal file; a seeded random signal when omitted")
    p.add_argument("--threshold", type=float, default=None, help="exit 3 if the max residual exceeds this")
    p.set_defaults(func=cmd_reconstruct)

    p = sub.add_parser("bench", parents=[common], help="blockwise vs dense timing table")
    p.add_argument("--sizes", default="64,256", help="comma-separated list of N")
    p.add_argument("--reps", type=int, default=3)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("blocks", parents=[common], help="dump the blocks of the chosen route")
    p.set_defaults(func=cmd_blocks)

    p = sub.add_parser("zeros", parents=[common], help="cyclotomic zero-diagonal predictions")
    p.add_argument("--N", type=int)
    p.add_argument("--L")
    p.set_defaults(func=cmd_zeros)

    p = sub.add_parser("tile", parents=[common], help="search a tiling complement of A in Z_N")
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--A", required=True)
    p.set_defaults(func=cmd_tile)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    if getattr(args, "r", "unset") is None:
        args.r = args.p
    if args.format is None:
        args.format = "csv" if args.command == "bench" else "json"
    try:
        cfg = ToleranceConfig(zero_tol=args.zero_tol)
        return args.func(args, cfg)
    except (UsageError, DocumentError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NotAFrameError as exc:
        print(f"not a frame: {exc}", file=sys.stderr)
        return EXIT_NOT_FRAME
    except (GaborError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
