"""Command-line interface.

Exit codes: 0 success, 2 invalid input, 3 exhaustion or unmet search target,
4 integrity failure of a descriptor.
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import sys
from pathlib import Path

import numpy as np

from .code import assemble_code
from .decoder import DecoderConfig
from .errors import MargulisError, ValidationError
from .formats import load_descriptor, write_alist, write_coords, write_descriptor
from .generators import build_generating_sets
from .search import search_code
from .simulate import TrialPolicy, run_sweep
from .tanner import format_report, girth_scaling_report

EXIT_OK, EXIT_VALIDATION, EXIT_EXHAUSTED, EXIT_INTEGRITY = 0, 2, 3, 4


def _fmt_girth(g) -> str:
    return "inf" if math.isinf(g) else str(int(g))


def summary_line(code) -> str:
    """``n k girth_x girth_z dv-profile dc`` as space-separated fields."""
    prof = code.degree_profile()
    dv = ",".join(map(str, prof["d_v"]))
    dc = ",".join(map(str, prof["d_c"]))
    return f"{code.n} {code.k} {_fmt_girth(code.girth_x)} {_fmt_girth(code.girth_z)} {dv} {dc}"


def _eta(value: str):
    if value == "auto":
        return value
    try:
        return int(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"eta must be an integer or 'auto', got {value!r}")


def _max_iters(value: str):
    if value == "n":
        return None
    try:
        out = int(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"--max-iters takes an integer or 'n', got {value!r}")
    if out < 1:
        raise argparse.ArgumentTypeError("--max-iters must be positive")
    return out


def _p_list(value: str) -> list[float]:
    try:
        return [float(x) for x in value.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad probability list {value!r}")


def cmd_construct(args) -> int:
    spec = build_generating_sets(
        args.p, args.size_a, args.size_b, args.eta, seed=args.seed,
        allow_inverse_collisions=args.allow_inverse_collisions,
    )
    code = assemble_code(None, spec)
    if args.out:
        write_descriptor(code, args.out)
    print(summary_line(code))
    print(f"# label {code.label} eta {spec.eta} (sqrt(7r) = {spec.eta_bound:.2f}) "
          f"digest {code.digest()[:16]}", file=sys.stderr)
    return EXIT_OK


def cmd_search(args) -> int:
    result = search_code(
        args.p, args.size_a, args.size_b, args.target_girth, args.budget,
        seed=args.seed, target_k=args.target_k,
    )
    log_doc = {
        "p": args.p,
        "size_a": args.size_a,
        "size_b": args.size_b,
        "target_girth": args.target_girth,
        "target_k": args.target_k,
        "budget": args.budget,
        "seed": args.seed,
        "eta_bound": math.sqrt(7 * (args.size_a + args.size_b)),
        "target_reached": result.target_reached,
        "candidates": [c.to_json() for c in result.log],
    }
    if args.log:
        Path(args.log).write_text(json.dumps(log_doc, indent=1) + "\n", encoding="utf-8")
    code = result.code
    if code is None:
        print(f"no valid candidate among {result.examined}", file=sys.stderr)
        return EXIT_EXHAUSTED
    if args.out:
        write_descriptor(code, args.out)
    print(summary_line(code))
    status = "reached" if result.target_reached else "not-reached"
    print(f"# target girth {args.target_girth} {status} after {result.examined} candidates; "
          f"label {code.label}", file=sys.stderr)
    if result.target_k is not None and not result.k_matched:
        print(f"# k={code.k} differs from requested {result.target_k}", file=sys.stderr)
    return EXIT_OK if result.target_reached else EXIT_EXHAUSTED


def cmd_inspect(args) -> int:
    code, doc = load_descriptor(args.code, verify=True)
    print(summary_line(code))
    print(f"label {code.label}")
    print(f"redundant rows hx {code.redundancy_x} hz {code.redundancy_z}")
    print("verified")
    matrix = code.hx if args.matrix == "hx" else code.hz
    if args.export_alist:
        write_alist(matrix, args.export_alist)
    if args.export_coords:
        write_coords(matrix, args.export_coords)
    return EXIT_OK


def cmd_simulate(args) -> int:
    code, doc = load_descriptor(args.code, verify=not args.no_verify)
    if args.p_list is not None:
        p_list = args.p_list
    elif args.p_start is not None and args.p_end is not None:
        p_list = np.linspace(args.p_start, args.p_end, args.points).round(10).tolist()
    else:
        raise ValidationError("give --p-list or both --p-start and --p-end")
    policy = TrialPolicy(args.min_trials, args.target_failures, args.max_trials)
    cfg = DecoderConfig(
        max_iterations=args.max_iters,
        bp_variant=args.bp_variant,
        schedule=args.schedule,
        osd_order=args.osd_order,
        osd_weighting=args.osd_weighting,
    )
    records = run_sweep(
        code, p_list, policy, cfg, seed=args.seed, workers=args.workers,
        out=args.out, code_id=args.code_id or doc.get("label"),
    )
    for rec in records:
        flag = " truncated" if rec.truncated else ""
        print(f"p={rec.p_phys:.4g} trials={rec.trials} failures={rec.failures} "
              f"ler={rec.ler:.3e} ci=[{rec.ci_low:.3e},{rec.ci_high:.3e}]{flag}")
    return EXIT_OK


def cmd_report(args) -> int:
    codes = [load_descriptor(path, verify=False)[0] for path in args.code]
    rows = girth_scaling_report(codes)
    sys.stdout.write(format_report(rows, "csv" if args.csv else "text"))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qmargulis", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def sizes(p):
        p.add_argument("--p", type=int, required=True, help="prime modulus of SL(2, p)")
        p.add_argument("--size-a", type=int, required=True, help="left generators |A|")
        p.add_argument("--size-b", type=int, required=True, help="right generators |B|")

    c = sub.add_parser("construct", help="build one code and write its descriptor")
    sizes(c)
    c.add_argument("--eta", type=_eta, default="auto")
    c.add_argument("--seed", type=int, default=None, help="shuffle the pair order")
    c.add_argument("--allow-inverse-collisions", action="store_true",
                   help="accept generators that are inverses of each other")
    c.add_argument("--out")
    c.set_defaults(func=cmd_construct)

    s = sub.add_parser("search", help="search generator choices for a girth target")
    sizes(s)
    s.add_argument("--target-girth", type=int, required=True)
    s.add_argument("--target-k", type=int, default=None)
    s.add_argument("--budget", type=int, default=10_000)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--out")
    s.add_argument("--log", help="write the candidate log as JSON")
    s.set_defaults(func=cmd_search)

    i = sub.add_parser("inspect", help="verify a descriptor and export matrices")
    i.add_argument("--code", required=True)
    i.add_argument("--matrix", choices=("hx", "hz"), default="hx")
    i.add_argument("--export-alist")
    i.add_argument("--export-coords")
    i.set_defaults(func=cmd_inspect)

    m = sub.add_parser("simulate", help="logical error rate under depolarizing noise")
    m.add_argument("--code", required=True)
    m.add_argument("--p-list", type=_p_list)
    m.add_argument("--p-start", type=float)
    m.add_argument("--p-end", type=float)
    m.add_argument("--points", type=int, default=5)
    m.add_argument("--min-trials", type=int, default=10_000)
    m.add_argument("--target-failures", type=int, default=100)
    m.add_argument("--max-trials", type=int, default=1_000_000)
    m.add_argument("--max-iters", type=_max_iters, default=None, help="integer or 'n'")
    m.add_argument("--osd-order", type=int, default=10)
    m.add_argument("--osd-weighting", choices=("soft", "hamming"), default="soft")
    m.add_argument("--bp-variant", choices=("sum-product", "min-sum"), default="sum-product")
    m.add_argument("--schedule", choices=("flooding", "serial"), default="flooding")
    m.add_argument("--seed", type=int, default=0)
    m.add_argument("--workers", type=int, default=1)
    m.add_argument("--code-id")
    m.add_argument("--no-verify", action="store_true", help="skip descriptor verification")
    m.add_argument("--out")
    m.set_defaults(func=cmd_simulate)

    r = sub.add_parser("report", help="girth next to log n / log(2 d_c)")
    r.add_argument("--code", action="append", required=True)
    r.add_argument("--csv", action="store_true")
    r.set_defaults(func=cmd_report)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_VALIDATION if exc.code else EXIT_OK
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING)
    try:
        return args.func(args)
    except MargulisError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except KeyboardInterrupt:
        print("interrupted; partial results kept", file=sys.stderr)
        return 130


if __name__ == "__main__":
    sys.exit(main())
