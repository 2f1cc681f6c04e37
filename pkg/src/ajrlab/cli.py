"""Command-line front end: every capability as a subcommand with JSON or CSV
output on stdout (or a file via --out).

Exit codes: 0 success, 1 runtime error (unreadable file, malformed profile,
invalid construction), 2 flag validation error.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

from . import axioms, montecarlo, polyhedron, theory
from .core import (
    ElectionSpec,
    ProfileFormatError,
    bits_from_mask,
    enumerate_committees,
    mask_from_bits,
    parse_profile,
    serialize_profile,
)


class CommandError(Exception):
    """Runtime failure with a one-line diagnostic (exit code 1)."""


def _parse_grid(text: str) -> list[float]:
    """'start:stop:step' inclusive of both ends (within half a step)."""
    parts = text.split(":")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"grid must be start:stop:step, got {text!r}")
    try:
        start, stop, step = (float(f) for f in parts)
    except ValueError:
        raise argparse.ArgumentTypeError(f"grid fields must be numbers: {text!r}")
    if step <= 0 or stop < start:
        raise argparse.ArgumentTypeError(f"need start <= stop and step > 0: {text!r}")
    values = []
    i = 0
    while True:
        value = start + i * step
        if value > stop + step * 1e-9:
            break
        values.append(min(value, stop))
        i += 1
    return values


def _probability(text: str) -> float:
    value = float(text)
    if not 0.0 <= value <= 1.0:
        raise argparse.ArgumentTypeError(f"probability must be in [0,1], got {text}")
    return value


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be a positive integer, got {text}")
    return value


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ajrlab",
        description=(
            "Axiom checks, phase-transition analytics, and Monte Carlo "
            "sweeps for approval-based committee elections."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_phase = sub.add_parser("phase", help="transition probabilities for one k")
    p_phase.add_argument("--k", type=_positive_int, required=True)
    p_phase.add_argument("--tol", type=float, default=1e-12)

    p_theory = sub.add_parser(
        "theory", help="analytic quantities at (k, ell, p), or a curve CSV"
    )
    p_theory.add_argument("--k", type=_positive_int, required=True)
    p_theory.add_argument("--ell", type=_positive_int, required=True)
    p_theory.add_argument("--p", type=_probability)
    p_theory.add_argument(
        "--curve", action="store_true",
        help="emit k,ell,p,T,U rows for all stop levels over a p grid",
    )
    p_theory.add_argument(
        "--grid", type=_parse_grid, default=None,
        help="p grid for --curve as start:stop:step (default 0:1:0.005)",
    )

    p_check = sub.add_parser("check", help="axiom checks on a profile file")
    p_check.add_argument("--file", required=True)
    group = p_check.add_mutually_exclusive_group()
    group.add_argument(
        "--committee", help="m-character 0/1 mask of the committee to check"
    )
    group.add_argument(
        "--all", action="store_true", help="report every committee"
    )

    p_classify = sub.add_parser("classify", help="existence regime at (k[, m], p)")
    p_classify.add_argument("--k", type=_positive_int, required=True)
    p_classify.add_argument("--m", type=_positive_int)
    p_classify.add_argument("--p", type=_probability, required=True)
    p_classify.add_argument("--tol", type=float, default=1e-9)

    p_sample = sub.add_parser("sample", help="draw a random profile")
    p_sample.add_argument("--n", type=_positive_int, required=True)
    p_sample.add_argument("--m", type=_positive_int, required=True)
    p_sample.add_argument("--k", type=_positive_int, required=True)
    p_sample.add_argument("--p", type=_probability, required=True)
    p_sample.add_argument("--seed", type=int, required=True)
    p_sample.add_argument("--out")

    p_sweep = sub.add_parser("sweep", help="existence frequency over a p grid")
    p_sweep.add_argument("--k", type=_positive_int, required=True)
    p_sweep.add_argument("--m", type=_positive_int, required=True)
    p_sweep.add_argument("--n", type=_positive_int, required=True)
    p_sweep.add_argument("--grid", type=_parse_grid, required=True)
    p_sweep.add_argument("--trials", type=_positive_int, required=True)
    p_sweep.add_argument("--seed", type=int, required=True)
    p_sweep.add_argument("--out", required=True)

    p_verify = sub.add_parser(
        "verify-appendix", help="numeric scans behind the analytic inequalities"
    )
    p_verify.add_argument(
        "--which", choices=["prop8", "claim4", "prop1"], required=True
    )
    p_verify.add_argument(
        "--max", type=_positive_int, default=None,
        help="scan bound (default: prop8 200, claim4 1000, prop1 64)",
    )

    p_poly = sub.add_parser(
        "polyhedron", help="build a boundary constraint system and test a point"
    )
    p_poly.add_argument("--m", type=_positive_int, required=True)
    p_poly.add_argument("--k", type=_positive_int, required=True)
    p_poly.add_argument("--ell", type=_positive_int, required=True)
    p_poly.add_argument("--p", type=_probability, required=True)
    p_poly.add_argument("--case", choices=["neg", "pos"], required=True)
    p_poly.add_argument("--test", choices=["expectation", "inner"], required=True)
    p_poly.add_argument(
        "--n", type=_positive_int, default=1_000_000,
        help="voter count for the inner-point test",
    )
    return parser


def _emit(text: str, out_path: str | None) -> None:
    if out_path is None:
        sys.stdout.write(text)
    else:
        try:
            with open(out_path, "w") as handle:
                handle.write(text)
        except OSError as exc:
            raise CommandError(f"cannot write {out_path}: {exc}")


def _print_json(payload: dict) -> None:
    sys.stdout.write(json.dumps(payload) + "\n")


def _cmd_phase(args) -> int:
    if args.k < 2:
        raise CommandError("phase analysis needs k >= 2")
    _print_json(theory.transition_report(args.k, args.tol).to_json_dict())
    return 0


def _cmd_theory(args) -> int:
    if args.curve:
        grid = args.grid if args.grid is not None else _parse_grid("0:1:0.005")
        rows = theory.stopped_average_curve(args.k, args.ell, grid)
        lines = ["k,ell,p,T,U"]
        lines += [f"{k},{ell},{p:.6f},{t},{u:.12g}" for k, ell, p, t, u in rows]
        sys.stdout.write("\n".join(lines) + "\n")
        return 0
    if args.p is None:
        raise CommandError("theory needs --p unless --curve is given")
    _print_json(theory.theory_point(args.k, args.ell, args.p).to_json_dict())
    return 0


def _read_profile(path: str):
    try:
        with open(path) as handle:
            text = handle.read()
    except OSError as exc:
        raise CommandError(f"cannot read {path}: {exc}")
    try:
        return parse_profile(text)
    except ProfileFormatError as exc:
        raise CommandError(f"{path}: {exc}")


def _cmd_check(args) -> int:
    profile = _read_profile(args.file)
    spec = profile.spec
    if args.committee is not None:
        if len(args.committee) != spec.m:
            raise CommandError(
                f"--committee needs {spec.m} characters, got {len(args.committee)}"
            )
        try:
            committee = mask_from_bits(args.committee)
        except ValueError as exc:
            raise CommandError(f"--committee: {exc}")
        if committee.bit_count() != spec.k:
            raise CommandError(
                f"--committee must select exactly k={spec.k} candidates"
            )
        report = axioms.evaluate_committee(profile, committee)
        sys.stdout.write(f"committee={args.committee}\n")
        sys.stdout.write(report.to_record(spec.m))
        return 0
    if args.all:
        for committee in enumerate_committees(spec):
            report = axioms.evaluate_committee(profile, committee)
            sys.stdout.write(f"committee={bits_from_mask(committee, spec.m)}\n")
            sys.stdout.write(report.to_record(spec.m))
            sys.stdout.write("\n")
    count, first = axioms.ajr_committee_count(profile)
    sys.stdout.write(f"ajr_committees={count}\n")
    first_bits = bits_from_mask(first, spec.m) if first is not None else "none"
    sys.stdout.write(f"first_ajr={first_bits}\n")
    return 0


def _cmd_classify(args) -> int:
    payload: dict = {"k": args.k, "p": args.p, "tol": args.tol}
    if args.k == 1:
        # A single seat is always satisfiable: elect a commonly approved
        # candidate if one exists, otherwise no cohesive group exists.
        payload["regime"] = theory.Regime.EXISTS_WHP.value
        if args.m is not None:
            payload["m"] = args.m
        _print_json(payload)
        return 0
    if args.m is None:
        report = theory.classify_by_transition(args.k, args.p, args.tol)
        payload["regime"] = report.regime.value
        payload["p1_star"] = theory.lower_transition(args.k)
        payload["p2_star"] = theory.upper_transition(args.k)
    else:
        if args.m <= args.k:
            raise CommandError("classify with --m needs m > k")
        report = theory.classify_by_group_averages(args.k, args.m, args.p, args.tol)
        payload["m"] = args.m
        payload["regime"] = report.regime.value
        payload["ell"] = report.ell
        payload["u_ell"] = report.u_ell
    _print_json(payload)
    return 0


def _cmd_sample(args) -> int:
    try:
        spec = ElectionSpec(args.n, args.m, args.k)
    except ValueError as exc:
        raise CommandError(str(exc))
    profile = montecarlo.sample_profile(spec, args.p, args.seed)
    _emit(serialize_profile(profile), args.out)
    return 0


def _cmd_sweep(args) -> int:
    try:
        spec = ElectionSpec(args.n, args.m, args.k)
    except ValueError as exc:
        raise CommandError(str(exc))
    records = montecarlo.sweep(spec, args.grid, args.trials, args.seed)
    _emit(montecarlo.sweep_csv(records), args.out)
    return 0


def _cmd_verify(args) -> int:
    start = time.perf_counter()
    payload: dict = {"which": args.which}
    if args.which == "prop8":
        bound = args.max if args.max is not None else 200
        result = theory.verify_product_bound(bound)
        payload.update(max=bound, ok=result.ok, checked=result.checked)
        if result.first_failure is not None:
            payload["first_failure"] = list(result.first_failure)
    elif args.which == "claim4":
        bound = args.max if args.max is not None else 1000
        result = theory.verify_dip_product(bound)
        payload.update(max=bound, ok=result.ok, checked=result.checked)
        if result.first_failure is not None:
            payload["first_failure"] = list(result.first_failure)
    else:
        bound = args.max if args.max is not None else 64
        if bound < 3:
            raise CommandError("prop1 needs --max >= 3")
        failures = [k for k in range(3, bound + 1)
                    if not theory.verify_transition_bracket(k)]
        payload.update(max=bound, ok=not failures, checked=bound - 2)
        if failures:
            payload["first_failure"] = [failures[0]]
    payload["elapsed_s"] = round(time.perf_counter() - start, 3)
    _print_json(payload)
    return 0


def _cmd_polyhedron(args) -> int:
    case = (
        polyhedron.PolyhedronCase.NEGATIVE
        if args.case == "neg"
        else polyhedron.PolyhedronCase.POSITIVE
    )
    try:
        poly = polyhedron.build_polyhedron(
            args.m, args.k, args.p, case,
            args.ell if case is polyhedron.PolyhedronCase.NEGATIVE else None,
        )
    except ValueError as exc:
        raise CommandError(str(exc))
    payload = {
        "case": args.case,
        "m": args.m,
        "k": args.k,
        "ell": args.ell,
        "p": args.p,
        "rows": poly.row_count,
        "dimension": poly.dimension,
        "test": args.test,
    }
    if args.test == "expectation":
        point = polyhedron.expectation_vector(args.m, args.p)
        payload["member"] = polyhedron.membership(point, poly, mode="cone")
    else:
        try:
            point = polyhedron.inner_point(
                args.m, args.k, args.ell, args.p, args.n, case
            )
        except ValueError as exc:
            raise CommandError(str(exc))
        payload["n"] = args.n
        payload["l1_norm"] = int(point.sum())
        payload["strict_member"] = polyhedron.membership(
            point, poly, mode="full", strict=True
        )
    _print_json(payload)
    return 0


_HANDLERS = {
    "phase": _cmd_phase,
    "theory": _cmd_theory,
    "check": _cmd_check,
    "classify": _cmd_classify,
    "sample": _cmd_sample,
    "sweep": _cmd_sweep,
    "verify-appendix": _cmd_verify,
    "polyhedron": _cmd_polyhedron,
}


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return _HANDLERS[args.command](args)
    except CommandError as exc:
        print(f"ajrlab {args.command}: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"ajrlab {args.command}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
