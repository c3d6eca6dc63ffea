"""Command-line front end.

Exit status: 0 when every requested check passes, 1 when a check fails,
2 for usage errors and exceeded caps or guards.
"""
from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

from . import acceptance, alcoves, analysis, charquasi, ehrhart
from .errors import CapExceeded, GuardExceeded, InvalidType, WorpitzkyError
from .report import Report
from .rootsys import DEFAULT_WEYL_CAP, build, validate

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def parse_interval(text: str) -> tuple[int, int]:
    try:
        a, b = (int(x) for x in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"interval must look like a:b, got {text!r}") from None
    if a > b:
        raise argparse.ArgumentTypeError(f"empty interval {text!r}")
    return a, b


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--json", action="store_true", help="machine-readable output")
    p.add_argument("--weyl-cap", type=_positive, default=DEFAULT_WEYL_CAP)
    p.add_argument("--scan-guard", type=_positive, default=alcoves.DEFAULT_SCAN_GUARD)
    p.add_argument("--oracle-guard", type=_positive, default=charquasi.DEFAULT_ORACLE_GUARD)
    p.add_argument("--threads", type=_positive, default=1, help="workers for lattice scans")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="worpitzky", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("rootsys", parents=[common], help="root system data and invariant checks")
    p.add_argument("type")

    p = sub.add_parser("ehrhart", parents=[common], help="Ehrhart quasi-polynomial of the alcove")
    p.add_argument("type")
    p.add_argument("--verify", action="store_true", help="period, structure, reciprocity and facet reports")
    p.add_argument("--facets", type=int, default=2, help="largest facet subset for --verify")

    p = sub.add_parser("eulerian", parents=[common], help="generalized Eulerian polynomial")
    p.add_argument("type")
    p.add_argument("--route", choices=["product", "weyl", "scan"], default="product")
    p.add_argument("--cross-check", action="store_true")

    p = sub.add_parser("worpitzky", parents=[common], help="half-open alcove partition of the parallelepiped")
    p.add_argument("type")
    p.add_argument("--q", type=_positive, help="dilation for the q^l check (default h + 1)")

    p = sub.add_parser("charquasi", parents=[common], help="characteristic quasi-polynomial of A^[a,b]")
    p.add_argument("type")
    p.add_argument("--interval", type=parse_interval, required=True, metavar="A:B")
    p.add_argument("--oracle", action="store_true", help="use the counting oracle")
    p.add_argument("--compare", action="store_true", help="demand formula and oracle agreement")
    p.add_argument("--q-max", type=_positive, help="compare counts only up to this q")

    p = sub.add_parser("verify", parents=[common], help="structural checks")
    p.add_argument("type")
    p.add_argument("check", choices=["functional", "shift", "congruence"])
    p.add_argument("--interval", type=parse_interval, metavar="A:B")
    p.add_argument("-n", type=_positive)
    p.add_argument("-k", type=int, default=0)
    p.add_argument("-m", type=int, help="power for the congruence check")
    p.add_argument("--ell", type=_positive, help="degree for the congruence check (default: rank)")

    p = sub.add_parser("rh", parents=[common], help="root-line check for χ on [1-k, n+k]")
    p.add_argument("type", nargs="?")
    p.add_argument("-n", type=_positive)
    p.add_argument("-k", type=int, default=0)
    p.add_argument("--e6-witness", action="store_true")

    p = sub.add_parser("selftest", parents=[common], help="run the acceptance matrix")
    p.add_argument("--fast", action="store_true", help="skip the slowest scan")
    return parser


def _emit(args, payload, text: str) -> None:
    if args.json:
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        print(text)


def _reports_status(reports: Sequence[Report]) -> int:
    return EXIT_OK if all(r.passed for r in reports) else EXIT_FAIL


def cmd_rootsys(args) -> int:
    rs = build(args.type)
    problems = validate(rs, args.weyl_cap)
    data = rs.to_dict()
    data["problems"] = problems
    lines = [
        f"type {rs.id}  rank {rs.rank}",
        f"highest root {list(rs.highest_root)}  marks {list(rs.marks)}",
        f"h = {rs.coxeter_number}  f = {rs.index_of_connection}  |W| = {rs.weyl_order}  |Φ+| = {len(rs.positive_roots)}",
        f"exponents {list(rs.exponents)}  period {rs.ehrhart_period}  radical {rs.ehrhart_period_radical}",
        "invariants: " + ("ok" if not problems else "; ".join(problems)),
    ]
    _emit(args, data, "\n".join(lines))
    return EXIT_OK if not problems else EXIT_FAIL


def cmd_ehrhart(args) -> int:
    rs = build(args.type)
    eq = ehrhart.ehrhart_quasi(rs)
    payload = {"type": str(rs.id), "quasi": eq.to_json()}
    lines = [f"Ehr[{rs.id}] period {eq.period}"]
    lines += [f"  q ≡ {r} mod {eq.period}: {p.factored()}" for r, p in enumerate(eq.constituents, 1)]
    status = EXIT_OK
    if args.verify:
        n, h = rs.ehrhart_period, rs.coxeter_number
        reports = [
            ehrhart.check_period(rs),
            ehrhart.check_structure(rs),
            ehrhart.verify_reciprocity(rs, range(1, 2 * n + h + 1)),
            ehrhart.verify_facet_removal(rs, min(args.facets, rs.rank + 1)),
        ]
        payload["reports"] = [r.to_json() for r in reports]
        lines += [str(r) for r in reports]
        status = _reports_status(reports)
    _emit(args, payload, "\n".join(lines))
    return status


def cmd_eulerian(args) -> int:
    rs = build(args.type)
    limits = dict(weyl_cap=args.weyl_cap, scan_guard=args.scan_guard, threads=args.threads)
    poly, used = alcoves.generalized_eulerian_with_route(rs, args.route, **limits)
    if used != args.route:
        print(f"note: route {args.route} out of reach for {rs.id}, used {used}", file=sys.stderr)
    payload = {"type": str(rs.id), "route": used, "polynomial": poly.to_string(ascending=True), "coefficients": poly.to_json()}
    lines = [poly.to_string(ascending=True)]
    status = EXIT_OK
    if args.cross_check:
        routes = {}
        for route in ("product", "weyl", "scan"):
            try:
                routes[route] = alcoves.eulerian_by_route(rs, route, **limits)
            except (CapExceeded, GuardExceeded) as exc:
                routes[route] = None
                print(f"note: {route} skipped: {exc}", file=sys.stderr)
        computed = {r: p for r, p in routes.items() if p is not None}
        agree = len(set(computed.values())) == 1
        payload["crossCheck"] = {
            "routes": {r: (p.to_string(ascending=True) if p is not None else None) for r, p in routes.items()},
            "agreement": agree,
        }
        lines.append(f"routes {sorted(computed)} " + ("agree" if agree else "DISAGREE"))
        status = EXIT_OK if agree else EXIT_FAIL
    _emit(args, payload, "\n".join(lines))
    return status


def cmd_worpitzky(args) -> int:
    rs = build(args.type)
    part = alcoves.worpitzky_partition(rs, args.scan_guard, args.threads)
    q = args.q or rs.coxeter_number + 1
    groups = alcoves.partition_counts(rs, q, max(args.scan_guard, q**rs.rank), args.threads)
    eq = ehrhart.ehrhart_quasi(rs)
    rep = Report("worpitzky-identity", str(rs.id), {"q": q})
    if q >= rs.coxeter_number and set(groups) != set(part):
        rep.fail(reason="alcove keys at q differ from the partition")
    for key, (count, _) in groups.items():
        if key in part and count != eq.evaluate_integer(q - part[key]):
            rep.fail(floors=list(key.floors), count=count, ehrhart=eq.evaluate_integer(q - part[key]))
    total = sum(c for c, _ in groups.values())
    if total != q**rs.rank:
        rep.fail(total=total, expected=q**rs.rank)
    payload = {"type": str(rs.id), "partition": alcoves.partition_to_json(rs, part), "report": rep.to_json()}
    lines = [f"{len(part)} half-open alcoves in Π for {rs.id}"]
    for key, a in part.items():
        count = groups.get(key, (0,))[0]
        lines.append(f"  floors {list(key.floors)}  asc {a}  points at q={q}: {count}")
    lines.append(f"total {total} = {q}^{rs.rank}: {rep}")
    _emit(args, payload, "\n".join(lines))
    return _reports_status([rep])


def _spec(args) -> charquasi.ArrangementSpec:
    a, b = args.interval
    return charquasi.ArrangementSpec(build(args.type), a, b)


def cmd_charquasi(args) -> int:
    spec = _spec(args)
    if args.compare:
        if spec.family == "empirical":
            raise UsageError(f"no closed formula covers [{spec.a},{spec.b}]; nothing to compare")
        res, rep = charquasi.compare_routes(spec, args.q_max, args.oracle_guard, args.threads)
        payload = res.to_json()
        payload["report"] = rep.to_json()
        status = _reports_status([rep])
    else:
        res = charquasi.char_quasi(spec, args.oracle, args.oracle_guard, args.threads)
        payload = res.to_json()
        status = EXIT_OK
    lines = [f"χ_quasi {spec} ({spec.family}, route {res.route}) period {res.quasi.period}"]
    lines += [f"  q ≡ {r} mod {res.quasi.period}: {p.factored()}" for r, p in enumerate(res.quasi.constituents, 1)]
    lines.append(f"characteristic polynomial {res.char_poly}")
    if res.agreement is not None:
        lines.append("routes agree" if res.agreement else "routes DISAGREE")
    _emit(args, payload, "\n".join(lines))
    return status


def cmd_verify(args) -> int:
    rs = build(args.type)
    if args.check == "functional":
        if args.interval:
            spec = _spec(args)
        elif args.n:
            spec = charquasi.ArrangementSpec(rs, 1 - args.k, args.n + args.k)
        else:
            raise UsageError("functional needs --interval or -n")
        rep = analysis.check_functional_equation(spec)
    elif args.check == "shift":
        if not args.n:
            raise UsageError("shift needs -n")
        rep = analysis.check_shift_reduction(rs, args.n, args.k, args.oracle_guard)
    else:
        if args.m is None:
            raise UsageError("congruence needs -m")
        rep = analysis.check_congruence(args.ell or rs.rank, args.m)
    _emit(args, rep.to_json(), str(rep))
    return _reports_status([rep])


def cmd_rh(args) -> int:
    if args.e6_witness:
        rep = analysis.e6_witness_report()
    else:
        if not args.type or not args.n:
            raise UsageError("rh needs a type and -n (or --e6-witness)")
        rep = analysis.riemann_check(build(args.type), args.n, args.k)
    payload = rep.to_json()
    if args.e6_witness:
        payload["constant"] = int(rep.polynomial[0])
    lines = [str(rep), f"  polynomial {rep.polynomial}"]
    lines += [f"  root {z.real:.9f} {'+' if z.imag >= 0 else '-'} {abs(z.imag):.9f}i" for z in rep.roots]
    _emit(args, payload, "\n".join(lines))
    if rep.passed or rep.predicted is False:
        # exploratory cases report data, they do not fail the run
        return EXIT_OK
    return EXIT_FAIL


def cmd_selftest(args) -> int:
    results = []
    for num, title, limit, body in acceptance.criteria(args.fast):
        res = acceptance._timed(num, title, limit, body)
        results.append(res)
        if not args.json:
            print(res.line(), flush=True)
    if args.json:
        print(json.dumps([r.to_json() for r in results], indent=2, sort_keys=True))
    return EXIT_OK if all(r.passed for r in results) else EXIT_FAIL


COMMANDS = {
    "rootsys": cmd_rootsys,
    "ehrhart": cmd_ehrhart,
    "eulerian": cmd_eulerian,
    "worpitzky": cmd_worpitzky,
    "charquasi": cmd_charquasi,
    "verify": cmd_verify,
    "rh": cmd_rh,
    "selftest": cmd_selftest,
}


def _glue_negative_values(argv: Sequence[str]) -> list[str]:
    # "--interval -1:1" would otherwise be read as an unknown option
    out = []
    it = iter(argv)
    for arg in it:
        if arg == "--interval":
            value = next(it, None)
            out.append(arg if value is None else f"--interval={value}")
        else:
            out.append(arg)
    return out


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(_glue_negative_values(sys.argv[1:] if argv is None else argv))
    try:
        return COMMANDS[args.command](args)
    except (UsageError, InvalidType) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (CapExceeded, GuardExceeded) as exc:
        print(f"guard: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except WorpitzkyError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
