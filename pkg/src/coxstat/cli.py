"""Command-line front end: ``coxstat verify|verify-all|dist|stats|encode``."""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor

from .distributions import STATISTICS, WeightSpec, dist_poly
from .encoding import (
    format_sequence, parse_sequence, psi, psi_d_variant, psi_inverse,
)
from .group import b_stats, d_stats, enumerate_group, format_window, parse_window, r_stats
from .identities import REGISTRY, UnknownIdentity, VerificationReport, verify
from .qseries import VARS, CapError, format_rational

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _workers() -> int:
    env = os.environ.get("COXSTAT_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise UsageError(f"COXSTAT_THREADS must be an integer, got {env!r}") from None
    return os.cpu_count() or 1


def _cap_overrides(args) -> dict:
    return {v: getattr(args, f"cap_{v}") for v in VARS if getattr(args, f"cap_{v}") is not None}


def _verify_job(job) -> VerificationReport:
    ident, kw = job
    return verify(ident, **kw)


def _run_jobs(jobs) -> list[VerificationReport]:
    workers = min(_workers(), len(jobs))
    if workers <= 1:
        return [_verify_job(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        # map keeps submission order, so output is deterministic
        return list(pool.map(_verify_job, jobs))


def _verify_kwargs(args, ident_id: str) -> dict:
    ident = REGISTRY[ident_id]
    kw = {"level": args.level}
    if args.n is not None:
        if args.n_max is not None:
            raise UsageError("give either --n or --n-max, not both")
        kw["n_max"] = kw["n_min"] = args.n
        if not ident.per_rank:
            kw["n_min"] = None
    elif args.n_max is not None:
        kw["n_max"] = args.n_max
    if args.t_cap is not None:
        kw["t_cap"] = args.t_cap
    overrides = _cap_overrides(args)
    if overrides:
        defaults = ident.quick if args.level == "quick" else ident.full
        n_max = kw.get("n_max", defaults["n_max"])
        t_cap = kw.get("t_cap", defaults.get("t_cap", 0))
        base = ident.caps_fn(n_max, t_cap)
        kw["caps"] = base.with_(**overrides)
        kw["t_cap"] = t_cap
    return kw


# output ---------------------------------------------------------------------------

def _human_report(r: VerificationReport) -> str:
    n0, n1 = r.params["n"]
    head = f"{r.status.upper():10s} {r.identity:26s} n={n0}..{n1}  checked={r.checked}  {r.wall_ms:.1f} ms"
    lines = [head]
    if r.first_mismatch is not None:
        m = r.first_mismatch
        where = m["where"]
        if m["exponents"] is not None:
            e = " ".join(f"{v}^{x}" for v, x in m["exponents"].items() if x)
            where += f" at {e or '1'}"
        lines.append(f"    first mismatch {where}: lhs {m['lhs']} rhs {m['rhs']}")
    if r.details and "finding" in r.details:
        lines.append(f"    finding: {r.details['finding']}")
        for n, d in r.details["per_n"].items():
            lines.append(f"    n={n}: printed constant {d['printed_constant']}, "
                         f"reconciling constant {d['reconciling_constant']}")
    return "\n".join(lines)


def _csv_reports(reports) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["identity", "status", "n_min", "n_max", "checked", "wall_ms"])
    for r in reports:
        w.writerow([r.identity, r.status, *r.params["n"], r.checked, f"{r.wall_ms:.3f}"])
    return buf.getvalue()


def _emit(text: str, out: str | None):
    if not text.endswith("\n"):
        text += "\n"
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _exit_for(reports) -> int:
    return EXIT_OK if all(r.status != "fail" for r in reports) else EXIT_FAIL


# commands ---------------------------------------------------------------------------

def cmd_verify(args) -> int:
    if args.identity not in REGISTRY:
        raise UnknownIdentity(args.identity)
    report = _verify_job((args.identity, _verify_kwargs(args, args.identity)))
    if args.output == "json":
        text = json.dumps(report.to_json(), indent=2, sort_keys=True)
    elif args.output == "csv":
        text = _csv_reports([report])
    else:
        text = _human_report(report)
    _emit(text, args.out)
    return _exit_for([report])


def cmd_verify_all(args) -> int:
    ids = list(REGISTRY)
    reports = _run_jobs([(i, {"level": args.level}) for i in ids])
    if args.output == "json":
        doc = {"level": args.level,
               "all_passed": _exit_for(reports) == EXIT_OK,
               "reports": [r.to_json() for r in reports]}
        text = json.dumps(doc, indent=2, sort_keys=True)
    elif args.output == "csv":
        text = _csv_reports(reports)
    else:
        text = "\n".join(_human_report(r) for r in reports)
        failed = [r.identity for r in reports if r.status == "fail"]
        text += "\n" + (f"FAILED: {', '.join(failed)}" if failed else "all checks passed")
    _emit(text, args.out)
    return _exit_for(reports)


def cmd_dist(args) -> int:
    try:
        w = WeightSpec.from_names(args.stats)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    poly = dist_poly(args.group, args.n, w)
    if args.output == "json":
        text = json.dumps(poly.to_json(), indent=2, sort_keys=True)
    elif args.output == "csv":
        buf = io.StringIO()
        wr = csv.writer(buf, lineterminator="\n")
        wr.writerow([*VARS[:4], "coeff"])
        for e, c in poly.terms().items():
            wr.writerow([*e[:4], format_rational(c)])
        text = buf.getvalue()
    else:
        text = poly.pretty()
    _emit(text, args.out)
    return EXIT_OK


STATS_COLUMNS = ["window", "inv", "neg", "len_b", "des_b", "maj", "fmaj", "d_r", "maj_r"]
D_COLUMNS = ["des_d", "len_d", "class"]


def stats_rows(group: str, n: int):
    with_d = group == "D" and n >= 2
    yield STATS_COLUMNS + (D_COLUMNS if with_d else [])
    for beta in enumerate_group(group, n):
        b, r = b_stats(beta), r_stats(beta)
        row = [format_window(beta), b.inv, b.neg, b.len_b, b.des_b, b.maj, b.fmaj, r.d_r, r.maj_r]
        if with_d:
            d = d_stats(beta)
            row += [d.des_d, d.len_d, d.d_class.value]
        yield row


def cmd_stats(args) -> int:
    if args.output == "json":
        rows = stats_rows(args.group, args.n)
        header = next(rows)
        text = json.dumps([dict(zip(header, r)) for r in rows], indent=1)
    else:
        buf = io.StringIO()
        csv.writer(buf, lineterminator="\n").writerows(stats_rows(args.group, args.n))
        text = buf.getvalue()
    _emit(text, args.out)
    return EXIT_OK


def cmd_encode(args) -> int:
    try:
        if args.sequence is not None:
            f = parse_sequence(args.sequence)
            if args.d_variant:
                beta, seq, valid = psi_d_variant(f)
                result = {"beta": format_window(beta), "sequence": format_sequence(seq),
                          "valid": valid}
            else:
                beta, lam = psi(f)
                result = {"beta": format_window(beta), "lambda": format_sequence(lam.parts)}
        else:
            if args.window is None or args.partition is None:
                raise UsageError("encode needs --sequence, or --window with --partition")
            beta = parse_window(args.window)
            f = psi_inverse(beta, parse_sequence(args.partition))
            result = {"f": format_sequence(f)}
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if args.output == "json":
        text = json.dumps(result, sort_keys=True)
    else:
        text = "\n".join(f"{k} = {str(v).lower() if isinstance(v, bool) else v}"
                         for k, v in result.items())
    _emit(text, args.out)
    return EXIT_OK


# parser --------------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="coxstat",
        description="Statistics on signed permutations and exact identity checks.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, outputs=("human", "json", "csv")):
        p.add_argument("--output", choices=outputs, default=outputs[0])
        p.add_argument("--out", metavar="PATH", help="write to a file instead of stdout")

    p = sub.add_parser("verify", help="check one identity")
    p.add_argument("--identity", required=True, help=", ".join(REGISTRY))
    p.add_argument("--n-max", type=int)
    p.add_argument("--n", type=int, help="single rank (per-rank identities)")
    p.add_argument("--t-cap", type=int)
    for v in VARS:
        p.add_argument(f"--cap-{v}", type=int, help=f"truncation degree in {v}")
    p.add_argument("--level", choices=("quick", "full"), default="quick")
    common(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("verify-all", help="check every registry identity")
    p.add_argument("--level", choices=("quick", "full"), default="quick")
    common(p)
    p.set_defaults(func=cmd_verify_all)

    p = sub.add_parser("dist", help="joint distribution polynomial")
    p.add_argument("--group", choices=("B", "D", "S"), default="B")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--stats", nargs="+", required=True, choices=sorted(STATISTICS))
    common(p)
    p.set_defaults(func=cmd_dist)

    p = sub.add_parser("stats", help="per-element statistics table")
    p.add_argument("--group", choices=("B", "D", "S"), default="B")
    p.add_argument("--n", type=int, required=True)
    common(p, ("csv", "json"))
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("encode", help="sequence <-> (signed permutation, partition)")
    p.add_argument("--sequence", help='e.g. "(-4,4,1,-3,6,3,-4)"')
    p.add_argument("--d-variant", action="store_true", help="use type D descents")
    p.add_argument("--window", help="inverse direction: window of beta")
    p.add_argument("--partition", help="inverse direction: partition lambda")
    common(p, ("human", "json"))
    p.set_defaults(func=cmd_encode)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except UnknownIdentity as exc:
        print(f"coxstat: unknown identity {exc.args[0]!r}; known: {', '.join(REGISTRY)}",
              file=sys.stderr)
    except CapError as exc:
        print(f"coxstat: {exc}", file=sys.stderr)
    except (UsageError, ValueError) as exc:
        print(f"coxstat: {exc}", file=sys.stderr)
    return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
