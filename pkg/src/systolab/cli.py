"""Command-line interface.

Exit codes: 0 success, 1 usage error, 2 I/O error, 3 computation budget
exhausted (results are still written).
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
import time
from typing import Sequence

import mpmath

from . import config as cfgmod

EXIT_OK, EXIT_USAGE, EXIT_IO, EXIT_BUDGET = 0, 1, 2, 3


class UsageError(Exception):
    """Bad command line or invalid argument value."""


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # argparse would exit with status 2
        raise UsageError(message)


def _fmt_root(r) -> str:
    return "(" + ", ".join(str(c) for c in r) + ")"


# --------------------------------------------------------------------------
# roots
# --------------------------------------------------------------------------


def _cmd_roots(args) -> int:
    from . import rootsys as rs

    if args.action == "table":
        if args.max_rank is None:
            raise UsageError("roots table needs --max-rank")
        if args.max_rank < 2:
            raise UsageError("--max-rank must be >= 2")
        t0 = time.perf_counter()
        table = rs.table_N(args.max_rank)
        rows = []
        for ct, n in table.items():
            closed = rs.closed_form_N(ct)
            roots = rs.classical_root_count(ct)
            rows.append((str(ct), ct.family, ct.rank, roots, n, closed, n == closed))
        print(f"{'type':<6}{'|Phi|':>7}{'N(Phi)':>8}{'closed form':>13}  match")
        for name, _, _, roots, n, closed, ok in rows:
            print(f"{name:<6}{roots:>7}{n:>8}{closed:>13}  {'yes' if ok else 'NO'}")
        allok = all(r[-1] for r in rows)
        print(f"# {len(rows)} types, all match: {'yes' if allok else 'no'}, {time.perf_counter() - t0:.2f}s")
        if args.out:
            with open(args.out, "w", newline="", encoding="utf-8") as fh:
                w = csv.writer(fh, lineterminator="\n")
                w.writerow(["type", "family", "rank", "n_roots", "N", "closed_form", "match"])
                for r in rows:
                    w.writerow([*r[:-1], "true" if r[-1] else "false"])
        return EXIT_OK
    if args.action is not None:
        raise UsageError(f"unknown roots action {args.action!r}")
    if args.type is None or args.rank is None:
        raise UsageError("roots needs --type and --rank (or the 'table' action)")
    try:
        ct = rs.CartanType(args.type.upper(), args.rank)
    except rs.InvalidCartanTypeError as exc:
        raise UsageError(str(exc)) from None
    sys_ = rs.generate_root_system(ct)
    best = rs.max_strongly_orthogonal(sys_)
    print(f"type {ct}: {len(sys_.roots)} roots, {len(sys_.positives)} positive")
    for r in sys_.positives:
        print(f"  +{_fmt_root(r)}")
    print(f"N({ct}) = {len(best)}")
    for r in best.members:
        print(f"  so {_fmt_root(r)}")
    return EXIT_OK


# --------------------------------------------------------------------------
# field
# --------------------------------------------------------------------------


def _cmd_field(args) -> int:
    from .numfield import IntPoly, RankDeficientError, ReducibleError, analyze_field

    if args.action != "reg":
        raise UsageError("field supports only the 'reg' action")
    prec = args.prec or cfgmod.env_precision(cfgmod.DEFAULT_FIELD_PRECISION)
    try:
        f = IntPoly.parse(args.poly)
    except ValueError as exc:
        raise UsageError(f"cannot parse polynomial: {exc}") from None
    if not f.is_monic() or f.degree < 2 or f.degree > 4:
        raise UsageError("polynomial must be monic of degree 2..4")
    try:
        summary = analyze_field(f, prec)
    except ReducibleError as exc:
        raise UsageError(f"polynomial is reducible: {exc}") from None
    except RankDeficientError as exc:
        print(f"unit search budget exhausted: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    d = summary.as_dict()
    if args.json:
        print(json.dumps(d, indent=1))
    else:
        for k in ("poly", "disc_poly", "disc_field", "index", "signature", "torsion"):
            print(f"{k}: {d[k]}")
        print("integral basis (power-basis rows):")
        for row in d["integral_basis"]:
            print("  [" + ", ".join(row) + "]")
        print("units (integral-basis coordinates):")
        for u in d["units"]:
            print(f"  {u}")
        print(f"regulator: {d['regulator']}  (+- {d['regulator_error']})")
        print(f"certified: {str(d['certified']).lower()}  ({d['status']})")
    return EXIT_OK if d["certified"] else EXIT_BUDGET


# --------------------------------------------------------------------------
# gamma
# --------------------------------------------------------------------------


def _cmd_gamma(args) -> int:
    from . import gamma as gm

    try:
        elt = gm.validate(args.prime, args.prec or cfgmod.env_precision(128))
    except gm.NotPrimeError as exc:
        raise UsageError(str(exc)) from None
    rep, reg = elt.report, elt.regularity
    d = {
        "p": elt.level,
        "matrix": [list(r) for r in elt.matrix],
        "det": elt.det,
        "charpoly": str(elt.charpoly),
        "trace": rep.trace,
        "minor_sum": rep.minor_sum,
        "symbolic_trace": rep.symbolic_trace,
        "symbolic_minor_sum": rep.symbolic_minor_sum,
        "matches_symbolic": rep.matches_symbolic,
        "printed_form": str(rep.printed),
        "agrees_with_printed": rep.agrees_with_printed,
        "irreducible": gm.is_irreducible_cubic(elt.charpoly),
        "regularity": {
            "n_real_roots": reg.n_real_roots,
            "roots": list(reg.roots),
            "excludes_pm1": reg.excludes_pm1,
            "no_modulus_one": reg.no_modulus_one,
            "all_positive": reg.all_positive,
            "distinct_moduli": reg.distinct_moduli,
            "r_regular": reg.r_regular,
            "hyper_regular": reg.hyper_regular,
        },
    }
    if args.json:
        print(json.dumps(d, indent=1))
    else:
        print(f"gamma_{elt.level}:")
        for row in elt.matrix:
            print("  " + " ".join(f"{c:>{len(str(max(max(r) for r in elt.matrix)))}}" for c in row))
        print(f"det = {d['det']}")
        print(f"charpoly det(xI - A): {d['charpoly']}")
        print(f"  trace {rep.trace} (3+2p^2 = {rep.symbolic_trace}), minor sum {rep.minor_sum} (3+2p^2+p^4 = {rep.symbolic_minor_sum})")
        print(f"printed closed form:  {d['printed_form']}")
        print(f"  agrees: {str(rep.agrees_with_printed).lower()}")
        print(f"irreducible: {str(d['irreducible']).lower()}")
        for k, v in d["regularity"].items():
            print(f"{k}: {v if not isinstance(v, bool) else str(v).lower()}")
    return EXIT_OK


# --------------------------------------------------------------------------
# geom
# --------------------------------------------------------------------------


def _cmd_geom(args) -> int:
    from .geometry import GeometryDomainError, geodesic_length

    if args.action != "length":
        raise UsageError("geom supports only the 'length' action")
    prec = args.prec or cfgmod.env_precision(128)
    try:
        with mpmath.workprec(prec):
            eigs = [mpmath.mpf(s) for s in args.eigs.split(",") if s.strip()]
    except ValueError as exc:
        raise UsageError(f"cannot parse --eigs: {exc}") from None
    try:
        length = geodesic_length(eigs, prec)
    except GeometryDomainError as exc:
        raise UsageError(str(exc)) from None
    settings = cfgmod.load_config(args.config)
    print(mpmath.nstr(length, 20))
    if settings.metric_c != 1.0:
        print(f"scaled by metric_c={settings.metric_c}: {mpmath.nstr(length * settings.metric_c, 20)}")
    return EXIT_OK


# --------------------------------------------------------------------------
# sweep and plot
# --------------------------------------------------------------------------


def _cmd_sweep(args) -> int:
    from .geometry import EnvelopeParams
    from .pipeline import CacheError, SweepConfig, emit_csv, emit_json, run_sweep

    settings = cfgmod.load_config(args.config)
    prec = args.prec or cfgmod.env_precision(cfgmod.DEFAULT_SWEEP_PRECISION)
    threads = args.threads or cfgmod.env_threads(1)
    if args.primes < 1:
        raise UsageError("--primes must be >= 1")
    env = EnvelopeParams(degree_n=3, c1=settings.c1, c2=settings.c2, gamma_n=settings.gamma_n)
    cfg = SweepConfig(
        prime_count=args.primes,
        precision_bits=prec,
        threads=threads,
        cache_path=args.cache,
        envelope=env,
        metric_c=settings.metric_c,
    )
    try:
        records, stats = run_sweep(cfg)
    except CacheError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    emit_csv(records, args.csv)
    if args.json:
        emit_json(records, args.json)
    budget = sum(r.budget_exhausted for r in records)
    errors = sum(r.status.startswith("error") for r in records)
    print(
        f"{len(records)} records ({stats.computed} computed, {stats.cached} from cache, "
        f"{stats.corrupt_lines} corrupt cache lines skipped); "
        f"{sum(r.regulator_certified for r in records)} certified, {budget} budget-limited, {errors} errors",
        file=sys.stderr,
    )
    return EXIT_BUDGET if budget else EXIT_OK


def _cmd_plot(args) -> int:
    from .pipeline import read_csv
    from .plot import InsufficientDataError, emit_plot, sandwich_violations

    records = read_csv(args.input)
    try:
        fit = emit_plot(records, args.out, x=args.x, envelopes=args.envelopes)
    except InsufficientDataError as exc:
        raise UsageError(str(exc)) from None
    bad = sandwich_violations(records, fit)
    print(f"fitted upper constant c1 = {fit.c1:.15g}")
    print(f"fitted lower constant c2 = {fit.c2:.15g}")
    print(f"points outside the fitted band: {len(bad)}")
    return EXIT_OK


# --------------------------------------------------------------------------
# entry point
# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="systolab", description="Root systems, gamma_p regulators and systole envelopes.")
    p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    r = sub.add_parser("roots", help="root systems and strongly orthogonal sets")
    r.add_argument("action", nargs="?", choices=["table"], help="'table' reproduces N(Phi) for all types")
    r.add_argument("--type", help="Cartan family A..G")
    r.add_argument("--rank", type=int)
    r.add_argument("--max-rank", type=int)
    r.add_argument("--out", help="CSV output path for the table")

    f = sub.add_parser("field", help="number-field data")
    f.add_argument("action", choices=["reg"])
    f.add_argument("--poly", required=True, help='e.g. "x^3 - x - 1"')
    f.add_argument("--prec", type=int)
    f.add_argument("--json", action="store_true")

    g = sub.add_parser("gamma", help="validate gamma_p")
    g.add_argument("--prime", type=int, required=True)
    g.add_argument("--prec", type=int)
    g.add_argument("--json", action="store_true")

    m = sub.add_parser("geom", help="geodesic length")
    m.add_argument("action", choices=["length"])
    m.add_argument("--eigs", required=True, help="comma-separated eigenvalue moduli")
    m.add_argument("--prec", type=int)
    m.add_argument("--config")

    s = sub.add_parser("sweep", help="regulator sweep over primes")
    s.add_argument("--primes", type=int, required=True)
    s.add_argument("--prec", type=int)
    s.add_argument("--threads", type=int)
    s.add_argument("--cache", required=True)
    s.add_argument("--csv", required=True)
    s.add_argument("--json")
    s.add_argument("--config")

    pl = sub.add_parser("plot", help="SVG plot from a sweep CSV")
    pl.add_argument("--in", dest="input", required=True)
    pl.add_argument("--out", required=True)
    pl.add_argument("--x", choices=["p", "disc"], default="p")
    pl.add_argument("--envelopes", action="store_true")
    return p


_COMMANDS = {
    "roots": _cmd_roots,
    "field": _cmd_field,
    "gamma": _cmd_gamma,
    "geom": _cmd_geom,
    "sweep": _cmd_sweep,
    "plot": _cmd_plot,
}


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            parser.print_help(sys.stderr)
            return EXIT_USAGE
        logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
        return _COMMANDS[args.command](args)
    except (UsageError, cfgmod.ConfigError) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
