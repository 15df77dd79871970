"""Acceptance suite: one PASS/FAIL line per criterion, printed in the summary.

Run with ``pytest tests/test_acceptance.py -v``. The two 200-prime sweeps
dominate the runtime (several minutes each at 256 bits).
"""

from __future__ import annotations

import csv
import random
import time
import xml.etree.ElementTree as ET

import mpmath
import pytest

from conftest import ACCEPTANCE_LINES
from oracles import brute_force_regulator, charpoly_3x3
from systolab import arith
from systolab.cli import EXIT_OK, main
from systolab.gamma import gamma_matrix, is_irreducible_cubic, validate
from systolab.geometry import geodesic_length
from systolab.order import maximal_order
from systolab.pipeline import SweepConfig, emit_csv, read_csv, run_sweep
from systolab.plot import certified_points, fit_envelopes, sandwich_violations
from systolab.poly import IntPoly
from systolab.units import change_unit_basis, regulator, unit_group

pytestmark = pytest.mark.slow

SWEEP_PRIMES = 200
SWEEP_PREC = 256


def report(n: int, ok: bool, detail: str) -> None:
    ACCEPTANCE_LINES.append(f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}")
    print(ACCEPTANCE_LINES[-1])


# Hand-written reference values of N(Phi).
TABLE = {
    "A1": 1, "A2": 1, "A3": 2, "A4": 2, "A5": 3, "A6": 3, "A7": 4, "A8": 4,
    "B2": 2, "B3": 3, "B4": 4, "B5": 5, "B6": 6, "B7": 7, "B8": 8,
    "C2": 2, "C3": 3, "C4": 4, "C5": 5, "C6": 6, "C7": 7, "C8": 8,
    "D4": 4, "D5": 4, "D6": 6, "D7": 6, "D8": 8,
    "E6": 4, "E7": 7, "E8": 8, "F4": 4, "G2": 2,
}


def test_criterion_1_table(tmp_path):
    out = tmp_path / "table.csv"
    t0 = time.perf_counter()
    code = main(["roots", "table", "--max-rank", "8", "--out", str(out)])
    dt = time.perf_counter() - t0
    got = {r["type"]: int(r["N"]) for r in csv.DictReader(out.open())}
    wrong = {k: (got.get(k), v) for k, v in TABLE.items() if got.get(k) != v}
    ok = code == EXIT_OK and not wrong and dt < 60
    report(1, ok, f"{len(got)} types, mismatches={wrong or 'none'}, {dt:.1f}s (limit 60s)")
    assert ok


def test_criterion_2_gamma_family():
    primes = arith.first_primes(SWEEP_PRIMES)
    t0 = time.perf_counter()
    bad = []
    for p in primes:
        elt = validate(p, 128)
        m, reg = elt.matrix, elt.regularity
        checks = [
            charpoly_3x3(m)[2] == 1,
            all((m[i][j] - (i == j)) % p == 0 for i in range(3) for j in range(3)),
            elt.charpoly.coeffs[0] == -1,
            is_irreducible_cubic(elt.charpoly),
            reg.n_real_roots == 3,
            reg.all_positive and reg.distinct_moduli and reg.no_modulus_one,
        ]
        if not all(checks):
            bad.append(p)
    dt = time.perf_counter() - t0
    ok = not bad and dt < 300
    report(2, ok, f"{len(primes)} primes, failures={bad or 'none'}, {dt:.1f}s (limit 300s)")
    assert ok


ORACLE_CUBICS = [
    ("x^3 + x^2 - 2x - 1", 6),
    ("x^3 - x - 1", 6),
    ("x^3 - x^2 - 2x - 8", 20),
    ("x^3 - 11x^2 + 27x - 1", 12),
    ("x^3 - 3x - 1", 6),
]


def test_criterion_3_regulator_oracle():
    worst, slowest, notes = 0.0, 0.0, []
    for text, box in ORACLE_CUBICS:
        f = IntPoly.parse(text)
        t0 = time.perf_counter()
        us = unit_group(maximal_order(f), 128)
        dt = time.perf_counter() - t0
        ref = brute_force_regulator(f.coeffs, us.order.basis, box)
        err = abs(float(us.regulator) - ref) / ref
        worst, slowest = max(worst, err), max(slowest, dt)
        notes.append(f"{text}: R={float(us.regulator):.12g} rel={err:.1e}")
    ok = worst <= 1e-9 and slowest < 60
    report(3, ok, f"max rel err {worst:.2e} (limit 1e-9), slowest {slowest:.1f}s (limit 60s); " + "; ".join(notes))
    assert ok


def test_criterion_4_regulator_invariance():
    rng = random.Random(20240601)
    worst = mpmath.mpf(0)
    fields = ["x^3 + x^2 - 2x - 1", "x^3 - 11x^2 + 27x - 1"]
    count = 0
    for text in fields:
        us = unit_group(maximal_order(IntPoly.parse(text)), 128)
        for _ in range(50):
            # random product of elementary moves, entries kept small
            m = [[1, 0], [0, 1]]
            for _ in range(rng.randint(1, 8)):
                i = rng.randrange(2)
                c = rng.choice([-2, -1, 1, 2])
                m[i] = [m[i][k] + c * m[1 - i][k] for k in range(2)]
                if rng.random() < 0.3:
                    m.reverse()
            new = change_unit_basis(us, m)
            worst = max(worst, abs(new.regulator - us.regulator) / us.regulator)
            for k in range(3):
                worst = max(worst, abs(regulator(new, k) - us.regulator) / us.regulator)
            count += 1
    ok = count == 100 and worst <= 1e-12
    report(4, ok, f"{count} unimodular changes x 3 row deletions, max rel change {mpmath.nstr(worst, 3)} (limit 1e-12)")
    assert ok


def test_criterion_5_geodesic_properties():
    rng = random.Random(7)
    worst = mpmath.mpf(0)
    with mpmath.workprec(200):
        for _ in range(1000):
            t = [mpmath.mpf(10) ** rng.uniform(-6, 6) for _ in range(3)]
            base = geodesic_length(t)
            k = rng.randint(2, 9)
            cands = [
                (geodesic_length([x**k for x in t]), k * base),
                (geodesic_length([1 / x for x in t]), base),
                (geodesic_length([t[2], t[0], t[1]]), base),
                (geodesic_length([t[1], t[0], t[2]]), base),
            ]
            for got, want in cands:
                worst = max(worst, abs(got - want) / want)
        ident = geodesic_length([1, 1, 1])
    ok = worst <= 1e-12 and ident == 0
    report(5, ok, f"1000 triples, max rel deviation {mpmath.nstr(worst, 3)} (limit 1e-12), len(I)={ident}")
    assert ok


@pytest.fixture(scope="module")
def sweep_run(tmp_path_factory):
    d = tmp_path_factory.mktemp("accept")
    t0 = time.perf_counter()
    code = main([
        "sweep", "--primes", str(SWEEP_PRIMES), "--prec", str(SWEEP_PREC),
        "--cache", str(d / "cache1.jsonl"), "--csv", str(d / "run1.csv"),
    ])
    return d, code, time.perf_counter() - t0


def test_criterion_6_sweep_and_sandwich(sweep_run):
    d, code, dt = sweep_run
    svg = d / "fig.svg"
    plot_code = main(["plot", "--in", str(d / "run1.csv"), "--out", str(svg), "--x", "disc", "--envelopes"])
    records = read_csv(d / "run1.csv")
    pts = certified_points(records)
    fit = fit_envelopes(records)
    outside = sandwich_violations(records, fit)
    root = ET.parse(svg).getroot()
    circles = root.findall(".//{http://www.w3.org/2000/svg}circle")
    ok = code == EXIT_OK and plot_code == EXIT_OK and len(records) == SWEEP_PRIMES and not outside and len(circles) == len(pts) and dt < 1800
    report(
        6, ok,
        f"{len(records)} records, {len(pts)} certified, {len(outside)} outside the fitted band "
        f"(c1={fit.c1:.4g}, c2={fit.c2:.4g}), sweep {dt:.0f}s at {SWEEP_PREC} bits (limit 1800s)",
    )
    assert ok


def _strip_wall_time(path):
    rows = list(csv.reader(open(path, newline="")))
    col = rows[0].index("wall_time_ms")
    return [r[:col] + r[col + 1:] for r in rows]


def test_criterion_7_determinism(sweep_run):
    d, _, _ = sweep_run
    code2 = main([
        "sweep", "--primes", str(SWEEP_PRIMES), "--prec", str(SWEEP_PREC),
        "--cache", str(d / "cache2.jsonl"), "--csv", str(d / "run2.csv"),
    ])
    same = _strip_wall_time(d / "run1.csv") == _strip_wall_time(d / "run2.csv")
    cfg = SweepConfig(prime_count=SWEEP_PRIMES, precision_bits=SWEEP_PREC, cache_path=str(d / "cache1.jsonl"))
    t0 = time.perf_counter()
    warm, stats = run_sweep(cfg)
    dt = time.perf_counter() - t0
    emit_csv(warm, d / "run3.csv")
    warm_same = _strip_wall_time(d / "run3.csv") == _strip_wall_time(d / "run1.csv")
    ok = code2 == EXIT_OK and same and warm_same and stats.computed == 0 and stats.cached == SWEEP_PRIMES
    report(7, ok, f"cold runs identical modulo wall_time_ms: {same}; warm rerun identical: {warm_same}, computed {stats.computed}, cached {stats.cached} in {dt:.2f}s")
    assert ok


def test_criterion_8_discrepancy_report(sweep_run):
    d, _, _ = sweep_run
    records = read_csv(d / "run1.csv")
    bad = [
        r.p
        for r in records
        if r.charpoly_trace != 3 + 2 * r.p**2
        or r.charpoly_minor_sum != 3 + 2 * r.p**2 + r.p**4
        or r.symbolic_match is not True
        or r.printed_form_agrees is None
    ]
    agree = sum(1 for r in records if r.printed_form_agrees)
    # the printed form is rebuilt independently here as a cross-check
    printed_hits = 0
    for r in records:
        cp = gamma_matrix(r.p).charpoly.coeffs
        printed = (-1, 3 + 5 * r.p**2 + 4 * r.p**4, -(3 + 5 * r.p**2), 1)
        printed_hits += cp == printed
    ok = len(records) == SWEEP_PRIMES and not bad and printed_hits == agree
    report(
        8, ok,
        f"{len(records)} primes: trace and minor sum match the symbolic forms (failures={bad or 'none'}); "
        f"printed form agrees for {agree} of {len(records)} primes, recorded per row",
    )
    assert ok
