import dataclasses
import json

import pytest

from oracles import subgroup_size_mod_p
from systolab.gamma import gamma_matrix, reduced_generator
from systolab.geometry import EnvelopeParams
from systolab.order import NumberFieldOrder, maximal_order
from systolab.pipeline import (
    CacheError,
    RecordCache,
    SweepConfig,
    compute_record,
    emit_csv,
    emit_json,
    format_value,
    read_csv,
    run_sweep,
)
from systolab.units import suborder_units, unit_group

# Sizes of the unit image in (Z[B]/pZ[B])^*, found by breadth-first closure.
FROZEN_UNIT_INDEX = {2: 4, 3: 8, 5: 12, 7: 12, 11: 24}


@pytest.fixture(scope="module")
def small_sweep(tmp_path_factory):
    d = tmp_path_factory.mktemp("sweep")
    cfg = SweepConfig(prime_count=6, precision_bits=128, cache_path=str(d / "cache.jsonl"))
    records, stats = run_sweep(cfg)
    return cfg, records, stats, d


def test_records_complete(small_sweep):
    _, records, stats, _ = small_sweep
    assert [r.p for r in records] == [2, 3, 5, 7, 11, 13]
    assert stats.computed == 6 and stats.cached == 0
    for r in records:
        assert r.status == "ok"
        assert r.regulator_certified
        assert r.disc_poly == r.order_index**2 * r.disc_field
        assert r.charpoly_trace == 3 + 2 * r.p**2
        assert r.charpoly_minor_sum == 3 + 2 * r.p**2 + r.p**4
        assert r.symbolic_match and not r.printed_form_agrees
        assert r.adjusted_regulator == pytest.approx(r.regulator_order * r.unit_index_mod_p, rel=1e-15)
        assert r.regulator_order == pytest.approx(r.regulator_field * r.centralizer_unit_index, rel=1e-12)


@pytest.mark.parametrize("p", sorted(FROZEN_UNIT_INDEX))
def test_unit_index_matches_enumeration(small_sweep, p):
    rec = next(r for r in small_sweep[1] if r.p == p)
    _, g = reduced_generator(gamma_matrix(p))
    us = unit_group(maximal_order(g), 128)
    sub_us, _ = suborder_units(us, NumberFieldOrder.equation_order(g))
    o = sub_us.order
    gens = [u if o.norm(u) == 1 else tuple(-c for c in u) for u in sub_us.units]
    assert rec.unit_index_mod_p == subgroup_size_mod_p(o.mul_mod, o.one, gens, p) == FROZEN_UNIT_INDEX[p]


def test_warm_rerun_reads_cache(small_sweep):
    cfg, records, _, _ = small_sweep
    again, stats = run_sweep(cfg)
    assert stats.computed == 0 and stats.cached == 6
    strip = lambda r: dataclasses.replace(r, wall_time_ms=0)  # noqa: E731
    assert [strip(r) for r in again] == [strip(r) for r in records]


def test_precision_is_part_of_the_key(small_sweep):
    cfg, _, _, _ = small_sweep
    _, stats = run_sweep(dataclasses.replace(cfg, prime_count=1, precision_bits=160))
    assert stats.computed == 1


def test_envelope_change_does_not_recompute(small_sweep):
    cfg, records, _, _ = small_sweep
    other = dataclasses.replace(cfg, envelope=EnvelopeParams(c1=3.0, c2=0.5), metric_c=2.0)
    again, stats = run_sweep(other)
    assert stats.computed == 0
    for a, b in zip(again, records):
        assert a.landau_env == pytest.approx(3 * b.landau_env)
        assert a.torus_vol_lb == pytest.approx(2 * b.adjusted_regulator)


def test_corrupt_and_truncated_lines_are_skipped(small_sweep, tmp_path):
    cfg, records, _, d = small_sweep
    path = tmp_path / "cache.jsonl"
    lines = (d / "cache.jsonl").read_text().splitlines()
    path.write_text(lines[0] + "\nnot json\n" + lines[1] + "\n" + lines[2][: len(lines[2]) // 2])
    cache = RecordCache(path)
    assert cache.corrupt_lines == 2 and len(cache) == 2
    cfg2 = dataclasses.replace(cfg, prime_count=3, cache_path=str(path))
    _, stats = run_sweep(cfg2)
    assert stats.cached == 2 and stats.computed == 1
    # the repaired file parses cleanly apart from the two bad lines
    assert RecordCache(path).corrupt_lines == 2
    assert len(RecordCache(path)) == 3


def test_newest_line_wins(tmp_path, small_sweep):
    rec = small_sweep[1][0]
    cache = RecordCache(tmp_path / "c.jsonl")
    key = RecordCache.key(2, 128, "v1")
    cache.put(key, dataclasses.replace(rec, status="old"))
    cache.put(key, dataclasses.replace(rec, status="new"))
    assert RecordCache(tmp_path / "c.jsonl").get(key).status == "new"


def test_unwritable_cache(tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("x")
    cfg = SweepConfig(prime_count=1, precision_bits=128, cache_path=str(blocker / "c.jsonl"))
    with pytest.raises(CacheError):
        run_sweep(cfg)


def test_csv_round_trip(small_sweep, tmp_path):
    records = small_sweep[1]
    path = tmp_path / "out.csv"
    emit_csv(records, path)
    back = read_csv(path)
    assert [r.p for r in back] == [r.p for r in records]
    for a, b in zip(back, records):
        assert a.regulator_field == float(format_value(b.regulator_field))
        assert a.regulator_certified == b.regulator_certified
        assert a.unit_index_mod_p == b.unit_index_mod_p
    emit_csv(back, tmp_path / "again.csv")
    assert (tmp_path / "again.csv").read_text() == path.read_text()


def test_json_output(small_sweep, tmp_path):
    emit_json(small_sweep[1], tmp_path / "o.json")
    data = json.loads((tmp_path / "o.json").read_text())
    assert [d["p"] for d in data] == [2, 3, 5, 7, 11, 13]


def test_format_value():
    assert format_value(None) == ""
    assert format_value(True) == "true"
    assert format_value(0.1 + 0.2) == "0.3"
    assert format_value(7) == "7"


def test_failure_is_recorded_not_raised():
    cfg = SweepConfig(prime_count=1, precision_bits=128, factor_effort=1, unit_budget=1)
    rec = compute_record(2, cfg)
    assert rec.p == 2 and rec.status != "ok"


def test_config_validation():
    with pytest.raises(ValueError):
        SweepConfig(prime_count=0)
    with pytest.raises(ValueError):
        SweepConfig(prime_count=1, threads=0)


def test_unit_index_at_nontrivial_centralizer_index():
    # at p = 211 the maximal order strictly contains Z[B] (index 7)
    p = 211
    rec = compute_record(p, SweepConfig(prime_count=1, precision_bits=128))
    _, g = reduced_generator(gamma_matrix(p))
    big = maximal_order(g)
    assert big.index == 7 and rec.order_index == 7 * p**3
    sub_us, _ = suborder_units(unit_group(big, 128), NumberFieldOrder.equation_order(g))
    o = sub_us.order
    gens = [u if o.norm(u) == 1 else tuple(-c for c in u) for u in sub_us.units]
    assert rec.unit_index_mod_p == subgroup_size_mod_p(o.mul_mod, o.one, gens, p) == 424
