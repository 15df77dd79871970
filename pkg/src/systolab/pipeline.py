"""Prime sweep over the gamma_p family with a resumable JSONL cache.

Each record joins the element's regularity data, the regulator of its
splitting field, the regulator of the integral centralizer, the mod-p unit
index, envelopes and the geodesic length of gamma_p.
"""

from __future__ import annotations

import csv
import dataclasses
import json
import logging
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

from . import arith, gamma
from .geometry import EnvelopeParams, geodesic_length, landau_envelope, silverman_envelope, torus_volume_lower, unit_rank
from .order import NumberFieldOrder, maximal_order
from .poly import poly_discriminant
from .units import BadPrimeError, RankDeficientError, suborder_units, unit_group, unit_index_mod_p

log = logging.getLogger(__name__)

SCHEMA_VERSION = 1
BUDGET_PREFIX = "budget"


class CacheError(OSError):
    """Raised when the cache file cannot be opened for appending."""


@dataclass(frozen=True)
class SweepConfig:
    """Inputs of a sweep. Envelope constants only affect derived columns."""

    prime_count: int
    precision_bits: int = 256
    threads: int = 1
    cache_path: str | None = None
    envelope: EnvelopeParams = field(default_factory=EnvelopeParams)
    metric_c: float = 1.0
    factor_effort: int = 2_000_000
    unit_budget: int = 4000
    lower_bound_constant: float | None = None

    def __post_init__(self) -> None:
        if self.prime_count < 1:
            raise ValueError("prime_count must be >= 1")
        if self.threads < 1 or self.factor_effort < 1 or self.unit_budget < 1:
            raise ValueError("threads and effort caps must be positive")

    @property
    def version_tag(self) -> str:
        tag = f"v{SCHEMA_VERSION}"
        if self.lower_bound_constant is not None:
            tag += f";lb={self.lower_bound_constant!r}"
        return tag


@dataclass
class SweepRecord:
    """One row of the sweep. ``None`` marks a value that could not be computed."""

    p: int
    disc_poly: int | None = None
    disc_field: int | None = None
    order_index: int | None = None
    n_real_roots: int | None = None
    r_regular: bool | None = None
    regulator_field: float | None = None
    regulator_certified: bool = False
    unit_index_mod_p: int | None = None
    adjusted_regulator: float | None = None
    torus_vol_lb: float | None = None
    landau_env: float | None = None
    silverman_env: float | None = None
    min_geodesic_length: float | None = None
    wall_time_ms: int = 0
    status: str = ""
    regulator_order: float | None = None
    centralizer_unit_index: int | None = None
    index_bound: int | None = None
    hyper_regular: bool | None = None
    charpoly_trace: int | None = None
    charpoly_minor_sum: int | None = None
    symbolic_match: bool | None = None
    printed_form_agrees: bool | None = None
    centralizer_saturated: bool | None = None

    @property
    def budget_exhausted(self) -> bool:
        return self.status.startswith(BUDGET_PREFIX)


FIELD_NAMES = [f.name for f in dataclasses.fields(SweepRecord)]
_FIELD_TYPES = {f.name: f.type for f in dataclasses.fields(SweepRecord)}


# --------------------------------------------------------------------------
# per-prime computation
# --------------------------------------------------------------------------


def compute_record(p: int, cfg: SweepConfig) -> SweepRecord:
    """All columns for one prime. Failures are reported in ``status``, never raised."""
    t0 = time.perf_counter()
    rec = SweepRecord(p)
    try:
        _fill(rec, p, cfg)
    except Exception as exc:  # noqa: BLE001 - one bad prime must not stop the sweep
        log.warning("p=%d failed: %s", p, exc)
        rec.status = f"error: {type(exc).__name__}: {exc}"
    rec.wall_time_ms = int((time.perf_counter() - t0) * 1000)
    return apply_config(rec, cfg)


def _fill(rec: SweepRecord, p: int, cfg: SweepConfig) -> None:
    prec = cfg.precision_bits
    elt = gamma.validate(p, prec)
    reg, rep = elt.regularity, elt.report
    rec.n_real_roots = reg.n_real_roots
    rec.r_regular = reg.r_regular
    rec.hyper_regular = reg.hyper_regular
    rec.charpoly_trace = rep.trace
    rec.charpoly_minor_sum = rep.minor_sum
    rec.symbolic_match = rep.matches_symbolic
    rec.printed_form_agrees = rep.agrees_with_printed
    rec.disc_poly = poly_discriminant(elt.charpoly)
    iso_vals = _root_values(elt, prec)
    rec.min_geodesic_length = float(geodesic_length(iso_vals, prec))

    _, g = gamma.reduced_generator(elt)
    rec.centralizer_saturated = gamma.centralizer_saturation_index(elt) == 1
    order = maximal_order(g, cfg.factor_effort)
    rec.disc_field = order.disc_field
    q, r = divmod(rec.disc_poly, order.disc_field)
    root = math.isqrt(q) if q > 0 and r == 0 else -1
    if root * root != q:
        raise ArithmeticError("disc_poly / disc_field is not a square")
    rec.order_index = root
    notes = []
    if not order.certified:
        notes.append(f"{BUDGET_PREFIX}: {order.status}")
    if not rec.centralizer_saturated:
        notes.append("centralizer larger than Z[B]; order regulator not computed")
    try:
        us = unit_group(order, prec, budget=cfg.unit_budget, lower_bound_constant=cfg.lower_bound_constant)
    except RankDeficientError as exc:
        rec.status = "; ".join(notes + [f"{BUDGET_PREFIX}: unit search: {exc}"])
        return
    rec.regulator_field = float(us.regulator)
    rec.regulator_certified = bool(us.certified and order.certified)
    rec.index_bound = us.index_bound
    if not us.certified:
        notes.append(f"regulator not certified ({us.status})")
    if rec.centralizer_saturated:
        sub = NumberFieldOrder.equation_order(g)
        try:
            sub_us, idx = suborder_units(us, sub)
            rec.centralizer_unit_index = idx
            rec.regulator_order = float(sub_us.regulator)
            rec.unit_index_mod_p = unit_index_mod_p(sub_us, p, norm_one=True)
            rec.adjusted_regulator = rec.regulator_order * rec.unit_index_mod_p
        except BadPrimeError as exc:
            notes.append(f"{BUDGET_PREFIX}: centralizer units: {exc}")
    rec.status = "; ".join(notes) if notes else "ok"


def _root_values(elt: gamma.CongruenceElement, prec: int):
    from .poly import sturm_real_roots

    iso = sturm_real_roots(elt.charpoly, prec)
    if iso.count != 3:
        raise ArithmeticError(f"expected 3 real roots, found {iso.count}")
    return iso.values(prec)


def apply_config(rec: SweepRecord, cfg: SweepConfig) -> SweepRecord:
    """Fill the columns that depend only on configured constants."""
    env = cfg.envelope
    if rec.disc_field is not None and rec.disc_field > 1:
        rec.landau_env = landau_envelope(rec.disc_field, env)
        rank = unit_rank((3, 0)) if rec.n_real_roots == 3 else unit_rank((1, 1))
        params = dataclasses.replace(env, unit_rank_r=rank, subfield_rank_rho=0)
        rec.silverman_env = silverman_envelope(rec.disc_field, params)
    if rec.adjusted_regulator:
        rec.torus_vol_lb = torus_volume_lower(rec.adjusted_regulator, cfg.metric_c)
    return rec


# --------------------------------------------------------------------------
# cache
# --------------------------------------------------------------------------


class RecordCache:
    """Append-only JSON-lines store keyed by (p, precision, version tag).

    The newest line for a key wins; unparsable lines are skipped and counted.
    """

    def __init__(self, path: str | os.PathLike):
        self.path = Path(path)
        self.corrupt_lines = 0
        self._data: dict[tuple, dict] = {}
        self._load()

    @staticmethod
    def key(p: int, precision_bits: int, tag: str) -> tuple:
        return (int(p), int(precision_bits), str(tag))

    def _load(self) -> None:
        if not self.path.exists():
            return
        with self.path.open("r", encoding="utf-8") as fh:
            for line in fh:
                if not line.strip():
                    continue
                try:
                    obj = json.loads(line)
                    k = self.key(*obj["key"])
                    rec = obj["record"]
                    if not isinstance(rec, dict):
                        raise ValueError("record is not an object")
                except (ValueError, KeyError, TypeError):
                    self.corrupt_lines += 1
                    continue
                self._data[k] = rec
        if self.corrupt_lines:
            log.warning("cache %s: skipped %d corrupt line(s)", self.path, self.corrupt_lines)

    def __len__(self) -> int:
        return len(self._data)

    def get(self, key: tuple) -> SweepRecord | None:
        raw = self._data.get(key)
        if raw is None:
            return None
        try:
            return record_from_dict(raw)
        except (TypeError, ValueError):
            return None

    def put(self, key: tuple, rec: SweepRecord) -> None:
        raw = dataclasses.asdict(rec)
        line = json.dumps({"key": list(key), "record": raw}, sort_keys=True)
        try:
            # A truncated last line would swallow the next record; start fresh.
            needs_newline = self.path.exists() and self.path.stat().st_size > 0 and not _ends_with_newline(self.path)
            with self.path.open("a", encoding="utf-8") as fh:
                if needs_newline:
                    fh.write("\n")
                fh.write(line + "\n")
        except OSError as exc:
            raise CacheError(f"cannot write cache {self.path}: {exc}") from exc
        self._data[key] = raw


def _ends_with_newline(path: Path) -> bool:
    with path.open("rb") as fh:
        fh.seek(-1, os.SEEK_END)
        return fh.read(1) == b"\n"


def record_from_dict(raw: dict) -> SweepRecord:
    known = {k: v for k, v in raw.items() if k in _FIELD_TYPES}
    return SweepRecord(**known)


# --------------------------------------------------------------------------
# sweep
# --------------------------------------------------------------------------


@dataclass
class SweepStats:
    computed: int = 0
    cached: int = 0
    corrupt_lines: int = 0


def _worker(args: tuple[int, SweepConfig]) -> SweepRecord:
    p, cfg = args
    return compute_record(p, cfg)


def run_sweep(cfg: SweepConfig) -> tuple[list[SweepRecord], SweepStats]:
    """Records for the first ``cfg.prime_count`` primes and cache statistics.

    Raises:
        CacheError: if the cache path is not writable.
    """
    primes = arith.first_primes(cfg.prime_count)
    cache = None
    if cfg.cache_path:
        _check_writable(Path(cfg.cache_path))
        cache = RecordCache(cfg.cache_path)
    stats = SweepStats(corrupt_lines=cache.corrupt_lines if cache else 0)
    out: dict[int, SweepRecord] = {}
    todo = []
    for p in primes:
        hit = cache.get(RecordCache.key(p, cfg.precision_bits, cfg.version_tag)) if cache else None
        if hit is not None:
            out[p] = apply_config(hit, cfg)
            stats.cached += 1
        else:
            todo.append(p)

    def store(rec: SweepRecord) -> None:
        out[rec.p] = rec
        stats.computed += 1
        if cache is not None:
            cache.put(RecordCache.key(rec.p, cfg.precision_bits, cfg.version_tag), rec)

    if cfg.threads > 1 and len(todo) > 1:
        with ProcessPoolExecutor(max_workers=cfg.threads) as pool:
            for rec in pool.map(_worker, [(p, cfg) for p in todo]):
                store(rec)
    else:
        for p in todo:
            store(compute_record(p, cfg))
    return [out[p] for p in primes], stats


def sweep(cfg: SweepConfig) -> list[SweepRecord]:
    """One record per prime, sorted by p."""
    return run_sweep(cfg)[0]


def _check_writable(path: Path) -> None:
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with path.open("a", encoding="utf-8"):
            pass
    except OSError as exc:
        raise CacheError(f"cache path {path} is not writable: {exc}") from exc


# --------------------------------------------------------------------------
# emitters
# --------------------------------------------------------------------------


def format_value(v) -> str:
    """Canonical CSV text: 15 significant digits for reals, empty for missing."""
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return f"{v:.15g}"
    return str(v)


def emit_csv(records: Sequence[SweepRecord], path: str | os.PathLike, exclude: Iterable[str] = ()) -> None:
    """Write records as CSV with one column per record field."""
    if not records:
        raise ValueError("no records to write")
    names = [n for n in FIELD_NAMES if n not in set(exclude)]
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(names)
        for rec in records:
            w.writerow([format_value(getattr(rec, n)) for n in names])


def _parse_value(name: str, text: str):
    if text == "":
        return None
    t = _FIELD_TYPES[name]
    if "bool" in t:
        return text == "true"
    if "float" in t:
        return float(text)
    if "int" in t:
        return int(text)
    return text


def read_csv(path: str | os.PathLike) -> list[SweepRecord]:
    """Parse a CSV written by :func:`emit_csv` back into records."""
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.DictReader(fh))
    out = []
    for row in rows:
        vals = {k: _parse_value(k, v) for k, v in row.items() if k in _FIELD_TYPES}
        if vals.get("regulator_certified") is None:
            vals["regulator_certified"] = False
        if vals.get("status") is None:
            vals["status"] = ""
        if vals.get("wall_time_ms") is None:
            vals["wall_time_ms"] = 0
        out.append(SweepRecord(**vals))
    return out


def emit_json(records: Sequence[SweepRecord], path: str | os.PathLike) -> None:
    """Write records as a JSON array of objects."""
    with open(path, "w", encoding="utf-8") as fh:
        json.dump([dataclasses.asdict(r) for r in records], fh, indent=1, sort_keys=False)
        fh.write("\n")
