"""Standalone SVG scatter of regulators with fitted envelope curves.

Envelope constants are fitted from the data itself: the upper constant is
the largest R / (sqrt(D) log^2 D), the lower constant the smallest
R / log^2 D. Every plotted regulator therefore sits between the two curves.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from typing import Sequence
from xml.sax.saxutils import escape

from .pipeline import SweepRecord


class InsufficientDataError(ValueError):
    """Raised when fewer than two certified regulators are available."""


@dataclass(frozen=True)
class EnvelopeFit:
    """Fitted constants of R <= c1 sqrt(D) log^2 D and R >= c2 log^2 D."""

    c1: float
    c2: float

    def upper(self, d: float) -> float:
        return self.c1 * math.sqrt(d) * math.log(d) ** 2

    def lower(self, d: float) -> float:
        return self.c2 * math.log(d) ** 2


def certified_points(records: Sequence[SweepRecord]) -> list[SweepRecord]:
    """Records with a certified positive regulator and a field discriminant > 1."""
    return [
        r
        for r in records
        if r.regulator_certified and r.regulator_field and r.regulator_field > 0 and r.disc_field and r.disc_field > 1
    ]


def fit_envelopes(records: Sequence[SweepRecord]) -> EnvelopeFit:
    """Max-ratio upper and min-ratio lower constants over certified records.

    Raises:
        InsufficientDataError: with fewer than two certified records.
    """
    pts = certified_points(records)
    if len(pts) < 2:
        raise InsufficientDataError(f"need >= 2 certified regulators, have {len(pts)}")
    c1 = max(r.regulator_field / (math.sqrt(r.disc_field) * math.log(r.disc_field) ** 2) for r in pts)
    c2 = min(r.regulator_field / math.log(r.disc_field) ** 2 for r in pts)
    return EnvelopeFit(c1, c2)


def sandwich_violations(records: Sequence[SweepRecord], fit: EnvelopeFit, rel_tol: float = 1e-12) -> list[int]:
    """Primes whose certified regulator leaves the band between the fitted curves."""
    bad = []
    for r in certified_points(records):
        d, reg = r.disc_field, r.regulator_field
        if reg > fit.upper(d) * (1 + rel_tol) or reg < fit.lower(d) * (1 - rel_tol):
            bad.append(r.p)
    return bad


_W, _H = 900, 560
_ML, _MR, _MT, _MB = 80, 30, 40, 60


def _nice_ticks(lo: float, hi: float, count: int = 6) -> list[float]:
    span = hi - lo
    if span <= 0:
        return [lo]
    raw = span / count
    mag = 10 ** math.floor(math.log10(raw))
    step = min((m * mag for m in (1, 2, 5, 10) if m * mag >= raw), default=10 * mag)
    start = math.ceil(lo / step) * step
    out = []
    v = start
    while v <= hi + 1e-9 * step:
        out.append(v)
        v += step
    return out


def _fmt_tick(v: float) -> str:
    return f"{v:g}"


def emit_plot(
    records: Sequence[SweepRecord],
    path: str | os.PathLike,
    x: str = "p",
    envelopes: bool = True,
) -> EnvelopeFit:
    """Write an SVG scatter of certified regulators (log y axis) and return the fit.

    ``x`` selects the abscissa: ``"p"`` (linear) or ``"disc"`` (log scale of
    the field discriminant).

    Raises:
        InsufficientDataError: with fewer than two certified records.
        ValueError: for an unknown ``x``.
    """
    if x not in ("p", "disc"):
        raise ValueError("x must be 'p' or 'disc'")
    pts = sorted(certified_points(records), key=lambda r: (r.p if x == "p" else r.disc_field, r.p))
    fit = fit_envelopes(pts)

    def xval(r: SweepRecord) -> float:
        return float(r.p) if x == "p" else math.log10(r.disc_field)

    xs = [xval(r) for r in pts]
    ys = [math.log10(r.regulator_field) for r in pts]
    lows = [math.log10(fit.lower(r.disc_field)) for r in pts]
    highs = [math.log10(fit.upper(r.disc_field)) for r in pts]
    ylo = min(ys + (lows if envelopes else []))
    yhi = max(ys + (highs if envelopes else []))
    ylo, yhi = math.floor(ylo), math.ceil(yhi)
    if yhi == ylo:
        yhi += 1
    xlo, xhi = min(xs), max(xs)
    if xhi == xlo:
        xhi = xlo + 1
    pad = 0.02 * (xhi - xlo)
    xlo, xhi = xlo - pad, xhi + pad
    pw, ph = _W - _ML - _MR, _H - _MT - _MB

    def sx(v: float) -> float:
        return _ML + (v - xlo) / (xhi - xlo) * pw

    def sy(v: float) -> float:
        return _MT + (yhi - v) / (yhi - ylo) * ph

    parts = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_W}" height="{_H}" viewBox="0 0 {_W} {_H}">',
        '<rect width="100%" height="100%" fill="white"/>',
        f'<g id="axes" stroke="black" stroke-width="1">'
        f'<line x1="{_ML}" y1="{_MT + ph}" x2="{_ML + pw}" y2="{_MT + ph}"/>'
        f'<line x1="{_ML}" y1="{_MT}" x2="{_ML}" y2="{_MT + ph}"/></g>',
    ]
    ticks = ['<g id="ticks" font-family="sans-serif" font-size="11" fill="black">']
    for k in range(ylo, yhi + 1):
        y = sy(k)
        ticks.append(f'<line x1="{_ML - 4}" y1="{y:.2f}" x2="{_ML}" y2="{y:.2f}" stroke="black"/>')
        ticks.append(f'<text x="{_ML - 8}" y="{y + 4:.2f}" text-anchor="end">1e{k}</text>')
    for v in _nice_ticks(min(xs), max(xs)):
        xx = sx(v)
        label = _fmt_tick(v) if x == "p" else f"1e{_fmt_tick(v)}"
        ticks.append(f'<line x1="{xx:.2f}" y1="{_MT + ph}" x2="{xx:.2f}" y2="{_MT + ph + 4}" stroke="black"/>')
        ticks.append(f'<text x="{xx:.2f}" y="{_MT + ph + 18}" text-anchor="middle">{label}</text>')
    ticks.append("</g>")
    parts += ticks
    xlabel = "prime p" if x == "p" else "field discriminant D (log scale)"
    parts.append(
        f'<text x="{_ML + pw / 2}" y="{_H - 15}" text-anchor="middle" font-family="sans-serif" font-size="13">{xlabel}</text>'
    )
    parts.append(
        f'<text transform="translate(20,{_MT + ph / 2}) rotate(-90)" text-anchor="middle" '
        f'font-family="sans-serif" font-size="13">regulator (log scale)</text>'
    )
    if envelopes:
        for name, vals, colour in (("landau", highs, "#c0392b"), ("silverman", lows, "#2471a3")):
            d = " ".join(f"{'M' if i == 0 else 'L'}{sx(a):.2f},{sy(b):.2f}" for i, (a, b) in enumerate(zip(xs, vals)))
            parts.append(f'<path class="envelope" id="{name}" d="{d}" fill="none" stroke="{colour}" stroke-width="1.2"/>')
    parts.append('<g id="points" fill="black">')
    for a, b in zip(xs, ys):
        parts.append(f'<circle class="pt" cx="{sx(a):.2f}" cy="{sy(b):.2f}" r="2.2"/>')
    parts.append("</g>")
    legend = [f"{len(pts)} certified regulators"]
    if envelopes:
        legend += [
            f"upper: {fit.c1:.6g} sqrt(D) log^2 D",
            f"lower: {fit.c2:.6g} log^2 D",
        ]
    parts.append('<g id="legend" font-family="sans-serif" font-size="12">')
    for i, line in enumerate(legend):
        parts.append(f'<text x="{_ML + 10}" y="{_MT + 16 + 16 * i}">{escape(line)}</text>')
    parts.append("</g>")
    parts.append("</svg>")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(parts) + "\n")
    return fit
