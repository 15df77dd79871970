import math
import xml.etree.ElementTree as ET

import pytest

from systolab.pipeline import SweepRecord
from systolab.plot import InsufficientDataError, emit_plot, fit_envelopes, sandwich_violations

NS = "{http://www.w3.org/2000/svg}"


def _records():
    out = []
    for i, (d, reg) in enumerate([(148, 2.1), (1000, 5.0), (5000, 3.0), (20000, 12.0), (90000, 8.5)]):
        out.append(SweepRecord(p=[2, 3, 5, 7, 11][i], disc_field=d, regulator_field=reg, regulator_certified=True))
    out.append(SweepRecord(p=13, disc_field=300, regulator_field=1.0, regulator_certified=False))
    return out


def test_fit_is_tight_and_sandwiches():
    recs = _records()
    fit = fit_envelopes(recs)
    ratios_hi = [r.regulator_field / (math.sqrt(r.disc_field) * math.log(r.disc_field) ** 2) for r in recs[:5]]
    ratios_lo = [r.regulator_field / math.log(r.disc_field) ** 2 for r in recs[:5]]
    assert fit.c1 == max(ratios_hi) and fit.c2 == min(ratios_lo)
    assert sandwich_violations(recs, fit) == []


def test_uncertified_points_excluded():
    recs = _records()
    fit = fit_envelopes(recs)
    assert fit.c2 == fit_envelopes(recs[:5]).c2


def test_too_few_points():
    with pytest.raises(InsufficientDataError):
        fit_envelopes(_records()[:1])


@pytest.mark.parametrize("axis", ["p", "disc"])
def test_svg_structure(tmp_path, axis):
    path = tmp_path / "fig.svg"
    emit_plot(_records(), path, x=axis, envelopes=True)
    root = ET.parse(path).getroot()
    circles = root.findall(f".//{NS}circle")
    assert len(circles) == 5
    ids = {e.get("id") for e in root.iter() if e.get("id")}
    assert {"landau", "silverman", "points", "legend"} <= ids


def test_svg_without_envelopes(tmp_path):
    path = tmp_path / "fig.svg"
    emit_plot(_records(), path, envelopes=False)
    root = ET.parse(path).getroot()
    assert not [e for e in root.iter() if e.get("id") in ("landau", "silverman")]


def test_bad_axis(tmp_path):
    with pytest.raises(ValueError):
        emit_plot(_records(), tmp_path / "x.svg", x="q")
