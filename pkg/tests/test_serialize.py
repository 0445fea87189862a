from __future__ import annotations

import math

import numpy as np
from hypothesis import given
from hypothesis import strategies as st

from gmbif import serialize
from gmbif.bifurcation import cusp_report
from gmbif.model import Params
from gmbif.svg import portrait_svg
from gmbif.config import FIGURES
from gmbif.dynamics import portrait, seed_ring
from gmbif.model import equilibria

finite = st.floats(allow_nan=False, allow_infinity=False)


@given(st.recursive(st.none() | st.booleans() | finite | st.integers() | st.text(), lambda ch: st.lists(ch) | st.dictionaries(st.text(), ch), max_leaves=20))
def test_roundtrip_identity(obj):
    text = serialize.dumps(obj)
    assert serialize.dumps(serialize.loads(text)) == text


@given(finite)
def test_float_is_bit_exact(x):
    assert float(serialize.fmt_float(x)) == x


def test_special_values():
    out = serialize.loads(serialize.dumps({"a": math.nan, "b": np.float64(1.5), (1, 2): 1j, "arr": np.arange(3)}))
    assert out == {"a": None, "b": 1.5, "1,2": {"re": 0.0, "im": 1.0}, "arr": [0, 1, 2]}


def test_report_roundtrip():
    rep = cusp_report(Params.codim3(0.4, 0.5477))
    text = serialize.dumps(rep)
    back = serialize.loads(text)
    assert back["f20"] == rep.f20
    assert serialize.dumps(back) == text


def test_csv_formatting():
    text = serialize.csv_text(("a", "b"), [(0.1, "x"), (np.float64(1 / 3), 2)])
    assert text == "a,b\n0.10000000000000001,x\n0.33333333333333331,2\n"


def test_svg_is_self_contained():
    p = FIGURES["4c"]
    e2 = equilibria(p)[1].point
    svg = portrait_svg(p, portrait(p, seed_ring(e2, 0.02, 3), 20.0, t_back=2.0))
    assert svg.startswith("<svg") and svg.rstrip().endswith("</svg>")
    assert "href" not in svg and "<style>" in svg
    assert svg.count("<polyline") >= 5
    assert ">E2<" in svg and ">E3<" in svg
