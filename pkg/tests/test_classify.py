from __future__ import annotations

import pytest

from gmbif.classify import Kind, classify_all, classify_equilibrium, eigen_summary, sector_orientation
from gmbif.config import FIGURES
from gmbif.errors import ParameterError
from gmbif.model import Equilibrium, Params, State, equilibria

EXPECTED = {
    "2": {"E0": Kind.StableNode},
    "3a": {"E0": Kind.StableNode, "E1": Kind.DegenerateCusp},
    "3b": {"E0": Kind.StableNode, "E1": Kind.SaddleNodeStableSector},
    "3c": {"E0": Kind.StableNode, "E1": Kind.SaddleNodeUnstableSector},
    "4a": {"E0": Kind.StableNode, "E2": Kind.CenterOrFineFocus, "E3": Kind.Saddle},
    "4b": {"E0": Kind.StableNode, "E2": Kind.Source, "E3": Kind.Saddle},
    "4c": {"E0": Kind.StableNode, "E2": Kind.Sink, "E3": Kind.Saddle},
    "5": {"E0": Kind.StableNode, "E2": Kind.Sink, "E3": Kind.Saddle},
}


@pytest.mark.parametrize("key", sorted(EXPECTED))
def test_figure_parameter_sets(key):
    got = {e.label: c.kind for e, c in classify_all(FIGURES[key])}
    assert got == EXPECTED[key]


def test_sink_source_follow_trace_sign():
    p = FIGURES["4c"]
    e2 = next(e for e in equilibria(p) if e.label == "E2")
    lo, hi = eigen_summary(p, e2)
    assert hi < 0
    p = FIGURES["4b"]
    e2 = next(e for e in equilibria(p) if e.label == "E2")
    assert eigen_summary(p, e2)[0] > 0


def test_sector_orientation_examples():
    s = sector_orientation(FIGURES["3b"])
    assert s.stable
    # frozen value of the centre-manifold quadratic coefficient at these parameters
    assert s.reduced_coefficient == pytest.approx(-60.0, rel=1e-9)
    assert not sector_orientation(FIGURES["3c"]).stable


def test_evidence_contents():
    p = FIGURES["4c"]
    e, c = classify_all(p)[1]
    assert e.label == "E2"
    assert c.evidence["trace"] == pytest.approx(p.c - p.d)
    assert c.to_dict()["kind"] == "Sink"


def test_foreign_equilibrium_rejected():
    p = FIGURES["4c"]
    fake = Equilibrium(State(0.3, 0.2), "E2", p.discriminant)
    with pytest.raises(ParameterError):
        classify_equilibrium(p, fake)


def test_cusp_evidence_recorded():
    e1 = equilibria(FIGURES["3a"])[1]
    c = classify_equilibrium(FIGURES["3a"], e1)
    assert abs(c.evidence["E"]) < 1e-6
    assert c.evidence["cusp_certified"] is False
