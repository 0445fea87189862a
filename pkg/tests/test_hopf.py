from __future__ import annotations

import math

import pytest

from gmbif.bifurcation import hopf_report
from gmbif.bifurcation.hopf import first_lyapunov_coefficient, hopf_closed_forms, lyapunov_from_jet, trace_e2
from gmbif.errors import ParameterError
from gmbif.jets import PlanarJetField, identity
from gmbif.model import Params

FIG4A = Params(c=0.4, beta=0.6, b=0.0125, d=0.4)


def test_trace_is_c_minus_d():
    for d in (0.38, 0.4, 0.45):
        assert trace_e2(FIG4A.replace(d=d)) == pytest.approx(0.4 - d, abs=1e-14)


def test_closed_forms_at_figure4a():
    f = hopf_closed_forms(FIG4A)
    # Delta = 0.0576 - 0.05 = 0.0076
    assert f["D"] == pytest.approx(math.sqrt(0.0076) / 0.6, rel=1e-12)
    assert f["D"] == pytest.approx(0.14530, abs=5e-6)
    assert f["u2"] == pytest.approx((0.24 + math.sqrt(0.0076)) / 2, rel=1e-12)
    assert f["sigma_formula"] == pytest.approx(math.sqrt(f["D"]) / (4 * f["u2"] ** 2), rel=1e-12)


@pytest.mark.parametrize("a,w", [(0.7, 1.0), (-0.3, 2.5)])
def test_lyapunov_known_normal_form(a, w):
    x, y = identity(3)
    r2 = x * x + y * y
    jet = PlanarJetField(-w * y + a * x * r2, w * x + a * y * r2)
    l1, om = lyapunov_from_jet(jet)
    assert om == pytest.approx(w)
    assert l1 == pytest.approx(2 * a / w, rel=1e-12)


def test_lyapunov_vanishes_on_hamiltonian_line():
    l1, w = first_lyapunov_coefficient(FIG4A)
    assert abs(l1) < 1e-10
    assert w > 0


def test_report_transversality():
    rep = hopf_report(FIG4A)
    assert rep.transversality == -1.0
    assert rep.evidence["transversality_fd"] == pytest.approx(-1.0, rel=1e-6)
    assert rep.criticality == "Undetermined"


def test_report_rejects_off_line():
    with pytest.raises(ParameterError):
        hopf_report(FIG4A.replace(d=0.45))
    with pytest.raises(ParameterError):
        hopf_report(Params(c=0.4, beta=0.6, b=0.2, d=0.4))


def test_simulation_finds_centre_not_cycle():
    rep = hopf_report(FIG4A, simulate=True)
    ev = rep.evidence
    assert rep.cycle is None
    assert ev["first_integral_drift"] < 1e-8
    assert all(abs(s - 1.0) < 1e-5 for s in ev["return_map_slopes_at_d_eq_c"])
