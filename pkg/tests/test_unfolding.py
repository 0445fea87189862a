from __future__ import annotations

import numpy as np
import pytest

from gmbif.bifurcation import bt_unfolding
from gmbif.bifurcation.unfolding import bt_pipeline, closed_form_l, jacobian_determinant, scaling, sign_case
from gmbif.errors import ParameterError, PipelineGuardError
from gmbif.model import Params

FIG3A = Params.codim3(0.4, 0.5477)


def test_zero_epsilon_normal_form():
    rep = bt_unfolding(FIG3A, with_jacobian=False)
    l1, l2, l3, l4, l5 = rep.l
    assert max(abs(l1), abs(l2), abs(l3)) < 1e-8
    assert abs(l4) == pytest.approx(1.0, abs=1e-12)
    assert abs(l5) == pytest.approx(1.0, abs=1e-12)
    assert rep.sign_case == "ii"
    assert rep.stage_coeffs.labels()[-1] == "shifted"


def test_translated_constants_closed_form():
    c, beta = FIG3A.c, FIG3A.beta
    eps = (1e-3, 2e-5, -3e-4)
    rep, _, _ = bt_pipeline(FIG3A, eps)
    f = rep["translated"].field
    assert f.fx[0, 0] == pytest.approx(c * c * eps[0] / 2, rel=1e-9)
    assert f.fy[0, 0] == pytest.approx(eps[1] - eps[2] * c * beta**2 / 2, rel=1e-9)


@pytest.mark.parametrize("s", [1e-4, 1e-5])
def test_closed_form_l_agrees_with_pipeline(s):
    eps = (s * FIG3A.beta, s * FIG3A.b, -s * FIG3A.d)
    rep, k, case = bt_pipeline(FIG3A, eps)
    got = np.array(rep["shifted"].field.fy.grid[[0, 0, 1], [0, 1, 1]])
    ref = np.array(closed_form_l(*k, case))
    # l1, l2 agree to rounding; l3 differs by the neglected O(k10^2) shift terms
    assert got[:2] == pytest.approx(ref[:2], rel=1e-8)
    assert got[2] == pytest.approx(ref[2], rel=1e-4)


@pytest.mark.parametrize("j20,j31,case", [(2.0, 3.0, "i"), (2.0, -3.0, "ii"), (-2.0, 3.0, "ii"), (-2.0, -3.0, "iii")])
def test_scaling_normalises(j20, j31, case):
    a, s, got = scaling(j20, j31)
    assert got == case == sign_case(j20, j31)
    # u -> a u, v -> (a/s) v, time factor s sends j20 -> j20 a s^2 and j31 -> j31 a^3 s
    l4 = j20 * a * s * s
    l5 = j31 * a**3 * s
    s4 = {"i": 1, "ii": 1, "iii": -1}[case]
    s5 = {"i": 1, "ii": -1, "iii": -1}[case]
    assert l4 == pytest.approx(s4)
    assert l5 == pytest.approx(s5)


def test_jacobian_determinant_is_step_dependent():
    # the determinant is identically zero in exact arithmetic here: it shrinks like h^2
    d1 = jacobian_determinant(FIG3A, 1e-4)
    d2 = jacobian_determinant(FIG3A, 5e-5)
    assert d2 / d1 == pytest.approx(0.25, rel=0.05)


def test_requires_locus():
    with pytest.raises(ParameterError):
        bt_unfolding(FIG3A.replace(d=0.5))


def test_invalid_perturbation():
    with pytest.raises(ParameterError, match="perturbed"):
        bt_pipeline(FIG3A, (-1.0, 0.0, 0.0))


def test_guard_reports_stage(monkeypatch):
    import gmbif.bifurcation.unfolding as unf

    monkeypatch.setattr(unf, "GUARD", 1e12)
    with pytest.raises(PipelineGuardError) as info:
        bt_pipeline(FIG3A, (0.0, 0.0, 0.0))
    assert info.value.stage == "lienard"
    assert info.value.report.labels() == ["translated", "shear"]
