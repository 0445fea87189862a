from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gmbif.errors import DomainError, ParameterError
from gmbif.model import (
    Params,
    State,
    dulac_divergence,
    equilibria,
    eval_field,
    field_array,
    first_integral,
    jacobian,
)

pos = st.floats(min_value=0.05, max_value=5.0, allow_nan=False)


def test_figure5_equilibria_rows():
    p = Params(c=0.3, beta=0.5, b=0.0075, d=0.4)
    eqs = equilibria(p)
    assert [e.label for e in eqs] == ["E0", "E2", "E3"]
    # Delta = 0.04 - 0.03 = 0.01, u = (0.2 +- 0.1)/2
    assert eqs[0].point == pytest.approx((0.0, 0.01875), abs=1e-15)
    assert eqs[1].point == pytest.approx((0.15, 0.075), rel=1e-14)
    assert eqs[2].point == pytest.approx((0.05, 0.025), rel=1e-14)
    assert eqs[1].discriminant == pytest.approx(0.01, rel=1e-12)


def test_saddle_node_point_gives_single_e1():
    p = Params.codim3(0.4, 0.5477)
    labels = [e.label for e in equilibria(p)]
    assert labels == ["E0", "E1"]
    e1 = equilibria(p)[1].point
    assert e1.u == pytest.approx(0.4 * 0.5477 / 2)
    assert e1.v == pytest.approx(0.4 * 0.5477**2 / 2)


def test_negative_discriminant_only_boundary_equilibrium():
    p = Params(c=0.3, beta=0.5, b=0.02, d=0.4)
    assert [e.label for e in equilibria(p)] == ["E0"]


@pytest.mark.parametrize("field", ["c", "beta", "b", "d"])
@pytest.mark.parametrize("bad", [0.0, -1.0, math.nan, math.inf])
def test_params_reject_nonpositive(field, bad):
    vals = dict(c=0.3, beta=0.5, b=0.01, d=0.4)
    vals[field] = bad
    with pytest.raises(ParameterError, match=f"{field} must be positive"):
        Params(**vals)


def test_field_domain():
    p = Params(c=0.3, beta=0.5, b=0.01, d=0.4)
    with pytest.raises(DomainError):
        eval_field(p, (0.1, 0.0))
    with pytest.raises(DomainError):
        jacobian(p, (0.1, -1.0))


@settings(max_examples=200, deadline=None)
@given(pos, pos, pos, pos)
def test_equilibria_vanish_and_vieta(c, beta, b, d):
    p = Params(c=c, beta=beta, b=b, d=d)
    eqs = {e.label: e.point for e in equilibria(p)}
    for pt in eqs.values():
        assert max(abs(x) for x in eval_field(p, pt)) < 1e-10 * max(1.0, b, (d * beta) ** 2)
    if "E2" in eqs:
        u2, u3 = eqs["E2"].u, eqs["E3"].u
        assert u2 * u3 == pytest.approx(b, rel=1e-12)
        assert u2 + u3 == pytest.approx(d * beta, rel=1e-12)
        assert u2 > u3 > 0


@settings(max_examples=100, deadline=None)
@given(pos, pos, pos, pos, st.floats(0.01, 2.0), st.floats(0.01, 2.0))
def test_jacobian_matches_finite_differences(c, beta, b, d, u, v):
    p = Params(c=c, beta=beta, b=b, d=d)
    jm = jacobian(p, (u, v)).entries
    h = 1e-6
    num = np.empty((2, 2))
    for k, (du, dv) in enumerate(((h * u, 0.0), (0.0, h * v))):
        fp = np.array(eval_field(p, (u + du, v + dv)))
        fm = np.array(eval_field(p, (u - du, v - dv)))
        num[:, k] = (fp - fm) / (2 * (du + dv))
    assert np.allclose(num, jm, rtol=1e-6, atol=1e-8 * np.abs(jm).max())


def test_field_array_matches_scalar():
    p = Params(c=0.3, beta=0.5, b=0.01, d=0.4)
    ys = np.array([[0.1, 0.2], [0.3, 0.05], [1.0, 2.0]])
    out = field_array(p, ys)
    for row, y in zip(out, ys):
        assert row == pytest.approx(eval_field(p, y), rel=1e-15)


def test_first_integral_conserved_along_field_when_d_equals_c():
    p = Params(c=0.4, beta=0.6, b=0.0125, d=0.4)
    rng = np.random.default_rng(3)
    for u, v in rng.uniform(0.05, 1.0, size=(20, 2)):
        h = 1e-6
        gu = (first_integral(p, (u + h, v)) - first_integral(p, (u - h, v))) / (2 * h)
        gv = (first_integral(p, (u, v + h)) - first_integral(p, (u, v - h))) / (2 * h)
        f = eval_field(p, (u, v))
        assert abs(gu * f[0] + gv * f[1]) < 1e-6 * (abs(gu * f[0]) + abs(gv * f[1]) + 1e-12)


def test_dulac_divergence_sign():
    p = Params(c=0.3, beta=0.5, b=0.01, d=0.4)
    assert dulac_divergence(p, State(0.2, 0.1)) == pytest.approx(-0.1 / 0.04)
    assert dulac_divergence(p.replace(d=0.3), State(0.2, 0.1)) == 0.0
