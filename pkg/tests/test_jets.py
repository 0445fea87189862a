from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gmbif.errors import JetError
from gmbif.jets import (
    Jet2,
    PlanarJetField,
    compose_transforms,
    expand_gm_field,
    identity,
    invert_transform,
    lienard_form,
    monomials,
    push_forward,
    substitute,
    time_rescale,
    translate,
)
from gmbif.model import Params, eval_field

ORDER = 4
coef = st.floats(min_value=-2.0, max_value=2.0, allow_nan=False, allow_infinity=False)
jets = st.lists(coef, min_size=15, max_size=15).map(lambda c: Jet2.from_coeffs(c, ORDER))


def close(a: Jet2, b: Jet2, tol: float = 1e-9) -> bool:
    return a.allclose(b, rtol=tol, atol=tol)


@settings(max_examples=60, deadline=None)
@given(jets, jets, jets)
def test_ring_laws(a, b, c):
    assert close(a * b, b * a)
    assert close((a * b) * c, a * (b * c))
    assert close(a * (b + c), a * b + a * c)
    assert close(a + b - b, a)
    assert close(a * Jet2.constant(1.0, ORDER), a)


@settings(max_examples=60, deadline=None)
@given(jets)
def test_reciprocal(a):
    a = a + (3.0 - a.const())
    assert close(a * a.reciprocal(), Jet2.constant(1.0, ORDER))


@settings(max_examples=40, deadline=None)
@given(jets, st.floats(-0.3, 0.3), st.floats(-0.3, 0.3))
def test_compose_with_shift_is_polynomial_evaluation(a, x0, y0):
    x, y = identity(ORDER)
    shifted = a.compose(x + x0, y + y0)
    # constant term of a(x + x0, y + y0) is the polynomial value at (x0, y0)
    assert shifted.const() == pytest.approx(a.evaluate(x0, y0), abs=1e-12)


def test_monomial_order_and_truncation():
    assert monomials(2) == [(0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2)]
    x, y = identity(3)
    p = (x + y) ** 4
    assert p.to_dict() == {}
    q = (x + y) ** 3
    assert q[2, 1] == 3.0 and q[0, 3] == 1.0


def test_order_mismatch_and_bad_ops():
    with pytest.raises(JetError):
        Jet2.var(0, 3) + Jet2.var(0, 4)
    with pytest.raises(JetError):
        Jet2.var(0, 3).reciprocal()
    with pytest.raises(JetError):
        Jet2(9)


def test_deriv():
    x, y = identity(5)
    p = 3 * x**2 * y + y**3
    assert p.deriv(0).to_dict() == {(1, 1): 6.0}
    assert p.deriv(1).to_dict() == {(2, 0): 3.0, (0, 2): 3.0}


def _random_transform(rng, n):
    x, y = identity(n)
    t1 = x + 0.3 * y + Jet2.from_dict({(2, 0): rng.normal(), (1, 1): rng.normal(), (0, 3): rng.normal()}, n)
    t2 = -0.2 * x + y + Jet2.from_dict({(0, 2): rng.normal(), (2, 1): rng.normal()}, n)
    return t1, t2


def test_invert_transform_roundtrip():
    rng = np.random.default_rng(0)
    n = 5
    t = _random_transform(rng, n)
    ti = invert_transform(t)
    a, b = compose_transforms(t, ti)
    x, y = identity(n)
    assert close(a, x, 1e-10) and close(b, y, 1e-10)


def test_substitute_composition_and_push_forward():
    rng = np.random.default_rng(1)
    n = 5
    p = Params(c=0.3, beta=0.5, b=0.01, d=0.4)
    f = expand_gm_field(p, (0.1, 0.05), n)
    # remove constant terms so that origin-fixing transforms apply
    f = PlanarJetField(f.fx - f.fx.const(), f.fy - f.fy.const())
    s, t = _random_transform(rng, n), _random_transform(rng, n)
    once = substitute(f, compose_transforms(s, t))
    twice = substitute(substitute(f, s), t)
    assert once.allclose(twice, rtol=1e-12, atol=1e-9)
    # substitute writes old = s(new); push_forward with s maps back
    back = push_forward(substitute(f, s), s)
    assert back.allclose(f, rtol=1e-10, atol=1e-9)


def test_expansion_matches_field_near_centre():
    p = Params(c=0.3, beta=0.5, b=0.01, d=0.4)
    centre = (0.1, 0.05)
    f = expand_gm_field(p, centre, 6)
    for dx, dy in ((1e-3, -2e-3), (-4e-3, 1e-3)):
        exact = eval_field(p, (centre[0] + dx, centre[1] + dy))
        approx = f.evaluate(dx, dy)
        # remainder is O(|h|^7 / v0^7)
        assert approx == pytest.approx(exact, abs=1e-9)


def test_translate_recentres():
    p = Params(c=0.3, beta=0.5, b=0.01, d=0.4)
    f = expand_gm_field(p, (0.1, 0.05), 5)
    g = translate(f, (0.01, 0.0))
    assert g.evaluate(0.0, 0.0) == pytest.approx(f.evaluate(0.01, 0.0), rel=1e-12)


def test_lienard_form_first_component_is_y():
    n = 5
    x, y = identity(n)
    f = PlanarJetField(2 * y + x * x + 0.5 * x * y, -x + y * y)
    g = lienard_form(f)
    assert g.fx.allclose(y)
    # linear part of ydot: d/dt (2y + x^2 + x y/2) at linear order = 2 (-x)
    assert g.fy[1, 0] == pytest.approx(-2.0)


def test_time_rescale():
    x, y = identity(3)
    f = PlanarJetField(y, x)
    g = time_rescale(f, 2.0)
    assert g.fx[0, 1] == 2.0 and g.fy[1, 0] == 2.0
    with pytest.raises(JetError):
        time_rescale(f, Jet2.var(0, 3))
