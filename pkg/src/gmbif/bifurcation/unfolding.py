"""Three-parameter unfolding at the codimension-3 point.

(beta, b, d) = (beta0 + eps1, b0 + eps2, d0 + eps3) about a base point on the
locus d0 = c, b0 = c^2 beta0^2 / 4.  The perturbed field is expanded at the
unperturbed E1 (constant terms kept) and pushed through:

    translated    expansion about the base E1
    shear         x -> x - (2/(c beta^2)) x y
    lienard       (x, y) -> (x, xdot)
    remove_v2     x = u + (e02/2) u^2,  y = (1 + e02 u) v
    remove_uv2    x = u + (f12/6) u^3,  y = (1 + (f12/2) u^2) v
    remove_u3_u4  x = u + a u^2 + b u^3, time factor phi'(u)
    remove_u2v    y = v theta(v), theta = 1 + p v + p^2 v^2 / 4, time factor 1/theta
    scaled        u -> a u, v -> (a/s) v, time factor s  (j20 -> l4, j31 -> l5 = +-1)
    shifted       u -> u - l4 k10 / 2

Result: vdot = l1 + l2 v + l3 u v + l4 u^2 + l5 u^3 v + ...
"""

from __future__ import annotations

import math
from typing import Sequence

import numpy as np

from ..errors import ParameterError, PipelineGuardError
from ..jets import DEFAULT_ORDER, Jet2, PlanarJetField, expand_gm_field, identity, lienard_form, substitute, time_rescale, translate
from ..model import Params, State
from .cusp import on_codim3_locus
from .reports import NormalFormReport, UnfoldingReport

GUARD = 1e-10

SIGN_CASES = {"i": (1, 1), "ii": (1, -1), "iii": (-1, -1)}


def _guard(value: float, stage: str, name: str, fld: Jet2, degree: int) -> float:
    thr = GUARD * max(1.0, fld.scale_magnitude(degree))
    if not abs(value) > thr:
        raise PipelineGuardError(stage, name, value, thr)
    return value


def _liénard_change(fld: PlanarJetField, phi: Jet2) -> PlanarJetField:
    """x = phi(u), y = phi'(u) v keeps xdot = y."""
    u, v = identity(fld.order)
    return substitute(fld, (phi, phi.deriv(0) * v))


def sign_case(j20: float, j31: float) -> str:
    if j20 > 0 and j31 > 0:
        return "i"
    if j20 < 0 and j31 < 0:
        return "iii"
    return "ii"


def scaling(j20: float, j31: float) -> tuple[float, float, str]:
    """(a, s, case) with u4 = a u5, v4 = (a/s) v5, dt/dtau = s."""
    case = sign_case(j20, j31)
    s4, s5 = SIGN_CASES[case]
    a = s4 * math.copysign(1.0, j20) * abs(j20) ** 0.2 * abs(j31) ** -0.4
    s = math.sqrt(s4 / (a * j20))
    s = math.copysign(s, s5 * a * j31)
    return a, s, case


def closed_form_l(k00: float, k10: float, k01: float, k11: float, case: str) -> tuple[float, float, float]:
    """l1, l2, l3 from the scaled coefficients (truncated shift, per sign case)."""
    s4, s5 = SIGN_CASES[case]
    l1 = k00 - s4 * k10**2 / 4
    l2 = k01 - s4 * k10 * k11 / 2 - s5 * s4 * k10**3 / 8
    l3 = k11 + 3 * s5 * k10**2 / 4
    return l1, l2, l3


def bt_pipeline(params: Params, epsilon: Sequence[float], order: int = DEFAULT_ORDER) -> tuple[NormalFormReport, tuple, str]:
    c, beta, b, d = params.c, params.beta, params.b, params.d
    e1, e2, e3 = (float(e) for e in epsilon)
    try:
        pert = Params(c=c, beta=beta + e1, b=b + e2, d=d + e3)
    except ParameterError as exc:
        raise ParameterError(f"perturbed parameters invalid: {exc}") from None
    rep = NormalFormReport()
    rep.notes["epsilon"] = [e1, e2, e3]
    center = State(c * beta / 2.0, c * beta**2 / 2.0)
    u, v = identity(order)
    try:
        f = rep.add("translated", expand_gm_field(pert, center, order), "expansion about base E1")
        f = rep.add("shear", substitute(f, (u - (2.0 / (c * beta**2)) * u * v, v)), "x -> x - 2xy/(c beta^2)")
        _guard(f.fx[0, 1], "lienard", "cbar01", f.fx, 1)
        f = rep.add("lienard", lienard_form(f, "exact"), "(x, y) -> (x, xdot)")
        e02 = f.fy[0, 2]
        f = rep.add("remove_v2", _liénard_change(f, u + (e02 / 2) * u * u), "x = u + e02 u^2/2")
        f12 = f.fy[1, 2]
        f = rep.add("remove_uv2", _liénard_change(f, u + (f12 / 6) * u**3), "x = u + f12 u^3/6")
        g20 = _guard(f.fy[2, 0], "remove_u3_u4", "gbar20", f.fy, 2)
        g30, g40 = f.fy[3, 0], f.fy[4, 0]
        ca = -g30 / (4 * g20)
        cb = (15 * g30**2 - 16 * g20 * g40) / (80 * g20**2)
        phi = u + ca * u * u + cb * u**3
        f = substitute(f, (phi, v))
        f = rep.add("remove_u3_u4", time_rescale(f, phi.deriv(0)), "x = u + a u^2 + b u^3, dt/dtau = phi'")
        i20 = _guard(f.fy[2, 0], "remove_u2v", "ibar20", f.fy, 2)
        p = f.fy[2, 1] / (3 * i20)
        theta = 1.0 + p * v + (p * p / 4) * v * v
        f = substitute(f, (u, v * theta))
        f = rep.add("remove_u2v", time_rescale(f, theta.reciprocal()), "y = v theta(v), dt/dtau = 1/theta")
        j20 = _guard(f.fy[2, 0], "scaled", "jbar20", f.fy, 2)
        j31 = _guard(f.fy[3, 1], "scaled", "jbar31", f.fy, 4)
        a, s, case = scaling(j20, j31)
        f = substitute(f, (a * u, (a / s) * v))
        f = rep.add("scaled", time_rescale(f, s), f"case ({case}): u -> a u, v -> (a/s) v, dt/dtau = s")
        k = (f.fy[0, 0], f.fy[1, 0], f.fy[0, 1], f.fy[1, 1])
        s4 = SIGN_CASES[case][0]
        f = rep.add("shifted", translate(f, (-s4 * k[1] / 2, 0.0)), "u -> u - l4 k10/2")
    except PipelineGuardError as exc:
        exc.report = rep  # type: ignore[attr-defined]
        raise
    rep.notes["sign_case"] = case
    rep.notes["k"] = list(k)
    rep.notes["scaling"] = {"a": a, "s": s}
    return rep, k, case


def _l_vector(rep: NormalFormReport) -> tuple[float, float, float, float, float]:
    g = rep["shifted"].field.fy
    return (g[0, 0], g[0, 1], g[1, 1], g[2, 0], g[3, 1])


def bt_unfolding(
    params: Params,
    epsilon: Sequence[float] = (0.0, 0.0, 0.0),
    order: int = DEFAULT_ORDER,
    with_jacobian: bool = True,
    h: float = 1e-5,
) -> UnfoldingReport:
    """Run the unfolding pipeline at ``epsilon``; optionally the finite-difference
    determinant |d(l1, l2, l3)/d eps| at eps = 0 with steps h and h/2 (relative)."""
    if not on_codim3_locus(params):
        raise ParameterError("bt_unfolding needs a base point with d = c and b = d^2 beta^2 / 4")
    rep, _, case = bt_pipeline(params, epsilon, order)
    jd = jd2 = None
    if with_jacobian:
        jd = jacobian_determinant(params, h, order)
        jd2 = jacobian_determinant(params, h / 2, order)
    return UnfoldingReport(
        epsilon=tuple(float(e) for e in epsilon),  # type: ignore[arg-type]
        stage_coeffs=rep,
        l=_l_vector(rep),
        sign_case=case,
        jac_det=jd,
        jac_det_half=jd2,
    )


def jacobian_determinant(params: Params, h: float = 1e-5, order: int = DEFAULT_ORDER) -> float:
    """Central-difference |d(l1, l2, l3)/d(eps1, eps2, eps3)| at eps = 0.

    Step for eps_i is h times the natural scale (beta, b, d).
    """
    scales = (params.beta, params.b, params.d)
    cols = []
    for i, sc in enumerate(scales):
        step = h * sc
        e = np.zeros(3)
        e[i] = step
        lp = _l_vector(bt_pipeline(params, e, order)[0])[:3]
        lm = _l_vector(bt_pipeline(params, -e, order)[0])[:3]
        cols.append((np.array(lp) - np.array(lm)) / (2 * step))
    return float(np.linalg.det(np.column_stack(cols)))
