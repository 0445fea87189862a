"""Hopf point at E2 on the line d = c."""

from __future__ import annotations

import math
from typing import Any

import numpy as np

from ..errors import ParameterError
from ..jets import PlanarJetField, expand_gm_field
from ..model import Params, State, equilibria, first_integral, jacobian
from .reports import HopfReport

HOPF_TOL = 1e-8


def _e2(params: Params) -> State:
    for e in equilibria(params):
        if e.label == "E2":
            return e.point
    raise ParameterError("Hopf analysis needs Delta > 0 (E2 absent)")


def trace_e2(params: Params) -> float:
    return jacobian(params, _e2(params)).trace


def hopf_closed_forms(params: Params) -> dict[str, float]:
    """D = sqrt(Delta)/beta, u2 and the formula value sqrt(D)/(4 u2^2)."""
    delta = params.discriminant
    if not delta > 0:
        raise ParameterError("Hopf analysis needs Delta > 0")
    dd = math.sqrt(delta) / params.beta
    u2 = _e2(params).u
    return {"D": dd, "u2": u2, "sigma_formula": math.sqrt(dd) / (4.0 * u2 * u2)}


def _bform(comp, x, y):
    """Symmetric bilinear form of the quadratic part (complex-safe)."""
    return 2 * comp[2, 0] * x[0] * y[0] + comp[1, 1] * (x[0] * y[1] + x[1] * y[0]) + 2 * comp[0, 2] * x[1] * y[1]


def _cform(comp, x, y, z):
    return (
        6 * comp[3, 0] * x[0] * y[0] * z[0]
        + 2 * comp[2, 1] * (x[0] * y[0] * z[1] + x[0] * y[1] * z[0] + x[1] * y[0] * z[0])
        + 2 * comp[1, 2] * (x[0] * y[1] * z[1] + x[1] * y[0] * z[1] + x[1] * y[1] * z[0])
        + 6 * comp[0, 3] * x[1] * y[1] * z[1]
    )


def lyapunov_from_jet(jet: PlanarJetField) -> tuple[float, float]:
    """(l1, omega) of a jet field with a simple pair +-i omega at the origin.

    l1 = Re[<p, C(q,q,qbar)> - 2<p, B(q, A^-1 B(q,qbar))> + <p, B(qbar, (2i w - A)^-1 B(q,q))>] / (2 w)
    with A q = i w q, A^T p = -i w p, <p, q> = conj(p).q = 1 and |q| = 1.
    Under this normalisation x' = -w y + a x r^2, y' = w x + a y r^2 gives 2a/w.
    """
    if jet.order < 3:
        raise ParameterError("first Lyapunov coefficient needs a cubic jet")
    a = jet.linear_part()
    det = float(np.linalg.det(a))
    if not det > 0:
        raise ParameterError("no rotation at the origin (det <= 0)")
    w = math.sqrt(det)
    lam, vecs = np.linalg.eig(a)
    q = vecs[:, int(np.argmax(lam.imag))]
    lam_t, vecs_t = np.linalg.eig(a.T)
    p = vecs_t[:, int(np.argmin(lam_t.imag))]
    p = p / np.conj(np.vdot(p, q))
    comps = (jet.fx, jet.fy)

    def B(x, y):
        return np.array([_bform(cp, x, y) for cp in comps])

    def C(x, y, z):
        return np.array([_cform(cp, x, y, z) for cp in comps])

    qb = np.conj(q)
    t1 = np.vdot(p, C(q, q, qb))
    t2 = np.vdot(p, B(q, np.linalg.solve(a, B(q, qb))))
    t3 = np.vdot(p, B(qb, np.linalg.solve(2j * w * np.eye(2) - a, B(q, q))))
    return float((t1 - 2 * t2 + t3).real / (2 * w)), w


def first_lyapunov_coefficient(params: Params) -> tuple[float, float]:
    """(l1, omega) at E2; meaningful when tr J(E2) = 0."""
    return lyapunov_from_jet(expand_gm_field(params, _e2(params), 3))


def hopf_report(params: Params, simulate: bool = False, tol: float = HOPF_TOL) -> HopfReport:
    """Transversality, closed-form quantities, first Lyapunov coefficient.

    With ``simulate``, looks for isolated cycles at d = c and at d = c(1 +- 1e-3)
    and measures the drift of the first integral at d = c; criticality is only
    decided when an isolated cycle is found.
    """
    if not params.discriminant > 0:
        raise ParameterError("Hopf analysis needs Delta > 0")
    if abs(params.d - params.c) > tol * max(1.0, params.c):
        raise ParameterError(f"Hopf analysis needs d = c (|d - c| = {abs(params.d - params.c):.3g})")
    forms = hopf_closed_forms(params)
    # tr J(E2) = c - d identically in d, so d tr / dd = -1; the finite
    # difference is kept as evidence.
    h = 1e-6 * params.d
    fd = (trace_e2(params.replace(d=params.d + h)) - trace_e2(params.replace(d=params.d - h))) / (2 * h)
    l1, w = first_lyapunov_coefficient(params)
    evidence: dict[str, Any] = {"transversality_fd": fd, "omega": w}
    criticality = "Undetermined"
    cycle = None
    if simulate:
        evidence.update(_simulate(params))
        cycle = evidence.pop("_cycle")
        side = evidence.get("cycle_side")
        if cycle is not None and side is not None:
            stable = cycle.stability == "Stable"
            if side == "d<c" and stable:
                criticality = "Supercritical"
            elif side == "d>c" and not stable:
                criticality = "Subcritical"
    return HopfReport(
        transversality=-1.0,
        D=forms["D"],
        u2=forms["u2"],
        sigma_formula=forms["sigma_formula"],
        lyapunov_l1=l1,
        criticality=criticality,
        cycle=cycle,
        evidence=evidence,
    )


def _simulate(params: Params) -> dict[str, Any]:
    from ..dynamics import default_section, detect_limit_cycle, integrate, return_map_field, _gm_fn, V_FLOOR

    out: dict[str, Any] = {"_cycle": None, "cycle_side": None}
    sec = default_section(params)
    eqs = {e.label: e.point for e in equilibria(params)}
    gap = eqs["E2"].u - eqs["E3"].u
    fn = _gm_fn(params)
    slopes = []
    for frac in (0.05, 0.2, 0.5):
        r = frac * gap
        dr = 1e-4 * r
        pp = return_map_field(fn, sec, r + dr, 1e-11, domain=lambda z: z[1] > V_FLOOR)
        pm = return_map_field(fn, sec, r - dr, 1e-11, domain=lambda z: z[1] > V_FLOOR)
        if pp is not None and pm is not None:
            slopes.append((pp[0] - pm[0]) / (2 * dr))
    out["return_map_slopes_at_d_eq_c"] = slopes
    y0 = sec.point(0.2 * gap)
    tr = integrate(params, y0, 200.0, 1e-11, eq_tol=0.0)
    h = [first_integral(params, p) for p in tr.y[:: max(1, len(tr.y) // 50)]]
    out["first_integral_drift"] = float(max(h) - min(h))
    for label, d in (("d<c", params.c * (1 - 1e-3)), ("d>c", params.c * (1 + 1e-3))):
        q = params.replace(d=d)
        cyc = detect_limit_cycle(q, max_iter=40) if q.discriminant > 0 else None
        out[f"cycle_{label}"] = None if cyc is None else cyc.to_dict()
        if cyc is not None and out["_cycle"] is None:
            out["_cycle"], out["cycle_side"] = cyc, label
    cyc0 = detect_limit_cycle(params, max_iter=40)
    out["cycle_at_d_eq_c"] = None if cyc0 is None else cyc0.to_dict()
    if cyc0 is not None and out["_cycle"] is None:
        out["_cycle"] = cyc0
    return out
