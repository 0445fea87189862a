"""Cusp reduction at E1 on the locus d = c, b = d^2 beta^2 / 4.

Stages (coordinates renamed at each step):

    translated       expansion about E1
    nilpotent_basis  (U, V) = (x, beta (x - y/c))          linear part -> [[0,1],[0,0]]
    quadratic_shear  y -> y + x^2 + (2/(c beta)) x y - (2/(c^2 beta)) y^2
    lienard          (x, y) -> (x, xdot)                     xdot = y exactly
    hypernormal      near-identity (Phi, Psi) + degree-4 cleanup
                     ydot = f20 x^2 + f40 x^4 + f31 x^3 y + O(5)
    rescaled         x -> -x, y -> -y / sqrt(-f20), dtau = sqrt(-f20) dt
                     ydot = x^2 + (f40/f20) x^4 + E x^3 y, E = -f31 / sqrt(-f20)
"""

from __future__ import annotations

import math

import numpy as np

from ..errors import ParameterError, PipelineGuardError
from ..jets import (
    DEFAULT_ORDER,
    Jet2,
    PlanarJetField,
    expand_gm_field,
    identity,
    lienard_form,
    push_forward,
    substitute,
    time_rescale,
)
from ..model import Params, State, default_tol
from .reports import CuspReport, NormalFormReport

E_TOL = 1e-6


def on_codim3_locus(params: Params, tol: float | None = None) -> bool:
    if tol is None:
        tol = default_tol(params)
    scale = max(1.0, params.c, params.d)
    return abs(params.d - params.c) <= 1e-9 * scale and abs(params.discriminant) <= tol


def guard(value: float, stage: str, name: str, scale: float = 1.0) -> float:
    thr = 1e-10 * max(1.0, abs(scale))
    if not abs(value) > thr:
        raise PipelineGuardError(stage, name, value, thr)
    return value


def _reference_transform(fld: PlanarJetField) -> tuple[Jet2, Jet2]:
    """Near-identity (x3, y3) = (Phi, Psi)(x2, y2) built from the Lienard coefficients."""
    n = fld.order
    g = fld.fy
    e20 = guard(g[2, 0], "hypernormal", "e20", g.scale_magnitude(2))
    e02, e21, e12, e03 = g[0, 2], g[2, 1], g[1, 2], g[0, 3]
    e22, e13, e04, e30 = g[2, 2], g[1, 3], g[0, 4], g[3, 0]
    phi = {
        (1, 0): 1.0,
        (2, 0): -e02 / 2,
        (1, 1): -e21 / (3 * e20),
        (3, 0): -(e12 - e02**2) / 6,
        (2, 1): -(e03 * e20 - e02 * e21) / (2 * e20),
        (4, 0): -(9 * e02**3 * e20 - 27 * e12 * e02 * e20 + 18 * e20 * e22 - 32 * e21**2) / (216 * e20),
        (3, 1): -(7 * e02**2 * e21 - 12 * e02 * e03 * e20 - 4 * e12 * e21 + 3 * e13 * e20) / (18 * e20),
        (2, 2): (e03 * e21 - e04 * e20) / (2 * e20),
    }
    psi = {
        (0, 1): 1.0,
        (1, 1): -e02,
        (0, 2): -e21 / (3 * e20),
        (3, 0): -e21 / 3,
        (2, 1): -(e12 - e02**2) / 2,
        (1, 2): -(-2 * e02 * e21 + 3 * e03 * e20) / (3 * e20),
        (4, 0): -(-3 * e02 * e20 * e21 + 3 * e03 * e20**2 + 2 * e21 * e30) / (6 * e20),
        (3, 1): -(9 * e02**3 * e20 - 27 * e02 * e12 * e20 + 18 * e20 * e22 - 14 * e21**2) / (54 * e20),
        (2, 2): -(4 * e20**2 * e21 - 9 * e02 * e03 * e20 - 2 * e12 * e21 + 3 * e13 * e20) / (6 * e20),
        (1, 3): -(-2 * e03 * e21 + 3 * e04 * e20) / (3 * e20),
    }
    return Jet2.from_dict(phi, n), Jet2.from_dict(psi, n)


def degree4_cleanup(fld: PlanarJetField) -> tuple[PlanarJetField, float]:
    """Remove the non-normal-form degree-4 terms of a field with xdot = y + O(4).

    With new coordinates (x + A, y + B), A, B quartic, the degree-4 part of
    xdot becomes P4 + y A_x - B and that of ydot Q4 + y B_x.  Taking
    B = P4 + y A_x clears xdot; A = a4 x^4 + a3 x^3 y + a2 x^2 y^2 then clears
    the x^2 y^2, x y^3, y^4 terms of ydot.  x^4 and x^3 y are untouched.
    Returns the new field and the size of the removed residual.
    """
    n = fld.order
    x, y = identity(n)
    p4 = fld.fx.degree_part(4)
    q = fld.fy.degree_part(4) + y * p4.deriv(0)
    resid = max(
        max(abs(p4[i, 4 - i]) for i in range(5)),
        abs(q[2, 2]),
        abs(q[1, 3]),
        abs(q[0, 4]),
    )
    a = Jet2.from_dict({(4, 0): -q[2, 2] / 12, (3, 1): -q[1, 3] / 6, (2, 2): -q[0, 4] / 2}, n)
    b = p4 + y * a.deriv(0)
    return push_forward(fld, (x + a, y + b)), resid


def cusp_pipeline(params: Params, order: int = DEFAULT_ORDER, lienard: str = "exact") -> tuple[NormalFormReport, float]:
    """Run the reduction; returns the stage ledger and the degree-4 cleanup residual.

    A tripped guard carries the stages completed so far as ``exc.report``.
    """
    if order < 5:
        raise ParameterError("cusp pipeline needs jet order >= 5 to keep degree-4 terms")
    rep = NormalFormReport()
    rep.notes["lienard_variant"] = lienard
    try:
        return _run_cusp(params, order, lienard, rep)
    except PipelineGuardError as exc:
        exc.report = rep  # type: ignore[attr-defined]
        raise


def _run_cusp(params: Params, order: int, lienard: str, rep: NormalFormReport) -> tuple[NormalFormReport, float]:
    c, beta, d = params.c, params.beta, params.d
    e1 = State(d * beta / 2.0, d * beta**2 / 2.0)
    f = rep.add("translated", expand_gm_field(params, e1, order), "expansion about E1")
    x, y = identity(order)
    f = rep.add("nilpotent_basis", substitute(f, (x, beta * (x - y / c))), "(U,V) = (x, beta(x - y/c))")
    shear = (x, y + x * x + (2.0 / (c * beta)) * x * y - (2.0 / (c * c * beta)) * y * y)
    f = rep.add("quadratic_shear", substitute(f, shear), "y -> y + x^2 + 2xy/(c beta) - 2y^2/(c^2 beta)")
    guard(f.fx[0, 1], "lienard", "xdot y-coefficient")
    f = rep.add("lienard", lienard_form(f, lienard), f"(x, y) -> (x, xdot) [{lienard}]")
    f = push_forward(f, _reference_transform(f))
    f, resid = degree4_cleanup(f)
    rep.notes["cleanup_residual"] = resid
    f = rep.add("hypernormal", f, "near-identity (Phi, Psi) then degree-4 homological cleanup")
    f20 = f.fy[2, 0]
    if not f20 < -1e-10 * max(1.0, f.fy.scale_magnitude(2)):
        raise PipelineGuardError("rescaled", "f20 (must be negative)", f20, 1e-10)
    r = math.sqrt(-f20)
    f = substitute(f, (-x, -r * y))
    f = rep.add("rescaled", time_rescale(f, 1.0 / r), "x -> -x, y -> -y/sqrt(-f20), dtau = sqrt(-f20) dt")
    return rep, resid


def cusp_report(params: Params, order: int = DEFAULT_ORDER, tol: float | None = None, e_tol: float = E_TOL) -> CuspReport:
    if not on_codim3_locus(params, tol):
        raise ParameterError("cusp_report needs d = c and b = d^2 beta^2 / 4")
    rep, resid = cusp_pipeline(params, order)
    h = rep["hypernormal"].field.fy
    f20, f40, f31 = h[2, 0], h[4, 0], h[3, 1]
    e = -f31 / math.sqrt(-f20)
    return CuspReport(
        f20=f20,
        f40=f40,
        f31=f31,
        E_coeff=e,
        certified=bool(abs(e) > e_tol),
        intermediate=rep,
        order=order,
        cleanup_residual=resid,
    )


def compare_tables(
    computed: dict[str, dict[tuple[int, int], float]],
    expected: dict[str, dict[tuple[int, int], float]],
    max_degree: int = 4,
    complete: bool = True,
) -> list[dict]:
    """Per-coefficient comparison rows.

    Relative error uses max(|expected|, degree scale, 1) as denominator, where
    the degree scale is the largest |coefficient| of the same total degree in
    the computed table; this keeps exact zeros comparable.
    """
    rows = []
    for comp in ("x", "y"):
        ctab = computed.get(comp, {})
        etab = expected.get(comp, {})
        keys = set(etab) | (set(k for k in ctab if sum(k) <= max_degree) if complete else set())
        for ij in sorted(keys, key=lambda m: (sum(m), -m[0])):
            if sum(ij) > max_degree:
                continue
            cv = ctab.get(ij, 0.0)
            ev = etab.get(ij, 0.0)
            deg_scale = max((abs(v) for k, v in ctab.items() if sum(k) == sum(ij)), default=0.0)
            den = max(abs(ev), deg_scale, 1.0)
            rows.append({"component": comp, "monomial": ij, "computed": cv, "expected": ev, "rel_err": abs(cv - ev) / den})
    return rows


def max_rel_err(rows: list[dict]) -> float:
    return float(np.max([r["rel_err"] for r in rows])) if rows else 0.0
