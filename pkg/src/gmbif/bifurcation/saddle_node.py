"""Saddle-node certification along b = d^2 beta^2 / 4 (Sotomayor conditions)."""

from __future__ import annotations

import numpy as np

from ..errors import ParameterError
from ..jets import expand_gm_field
from ..model import Params, State, default_tol, jacobian, positive_equilibria
from .reports import SaddleNodeReport

NULL_TOL = 1e-10


def _bilinear(q, x: np.ndarray, y: np.ndarray) -> complex:
    """Symmetric bilinear form of the quadratic part of a jet component."""
    return (
        2 * q[2, 0] * x[0] * y[0]
        + q[1, 1] * (x[0] * y[1] + x[1] * y[0])
        + 2 * q[0, 2] * x[1] * y[1]
    )


def saddle_node_report(params: Params, tol: float | None = None) -> SaddleNodeReport:
    """Null vectors and transversality numbers at E1 for b = b_SN.

    Closed forms: V = (1, beta), W = (1, -c/(d beta)), W.F_b = -c/(d beta),
    W.D^2F(V, V) = -2c/(d beta).  The reported wf_b and wd2f are computed from
    the numerical null space of J and the jet at E1, not from the closed forms.
    """
    if tol is None:
        tol = default_tol(params)
    if abs(params.discriminant) > tol:
        raise ParameterError(
            f"saddle-node report needs b = d^2 beta^2/4 (|Delta| = {abs(params.discriminant):.3g} > tol {tol:.3g})"
        )
    c, beta, d = params.c, params.beta, params.d
    e1 = State(d * beta / 2.0, d * beta**2 / 2.0)
    jm = jacobian(params, e1).entries
    # right and left null vectors from the SVD, normalised to first component 1
    _, _, vt = np.linalg.svd(jm)
    v = vt[-1] / vt[-1][0]
    _, _, wt = np.linalg.svd(jm.T)
    w = wt[-1] / wt[-1][0]
    resid = float(max(np.abs(jm @ v).max(), np.abs(w @ jm).max()))
    jet = expand_gm_field(params, e1, 2)
    d2f = np.array([_bilinear(jet.fx, v, v), _bilinear(jet.fy, v, v)])
    f_b = np.array([0.0, 1.0])
    wf_b = float(w @ f_b)
    wd2f = float(w @ d2f)
    closed_b = -c / (d * beta)
    closed_d2 = -2.0 * c / (d * beta)
    certified = bool(resid < NULL_TOL * max(1.0, np.abs(jm).max()) and wf_b != 0.0 and wd2f != 0.0)
    return SaddleNodeReport(
        b_SN=params.b_sn,
        V=v,
        W=w,
        wf_b=wf_b,
        wd2f=wd2f,
        wf_b_closed=closed_b,
        wd2f_closed=closed_d2,
        null_residual=resid,
        certified=certified,
    )


def equilibrium_count_across_SN(params: Params, delta_b: float) -> tuple[int, int, int]:
    """Positive-equilibrium counts at b_SN - delta, b_SN, b_SN + delta."""
    bsn = params.b_sn
    if not delta_b > 0.0:
        raise ParameterError("delta_b must be positive")
    if delta_b >= bsn:
        raise ParameterError(f"delta_b = {delta_b:.6g} must be smaller than b_SN = {bsn:.6g}")
    counts = []
    for b in (bsn - delta_b, bsn, bsn + delta_b):
        counts.append(len(positive_equilibria(params.replace(b=b))))
    return counts[0], counts[1], counts[2]
