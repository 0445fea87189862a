"""Stability classes of the equilibria E0..E3."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Any

import numpy as np

from .errors import ParameterError
from .model import Equilibrium, Params, default_tol, equilibria, jacobian

DEGENERACY_TOL = 1e-8


class Kind(str, Enum):
    StableNode = "StableNode"
    UnstableNode = "UnstableNode"
    Saddle = "Saddle"
    SaddleNodeStableSector = "SaddleNodeStableSector"
    SaddleNodeUnstableSector = "SaddleNodeUnstableSector"
    CuspCodim3 = "CuspCodim3"
    # nilpotent E1 on d = c whose cusp invariant E vanishes (fails |E| > tol)
    DegenerateCusp = "DegenerateCusp"
    Source = "Source"
    Sink = "Sink"
    CenterOrFineFocus = "CenterOrFineFocus"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class Classification:
    kind: Kind
    evidence: dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> dict[str, Any]:
        return {"kind": self.kind.value, "evidence": dict(self.evidence)}


@dataclass(frozen=True)
class SectorOrientation:
    """Parabolic-sector stability of the saddle-node E1 (d != c).

    ``reduced_coefficient`` is the u^2 coefficient of the centre-manifold
    equation in time tau = (d - c) t, -c/(beta (d-c)^2); ``printed_coefficient``
    is the alternative closed form -3/(beta^2 (d-c)^2), kept for comparison
    (same sign, different magnitude).
    """

    sign: int
    stable: bool
    transverse_eigenvalue: float
    reduced_coefficient: float
    printed_coefficient: float
    note: str = ""

    def to_dict(self) -> dict[str, Any]:
        return {
            "sign_d_minus_c": self.sign,
            "sector": "stable" if self.stable else "unstable",
            "transverse_eigenvalue": self.transverse_eigenvalue,
            "reduced_coefficient": self.reduced_coefficient,
            "printed_coefficient": self.printed_coefficient,
            "note": self.note,
        }


_SECTOR_NOTE = (
    "transverse eigenvalue c - d: d > c attracts (stable sector), d < c repels; "
    "the pairing d - c < 0 -> stable does not survive simulation"
)


def sector_orientation(params: Params, tol: float | None = None) -> SectorOrientation:
    if tol is None:
        tol = default_tol(params)
    if abs(params.discriminant) > tol:
        raise ParameterError("sector orientation needs Delta = 0 (E1 present)")
    c, beta, d = params.c, params.beta, params.d
    gap = d - c
    if abs(gap) <= DEGENERACY_TOL * max(1.0, c, d):
        raise ParameterError("d = c: E1 is nilpotent, use the cusp analysis")
    return SectorOrientation(
        sign=1 if gap > 0 else -1,
        stable=gap > 0,
        transverse_eigenvalue=c - d,
        reduced_coefficient=-c / (beta * gap * gap),
        printed_coefficient=-3.0 / (beta * beta * gap * gap),
        note=_SECTOR_NOTE,
    )


def _match(params: Params, eq: Equilibrium) -> None:
    for ref in equilibria(params):
        if ref.label == eq.label:
            scale = max(1.0, abs(ref.point.u), abs(ref.point.v))
            if max(abs(ref.point.u - eq.point[0]), abs(ref.point.v - eq.point[1])) <= 1e-9 * scale:
                return
            break
    raise ParameterError(f"equilibrium {eq.label} at {tuple(eq.point)} does not belong to these parameters")


def classify_equilibrium(params: Params, eq: Equilibrium, tol: float = DEGENERACY_TOL) -> Classification:
    """Classify ``eq``; trace and determinant are zero when below tol * max|J|."""
    _match(params, eq)
    jm = jacobian(params, eq.point)
    scale = float(np.abs(jm.entries).max())
    ztol = tol * max(scale, 1e-300)
    tr, det = jm.trace, jm.determinant
    ev: dict[str, Any] = {
        "trace": tr,
        "determinant": det,
        "discriminant": params.discriminant,
        "trace_zero": abs(tr) <= ztol,
        "det_zero": abs(det) <= ztol * scale,
        "eigenvalues": [complex(x) for x in jm.eigenvalues()],
    }
    label = eq.label
    if label == "E0":
        return Classification(Kind.StableNode, ev)
    if label == "E3":
        return Classification(Kind.Saddle, ev)
    if label == "E2":
        if ev["trace_zero"]:
            return Classification(Kind.CenterOrFineFocus, ev)
        return Classification(Kind.Source if tr > 0 else Kind.Sink, ev)
    # E1
    if ev["trace_zero"]:
        from .bifurcation.cusp import cusp_report

        rep = cusp_report(params)
        ev.update({"E": rep.E_coeff, "f20": rep.f20, "f31": rep.f31, "cusp_certified": rep.certified})
        return Classification(Kind.CuspCodim3 if rep.certified else Kind.DegenerateCusp, ev)
    so = sector_orientation(params)
    ev["sector"] = so.to_dict()
    return Classification(Kind.SaddleNodeStableSector if so.stable else Kind.SaddleNodeUnstableSector, ev)


def classify_all(params: Params, tol: float = DEGENERACY_TOL) -> list[tuple[Equilibrium, Classification]]:
    return [(e, classify_equilibrium(params, e, tol)) for e in equilibria(params)]


def eigen_summary(params: Params, eq: Equilibrium) -> tuple[float, float]:
    """Real parts (min, max) of the Jacobian eigenvalues."""
    lam = jacobian(params, eq.point).eigenvalues()
    return float(min(lam.real)), float(max(lam.real))


__all__ = [
    "Kind",
    "Classification",
    "SectorOrientation",
    "classify_equilibrium",
    "classify_all",
    "sector_orientation",
    "eigen_summary",
    "DEGENERACY_TOL",
]
