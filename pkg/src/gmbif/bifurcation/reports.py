"""Report records produced by the bifurcation analyses."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

import numpy as np

from ..jets import PlanarJetField


@dataclass(frozen=True)
class Stage:
    label: str
    field: PlanarJetField
    note: str = ""

    def table(self, atol: float = 0.0) -> dict[str, dict[tuple[int, int], float]]:
        return self.field.table(atol)


@dataclass
class NormalFormReport:
    """Ordered coefficient ledger of every intermediate system in a pipeline."""

    stages: list[Stage] = field(default_factory=list)
    notes: dict[str, Any] = field(default_factory=dict)

    def add(self, label: str, fld: PlanarJetField, note: str = "") -> PlanarJetField:
        self.stages.append(Stage(label, fld, note))
        return fld

    def labels(self) -> list[str]:
        return [s.label for s in self.stages]

    def __getitem__(self, label: str) -> Stage:
        for s in self.stages:
            if s.label == label:
                return s
        raise KeyError(label)

    def __contains__(self, label: str) -> bool:
        return any(s.label == label for s in self.stages)

    def coefficient(self, label: str, comp: str, ij: tuple[int, int]) -> float:
        fld = self[label].field
        return (fld.fx if comp == "x" else fld.fy)[ij]

    def to_dict(self, atol: float = 0.0) -> dict[str, Any]:
        out = []
        for s in self.stages:
            tab = s.table(atol)
            out.append(
                {
                    "stage": s.label,
                    "note": s.note,
                    "x": {f"{i},{j}": v for (i, j), v in tab["x"].items()},
                    "y": {f"{i},{j}": v for (i, j), v in tab["y"].items()},
                }
            )
        return {"stages": out, "notes": dict(self.notes)}


@dataclass(frozen=True)
class CuspReport:
    f20: float
    f40: float
    f31: float
    E_coeff: float
    certified: bool
    intermediate: NormalFormReport
    order: int
    cleanup_residual: float

    def to_dict(self) -> dict[str, Any]:
        return {
            "f20": self.f20,
            "f40": self.f40,
            "f31": self.f31,
            "E": self.E_coeff,
            "certified": self.certified,
            "order": self.order,
            "cleanup_residual": self.cleanup_residual,
            "ledger": self.intermediate.to_dict(atol=0.0),
        }


@dataclass(frozen=True)
class UnfoldingReport:
    epsilon: tuple[float, float, float]
    stage_coeffs: NormalFormReport
    l: tuple[float, float, float, float, float]
    sign_case: str
    jac_det: float | None = None
    jac_det_half: float | None = None

    def to_dict(self) -> dict[str, Any]:
        return {
            "epsilon": list(self.epsilon),
            "l": list(self.l),
            "sign_case": self.sign_case,
            "jac_det": self.jac_det,
            "jac_det_half_step": self.jac_det_half,
            "ledger": self.stage_coeffs.to_dict(),
        }


@dataclass(frozen=True)
class SaddleNodeReport:
    b_SN: float
    V: np.ndarray
    W: np.ndarray
    wf_b: float
    wd2f: float
    wf_b_closed: float
    wd2f_closed: float
    null_residual: float
    certified: bool

    def to_dict(self) -> dict[str, Any]:
        return {
            "b_SN": self.b_SN,
            "V": [float(x) for x in self.V],
            "W": [float(x) for x in self.W],
            "wf_b": self.wf_b,
            "wd2f": self.wd2f,
            "wf_b_closed_form": self.wf_b_closed,
            "wd2f_closed_form": self.wd2f_closed,
            "null_residual": self.null_residual,
            "certified": self.certified,
        }


@dataclass(frozen=True)
class HopfReport:
    transversality: float
    D: float
    u2: float
    sigma_formula: float
    lyapunov_l1: float
    criticality: str
    cycle: Any = None
    evidence: dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> dict[str, Any]:
        return {
            "transversality": self.transversality,
            "D": self.D,
            "u2": self.u2,
            "sigma_formula": self.sigma_formula,
            "lyapunov_l1": self.lyapunov_l1,
            "criticality": self.criticality,
            "cycle": None if self.cycle is None else self.cycle.to_dict(),
            "evidence": dict(self.evidence),
        }
