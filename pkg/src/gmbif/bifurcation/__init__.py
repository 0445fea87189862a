"""Saddle-node, Hopf and codimension-3 analyses."""

from __future__ import annotations

from .cusp import compare_tables, cusp_pipeline, cusp_report, on_codim3_locus
from .hopf import first_lyapunov_coefficient, hopf_closed_forms, hopf_report, lyapunov_from_jet
from .reports import CuspReport, HopfReport, NormalFormReport, SaddleNodeReport, Stage, UnfoldingReport
from .saddle_node import equilibrium_count_across_SN, saddle_node_report
from .scan import ScanResult, scan_bifurcation_set
from .unfolding import bt_pipeline, bt_unfolding, jacobian_determinant

__all__ = [
    "CuspReport",
    "HopfReport",
    "NormalFormReport",
    "SaddleNodeReport",
    "ScanResult",
    "Stage",
    "UnfoldingReport",
    "bt_pipeline",
    "bt_unfolding",
    "compare_tables",
    "cusp_pipeline",
    "cusp_report",
    "equilibrium_count_across_SN",
    "first_lyapunov_coefficient",
    "hopf_closed_forms",
    "hopf_report",
    "jacobian_determinant",
    "lyapunov_from_jet",
    "on_codim3_locus",
    "saddle_node_report",
    "scan_bifurcation_set",
]
