"""Bifurcation engine for the local Gierer-Meinhardt system

    u' = c (beta u^2 / v - u),    v' = b + u^2 - d v.
"""

from __future__ import annotations

from .bifurcation import (
    bt_unfolding,
    cusp_report,
    equilibrium_count_across_SN,
    hopf_report,
    saddle_node_report,
    scan_bifurcation_set,
)
from .classify import Classification, Kind, classify_all, classify_equilibrium
from .config import DEFAULTS, FIGURES
from .dynamics import Terminal, Trajectory, detect_limit_cycle, integrate, portrait
from .errors import DomainError, GMError, JetError, ParameterError, PipelineGuardError
from .jets import Jet2, PlanarJetField
from .model import Equilibrium, Params, State, equilibria, eval_field, jacobian

__version__ = "0.1.0"

__all__ = [
    "Params",
    "State",
    "Equilibrium",
    "equilibria",
    "eval_field",
    "jacobian",
    "Jet2",
    "PlanarJetField",
    "Kind",
    "Classification",
    "classify_equilibrium",
    "classify_all",
    "cusp_report",
    "bt_unfolding",
    "saddle_node_report",
    "equilibrium_count_across_SN",
    "hopf_report",
    "scan_bifurcation_set",
    "integrate",
    "detect_limit_cycle",
    "portrait",
    "Terminal",
    "Trajectory",
    "DEFAULTS",
    "FIGURES",
    "GMError",
    "ParameterError",
    "DomainError",
    "JetError",
    "PipelineGuardError",
]
