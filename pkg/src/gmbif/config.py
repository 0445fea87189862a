"""Central record of numerical defaults and the reference parameter sets."""

from __future__ import annotations

from dataclasses import asdict, dataclass

from .model import Params


@dataclass(frozen=True)
class Defaults:
    # equilibria: |Delta| <= delta_tol_rel * max(1, d^2 beta^2) counts as zero
    delta_tol_rel: float = 1e-9
    degeneracy_tol: float = 1e-8
    jet_order: int = 5
    cusp_e_tol: float = 1e-6
    guard_rel: float = 1e-10
    fd_step: float = 1e-5
    integ_tol: float = 1e-8
    t_max: float = 200.0
    t_back: float = 50.0
    v_floor: float = 1e-9
    eq_tol: float = 1e-10
    cycle_fixed_tol: float = 1e-8
    neutral_multiplier_tol: float = 1e-5
    seeds: str = "ring:16"
    ring_radius_rel: float = 0.25
    scan_resolution: int = 21
    rng_seed: int = 0

    def to_dict(self) -> dict:
        return asdict(self)


DEFAULTS = Defaults()

# Parameter sets of the reference phase portraits; "3a" is the codimension-3 point (d = c, b = b_SN).
FIGURES: dict[str, Params] = {
    "2": Params(c=0.1, beta=0.12, b=0.08, d=0.08),
    "3a": Params.codim3(0.4, 0.5477),
    "3b": Params(c=0.3, beta=0.5, b=0.01, d=0.4),
    "3c": Params(c=0.45, beta=0.5, b=0.01, d=0.4),
    "4a": Params(c=0.4, beta=0.6, b=0.0125, d=0.4),
    "4b": Params(c=0.45, beta=0.6, b=0.0125, d=0.38),
    "4c": Params(c=0.3, beta=0.6, b=0.0125, d=0.5),
    "5": Params(c=0.3, beta=0.5, b=0.0075, d=0.4),
}
