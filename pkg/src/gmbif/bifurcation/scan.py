"""Grid scan of parameter space: equilibrium count and E2 stability per cell."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Any, Mapping

import numpy as np

from ..errors import ParameterError
from ..model import Params, equilibria, jacobian

NAMES = ("c", "beta", "b", "d")


def cell_label(params: Params) -> tuple[int, str]:
    """(number of positive equilibria, region label)."""
    eqs = [e for e in equilibria(params) if e.label != "E0"]
    n = len(eqs)
    if n == 0:
        return 0, "0:none"
    if n == 1:
        return 1, "1:saddle-node"
    e2 = eqs[0]
    tr = jacobian(params, e2.point).trace
    scale = max(params.c, params.d)
    if abs(tr) <= 1e-12 * scale:
        return 2, "2:E2-center"
    return 2, "2:E2-source" if tr > 0 else "2:E2-sink"


@dataclass
class ScanResult:
    axes: dict[str, np.ndarray]
    fixed: dict[str, float]
    labels: np.ndarray
    counts: np.ndarray
    boundaries: list[dict[str, Any]] = field(default_factory=list)

    def to_dict(self) -> dict[str, Any]:
        return {
            "axes": {k: [float(x) for x in v] for k, v in self.axes.items()},
            "fixed": dict(self.fixed),
            "labels": self.labels.tolist(),
            "counts": self.counts.tolist(),
            "boundaries": self.boundaries,
        }

    def rows(self) -> list[dict[str, Any]]:
        names = list(self.axes)
        out = []
        for idx in itertools.product(*(range(len(self.axes[n])) for n in names)):
            row = {n: float(self.axes[n][i]) for n, i in zip(names, idx)}
            row.update(self.fixed)
            row["count"] = int(self.counts[idx])
            row["label"] = str(self.labels[idx])
            out.append(row)
        return out


def scan_bifurcation_set(params_box: Mapping[str, float | tuple[float, float]], resolution: int | Mapping[str, int] = 21) -> ScanResult:
    """Label every cell of a grid over the box.

    ``params_box`` maps each of c, beta, b, d to a fixed value or a (lo, hi)
    range; ranges are sampled at ``resolution`` points (lo == hi gives one).
    Boundaries between neighbouring cells are reported as saddle-node (count
    change) or Hopf (E2 source/sink change) crossings, with the exact locus value
    b_SN = d^2 beta^2 / 4 or d = c evaluated at the midpoint.
    """
    missing = [n for n in NAMES if n not in params_box]
    if missing:
        raise ParameterError(f"parameter box missing {', '.join(missing)}")
    axes: dict[str, np.ndarray] = {}
    fixed: dict[str, float] = {}
    for n in NAMES:
        entry = params_box[n]
        if isinstance(entry, (tuple, list)):
            lo, hi = (float(x) for x in entry)
            if not lo <= hi:
                raise ParameterError(f"empty range for {n}: {lo} > {hi}")
            if not lo > 0:
                raise ParameterError(f"{n} must be positive")
            k = 1 if lo == hi else (resolution[n] if isinstance(resolution, Mapping) else int(resolution))
            if k < 1:
                raise ParameterError("resolution must be >= 1")
            axes[n] = np.linspace(lo, hi, k)
        else:
            fixed[n] = float(entry)
    names = list(axes)
    shape = tuple(len(axes[n]) for n in names) or (1,)
    labels = np.empty(shape, dtype=object)
    counts = np.zeros(shape, dtype=int)
    cells: dict[tuple[int, ...], Params] = {}
    for idx in itertools.product(*(range(s) for s in shape)):
        vals = dict(fixed)
        for n, i in zip(names, idx):
            vals[n] = float(axes[n][i])
        p = Params(**vals)
        cells[idx] = p
        counts[idx], labels[idx] = cell_label(p)
    bounds = []
    for ax, n in enumerate(names):
        for idx in cells:
            nb = list(idx)
            nb[ax] += 1
            nb_t = tuple(nb)
            if nb_t not in cells or labels[idx] == labels[nb_t]:
                continue
            p0, p1 = cells[idx], cells[nb_t]
            mid = Params(**{k: 0.5 * (p0.as_dict()[k] + p1.as_dict()[k]) for k in NAMES})
            if counts[idx] != counts[nb_t]:
                kind, locus = "saddle-node", {"b_SN": mid.b_sn}
            else:
                kind, locus = "hopf", {"d=c": mid.c}
            bounds.append(
                {
                    "type": kind,
                    "axis": n,
                    "between": [list(idx), list(nb_t)],
                    "labels": [labels[idx], labels[nb_t]],
                    "midpoint": mid.as_dict(),
                    "locus": locus,
                }
            )
    return ScanResult(axes, fixed, labels, counts, bounds)


__all__ = ["scan_bifurcation_set", "cell_label", "ScanResult"]
