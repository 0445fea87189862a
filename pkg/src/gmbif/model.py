"""Local Gierer-Meinhardt kinetics.

    du/dt = c (beta u^2 / v - u)
    dv/dt = b + u^2 - d v

Parameters, closed-form equilibria and exact Jacobians.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import DomainError, ParameterError

LABELS = ("E0", "E1", "E2", "E3")


@dataclass(frozen=True)
class Params:
    c: float
    beta: float
    b: float
    d: float

    def __post_init__(self) -> None:
        for name in ("c", "beta", "b", "d"):
            val = getattr(self, name)
            try:
                val = float(val)
            except (TypeError, ValueError):
                raise ParameterError(f"{name} must be a real number") from None
            if not math.isfinite(val) or val <= 0.0:
                raise ParameterError(f"{name} must be positive")
            object.__setattr__(self, name, val)
        if not math.isfinite((self.d * self.beta) ** 2):
            raise ParameterError("d*beta too large: discriminant overflows")

    @property
    def discriminant(self) -> float:
        """Delta = d^2 beta^2 - 4b."""
        return (self.d * self.beta) ** 2 - 4.0 * self.b

    @property
    def b_sn(self) -> float:
        """Saddle-node value of b, where Delta vanishes."""
        return (self.d * self.beta) ** 2 / 4.0

    def replace(self, **changes: float) -> Params:
        vals = {"c": self.c, "beta": self.beta, "b": self.b, "d": self.d}
        vals.update(changes)
        return Params(**vals)

    @classmethod
    def codim3(cls, c: float, beta: float) -> Params:
        """Parameters on the cusp locus d = c, b = d^2 beta^2 / 4."""
        return cls(c=c, beta=beta, b=(c * beta) ** 2 / 4.0, d=c)

    def as_dict(self) -> dict[str, float]:
        return {"c": self.c, "beta": self.beta, "b": self.b, "d": self.d}


class State(NamedTuple):
    u: float
    v: float


@dataclass(frozen=True)
class Equilibrium:
    point: State
    label: str
    discriminant: float


@dataclass(frozen=True)
class JacobianMatrix:
    entries: np.ndarray
    trace: float
    determinant: float

    @classmethod
    def from_entries(cls, m: np.ndarray) -> JacobianMatrix:
        m = np.array(m, dtype=float)
        m.setflags(write=False)
        return cls(m, float(m[0, 0] + m[1, 1]), float(m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]))

    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvals(self.entries)


def default_tol(params: Params) -> float:
    """Band for classifying Delta as zero: 1e-9 * max(1, d^2 beta^2)."""
    return 1e-9 * max(1.0, (params.d * params.beta) ** 2)


def eval_field(params: Params, state: State | tuple[float, float]) -> tuple[float, float]:
    u, v = state
    if not v > 0.0:
        raise DomainError(f"v must be positive, got {v!r}")
    c, beta, b, d = params.c, params.beta, params.b, params.d
    return c * (beta * u * u / v - u), b + u * u - d * v


def field_array(params: Params, y: np.ndarray) -> np.ndarray:
    """Vectorised field for an array of states with trailing axis (u, v); no domain check."""
    u, v = y[..., 0], y[..., 1]
    out = np.empty_like(y, dtype=float)
    out[..., 0] = params.c * (params.beta * u * u / v - u)
    out[..., 1] = params.b + u * u - params.d * v
    return out


def jacobian(params: Params, state: State | tuple[float, float]) -> JacobianMatrix:
    u, v = state
    if not v > 0.0:
        raise DomainError(f"v must be positive, got {v!r}")
    c, beta, d = params.c, params.beta, params.d
    m = np.array(
        [
            [c * (2.0 * beta * u / v - 1.0), -c * beta * u * u / (v * v)],
            [2.0 * u, -d],
        ]
    )
    return JacobianMatrix.from_entries(m)


def equilibria(params: Params, tol: float | None = None) -> list[Equilibrium]:
    """Closed-form equilibria, sorted by label.

    E0 = (0, b/d) always.  With Delta = d^2 beta^2 - 4b: E1 = (d beta/2, d beta^2/2)
    when |Delta| <= tol, E2/E3 = ((d beta +- sqrt Delta)/2, beta u) when Delta > tol.
    """
    if tol is None:
        tol = default_tol(params)
    if not tol > 0.0:
        raise ParameterError("tol must be positive")
    beta, b, d = params.beta, params.b, params.d
    delta = params.discriminant
    out = [Equilibrium(State(0.0, b / d), "E0", delta)]
    if abs(delta) <= tol:
        u1 = d * beta / 2.0
        out.append(Equilibrium(State(u1, beta * u1), "E1", delta))
    elif delta > tol:
        u2 = (d * beta + math.sqrt(delta)) / 2.0
        # smaller root via the product u2*u3 = b, avoids cancellation
        u3 = b / u2
        out.append(Equilibrium(State(u2, beta * u2), "E2", delta))
        out.append(Equilibrium(State(u3, beta * u3), "E3", delta))
    return out


def positive_equilibria(params: Params, tol: float | None = None) -> list[Equilibrium]:
    return [e for e in equilibria(params, tol) if e.label != "E0"]


def dulac_divergence(params: Params, state: State | tuple[float, float]) -> float:
    """div(F / u^2) = (c - d) / u^2.

    Sign-definite away from u = 0, so no periodic orbit exists when d != c.
    """
    u, _ = state
    return (params.c - params.d) / (u * u)


def first_integral(params: Params, state: State | tuple[float, float]) -> float:
    """H = c beta ln v - c v/u + b/u - u, conserved when d = c (u > 0, v > 0).

    For d = c, F / u^2 = (dH/dv, -dH/du).
    """
    u, v = state
    if not (u > 0.0 and v > 0.0):
        raise DomainError("first integral needs u > 0 and v > 0")
    c, beta, b = params.c, params.beta, params.b
    return c * beta * math.log(v) - c * v / u + b / u - u
