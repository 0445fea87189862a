"""Reference closed forms for the cusp reduction chain (d = c, b = c^2 beta^2/4).

Three sources, kept separate so they can be compared against each other:

* ``PRINTED``: reference closed-form coefficients for each stage, recorded
  verbatim with their misprints.  Golden values to be *checked*, not trusted.
* :func:`oracle_coefficients`: exact rational-function expressions
  generated offline by ``tools/make_oracle.py`` (sympy over Q(c, beta)).
* :func:`lienard_closed_form`: the Lienard stage derived in closed form by
  hand, as a rational function of x; independent of any jet composition.
"""

from __future__ import annotations

import json
from functools import lru_cache
from importlib import resources
from typing import Callable

from .jets import Jet2, PlanarJetField

Coef = Callable[[float, float], float]

# stage -> component -> (i, j) -> f(c, beta); valid on d = c only.
PRINTED: dict[str, dict[str, dict[tuple[int, int], Coef]]] = {
    "translated": {
        "x": {
            (1, 0): lambda c, B: c,
            (0, 1): lambda c, B: -c / B,
            (2, 0): lambda c, B: 2 / B,
            (1, 1): lambda c, B: -4 / B**2,
            (0, 2): lambda c, B: 2 / B**3,
            (2, 1): lambda c, B: -4 / (c * B**3),
            (1, 2): lambda c, B: 8 / (c * B**4),
            (0, 3): lambda c, B: -4 / (c * B**5),
            (2, 2): lambda c, B: 8 / (c**2 * B**5),
            (1, 3): lambda c, B: -16 / (c**2 * B**6),
            (0, 4): lambda c, B: 8 / (c**2 * B**7),
        },
        "y": {
            (1, 0): lambda c, B: c * B,
            (0, 1): lambda c, B: -c,
            (2, 0): lambda c, B: 1.0,
        },
    },
    "nilpotent_basis": {
        "x": {
            (0, 1): lambda c, B: 1.0,
            (0, 2): lambda c, B: 2 / (c**2 * B),
            (1, 2): lambda c, B: -4 / (c**3 * B**2),
            (0, 3): lambda c, B: 4 / (c**4 * B**2),
            (2, 2): lambda c, B: 8 / (c**4 * B**3),
            (1, 3): lambda c, B: -16 / (c**5 * B**3),
            (0, 4): lambda c, B: 8 / (c**6 * B**3),
        },
        "y": {
            (2, 0): lambda c, B: -c / B,
            (0, 2): lambda c, B: 2 / (c * B),
            (1, 2): lambda c, B: -4 / (c**2 * B**2),
            (0, 3): lambda c, B: 4 / (c**3 * B**2),
            (2, 2): lambda c, B: 8 / (c**3 * B**2),
            (1, 3): lambda c, B: -16 / (c**4 * B**3),
            (0, 4): lambda c, B: 8 / (c**5 * B**3),
        },
    },
    "quadratic_shear": {
        "x": {
            (0, 1): lambda c, B: 1.0,
            (2, 0): lambda c, B: 1.0,
            (1, 1): lambda c, B: 2 / (c * B),
            (2, 1): lambda c, B: 4 / (c**2 * B),
            (1, 2): lambda c, B: 4 / (c**3 * B**2),
            (0, 3): lambda c, B: -4 / (c**4 * B**2),
            (4, 0): lambda c, B: 2 / (c**2 * B),
            (2, 2): lambda c, B: 4 / (c**4 * B**2),
            (1, 3): lambda c, B: 8 / (c**5 * B**3),
            (0, 4): lambda c, B: -8 / (c**6 * B**3),
        },
        "y": {
            (2, 0): lambda c, B: -c / B,
            (1, 1): lambda c, B: -2.0,
            (3, 0): lambda c, B: -2 + 2 / B**2,
            (2, 1): lambda c, B: -4 / (c * B**2) + 2 / (c * B),
            (1, 2): lambda c, B: -8 / (c**2 * B),
            (0, 3): lambda c, B: -4 / (c**3 * B**2),
            (4, 0): lambda c, B: -6 / (c * B) - 4 / (c * B**3),
            (3, 1): lambda c, B: 4 / (c**2 * B**2) + 16 / (c**2 * B**3) - 16 / (c**2 * B),
            (2, 2): lambda c, B: 12 / (c**3 * B**2) - 16 / (c**3 * B**3),
            (1, 3): lambda c, B: 8 / (c**4 * B**3) - 24 / (c**4 * B**2),
            (0, 4): lambda c, B: -16 / (c**5 * B**3),
        },
    },
    "lienard": {
        "x": {(0, 1): lambda c, B: 1.0},
        "y": {
            (2, 0): lambda c, B: -c / B,
            (0, 2): lambda c, B: 2 / (c * B),
            (2, 1): lambda c, B: -4 / (c * B**2),
            (1, 2): lambda c, B: -4 / (c**2 * B**2) - 8 / (c**2 * B),
            (0, 3): lambda c, B: -4 / (c**3 * B**2),
            (4, 0): lambda c, B: 4 / (c * B**3),
            (3, 1): lambda c, B: 8 / (c**2 * B**2) + 16 / (c**3 * B**3) + 16 / (c**2 * B**3),
            (2, 2): lambda c, B: -8 / (c**3 * B**3) + 40 / (c**3 * B**2) - 16 / (c**4 * B**4),
            (1, 3): lambda c, B: -24 / (c**4 * B**2) + 24 / (c**4 * B**3),
            (0, 4): lambda c, B: -16 / (c**5 * B**3),
        },
    },
    "hypernormal": {
        "x": {(0, 1): lambda c, B: 1.0},
        "y": {
            (2, 0): lambda c, B: -c / B,
            (4, 0): lambda c, B: 11 / (3 * c * B**3) - 4 / (3 * c * B**2),
            (3, 1): lambda c, B: -4 / (c**2 * B**3) + 16 / (c**3 * B**3) + 8 / (c**2 * B**2),
        },
    },
}

# Families the closed forms above cover, per stage: coefficients of these
# components up to degree 4 not listed are implicitly zero in the printed system.
PRINTED_COMPLETE: dict[str, tuple[str, ...]] = {
    "translated": ("x", "y"),
    "nilpotent_basis": ("x", "y"),
    "quadratic_shear": ("x", "y"),
    "lienard": ("x", "y"),
    "hypernormal": ("x", "y"),
}


@lru_cache(maxsize=1)
def _oracle_raw() -> dict:
    text = resources.files("gmbif").joinpath("data/cusp_oracle.json").read_text()
    return json.loads(text)


@lru_cache(maxsize=None)
def _compiled(expr: str):
    return compile(expr, "<oracle>", "eval")


def oracle_stages() -> list[str]:
    return list(_oracle_raw()["stages"])


def oracle_coefficients(stage: str, c: float, beta: float) -> dict[str, dict[tuple[int, int], float]]:
    """Exact-arithmetic coefficients of ``stage`` evaluated at (c, beta)."""
    raw = _oracle_raw()["stages"][stage]
    env = {"c": float(c), "beta": float(beta), "__builtins__": {}}
    out: dict[str, dict[tuple[int, int], float]] = {}
    for comp, terms in raw.items():
        tab = {}
        for key, expr in terms.items():
            i, j = (int(s) for s in key.split(","))
            tab[(i, j)] = float(eval(_compiled(expr), env))  # trusted package data
        out[comp] = tab
    return out


def printed_coefficients(stage: str, c: float, beta: float) -> dict[str, dict[tuple[int, int], float]]:
    return {comp: {m: f(c, beta) for m, f in tab.items()} for comp, tab in PRINTED[stage].items()}


def lienard_closed_form(c: float, beta: float, order: int = 5) -> PlanarJetField:
    """xdot = y, ydot = -(c/beta) x^2 - 2 x^2 y / (beta (u1 + x)) + h(x) y^2.

    h(x) = (-x^2 + c beta x + c^2 beta^2 / 2) / (c beta (u1 + x)^2), u1 = c beta / 2.
    Exact for the Lienard stage of the cusp chain: ydot is quadratic in y.
    """
    x = Jet2.var(0, order)
    y = Jet2.var(1, order)
    u1 = c * beta / 2.0
    inv = (x + u1).reciprocal()
    h = (-(x * x) + c * beta * x + (c * beta) ** 2 / 2.0) * inv * inv / (c * beta)
    ydot = -(c / beta) * (x * x) - 2.0 / beta * (x * x) * y * inv + h * (y * y)
    return PlanarJetField(y, ydot)


def hypernormal_invariants(c: float, beta: float) -> dict[str, float]:
    """f20 = -c/beta, f31 = 0 (forced by the first integral at d = c), and
    f40 = -1/(3 c beta^3) for the reference near-identity transform."""
    return {"f20": -c / beta, "f40": -1.0 / (3.0 * c * beta**3), "f31": 0.0, "E": 0.0}


def printed_rescaled_quartic(c: float, beta: float) -> float:
    """The rescaled-stage x^4 coefficient as printed (there labelled as x^3): f40/f20."""
    return 4.0 / (3.0 * c**2 * beta) - 11.0 / (3.0 * c**2 * beta**2)
