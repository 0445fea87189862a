"""Adaptive integration, portraits and Poincare return maps.

The integrator is a Dormand-Prince 5(4) pair (FSAL, local extrapolation) with
PI step control on an error-per-unit-step norm, so the global error is roughly
proportional to ``tol``.  Steps whose stages would reach v <= v_floor are
rejected; section crossings are located by bisection on the cubic Hermite
interpolant of the accepted step.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Callable, Sequence

import numpy as np

from .errors import ParameterError
from .model import Params, State, equilibria

V_FLOOR = 1e-9
EQ_TOL = 1e-10
DEFAULT_TOL = 1e-8
DEFAULT_T_MAX = 200.0
BACKWARD_T_MAX = 50.0
NEUTRAL_TOL = 1e-5

Field = Callable[[np.ndarray], np.ndarray]

# Dormand-Prince coefficients
_A = [
    [],
    [1 / 5],
    [3 / 40, 9 / 40],
    [44 / 45, -56 / 15, 32 / 9],
    [19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729],
    [9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656],
    [35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84],
]
_B5 = np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0])
_B4 = np.array([5179 / 57600, 0.0, 7571 / 16695, 393 / 640, -92097 / 339200, 187 / 2100, 1 / 40])
_E = _B5 - _B4


class Terminal(str, Enum):
    TimeLimit = "TimeLimit"
    ConvergedToEquilibrium = "ConvergedToEquilibrium"
    ClosedOrbit = "ClosedOrbit"
    LeftDomain = "LeftDomain"
    StepFailure = "StepFailure"
    SectionReached = "SectionReached"

    def __str__(self) -> str:
        return self.value


@dataclass
class IntegratorStats:
    steps: int = 0
    rejected: int = 0
    nfev: int = 0
    min_v: float = math.inf


@dataclass(frozen=True)
class Section:
    """Half-line ``origin + r * axis``, r > 0; crossings counted where the flow
    passes from the negative to the positive side of sense * cross(axis, y - origin)."""

    origin: tuple[float, float]
    axis: tuple[float, float] = (1.0, 0.0)
    sense: int = 1

    def side(self, y: np.ndarray) -> float:
        return self.sense * (self.axis[0] * (y[1] - self.origin[1]) - self.axis[1] * (y[0] - self.origin[0]))

    def coordinate(self, y: np.ndarray) -> float:
        return self.axis[0] * (y[0] - self.origin[0]) + self.axis[1] * (y[1] - self.origin[1])

    def point(self, r: float) -> np.ndarray:
        return np.array([self.origin[0] + r * self.axis[0], self.origin[1] + r * self.axis[1]])


@dataclass
class Trajectory:
    t: np.ndarray
    y: np.ndarray
    terminal: Terminal
    stats: IntegratorStats
    direction: int = 1
    message: str = ""
    crossings: list[tuple[float, np.ndarray]] = field(default_factory=list)
    seed_index: int | None = None

    @property
    def samples(self) -> list[tuple[float, State]]:
        return [(float(t), State(float(p[0]), float(p[1]))) for t, p in zip(self.t, self.y)]

    @property
    def end(self) -> np.ndarray:
        return self.y[-1]

    def summary(self) -> dict[str, Any]:
        return {
            "seed_index": self.seed_index,
            "direction": self.direction,
            "terminal": self.terminal.value,
            "t_end": float(self.t[-1]) if len(self.t) else 0.0,
            "end": [float(x) for x in self.y[-1]] if len(self.y) else None,
            "steps": self.stats.steps,
            "rejected": self.stats.rejected,
            "min_v": self.stats.min_v,
            "message": self.message,
        }


@dataclass(frozen=True)
class LimitCycle:
    period: float
    section_point: State
    floquet_multiplier: float
    stability: str
    amplitude: float
    closure_error: float
    iterations: int

    def to_dict(self) -> dict[str, Any]:
        return {
            "period": self.period,
            "section_point": list(self.section_point),
            "floquet_multiplier": self.floquet_multiplier,
            "stability": self.stability,
            "amplitude": self.amplitude,
            "closure_error": self.closure_error,
            "iterations": self.iterations,
        }


def _hermite(t0: float, y0: np.ndarray, f0: np.ndarray, t1: float, y1: np.ndarray, f1: np.ndarray, t: float) -> np.ndarray:
    h = t1 - t0
    s = (t - t0) / h
    h00 = (1 + 2 * s) * (1 - s) ** 2
    h10 = s * (1 - s) ** 2
    h01 = s * s * (3 - 2 * s)
    h11 = s * s * (s - 1)
    return h00 * y0 + h10 * h * f0 + h01 * y1 + h11 * h * f1


def _locate(section: Section, t0, y0, f0, t1, y1, f1, iters: int = 60) -> tuple[float, np.ndarray]:
    lo, hi = t0, t1
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        if section.side(_hermite(t0, y0, f0, t1, y1, f1, mid)) < 0:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 1e-15 * max(1.0, abs(hi)):
            break
    tc = 0.5 * (lo + hi)
    return tc, _hermite(t0, y0, f0, t1, y1, f1, tc)


def integrate_field(
    fn: Field,
    y0: Sequence[float],
    t_max: float,
    tol: float = DEFAULT_TOL,
    *,
    direction: int = 1,
    domain: Callable[[np.ndarray], bool] | None = None,
    eq_tol: float = EQ_TOL,
    section: Section | None = None,
    stop_after_crossings: int | None = None,
    closed_orbit_tol: float | None = None,
    max_steps: int = 500_000,
    h0: float | None = None,
    keep_samples: bool = True,
    stop_when: Callable[[np.ndarray], bool] | None = None,
) -> Trajectory:
    """Integrate y' = fn(y) from t = 0 to direction * t_max.

    ``domain(y)`` returning False rejects a step (the floor test); if the step
    size underflows while the domain keeps rejecting, the run ends LeftDomain.
    ``stop_when(y)`` true after an accepted step also ends the run LeftDomain
    (left a region of interest).  With ``closed_orbit_tol`` (planar fields) the
    run ends ClosedOrbit when the orbit recrosses the transversal through the
    start point within that distance of it.
    """
    if not tol > 0:
        raise ParameterError("tol must be positive")
    if not t_max >= 0:
        raise ParameterError("t_max must be non-negative")
    if direction not in (1, -1):
        raise ParameterError("direction must be +1 or -1")
    sgn = float(direction)

    def g(y: np.ndarray) -> np.ndarray:
        return sgn * fn(y)

    y = np.array(y0, dtype=float)
    stats = IntegratorStats(min_v=float(y[-1]))
    ts, ys = [0.0], [y.copy()]
    crossings: list[tuple[float, np.ndarray]] = []
    if domain is not None and not domain(y):
        return Trajectory(np.array(ts), np.array(ys), Terminal.LeftDomain, stats, direction, "initial state outside domain")
    f = g(y)
    stats.nfev += 1
    if float(np.max(np.abs(f))) < eq_tol:
        return Trajectory(np.array(ts), np.array(ys), Terminal.ConvergedToEquilibrium, stats, direction)

    t = 0.0
    scale = lambda z: tol * np.maximum(1.0, np.abs(z))  # noqa: E731
    if h0 is None:
        d0 = float(np.max(np.abs(y) / scale(y)))
        d1 = float(np.max(np.abs(f) / scale(y)))
        h = 0.01 * d0 / d1 if d0 > 1e-5 and d1 > 1e-5 else 1e-6
        h = min(h, 0.1, max(t_max, 1e-12))
    else:
        h = h0
    hmin = 1e-14 * max(1.0, t_max)
    err_prev = 1.0
    terminal = Terminal.TimeLimit
    message = ""
    start = y.copy()
    closure = None
    if closed_orbit_tol is not None and y.size == 2:
        # full line through the start point, transverse to the flow there
        nrm = float(np.hypot(f[0], f[1]))
        axis = (f[1] / nrm, -f[0] / nrm)
        far = 1e6 * max(1.0, float(np.max(np.abs(y))))
        closure = Section((y[0] - far * axis[0], y[1] - far * axis[1]), axis)
    k = np.empty((7, y.size))
    while t < t_max:
        if stats.steps >= max_steps:
            terminal, message = Terminal.StepFailure, "step budget exhausted"
            break
        h = min(h, t_max - t)
        k[0] = f
        ok = True
        for i in range(1, 7):
            yi = y + h * np.dot(_A[i], k[:i])
            if domain is not None and not domain(yi) or not np.all(np.isfinite(yi)):
                ok = False
                break
            k[i] = g(yi)
            stats.nfev += 1
        if ok:
            y_new = yi  # stage 7 is the 5th-order solution (FSAL)
            err_vec = h * np.dot(_E, k)
            err = float(np.max(np.abs(err_vec) / (h * scale(y)))) if h > 0 else 0.0
            ok = np.all(np.isfinite(k[6])) and math.isfinite(err)
        if not ok:
            stats.rejected += 1
            h *= 0.25
            if h < hmin:
                terminal = Terminal.LeftDomain if domain is not None else Terminal.StepFailure
                message = "step size underflow at the domain boundary" if domain is not None else "step size underflow"
                break
            continue
        if err > 1.0:
            stats.rejected += 1
            h *= max(0.2, 0.9 * err ** (-0.25))
            if h < hmin:
                terminal, message = Terminal.StepFailure, "step size underflow"
                break
            continue
        t_new = t + h
        f_new = k[6].copy()
        stats.steps += 1
        stats.min_v = min(stats.min_v, float(y_new[-1]))
        if section is not None:
            s0, s1 = section.side(y), section.side(y_new)
            if s0 < 0 <= s1:
                tc, yc = _locate(section, t, y, f, t_new, y_new, f_new)
                if section.coordinate(yc) > 0:
                    crossings.append((sgn * tc, yc))
                    if stop_after_crossings is not None and len(crossings) >= stop_after_crossings:
                        ts.append(tc)
                        ys.append(yc)
                        terminal = Terminal.SectionReached
                        break
        if closure is not None:
            c0, c1 = closure.side(y), closure.side(y_new)
            if c0 < 0 <= c1:
                tc, yc = _locate(closure, t, y, f, t_new, y_new, f_new)
                if float(np.max(np.abs(yc - start))) < closed_orbit_tol:
                    ts.append(tc)
                    ys.append(yc)
                    t = tc
                    terminal, message = Terminal.ClosedOrbit, f"period {tc:.17g}"
                    break
        t, y, f = t_new, y_new, f_new
        if keep_samples or t >= t_max:
            ts.append(t)
            ys.append(y.copy())
        if float(np.max(np.abs(f))) < eq_tol:
            terminal = Terminal.ConvergedToEquilibrium
            break
        if stop_when is not None and stop_when(y):
            terminal, message = Terminal.LeftDomain, "left region of interest"
            break
        # PI controller, exponents for an error estimate of order h^4
        err = max(err, 1e-10)
        fac = 0.9 * err ** (-0.7 / 4) * err_prev ** (0.4 / 4)
        h *= min(5.0, max(0.2, fac))
        err_prev = err
    if not keep_samples and ts[-1] != t and terminal is not Terminal.SectionReached:
        ts.append(t)
        ys.append(y.copy())
    return Trajectory(sgn * np.array(ts), np.array(ys), terminal, stats, direction, message, crossings)


def _gm_fn(params: Params) -> Field:
    c, beta, b, d = params.c, params.beta, params.b, params.d

    def fn(y: np.ndarray) -> np.ndarray:
        u, v = y[0], y[1]
        return np.array([c * (beta * u * u / v - u), b + u * u - d * v])

    return fn


def integrate(
    params: Params,
    init: State | Sequence[float],
    t_max: float = DEFAULT_T_MAX,
    tol: float = DEFAULT_TOL,
    *,
    direction: int = 1,
    v_floor: float = V_FLOOR,
    eq_tol: float = EQ_TOL,
    **kwargs: Any,
) -> Trajectory:
    """Trajectory of the model from ``init``; stops on field norm < eq_tol or v <= v_floor."""
    y0 = np.array(init, dtype=float)
    if y0.shape != (2,) or not np.all(np.isfinite(y0)):
        raise ParameterError("init must be a finite (u, v) pair")
    if not y0[1] > v_floor:
        raise ParameterError(f"init v must exceed v_floor = {v_floor:g}")
    return integrate_field(
        _gm_fn(params),
        y0,
        t_max,
        tol,
        direction=direction,
        domain=lambda z: z[1] > v_floor,
        eq_tol=eq_tol,
        **kwargs,
    )


def return_map_field(
    fn: Field,
    section: Section,
    r: float,
    tol: float = 1e-10,
    t_max: float = 1e3,
    domain: Callable[[np.ndarray], bool] | None = None,
) -> tuple[float, float] | None:
    """First return (r', T) of the half-line point at coordinate r; None if no return."""
    tr = integrate_field(
        fn, section.point(r), t_max, tol, domain=domain, section=section, stop_after_crossings=1, keep_samples=False
    )
    if not tr.crossings:
        return None
    tc, yc = tr.crossings[0]
    return section.coordinate(yc), tc


def _cycle_amplitude(fn: Field, y0: np.ndarray, period: float, tol: float, domain) -> tuple[float, float]:
    tr = integrate_field(fn, y0, period, tol, domain=domain, eq_tol=0.0)
    amp = 0.5 * float(tr.y[:, 0].max() - tr.y[:, 0].min())
    return amp, float(np.max(np.abs(tr.y[-1] - y0)))


def detect_limit_cycle_field(
    fn: Field,
    section: Section,
    r0: float,
    *,
    tol: float = 1e-10,
    fixed_tol: float = 1e-8,
    max_iter: int = 200,
    t_return: float = 1e3,
    domain: Callable[[np.ndarray], bool] | None = None,
    neutral_tol: float = NEUTRAL_TOL,
) -> LimitCycle | None:
    """Fixed point of the return map.

    Plain iteration with Aitken acceleration until successive crossings differ
    by less than ``fixed_tol``, then Newton on G(r) = P(r) - r with the slope from
    central differences; if iteration does not settle (unstable cycles repel
    it) Newton starts from ``r0``.  The Newton stage also rejects slowly drifting
    maps that pass the step test without a nearby root.  Returns None for a
    multiplier within ``neutral_tol`` of 1 (a continuum of closed orbits), for
    roots below 1e-4 r0 (the equilibrium itself) or when returns fail.
    """
    if not r0 > 0:
        return None
    r_min = 1e-4 * r0
    f0 = np.asarray(fn(section.point(r0)), dtype=float)
    if section.side(section.point(r0) + f0) < 0:
        # orbits wind the other way round the origin
        section = dataclasses.replace(section, sense=-section.sense)

    def P(r: float):
        return return_map_field(fn, section, r, tol, t_return, domain)

    r = r0
    hist: list[float] = [r]
    it = 0
    settled = False
    while it < max_iter:
        it += 1
        nxt = P(r)
        if nxt is None or not nxt[0] > r_min:
            break
        r_new = nxt[0]
        hist.append(r_new)
        if abs(r_new - r) < fixed_tol * max(1.0, abs(r)):
            r = r_new
            settled = True
            break
        if len(hist) >= 3:
            a, b_, c_ = hist[-3:]
            den = c_ - 2 * b_ + a
            if den != 0.0:
                acc = c_ - (c_ - b_) ** 2 / den
                if acc > r_min and abs(acc - c_) < 10 * abs(c_ - a):
                    r_new = acc
                    hist = [acc]
        r = r_new
    if not settled:
        r = r0
    for _ in range(12):
        delta = 1e-4 * r
        plus, minus, at = P(r + delta), P(r - delta), P(r)
        if plus is None or minus is None or at is None:
            return None
        m = (plus[0] - minus[0]) / (2 * delta)
        if abs(m - 1.0) < neutral_tol:
            return None
        step = (at[0] - r) / (1.0 - m)
        if abs(step) < fixed_tol * max(1.0, abs(r)):
            break
        r = r + step
        if not r > r_min:
            return None
    else:
        return None
    y0 = section.point(r)
    amp, closure = _cycle_amplitude(fn, y0, at[1], tol, domain)
    return LimitCycle(
        period=at[1],
        section_point=State(float(y0[0]), float(y0[1])),
        floquet_multiplier=float(m),
        stability="Stable" if abs(m) < 1 else "Unstable",
        amplitude=amp,
        closure_error=closure,
        iterations=it,
    )


def default_section(params: Params) -> Section:
    """The half-line {v = v2, u > u2} through E2."""
    eqs = {e.label: e for e in equilibria(params)}
    if "E2" not in eqs:
        raise ParameterError("no E2: return-map section needs Delta > 0")
    p = eqs["E2"].point
    return Section((p.u, p.v), (1.0, 0.0))


def detect_limit_cycle(
    params: Params,
    seed: State | Sequence[float] | None = None,
    section: Section | None = None,
    **kwargs: Any,
) -> LimitCycle | None:
    """Search for an isolated periodic orbit through the section around E2.

    ``seed`` is projected onto the section; by default it sits at 20% of the
    E2-E3 distance to the right of E2.
    """
    if section is None:
        section = default_section(params)
    if seed is None:
        eqs = {e.label: e for e in equilibria(params)}
        gap = eqs["E2"].point.u - eqs["E3"].point.u if "E3" in eqs else 0.1 * section.origin[0]
        r0 = 0.2 * gap
    else:
        r0 = section.coordinate(np.array(seed, dtype=float))
    if not r0 > 1e-12 * max(1.0, abs(section.origin[0])):
        return None
    return detect_limit_cycle_field(_gm_fn(params), section, r0, domain=lambda z: z[1] > V_FLOOR, **kwargs)


def seed_ring(center: State | Sequence[float], radius: float, n: int, phase: float = 0.0) -> list[State]:
    """``n`` points on a circle; points with v <= v_floor are dropped."""
    if n < 0:
        raise ParameterError("seed count must be non-negative")
    cu, cv = float(center[0]), float(center[1])
    out = []
    for k in range(n):
        a = phase + 2 * math.pi * k / n
        s = State(cu + radius * math.cos(a), cv + radius * math.sin(a))
        if s.v > V_FLOOR:
            out.append(s)
    return out


def portrait(
    params: Params,
    seeds: Sequence[State | Sequence[float]],
    t_max: float = DEFAULT_T_MAX,
    tol: float = DEFAULT_TOL,
    *,
    backward: bool = True,
    t_back: float = BACKWARD_T_MAX,
) -> list[Trajectory]:
    """Forward (and backward, capped at t = -t_back) trajectories per seed.

    Per-seed failures become StepFailure/LeftDomain entries with a message;
    the batch never aborts.  Output order is seed order, forward before backward.
    """
    out: list[Trajectory] = []
    runs = [(1, t_max)] + ([(-1, min(t_back, t_max))] if backward else [])
    for i, s in enumerate(seeds):
        for direction, horizon in runs:
            try:
                tr = integrate(params, s, horizon, tol, direction=direction)
            except (ParameterError, ValueError) as exc:
                y = np.array([[float(s[0]), float(s[1])]]) if len(s) == 2 else np.zeros((1, 2))
                tr = Trajectory(np.zeros(1), y, Terminal.LeftDomain, IntegratorStats(), direction, str(exc))
            tr.seed_index = i
            out.append(tr)
    return out


def nearest_equilibrium(params: Params, y: Sequence[float], radius: float) -> str | None:
    """Label of the equilibrium within ``radius`` (max-norm) of ``y``."""
    best, dist = None, radius
    for e in equilibria(params):
        dd = max(abs(e.point.u - y[0]), abs(e.point.v - y[1]))
        if dd <= dist:
            best, dist = e.label, dd
    return best


__all__ = [
    "V_FLOOR",
    "EQ_TOL",
    "Terminal",
    "IntegratorStats",
    "Section",
    "Trajectory",
    "LimitCycle",
    "integrate",
    "integrate_field",
    "return_map_field",
    "detect_limit_cycle",
    "detect_limit_cycle_field",
    "default_section",
    "seed_ring",
    "portrait",
    "nearest_equilibrium",
]
