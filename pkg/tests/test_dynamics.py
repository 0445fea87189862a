from __future__ import annotations

import math

import numpy as np
import pytest

from gmbif.config import FIGURES
from gmbif.dynamics import (
    Section,
    Terminal,
    default_section,
    detect_limit_cycle,
    detect_limit_cycle_field,
    integrate,
    integrate_field,
    nearest_equilibrium,
    portrait,
    seed_ring,
)
from gmbif.errors import ParameterError
from gmbif.model import Params, equilibria, first_integral
from gmbif.verify import convergence_study

MU, OMEGA = 0.04, 1.0


def hopf_normal_form(y):
    r2 = y[0] ** 2 + y[1] ** 2
    return np.array([MU * y[0] - OMEGA * y[1] - y[0] * r2, OMEGA * y[0] + MU * y[1] - y[1] * r2])


def test_matches_solve_ivp():
    scipy_integrate = pytest.importorskip("scipy.integrate")
    p = FIGURES["4c"]
    tr = integrate(p, (0.2, 0.1), 30.0, 1e-10, eq_tol=0.0)
    ref = scipy_integrate.solve_ivp(
        lambda t, y: [p.c * (p.beta * y[0] ** 2 / y[1] - y[0]), p.b + y[0] ** 2 - p.d * y[1]],
        (0, 30.0),
        [0.2, 0.1],
        method="DOP853",
        rtol=1e-12,
        atol=1e-14,
    )
    assert tr.terminal is Terminal.TimeLimit
    assert tr.end == pytest.approx(ref.y[:, -1], rel=1e-7)


def test_linear_decay_exact():
    tr = integrate_field(lambda y: -y, np.array([1.0, 2.0]), 5.0, 1e-10, eq_tol=0.0)
    assert tr.y[-1] == pytest.approx(np.exp(-5.0) * np.array([1.0, 2.0]), rel=1e-8)


def test_convergence_order():
    res = convergence_study()
    assert res["order"] >= 4


def test_sink_converges_to_e2():
    p = FIGURES["4c"]
    e2 = next(e for e in equilibria(p) if e.label == "E2").point
    tr = integrate(p, (e2.u * 1.01, e2.v), 400.0, 1e-10)
    assert nearest_equilibrium(p, tr.end, 1e-6) == "E2"


def test_domain_exit_reported():
    p = Params(c=0.3, beta=0.5, b=1e-6, d=5.0)
    tr = integrate(p, (1e-4, 1e-6), 50.0, 1e-8, direction=-1)
    assert tr.terminal in (Terminal.LeftDomain, Terminal.TimeLimit, Terminal.StepFailure)
    assert np.all(tr.y[:, 1] > 0)


def test_invalid_init():
    with pytest.raises(ParameterError):
        integrate(FIGURES["4c"], (0.1, 0.2, 0.3))


def test_stable_oscillator_cycle():
    cyc = detect_limit_cycle_field(hopf_normal_form, Section((0.0, 0.0), (1.0, 0.0)), 0.5)
    assert cyc is not None
    assert cyc.stability == "Stable"
    assert cyc.amplitude == pytest.approx(math.sqrt(MU), rel=1e-4)
    assert cyc.period == pytest.approx(2 * math.pi / OMEGA, rel=1e-9)
    assert cyc.floquet_multiplier == pytest.approx(math.exp(-4 * math.pi * MU / OMEGA), rel=1e-5)
    assert cyc.closure_error < 1e-6


def test_unstable_cycle_found_in_reversed_time():
    cyc = detect_limit_cycle_field(lambda y: -hopf_normal_form(y), Section((0.0, 0.0), (1.0, 0.0)), 0.19)
    assert cyc is not None
    assert cyc.stability == "Unstable"
    assert cyc.section_point.u == pytest.approx(math.sqrt(MU), rel=1e-6)
    assert cyc.floquet_multiplier == pytest.approx(math.exp(4 * math.pi * MU / OMEGA), rel=1e-5)


def test_centre_is_not_a_limit_cycle():
    # d = c: a continuum of closed orbits, multiplier 1
    assert detect_limit_cycle(FIGURES["4a"]) is None


def test_no_cycle_off_the_hopf_line():
    p = FIGURES["4a"]
    assert detect_limit_cycle(p.replace(d=p.c * (1 - 1e-3)), max_iter=40) is None


def test_closed_orbit_detected_at_centre():
    p = FIGURES["4a"]
    sec = default_section(p)
    eqs = {e.label: e.point for e in equilibria(p)}
    y0 = sec.point(0.15 * (eqs["E2"].u - eqs["E3"].u))
    tr = integrate(p, y0, 200.0, 1e-11, eq_tol=0.0, closed_orbit_tol=1e-8)
    assert tr.terminal is Terminal.ClosedOrbit
    h = [first_integral(p, y) for y in tr.y]
    assert max(h) - min(h) < 1e-8 * abs(h[0])


def test_seed_ring_and_portrait_order():
    p = FIGURES["4c"]
    e2 = next(e for e in equilibria(p) if e.label == "E2").point
    seeds = seed_ring(e2, 0.01, 4)
    assert len(seeds) == 4
    trajs = portrait(p, seeds, 20.0, 1e-8, t_back=5.0)
    assert [(t.seed_index, t.direction) for t in trajs] == [(i, d) for i in range(4) for d in (1, -1)]
    assert all(t.t[-1] <= 0 for t in trajs if t.direction < 0)


def test_portrait_annotates_bad_seed():
    trajs = portrait(FIGURES["4c"], [(0.1, -1.0)], 10.0, backward=False)
    assert trajs[0].terminal is Terminal.LeftDomain
    assert trajs[0].message
