"""Acceptance suite: one check per criterion, shared by ``gmbif verify`` and the tests.

Every check evaluates its criterion literally at the stated tolerance and
returns the measured values; none of them is relaxed to force a pass.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import Any, Callable

import numpy as np

from .bifurcation.cusp import compare_tables, cusp_pipeline, cusp_report
from .bifurcation.hopf import hopf_report
from .bifurcation.saddle_node import equilibrium_count_across_SN, saddle_node_report
from .bifurcation.unfolding import bt_unfolding
from .classify import Kind, classify_equilibrium
from .config import FIGURES
from .dynamics import (
    Terminal,
    default_section,
    detect_limit_cycle,
    integrate,
    seed_ring,
)
from .errors import GMError
from .model import Params, State, equilibria, eval_field, first_integral
from .reference import oracle_coefficients, printed_coefficients


@dataclass
class CriterionResult:
    number: int
    key: str
    title: str
    passed: bool
    expected: str
    measured: dict[str, Any] = field(default_factory=dict)
    seconds: float = 0.0
    note: str = ""

    def line(self) -> str:
        tag = "PASS" if self.passed else "FAIL"
        brief = ", ".join(f"{k}={_short(v)}" for k, v in self.measured.items() if _scalar(v))
        return f"[{tag}] criterion {self.number} ({self.key}): {self.title} | {brief} | expected: {self.expected} | {self.seconds:.2f} s"

    def to_dict(self) -> dict[str, Any]:
        return {
            "criterion": self.number,
            "key": self.key,
            "title": self.title,
            "passed": self.passed,
            "expected": self.expected,
            "measured": self.measured,
            "seconds": self.seconds,
            "note": self.note,
        }


def _scalar(v: Any) -> bool:
    return isinstance(v, (bool, int, float, str, np.floating, np.integer)) or v is None


def _short(v: Any) -> str:
    if isinstance(v, (float, np.floating)):
        return f"{float(v):.4g}"
    return str(v)


def _random_params(rng: np.random.Generator, n: int) -> list[Params]:
    """Valid parameters with Delta > 0: c, beta, d log-uniform in [0.05, 5], b in (0, b_SN)."""
    out = []
    while len(out) < n:
        c, beta, d = np.exp(rng.uniform(math.log(0.05), math.log(5.0), 3))
        b = (d * beta) ** 2 / 4 * rng.uniform(0.01, 0.99)
        p = Params(c, beta, b, d)
        if p.discriminant > 1e-6 * (d * beta) ** 2:
            out.append(p)
    return out


# 1 ---------------------------------------------------------------------------


def check_equilibria(rng: np.random.Generator) -> CriterionResult:
    t0 = time.perf_counter()
    draws = _random_params(rng, 1000)
    worst_field = 0.0
    worst_prod = worst_sum = 0.0
    missing = 0
    for p in draws:
        eqs = {e.label: e.point for e in equilibria(p)}
        if set(eqs) != {"E0", "E2", "E3"}:
            missing += 1
            continue
        for pt in eqs.values():
            worst_field = max(worst_field, max(abs(x) for x in eval_field(p, pt)))
        u2, u3 = eqs["E2"].u, eqs["E3"].u
        worst_prod = max(worst_prod, abs(u2 * u3 - p.b) / p.b)
        worst_sum = max(worst_sum, abs(u2 + u3 - p.d * p.beta) / (p.d * p.beta))
    secs = time.perf_counter() - t0
    ok = missing == 0 and worst_field < 1e-10 and worst_prod <= 1e-12 and worst_sum <= 1e-12 and secs < 1.0
    return CriterionResult(
        1,
        "equilibria",
        "equilibrium closed forms",
        ok,
        "field norm < 1e-10, Vieta rel <= 1e-12, runtime < 1 s",
        {"draws": len(draws), "max_field_norm": worst_field, "vieta_product_rel": worst_prod, "vieta_sum_rel": worst_sum, "missing": missing},
        secs,
    )


# 2 ---------------------------------------------------------------------------

GOLDEN_STAGES = {"translated": "a/b", "quadratic_shear": "c/d", "lienard": "e", "hypernormal": "f"}


def check_golden(rng: np.random.Generator, n: int = 100, rtol: float = 1e-9) -> CriterionResult:
    t0 = time.perf_counter()
    worst_printed: dict[str, float] = {}
    worst_oracle = 0.0
    for _ in range(n):
        c, beta = rng.uniform(0.2, 2.0, 2)
        rep, _ = cusp_pipeline(Params.codim3(c, beta))
        for stage in GOLDEN_STAGES:
            tab = rep[stage].table()
            for row in compare_tables(tab, printed_coefficients(stage, c, beta)):
                key = f"{stage}.{row['component']}{row['monomial'][0]}{row['monomial'][1]}"
                worst_printed[key] = max(worst_printed.get(key, 0.0), row["rel_err"])
            for row in compare_tables(tab, oracle_coefficients(stage, c, beta)):
                worst_oracle = max(worst_oracle, row["rel_err"])
    secs = time.perf_counter() - t0
    bad = {k: v for k, v in sorted(worst_printed.items()) if v > rtol}
    ok = not bad and worst_oracle <= rtol and secs < 5.0
    return CriterionResult(
        2,
        "golden",
        "coefficient golden values (translated, shear, Lienard, hypernormal)",
        ok,
        f"every printed coefficient within rel {rtol:g}; runtime < 5 s",
        {
            "draws": n,
            "coefficients_checked": len(worst_printed),
            "printed_mismatches": len(bad),
            "max_rel_err_vs_printed": max(worst_printed.values()),
            "max_rel_err_vs_exact_oracle": worst_oracle,
            "mismatch_table": bad,
        },
        secs,
        "discrepancies listed per coefficient as stage.component+monomial",
    )


# 3 ---------------------------------------------------------------------------


def check_cusp() -> CriterionResult:
    t0 = time.perf_counter()
    p = FIGURES["3a"]
    e1 = next(e for e in equilibria(p) if e.label == "E1")
    cls = classify_equilibrium(p, e1)
    r5 = cusp_report(p, order=5)
    r6 = cusp_report(p, order=6)
    diffs = {
        name: abs(a - b) / max(1.0, abs(a))
        for name, a, b in (("f20", r5.f20, r6.f20), ("f40", r5.f40, r6.f40), ("f31", r5.f31, r6.f31))
    }
    stable = max(diffs.values()) <= 1e-8
    ok = cls.kind is Kind.CuspCodim3 and abs(r5.E_coeff) > 1e-6 and stable
    return CriterionResult(
        3,
        "cusp",
        "cusp certificate at the codimension-3 point",
        ok,
        "CuspCodim3 with |E| > 1e-6; order 5 vs 6 agree to 1e-8",
        {
            "classification": cls.kind.value,
            "E": r5.E_coeff,
            "f20": r5.f20,
            "f40": r5.f40,
            "f31": r5.f31,
            "order_5_vs_6_max_rel": max(diffs.values()),
            "order_stable": stable,
        },
        time.perf_counter() - t0,
    )


# 4 ---------------------------------------------------------------------------


def check_saddle_node(rng: np.random.Generator, n: int = 100) -> CriterionResult:
    t0 = time.perf_counter()
    worst_b = worst_d2 = 0.0
    bad_counts = 0
    for p0 in _random_params(rng, n):
        p = p0.replace(b=p0.b_sn)
        rep = saddle_node_report(p)
        worst_b = max(worst_b, abs(rep.wf_b - rep.wf_b_closed) / abs(rep.wf_b_closed))
        worst_d2 = max(worst_d2, abs(rep.wd2f - rep.wd2f_closed) / abs(rep.wd2f_closed))
        if equilibrium_count_across_SN(p, 1e-4 * p.b_sn) != (2, 1, 0):
            bad_counts += 1
    ok = worst_b <= 1e-12 and worst_d2 <= 1e-12 and bad_counts == 0
    return CriterionResult(
        4,
        "saddle-node",
        "Sotomayor transversality",
        ok,
        "W.F_b and W.D2F(V,V) match closed forms to 1e-12; counts (2,1,0)",
        {"draws": n, "wf_b_rel": worst_b, "wd2f_rel": worst_d2, "count_failures": bad_counts},
        time.perf_counter() - t0,
    )


# 5 ---------------------------------------------------------------------------


def check_hopf() -> CriterionResult:
    t0 = time.perf_counter()
    p = FIGURES["4a"]
    rep = hopf_report(p, simulate=True)
    cyc = rep.cycle
    cycle_ok = cyc is not None and abs(cyc.floquet_multiplier) < 1 and cyc.closure_error < 1e-6
    offsets = p.c * np.logspace(-4, -2, 5)
    amps = []
    for off in offsets:
        lc = detect_limit_cycle(p.replace(d=p.c - off), max_iter=60)
        amps.append(np.nan if lc is None else lc.amplitude)
    amps_arr = np.array(amps)
    good = np.isfinite(amps_arr)
    exponent = float(np.polyfit(np.log(offsets[good]), np.log(amps_arr[good]), 1)[0]) if good.sum() >= 2 else float("nan")
    exp_ok = good.sum() == 5 and abs(exponent - 0.5) <= 0.1
    secs = time.perf_counter() - t0
    ok = rep.transversality == -1.0 and cycle_ok and exp_ok and secs < 30.0
    slopes = rep.evidence.get("return_map_slopes_at_d_eq_c", [])
    return CriterionResult(
        5,
        "hopf",
        "Hopf transversality, stable cycle, amplitude law",
        ok,
        "transversality -1; stable cycle (|m| < 1, closure < 1e-6); exponent 0.5 +- 0.1 over 5 offsets; < 30 s",
        {
            "transversality": rep.transversality,
            "cycle_found": cyc is not None,
            "floquet_multiplier": None if cyc is None else cyc.floquet_multiplier,
            "return_map_slope_max_dev": max((abs(s - 1) for s in slopes), default=float("nan")),
            "first_integral_drift": rep.evidence.get("first_integral_drift"),
            "lyapunov_l1": rep.lyapunov_l1,
            "cycles_at_offsets": int(good.sum()),
            "amplitude_exponent": exponent,
            "criticality": rep.criticality,
        },
        secs,
    )


# 6 ---------------------------------------------------------------------------


def check_unfolding() -> CriterionResult:
    t0 = time.perf_counter()
    p = FIGURES["3a"]
    measured: dict[str, Any] = {}
    try:
        rep = bt_unfolding(p, (0.0, 0.0, 0.0))
    except GMError as exc:
        return CriterionResult(6, "unfolding", "BT codim-3 nondegeneracy", False, "", {"error": str(exc)}, time.perf_counter() - t0)
    l1, l2, l3, l4, l5 = rep.l
    jd, jd2 = rep.jac_det, rep.jac_det_half
    rel = abs(jd - jd2) / abs(jd) if jd else float("inf")
    zero_ok = max(abs(l1), abs(l2), abs(l3)) <= 1e-8
    unit_ok = abs(abs(l4) - 1) <= 1e-8 and abs(abs(l5) - 1) <= 1e-8
    det_ok = abs(jd) > 1e-6 and rel < 0.1
    measured.update(
        {
            "l1": l1,
            "l2": l2,
            "l3": l3,
            "l4": l4,
            "l5": l5,
            "sign_case": rep.sign_case,
            "jac_det_h": jd,
            "jac_det_h_half": jd2,
            "jac_det_rel_change": rel,
        }
    )
    return CriterionResult(
        6,
        "unfolding",
        "BT codim-3 nondegeneracy",
        zero_ok and unit_ok and det_ok,
        "l1=l2=l3=0 within 1e-8, |l4|=|l5|=1; |jac_det| > 1e-6 with < 10% change under h -> h/2",
        measured,
        time.perf_counter() - t0,
    )


# 7 ---------------------------------------------------------------------------


def _dist(y: np.ndarray, p: State) -> float:
    return float(math.hypot(y[0] - p[0], y[1] - p[1]))


def _panel_node_e0(p: Params) -> tuple[bool, dict]:
    e0 = equilibria(p)[0].point
    seeds = seed_ring(e0, 0.5 * e0.v, 12)
    ends, windings = [], []
    for s in seeds:
        tr = integrate(p, s, 400.0, 1e-9)
        ends.append(_dist(tr.end, e0))
        du = tr.y[:, 0] - e0.u
        windings.append(int(np.sum(np.diff(np.sign(du[np.abs(du) > 1e-9])) != 0)))
    cls = classify_equilibrium(p, equilibria(p)[0]).kind
    ok = cls is Kind.StableNode and max(ends) < 1e-6 and max(windings) <= 1
    return ok, {"kind": cls.value, "max_end_distance": max(ends), "max_u_sign_changes": max(windings)}


def _sector_fractions(p: Params, rel: float = 0.02, n: int = 24, horizon: float = 400.0) -> dict:
    e1 = next(e for e in equilibria(p) if e.label == "E1").point
    r = rel * e1.u
    seeds = seed_ring(e1, r, n)
    out = {}
    for name, direction in (("forward", 1), ("backward", -1)):
        conv = 0
        for s in seeds:
            tr = integrate(
                p, s, horizon, 1e-10, direction=direction, keep_samples=False,
                stop_when=lambda y: _dist(y, e1) > 5 * r,
            )
            if tr.terminal is not Terminal.LeftDomain and _dist(tr.end, e1) < 0.5 * r:
                conv += 1
        out[name] = conv / len(seeds)
    return out


def _panel_sector(p: Params, expect: Kind) -> tuple[bool, dict]:
    e1 = next(e for e in equilibria(p) if e.label == "E1")
    cls = classify_equilibrium(p, e1).kind
    fr = _sector_fractions(p)
    if expect is Kind.SaddleNodeStableSector:
        dyn = fr["forward"] > 0 and fr["backward"] == 0
    elif expect is Kind.SaddleNodeUnstableSector:
        dyn = fr["backward"] > 0 and fr["forward"] == 0
    else:  # no parabolic sector in either time direction
        dyn = fr["forward"] == 0 and fr["backward"] == 0
    return cls is expect and dyn, {"kind": cls.value, "converging_forward": fr["forward"], "converging_backward": fr["backward"]}


def _panel_center(p: Params) -> tuple[bool, dict]:
    e2 = next(e for e in equilibria(p) if e.label == "E2")
    cls = classify_equilibrium(p, e2).kind
    sec = default_section(p)
    gap = e2.point.u - next(e for e in equilibria(p) if e.label == "E3").point.u
    closed, drift = 0, 0.0
    radii = (0.05, 0.15, 0.3)
    for frac in radii:
        y0 = sec.point(frac * gap)
        tr = integrate(p, y0, 400.0, 1e-10, closed_orbit_tol=1e-6 * frac * gap, eq_tol=0.0)
        closed += tr.terminal is Terminal.ClosedOrbit
        h = [first_integral(p, y) for y in tr.y]
        drift = max(drift, (max(h) - min(h)) / abs(h[0]))
    ok = cls is Kind.CenterOrFineFocus and closed == len(radii) and drift < 1e-8
    return ok, {"kind": cls.value, "closed_orbits": closed, "first_integral_rel_drift": drift}


def _panel_e2(p: Params, expect: Kind) -> tuple[bool, dict]:
    e2 = next(e for e in equilibria(p) if e.label == "E2")
    cls = classify_equilibrium(p, e2).kind
    r0 = 1e-3 * e2.point.u
    seeds = seed_ring(e2.point, r0, 8)
    ratios = []
    for s in seeds:
        tr = integrate(p, s, 200.0, 1e-10, keep_samples=True)
        d = np.hypot(tr.y[:, 0] - e2.point.u, tr.y[:, 1] - e2.point.v)
        ratios.append(float(d.max() / r0) if expect is Kind.Source else float(d[-1] / r0))
    if expect is Kind.Source:
        dyn = min(ratios) >= 10.0
        key = "min_growth"
        val = min(ratios)
    else:
        dyn = max(ratios) < 1e-3
        key = "max_final_ratio"
        val = max(ratios)
    return cls is expect and dyn, {"kind": cls.value, key: val}


def _panel_saddle(p: Params) -> tuple[bool, dict]:
    eqs = {e.label: e for e in equilibria(p)}
    e3 = eqs["E3"]
    cls = classify_equilibrium(p, e3).kind
    r = 1e-3 * e3.point.u
    labels = []
    for s in seed_ring(e3.point, r, 16, phase=0.1):
        tr = integrate(p, s, 400.0, 1e-10, keep_samples=False)
        near = [lab for lab, e in eqs.items() if _dist(tr.end, e.point) < 1e-4 * max(1.0, e.point.v)]
        labels.append(near[0] if near else "none")
    split = "E0" in labels and "E2" in labels
    return cls is Kind.Saddle and split, {
        "kind": cls.value,
        "to_E0": labels.count("E0"),
        "to_E2": labels.count("E2"),
        "other": len(labels) - labels.count("E0") - labels.count("E2"),
    }


PANELS: dict[str, Callable[[], tuple[bool, dict]]] = {
    "2": lambda: _panel_node_e0(FIGURES["2"]),
    "3a": lambda: _panel_sector(FIGURES["3a"], Kind.DegenerateCusp),
    "3b": lambda: _panel_sector(FIGURES["3b"], Kind.SaddleNodeStableSector),
    "3c": lambda: _panel_sector(FIGURES["3c"], Kind.SaddleNodeUnstableSector),
    "4a": lambda: _panel_center(FIGURES["4a"]),
    "4b": lambda: _panel_e2(FIGURES["4b"], Kind.Source),
    "4c": lambda: _panel_e2(FIGURES["4c"], Kind.Sink),
    "5": lambda: _panel_saddle(FIGURES["5"]),
}


def check_figures() -> CriterionResult:
    t0 = time.perf_counter()
    measured: dict[str, Any] = {}
    all_ok = True
    for name, fn in PANELS.items():
        ok, ev = fn()
        all_ok &= ok
        measured[f"panel_{name}"] = "ok" if ok else "FAIL"
        measured[f"panel_{name}_evidence"] = ev
    secs = time.perf_counter() - t0
    return CriterionResult(
        7,
        "figures",
        "qualitative portraits certified by trajectory endpoints",
        all_ok and secs < 60.0,
        "all 8 panels match their classification; runtime < 60 s",
        measured,
        secs,
    )


# 8 ---------------------------------------------------------------------------


def convergence_study(p: Params | None = None, y0: tuple[float, float] = (0.2, 0.1), t_end: float = 60.0) -> dict[str, Any]:
    """Self-convergence over tolerances 1e-6, 1e-7, 1e-8, 1e-9.

    Differences between successive runs give three error estimates; the order
    is the slope of -log(error) against log(step count).
    """
    if p is None:
        p = FIGURES["4c"]
    tols = [1e-6, 1e-7, 1e-8, 1e-9]
    runs = [integrate(p, y0, t_end, tol, eq_tol=0.0, keep_samples=False) for tol in tols]
    ends = [r.end for r in runs]
    steps = np.array([r.stats.steps for r in runs[:-1]], dtype=float)
    errs = np.array([np.abs(ends[k] - ends[k + 1]).max() for k in range(3)])
    order = float(-np.polyfit(np.log(steps), np.log(errs), 1)[0])
    ref = integrate(p, y0, t_end, 1e-10, eq_tol=0.0, keep_samples=False).end
    e_tol = np.abs(integrate(p, y0, t_end, 1e-8, eq_tol=0.0, keep_samples=False).end - ref).max()
    e_half = np.abs(integrate(p, y0, t_end, 5e-9, eq_tol=0.0, keep_samples=False).end - ref).max()
    return {
        "order": order,
        "steps": steps.tolist(),
        "self_convergence_errors": errs.tolist(),
        "halving_error_ratio": float(e_tol / e_half),
    }


def check_integrator() -> CriterionResult:
    t0 = time.perf_counter()
    st = convergence_study()
    ok = st["order"] >= 4.0
    return CriterionResult(
        8,
        "integrator",
        "integrator convergence order",
        ok,
        "empirical order >= 4 from three-tolerance self-convergence",
        {"order": st["order"], "halving_error_ratio": st["halving_error_ratio"], "steps": st["steps"], "errors": st["self_convergence_errors"]},
        time.perf_counter() - t0,
    )


CRITERIA: dict[int, tuple[str, Callable[[np.random.Generator], CriterionResult]]] = {
    1: ("equilibria", check_equilibria),
    2: ("golden", check_golden),
    3: ("cusp", lambda rng: check_cusp()),
    4: ("saddle-node", check_saddle_node),
    5: ("hopf", lambda rng: check_hopf()),
    6: ("unfolding", lambda rng: check_unfolding()),
    7: ("figures", lambda rng: check_figures()),
    8: ("integrator", lambda rng: check_integrator()),
}


def resolve(only: list[str] | None) -> list[int]:
    if not only:
        return list(CRITERIA)
    keys = {name: n for n, (name, _) in CRITERIA.items()}
    out = []
    for item in only:
        item = item.strip()
        if item.isdigit() and int(item) in CRITERIA:
            out.append(int(item))
        elif item in keys:
            out.append(keys[item])
        else:
            raise KeyError(f"unknown criterion {item!r}; choose from {', '.join(keys)} or 1-8")
    return out


def run_criterion(number: int, rng_seed: int = 0) -> CriterionResult:
    _, fn = CRITERIA[number]
    rng = np.random.default_rng(rng_seed + number)
    return fn(rng)


def run_verify(only: list[str] | None = None, rng_seed: int = 0) -> list[CriterionResult]:
    return [run_criterion(n, rng_seed) for n in resolve(only)]


__all__ = ["CriterionResult", "CRITERIA", "run_verify", "run_criterion", "resolve", "convergence_study"]
