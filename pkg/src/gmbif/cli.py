"""Command-line interface: one subcommand per analysis.

Exit codes: 0 success, 2 invalid input, 3 pipeline guard, 4 verification failure.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Any, Sequence

from . import serialize
from .bifurcation import (
    bt_unfolding,
    cusp_report,
    hopf_report,
    saddle_node_report,
    scan_bifurcation_set,
)
from .classify import classify_all
from .config import DEFAULTS
from .dynamics import Terminal, portrait, seed_ring
from .errors import GMError, PipelineGuardError
from .model import Params, State, equilibria
from .svg import portrait_svg
from .verify import resolve, run_verify

EXIT_OK, EXIT_INPUT, EXIT_GUARD, EXIT_VERIFY = 0, 2, 3, 4
NAMES = ("c", "beta", "b", "d")


class UsageError(Exception):
    pass


# argument parsing --------------------------------------------------------


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    g = p.add_argument_group("model parameters")
    for n in NAMES:
        # strings so that scan can take lo:hi ranges
        g.add_argument(f"--{n}", type=str, default=None, metavar="X")
    o = p.add_argument_group("options")
    o.add_argument("--tol", type=float, default=None, help="analysis tolerance (command specific default)")
    o.add_argument("--jet-order", type=int, default=DEFAULTS.jet_order, help="truncation order of jets (default %(default)s)")
    o.add_argument("--epsilon", type=str, default=None, help="unfolding offsets e1,e2,e3 (normal-form)")
    o.add_argument("--seeds", type=str, default=DEFAULTS.seeds, help="ring:N or 'u,v;u,v;...' (default %(default)s)")
    o.add_argument("--t-max", type=float, default=DEFAULTS.t_max, help="forward horizon (default %(default)s)")
    o.add_argument("--format", choices=("json", "csv", "svg"), default="json", help="output format (default json)")
    o.add_argument("--out", type=str, default=None, help="output file (directory for portrait)")
    o.add_argument("--rng-seed", type=int, default=DEFAULTS.rng_seed, help="seed of randomized suites (default %(default)s)")
    o.add_argument("--show-config", action="store_true", help="print the default numerical settings and exit")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    ap = argparse.ArgumentParser(
        prog="gmbif",
        description="Bifurcation analysis of the local Gierer-Meinhardt system "
        "u' = c(beta u^2/v - u), v' = b + u^2 - d v.",
    )
    ap.add_argument("--show-config", dest="show_config_top", action="store_true", help="print the default numerical settings and exit")
    sub = ap.add_subparsers(dest="command", metavar="COMMAND")
    sub.add_parser("equilibria", parents=[common], help="equilibria with discriminant and class")
    sub.add_parser("classify", parents=[common], help="classification with eigenvalue evidence")
    sub.add_parser("saddle-node", parents=[common], help="saddle-node conditions (b defaults to b_SN)")
    h = sub.add_parser("hopf", parents=[common], help="Hopf quantities at d = c (d defaults to c)")
    h.add_argument("--simulate", action="store_true", help="also search for cycles numerically")
    sub.add_parser("normal-form", parents=[common], help="cusp normal form; b, d default to the codim-3 locus")
    s = sub.add_parser("scan", parents=[common], help="grid scan; give ranges as lo:hi")
    s.add_argument("--resolution", type=int, default=DEFAULTS.scan_resolution, help="points per range (default %(default)s)")
    pp = sub.add_parser("portrait", parents=[common], help="trajectory CSVs plus an SVG")
    pp.add_argument("--t-back", type=float, default=DEFAULTS.t_back, help="backward horizon (default %(default)s)")
    pp.add_argument("--no-backward", action="store_true", help="skip backward integration")
    v = sub.add_parser("verify", parents=[common], help="run the acceptance criteria")
    v.add_argument("--only", action="append", default=None, help="criterion names or numbers, comma separated")
    v.add_argument("--json", action="store_true", help="machine-readable results")
    return ap


def _number(name: str, text: str | None) -> float | None:
    if text is None:
        return None
    try:
        return float(text)
    except ValueError:
        raise UsageError(f"{name} must be a number, got {text!r}") from None


def _params(args: argparse.Namespace, **fill: Any) -> Params:
    vals: dict[str, float] = {}
    for n in NAMES:
        x = _number(n, getattr(args, n))
        if x is not None:
            vals[n] = x
    for n, fn in fill.items():
        if n not in vals:
            vals[n] = fn(vals)
    missing = [n for n in NAMES if n not in vals]
    if missing:
        raise UsageError("missing parameter(s): " + ", ".join("--" + n for n in missing))
    return Params(**vals)


def _need(vals: dict[str, float], *names: str) -> None:
    missing = [n for n in names if n not in vals]
    if missing:
        raise UsageError("missing parameter(s): " + ", ".join("--" + n for n in missing))


def _b_sn(vals: dict[str, float]) -> float:
    _need(vals, "beta", "d")
    return (vals["d"] * vals["beta"]) ** 2 / 4.0


def _d_eq_c(vals: dict[str, float]) -> float:
    _need(vals, "c")
    return vals["c"]


def _epsilon(text: str) -> tuple[float, float, float]:
    parts = text.split(",")
    if len(parts) != 3:
        raise UsageError("--epsilon takes three comma-separated numbers e1,e2,e3")
    try:
        return tuple(float(x) for x in parts)  # type: ignore[return-value]
    except ValueError:
        raise UsageError(f"bad --epsilon {text!r}") from None


def parse_seeds(text: str, params: Params) -> list[State]:
    """``ring:N`` (circle about E2, else E1, else E0) or ``u,v;u,v;...``."""
    text = text.strip()
    if text.startswith("ring:"):
        try:
            n = int(text[5:])
        except ValueError:
            raise UsageError(f"bad ring seed count in {text!r}") from None
        if n < 0:
            raise UsageError("seed count must be non-negative")
        eqs = {e.label: e.point for e in equilibria(params)}
        if "E2" in eqs:
            centre, scale = eqs["E2"], eqs["E2"].u - eqs["E3"].u
        elif "E1" in eqs:
            centre, scale = eqs["E1"], eqs["E1"].u
        else:
            centre, scale = eqs["E0"], eqs["E0"].v
        return seed_ring(centre, DEFAULTS.ring_radius_rel * scale, n)
    out = []
    for chunk in filter(None, (c.strip() for c in text.split(";"))):
        try:
            u, v = (float(x) for x in chunk.split(","))
        except ValueError:
            raise UsageError(f"bad seed {chunk!r}; expected u,v") from None
        out.append(State(u, v))
    return out


# commands ----------------------------------------------------------------


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _no_svg(args: argparse.Namespace) -> None:
    if args.format == "svg":
        raise UsageError("--format svg is only available for portrait")


def _kind_rows(params: Params, tol: float | None) -> list[tuple[Any, Any]]:
    return classify_all(params) if tol is None else classify_all(params, tol)


def cmd_equilibria(args: argparse.Namespace) -> int:
    _no_svg(args)
    p = _params(args)
    pairs = _kind_rows(p, args.tol)
    rows = [(e.label, e.point.u, e.point.v, e.discriminant, str(k.kind)) for e, k in pairs]
    if args.format == "csv":
        _emit(serialize.csv_text(("label", "u", "v", "delta", "kind"), rows), args.out)
    else:
        data = [dict(zip(("label", "u", "v", "delta", "kind"), r)) for r in rows]
        _emit(serialize.dumps({"params": p.as_dict(), "equilibria": data}), args.out)
    return EXIT_OK


def cmd_classify(args: argparse.Namespace) -> int:
    _no_svg(args)
    p = _params(args)
    pairs = _kind_rows(p, args.tol)
    if args.format == "csv":
        rows = [
            (e.label, e.point.u, e.point.v, e.discriminant, str(k.kind), k.evidence["trace"], k.evidence["determinant"])
            for e, k in pairs
        ]
        _emit(serialize.csv_text(("label", "u", "v", "delta", "kind", "trace", "det"), rows), args.out)
    else:
        data = [{"label": e.label, "u": e.point.u, "v": e.point.v, **k.to_dict()} for e, k in pairs]
        _emit(serialize.dumps({"params": p.as_dict(), "classification": data}), args.out)
    return EXIT_OK


def _flat_csv(d: dict[str, Any], prefix: str = "") -> list[tuple[str, Any]]:
    rows: list[tuple[str, Any]] = []
    for k, v in d.items():
        key = f"{prefix}{k}"
        if isinstance(v, dict):
            rows += _flat_csv(v, key + ".")
        elif isinstance(v, (list, tuple)):
            rows += [(f"{key}[{i}]", x) for i, x in enumerate(v)]
        else:
            rows.append((key, v))
    return rows


def _report_out(args: argparse.Namespace, payload: dict[str, Any]) -> None:
    if args.format == "csv":
        plain = serialize.loads(serialize.dumps(payload))
        _emit(serialize.csv_text(("key", "value"), _flat_csv(plain)), args.out)
    else:
        _emit(serialize.dumps(payload), args.out)


def cmd_saddle_node(args: argparse.Namespace) -> int:
    _no_svg(args)
    p = _params(args, b=_b_sn)
    rep = saddle_node_report(p, args.tol)
    _report_out(args, {"params": p.as_dict(), "saddle_node": rep})
    return EXIT_OK


def cmd_hopf(args: argparse.Namespace) -> int:
    _no_svg(args)
    p = _params(args, d=_d_eq_c)
    rep = hopf_report(p, simulate=args.simulate) if args.tol is None else hopf_report(p, args.simulate, args.tol)
    _report_out(args, {"params": p.as_dict(), "hopf": rep})
    return EXIT_OK


def cmd_normal_form(args: argparse.Namespace) -> int:
    _no_svg(args)
    p = _params(args, d=_d_eq_c, b=_b_sn)
    if args.epsilon is not None:
        rep: Any = bt_unfolding(p, _epsilon(args.epsilon), order=args.jet_order)
        key = "unfolding"
    else:
        rep = cusp_report(p, order=args.jet_order, tol=args.tol)
        key = "cusp"
    _report_out(args, {"params": p.as_dict(), key: rep})
    return EXIT_OK


def _box(args: argparse.Namespace) -> dict[str, float | tuple[float, float]]:
    box: dict[str, float | tuple[float, float]] = {}
    for n in NAMES:
        text = getattr(args, n)
        if text is None:
            raise UsageError(f"missing parameter --{n} (value or lo:hi)")
        if ":" in text:
            lo, _, hi = text.partition(":")
            box[n] = (_number(n, lo), _number(n, hi))  # type: ignore[assignment]
        else:
            box[n] = _number(n, text)  # type: ignore[assignment]
    return box


def cmd_scan(args: argparse.Namespace) -> int:
    _no_svg(args)
    if args.resolution < 1:
        raise UsageError("--resolution must be >= 1")
    res = scan_bifurcation_set(_box(args), args.resolution)
    if args.format == "csv":
        rows = res.rows()
        header = list(rows[0]) if rows else ["count", "label"]
        _emit(serialize.csv_text(header, [[r[h] for h in header] for r in rows]), args.out)
    else:
        _emit(serialize.dumps(res), args.out)
    return EXIT_OK


def cmd_portrait(args: argparse.Namespace) -> int:
    p = _params(args)
    seeds = parse_seeds(args.seeds, p)
    if not seeds:
        raise UsageError("no seeds: --seeds gave zero initial points")
    if not args.t_max > 0:
        raise UsageError("--t-max must be positive")
    tol = DEFAULTS.integ_tol if args.tol is None else args.tol
    trajs = portrait(p, seeds, args.t_max, tol, backward=not args.no_backward, t_back=args.t_back)
    outdir = Path(args.out or "portrait")
    outdir.mkdir(parents=True, exist_ok=True)
    files, summary = [], []
    for tr in trajs:
        tag = "fw" if tr.direction > 0 else "bw"
        name = f"traj_{tr.seed_index:03d}_{tag}.csv"
        (outdir / name).write_text(serialize.csv_text(("t", "u", "v"), [(t, y[0], y[1]) for t, y in zip(tr.t, tr.y)]))
        files.append(name)
        summary.append({"file": name, "seed": tr.seed_index, **tr.summary()})
    svg_name = "portrait.svg"
    (outdir / svg_name).write_text(portrait_svg(p, trajs))
    ok = any(t.terminal not in (Terminal.StepFailure,) and len(t.t) > 1 for t in trajs)
    sys.stdout.write(serialize.dumps({"params": p.as_dict(), "dir": str(outdir), "svg": svg_name, "trajectories": summary}) + "\n")
    return EXIT_OK if ok else EXIT_INPUT


def cmd_verify(args: argparse.Namespace) -> int:
    only = None
    if args.only:
        only = [x for item in args.only for x in item.split(",") if x.strip()]
    try:
        resolve(only)
    except KeyError as exc:
        raise UsageError(str(exc.args[0])) from None
    results = []
    for r in run_verify(only, args.rng_seed):
        results.append(r)
        if not args.json:
            print(r.line(), flush=True)
    passed = all(r.passed for r in results)
    if args.json:
        _emit(serialize.dumps({"passed": passed, "criteria": results}), args.out)
    else:
        print(f"{sum(r.passed for r in results)}/{len(results)} criteria passed")
    return EXIT_OK if passed else EXIT_VERIFY


COMMANDS = {
    "equilibria": cmd_equilibria,
    "classify": cmd_classify,
    "saddle-node": cmd_saddle_node,
    "hopf": cmd_hopf,
    "normal-form": cmd_normal_form,
    "scan": cmd_scan,
    "portrait": cmd_portrait,
    "verify": cmd_verify,
}


def main(argv: Sequence[str] | None = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:  # argparse exits 2 on bad usage, 0 on --help
        return int(exc.code or 0)
    if args.show_config_top or getattr(args, "show_config", False):
        print(serialize.dumps(DEFAULTS))
        return EXIT_OK
    if args.command is None:
        ap.print_usage(sys.stderr)
        print("gmbif: error: a subcommand is required", file=sys.stderr)
        return EXIT_INPUT
    try:
        return COMMANDS[args.command](args)
    except PipelineGuardError as exc:
        print(f"gmbif: {exc}", file=sys.stderr)
        print(f"stage: {exc.stage}", file=sys.stderr)
        rep = getattr(exc, "report", None)
        if rep is not None:
            sys.stdout.write(serialize.dumps({"error": str(exc), "stage": exc.stage, "partial_ledger": rep}) + "\n")
        return EXIT_GUARD
    except (UsageError, GMError, OSError) as exc:
        print(f"gmbif: error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
