"""Command-line entry point: ``stickjuggle <subcommand> ...``.

Exit codes: 0 success, 2 infeasible design targets, 3 simulation error,
4 I/O error.
"""

from __future__ import annotations

import argparse
import ast
import csv
import json
import math
import operator
import os
import re
import sys
from dataclasses import asdict, replace

import numpy as np

from .errors import InfeasibleFlightTime, JugglingError
from .icpm import controllability_rank, linearize, lqr_gain
from .simulation import NoiseSpec, SimConfig, run_closed_loop, sweep
from .states import JuggleSpec, StickParams
from .steady_state import limit_from_fixed_point, precession_limit, simulate_hoop, solve_fixed_point

OUT_DIR_ENV = "STICKJUGGLE_OUT_DIR"

EXIT_OK, EXIT_INFEASIBLE, EXIT_SIM, EXIT_IO = 0, 2, 3, 4


_OPS = {ast.Add: operator.add, ast.Sub: operator.sub, ast.Mult: operator.mul, ast.Div: operator.truediv}


def _eval_number(text: str) -> float:
    """Evaluate a number such as ``0.6``, ``pi/3`` or ``2pi/3`` without ``eval``."""
    expr = re.sub(r"(\d)\s*pi", r"\1*pi", text.strip())

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
            return float(node.value)
        if isinstance(node, ast.Name) and node.id == "pi":
            return math.pi
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            return -ev(node.operand) if isinstance(node.op, ast.USub) else ev(node.operand)
        if isinstance(node, ast.BinOp) and type(node.op) in _OPS:
            return _OPS[type(node.op)](ev(node.left), ev(node.right))
        raise ValueError(f"cannot parse number {text!r}")

    try:
        return ev(ast.parse(expr, mode="eval"))
    except SyntaxError as exc:
        raise ValueError(f"cannot parse number {text!r}") from exc


def _floats(text: str) -> list[float]:
    """Parse a comma-separated list of numbers; see :func:`_eval_number`."""
    return [_eval_number(tok) for tok in text.split(",") if tok.strip()]


def _angle(text: str) -> float:
    try:
        return _eval_number(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _add_design_args(ap: argparse.ArgumentParser) -> None:
    ap.add_argument("--config", help="JSON config file (see README for the schema)")
    ap.add_argument("--beta-star", type=_angle, help="section angle in rad, e.g. pi/3")
    ap.add_argument("--delta-star", type=float, help="steady time of flight in s")
    ap.add_argument("--delta-alpha-star", type=_angle, help="precession per flight in rad, e.g. 2pi/3")
    ap.add_argument("--p", type=float, dest="p_ratio", help="delta_star / delta_min instead of --delta-star")
    ap.add_argument("--h-bar-z", type=float, help="free height of the fixed point in m")
    ap.add_argument("--m", type=float)
    ap.add_argument("--ell", type=float)
    ap.add_argument("--J", type=float)
    ap.add_argument("--g", type=float)


def _load_config(args) -> SimConfig:
    data = {}
    if getattr(args, "config", None):
        with open(args.config, encoding="utf-8") as fh:
            data = json.load(fh)
    cfg = SimConfig.from_dict(data)

    pd = asdict(cfg.params)
    for key in ("m", "ell", "J", "g"):
        val = getattr(args, key, None)
        if val is not None:
            pd[key] = val
    if args.J is None and (args.m is not None or args.ell is not None) and "J" not in data.get("params", {}):
        params = StickParams.uniform_rod(pd["m"], pd["ell"], pd["g"])
    else:
        params = StickParams(**pd)

    sd = asdict(cfg.spec)
    for attr, key in (("beta_star", "beta_star"), ("delta_alpha_star", "delta_alpha_star"),
                      ("h_bar_z", "h_bar_z_star")):
        val = getattr(args, attr, None)
        if val is not None:
            sd[key] = val
    if args.delta_star is not None:
        sd["delta_star"], sd["p"] = args.delta_star, None
    if args.p_ratio is not None:
        sd["p"] = args.p_ratio
        if args.delta_star is None:
            sd["delta_star"] = None
    return replace(cfg, params=params, spec=JuggleSpec(**sd))


def _emit(obj, out_path=None) -> None:
    text = json.dumps(obj, indent=2)
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    print(text)


def cmd_fixed_point(args) -> int:
    cfg = _load_config(args)
    fp = solve_fixed_point(cfg.spec, cfg.params)
    _emit(fp.as_dict(), args.out)
    return EXIT_OK


def _linearized(cfg):
    fp = solve_fixed_point(cfg.spec, cfg.params)
    return fp, linearize(fp, fp.beta_star, cfg.params)


def cmd_linearize(args) -> int:
    cfg = _load_config(args)
    fp, lm = _linearized(cfg)
    _emit({"A": lm.A.tolist(), "B": lm.B.tolist(), "controllability_rank": controllability_rank(lm),
           "fixed_point": fp.as_dict()}, args.out)
    return EXIT_OK


def cmd_gains(args) -> int:
    cfg = _load_config(args)
    _, lm = _linearized(cfg)
    g = lqr_gain(lm, np.diag(cfg.q_diag), np.diag(cfg.r_diag))
    _emit({"K": g.K.tolist(), "closed_loop_spectral_radius": g.closed_loop_spectral_radius,
           "riccati_iterations": g.iterations, "Q_diag": list(cfg.q_diag), "R_diag": list(cfg.r_diag)}, args.out)
    return EXIT_OK


def cmd_simulate(args) -> int:
    from .export import export

    cfg = _load_config(args)
    over = {}
    if args.steps is not None:
        over["n_steps"] = args.steps
    if args.seed is not None:
        over["seed"] = args.seed
    if args.noise:
        over["noise"] = cfg.noise or NoiseSpec()
    if args.render is not None:
        over["render_samples_per_flight"] = args.render
    cfg = replace(cfg, **over)
    if cfg.noise is not None and cfg.seed is None:
        print("error: --seed is required with noise", file=sys.stderr)
        return EXIT_INFEASIBLE
    log = run_closed_loop(cfg)
    out_dir = args.out_dir or os.environ.get(OUT_DIR_ENV) or "stickjuggle_out"
    paths = export(log, out_dir)
    _emit({"outputs": {k: str(v) for k, v in paths.items()}, "metrics": log.summary()})
    return EXIT_OK


def cmd_sweep(args) -> int:
    cfg = _load_config(args)
    kw = {"p_values": _floats(args.p_values)} if args.p_values else {"delta_stars": _floats(args.delta_stars)}
    rows = sweep(_floats(args.beta_stars), _floats(args.delta_alphas), params=cfg.params,
                 q_diag=cfg.q_diag, r_diag=cfg.r_diag, **kw)
    if args.out:
        keys = sorted({k for r in rows for k in r})
        with open(args.out, "w", newline="", encoding="utf-8") as fh:
            w = csv.DictWriter(fh, fieldnames=keys)
            w.writeheader()
            w.writerows(rows)
    clean = [{k: (None if isinstance(v, float) and math.isnan(v) else v) for k, v in r.items()} for r in rows]
    print(json.dumps(clean, indent=2))
    return EXIT_OK


def cmd_precess(args) -> int:
    cfg = _load_config(args)
    b = cfg.spec.beta_star
    ps = precession_limit(b, args.p_free, cfg.params)
    fp = solve_fixed_point(JuggleSpec(beta_star=b, delta_alpha_star=args.limit_delta_alpha, p=args.p_free), cfg.params)
    report = {
        "precession": asdict(ps),
        "hoop_residuals": ps.hoop_residuals(cfg.params),
        "juggling_limit": {"delta_alpha_star": args.limit_delta_alpha, **limit_from_fixed_point(fp)},
    }
    if args.ode_periods > 0:
        _, hb, _, bdot = simulate_hoop(ps, cfg.params, periods=args.ode_periods, dt=args.ode_dt)
        report["hoop_ode"] = {
            "periods": args.ode_periods,
            "dt": args.ode_dt,
            "max_radius_drift": float(np.max(np.hypot(hb[:, 0] - ps.h_bar_x, hb[:, 1]))),
            "max_abs_beta_dot": float(np.max(np.abs(bdot))),
        }
    _emit(report, args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="stickjuggle", description="3D stick juggling with impulsive forces")
    sub = ap.add_subparsers(dest="command", required=True)

    for name, fn, help_ in (
        ("fixed-point", cmd_fixed_point, "closed-form steady juggling fixed point"),
        ("linearize", cmd_linearize, "Jacobians of the juggler-frame map at the fixed point"),
        ("gains", cmd_gains, "discrete LQR gain for the linearized map"),
    ):
        sp = sub.add_parser(name, help=help_)
        _add_design_args(sp)
        sp.add_argument("--out", help="also write the JSON result to this file")
        sp.set_defaults(func=fn)

    sp = sub.add_parser("simulate", help="closed-loop run with CSV/JSON export")
    _add_design_args(sp)
    sp.add_argument("--steps", type=int)
    sp.add_argument("--seed", type=int)
    sp.add_argument("--noise", action="store_true", help="enable the default (or configured) noise model")
    sp.add_argument("--render", type=int, help="dense samples per flight for trajectory.csv")
    sp.add_argument("--out-dir", help=f"output directory (default ${OUT_DIR_ENV} or ./stickjuggle_out)")
    sp.set_defaults(func=cmd_simulate)

    sp = sub.add_parser("sweep", help="feasibility and spectral radius over a design grid")
    _add_design_args(sp)
    sp.add_argument("--beta-stars", default="pi/6,pi/4,pi/3")
    sp.add_argument("--delta-alphas", default="pi/2,2pi/3,pi")
    grp = sp.add_mutually_exclusive_group()
    grp.add_argument("--p-values", default=None)
    grp.add_argument("--delta-stars", default=None)
    sp.add_argument("--out", help="CSV file for the table")
    sp.set_defaults(func=cmd_sweep)

    sp = sub.add_parser("precess", help="steady-precession limit and its checks")
    _add_design_args(sp)
    sp.add_argument("--p-free", type=float, default=1.0)
    sp.add_argument("--limit-delta-alpha", type=float, default=1e-4)
    sp.add_argument("--ode-periods", type=float, default=0.0, help="also integrate the hoop ODE")
    sp.add_argument("--ode-dt", type=float, default=1e-5)
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_precess)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "sweep" and not args.p_values and not args.delta_stars:
        args.p_values = "1,1.5,3"
    try:
        return args.func(args)
    except (InfeasibleFlightTime, ValueError) as exc:
        if isinstance(exc, JugglingError) and not isinstance(exc, InfeasibleFlightTime):
            print(f"simulation error: {exc}", file=sys.stderr)
            return EXIT_SIM
        print(f"infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
