"""Command-line front end: reproducible figure-data generators.

Squeezing is specified in dB (s = 10^(-dB/20)); CSV is the default output
format, JSON carries full metadata. Identical argv and config produce
byte-identical output files.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from . import __version__
from .analysis import SweepSpec, db_to_s, rows_to_csv, run_sweep
from .errors import ConvergenceError, CvcatError, DomainError
from .gate import added_factor, apply_gate
from .oracle import oracle_added_factor
from .phase_space import build_support_region, suggest_wigner_bounds, \
    wigner_transform
from .states import GateParams, GridSpec, cat_params_from_gate, default_grid, \
    make_cubic_phase_state, make_ideal_cat, make_squeezed_vacuum, \
    wavefunction_to_json

EXIT_OK = 0
EXIT_DOMAIN = 1
EXIT_CONVERGENCE = 2
EXIT_USAGE = 64

VERIFY_TOLERANCE = 1e-8
VERIFY_ABS_FLOOR = 1e-12


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _add_common(sub, grid=True):
    sub.add_argument("--gamma", type=float, help="cubic deformation coefficient")
    sub.add_argument("--ym", type=float, help="ancilla momentum outcome")
    sub.add_argument("--db", type=float, help="initial ancilla squeezing in dB")
    sub.add_argument("--out", help="output file path (default: stdout)")
    sub.add_argument("--format", choices=("csv", "json"), help="output format")
    sub.add_argument("--config", help="JSON config file mirroring the flags")
    sub.add_argument("--dump-config", dest="dump_config",
                     help="write the effective config as JSON and continue")
    if grid:
        sub.add_argument("--grid-half-width", dest="grid_half_width", type=float,
                         help="coordinate grid half-width override")
        sub.add_argument("--grid-points", dest="grid_points", type=int,
                         help="coordinate grid point count")


_DEFAULTS = {
    "state": {"kind": "cubic", "gamma": 0.1, "ym": 3.0, "db": 5.0,
              "format": "json", "grid_half_width": None, "grid_points": 2048,
              "out": None},
    "gate": {"gamma": 0.1, "ym": 3.0, "db": 5.0, "format": "json",
             "grid_half_width": None, "grid_points": 2048, "out": None},
    "wigner": {"source": "output", "gamma": 0.1, "ym": 3.0, "db": 5.0,
               "format": "csv", "grid_half_width": None, "grid_points": 2048,
               "bounds": None, "nx": 256, "np": 256, "out": None},
    "sweep-infidelity": {"gamma": None, "ym": 3.0, "db_range": "0:20:60",
                         "gamma_rule": "ym/30", "format": "csv", "out": None,
                         "grid_points": 2048, "db": None,
                         "outputs": "infidelity,probability,efficiency"},
    "sweep-probability": {"gamma": None, "ym": 3.0, "db_range": "0:20:60",
                          "gamma_rule": "ym/30", "format": "csv", "out": None,
                          "grid_points": 2048, "db": None,
                          "outputs": "probability"},
    "support-region": {"gamma": 0.1, "db": 5.0, "sigma_level": 2.0,
                       "n_boundary": 256, "format": "csv", "out": None,
                       "ym": None},
    "verify": {"fast": False, "out": None, "format": "csv", "gamma": None,
               "ym": None, "db": None},
}


def build_parser() -> _Parser:
    parser = _Parser(prog="cvcat",
                     description="Conditional cat-state gate simulator")
    parser.add_argument("--version", action="version", version=__version__)
    subs = parser.add_subparsers(dest="command", required=True)

    p = subs.add_parser("state", parents=[], help="dump a constructed state")
    p.add_argument("--kind", choices=("vacuum", "squeezed", "cubic", "cat"))
    _add_common(p)

    p = subs.add_parser("gate", help="conditional gate output state")
    _add_common(p)

    p = subs.add_parser("wigner", help="Wigner function as a CSV matrix")
    p.add_argument("--source", choices=("output", "cubic", "cat", "vacuum"))
    p.add_argument("--bounds", help="xmin:xmax:pmin:pmax (default: automatic)")
    p.add_argument("--nx", type=int)
    p.add_argument("--np", type=int)
    _add_common(p)

    for name in ("sweep-infidelity", "sweep-probability"):
        p = subs.add_parser(name, help=f"{name.split('-')[1]} vs squeezing")
        p.add_argument("--db-range", dest="db_range", help="lo:hi[:n] in dB")
        p.add_argument("--gamma-rule", dest="gamma_rule",
                       choices=("fixed", "ym/30"))
        p.add_argument("--outputs", help="comma list of row outputs")
        _add_common(p, grid=False)
        p.add_argument("--grid-points", dest="grid_points", type=int)

    p = subs.add_parser("support-region", help="sheared uncertainty ellipse")
    p.add_argument("--sigma-level", dest="sigma_level", type=float)
    p.add_argument("--n-boundary", dest="n_boundary", type=int)
    _add_common(p, grid=False)

    p = subs.add_parser("verify", help="closed form vs quadrature oracle")
    p.add_argument("--fast", action="store_true", default=None,
                   help="reduced parameter grid")
    _add_common(p, grid=False)
    return parser


def _effective_config(args) -> dict:
    """defaults <- config file <- explicit flags (flags win)."""
    cfg = dict(_DEFAULTS[args.command])
    if getattr(args, "config", None):
        with open(args.config, encoding="utf-8") as fh:
            loaded = json.load(fh)
        unknown = set(loaded) - set(cfg)
        if unknown:
            raise DomainError(f"unknown config keys: {sorted(unknown)}")
        cfg.update(loaded)
    for key in cfg:
        val = getattr(args, key, None)
        if val is not None:
            cfg[key] = val
    return cfg


def _emit(text: str, out_path):
    if out_path:
        with open(out_path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _grid_for(cfg, p_plus: float) -> GridSpec:
    if cfg.get("grid_half_width"):
        return GridSpec(-cfg["grid_half_width"], cfg["grid_half_width"],
                        cfg["grid_points"])
    return default_grid(p_plus, cfg["grid_points"])


def _build_state(cfg):
    s = db_to_s(cfg["db"])
    params = GateParams(gamma=cfg["gamma"], s=s, y_m=cfg["ym"])
    cat = cat_params_from_gate(params)
    kind = cfg.get("kind", "cubic")
    if kind == "vacuum":
        return make_squeezed_vacuum(1.0, _grid_for(cfg, 0.0))
    if kind == "squeezed":
        grid = _grid_for(cfg, 0.0) if cfg.get("grid_half_width") \
            else GridSpec(-10.0 / s, 10.0 / s, cfg["grid_points"])
        return make_squeezed_vacuum(s, grid)
    if kind == "cubic":
        grid = _grid_for(cfg, 0.0) if cfg.get("grid_half_width") \
            else GridSpec(-10.0 / s, 10.0 / s, cfg["grid_points"])
        return make_cubic_phase_state(cfg["gamma"], s, grid)
    return make_ideal_cat(cat, _grid_for(cfg, cat.p_plus))


def _state_csv(wf) -> str:
    lines = ["x,re,im"]
    for x, a in zip(wf.x, wf.amplitudes):
        lines.append(f"{x:.17g},{a.real:.17g},{a.imag:.17g}")
    return "\n".join(lines) + "\n"


def _cmd_state(cfg) -> int:
    wf = _build_state(cfg)
    if cfg["format"] == "json":
        _emit(wavefunction_to_json(wf) + "\n", cfg["out"])
    else:
        _emit(_state_csv(wf), cfg["out"])
    return EXIT_OK


def _cmd_gate(cfg) -> int:
    s = db_to_s(cfg["db"])
    params = GateParams(gamma=cfg["gamma"], s=s, y_m=cfg["ym"])
    cat = cat_params_from_gate(params)
    vacuum = make_squeezed_vacuum(1.0, _grid_for(cfg, cat.p_plus))
    out = apply_gate(vacuum, params)
    if cfg["format"] == "json":
        rec = json.loads(wavefunction_to_json(out.state))
        payload = {"probability_density": out.probability_density,
                   "gamma": params.gamma, "s": params.s, "y_m": params.y_m,
                   "version": __version__, "state": rec}
        _emit(json.dumps(payload) + "\n", cfg["out"])
    else:
        print(f"probability_density {out.probability_density:.17g}")
        _emit(_state_csv(out.state), cfg["out"])
    return EXIT_OK


def _cmd_wigner(cfg) -> int:
    s = db_to_s(cfg["db"])
    source = cfg.get("source") or "output"
    if source == "output":
        params = GateParams(gamma=cfg["gamma"], s=s, y_m=cfg["ym"])
        cat = cat_params_from_gate(params)
        vacuum = make_squeezed_vacuum(1.0, _grid_for(cfg, cat.p_plus))
        state = apply_gate(vacuum, params).state
    else:
        state = _build_state({**cfg, "kind": source if source != "output" else "cubic"})
    if cfg.get("bounds"):
        parts = [float(v) for v in str(cfg["bounds"]).split(":")]
        if len(parts) != 4:
            raise DomainError("--bounds must be xmin:xmax:pmin:pmax")
        bounds = tuple(parts)
    else:
        bounds = suggest_wigner_bounds(state)
    w = wigner_transform(state, bounds, cfg["nx"], cfg["np"])
    if cfg["format"] == "json":
        payload = {"x_min": w.x_min, "x_max": w.x_max, "p_min": w.p_min,
                   "p_max": w.p_max, "n_x": w.n_x, "n_p": w.n_p,
                   "version": __version__,
                   "values": [list(row) for row in w.values]}
        _emit(json.dumps(payload) + "\n", cfg["out"])
    else:
        _emit(w.to_csv(), cfg["out"])
    return EXIT_OK


def _parse_db_range(text: str):
    parts = str(text).split(":")
    if len(parts) not in (2, 3):
        raise DomainError("--db-range must be lo:hi or lo:hi:n")
    lo, hi = float(parts[0]), float(parts[1])
    n = int(parts[2]) if len(parts) == 3 else 60
    if not (hi > lo and n >= 2):
        raise DomainError("--db-range needs hi > lo and n >= 2")
    return lo, hi, n


def _cmd_sweep(cfg) -> int:
    lo, hi, n = _parse_db_range(cfg["db_range"])
    inverse_s = tuple(float(v) for v in
                      np.round(10.0 ** (np.linspace(lo, hi, n) / 20.0), 15))
    rule = "proportional_y_m_over_30" if cfg["gamma_rule"] == "ym/30" else "fixed"
    gamma = cfg["gamma"]
    if rule == "fixed" and gamma is None:
        raise DomainError("--gamma is required with --gamma-rule fixed")
    fixed = GateParams(gamma=(gamma if gamma is not None else cfg["ym"] / 30.0),
                       s=1.0, y_m=cfg["ym"])
    outputs = frozenset(v.strip() for v in cfg["outputs"].split(",") if v.strip())
    spec = SweepSpec(variable="inverse_s", values=inverse_s, fixed=fixed,
                     gamma_rule=rule, outputs=outputs,
                     n_grid_points=cfg["grid_points"])
    rows = run_sweep(spec)
    if cfg["format"] == "json":
        payload = {"spec": {"variable": "inverse_s", "db_range": [lo, hi, n],
                            "gamma_rule": cfg["gamma_rule"], "y_m": cfg["ym"],
                            "outputs": sorted(outputs)},
                   "version": __version__,
                   "rows": [vars(r) for r in rows]}
        _emit(json.dumps(payload, default=float) + "\n", cfg["out"])
    else:
        _emit(rows_to_csv(rows), cfg["out"])
    return EXIT_OK


def _cmd_support_region(cfg) -> int:
    region = build_support_region(db_to_s(cfg["db"]), cfg["gamma"],
                                  cfg["sigma_level"], cfg["n_boundary"])
    if cfg["format"] == "json":
        payload = {"sigma_level": region.sigma_level,
                   "version": __version__,
                   "boundary": [list(pt) for pt in region.boundary]}
        _emit(json.dumps(payload) + "\n", cfg["out"])
    else:
        _emit(region.to_csv(), cfg["out"])
    return EXIT_OK


def verify_grid(fast: bool = False):
    gammas = (0.1, 0.5) if fast else (0.1, 0.2, 0.5)
    dbs = (0.0, 14.0) if fast else (0.0, 5.0, 9.0, 14.0)
    y_ms = (3.0,) if fast else (3.0, 6.0, 15.0)
    deltas = np.arange(-10.0, 10.0 + 1e-9, 2.0 if fast else 0.5)
    return gammas, dbs, y_ms, deltas


def run_verification(fast: bool = False):
    """Max scaled deviation between added_factor and its quadrature oracle.

    Deviation at each grid point is |closed - oracle| / max(|oracle|,
    floor/tol), so a return value <= tol means every point satisfies
    |closed - oracle| <= max(tol*|oracle|, floor).
    """
    gammas, dbs, y_ms, deltas = verify_grid(fast)
    worst = 0.0
    # the factor depends on y_m only through x - y_m, so the oracle integral
    # is shared across outcomes
    for gamma in gammas:
        for db in dbs:
            s = db_to_s(db)
            cache = {}
            for delta in deltas:
                o = oracle_added_factor(
                    delta, GateParams(gamma=gamma, s=s, y_m=0.0))
                cache[delta] = o
            for y_m in y_ms:
                params = GateParams(gamma=gamma, s=s, y_m=y_m)
                for delta in deltas:
                    a = added_factor(y_m + delta, params)
                    o = cache[delta]
                    dev = abs(a - o) / max(abs(o), VERIFY_ABS_FLOOR / VERIFY_TOLERANCE)
                    worst = max(worst, dev)
    return worst


def _cmd_verify(cfg) -> int:
    worst = run_verification(bool(cfg["fast"]))
    print(f"max relative deviation {worst:.6e} (tolerance {VERIFY_TOLERANCE:.0e})")
    return EXIT_OK if worst <= VERIFY_TOLERANCE else EXIT_DOMAIN


_COMMANDS = {
    "state": _cmd_state,
    "gate": _cmd_gate,
    "wigner": _cmd_wigner,
    "sweep-infidelity": _cmd_sweep,
    "sweep-probability": _cmd_sweep,
    "support-region": _cmd_support_region,
    "verify": _cmd_verify,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if exc.code is not None else EXIT_USAGE
    try:
        cfg = _effective_config(args)
        if cfg.get("dump_config") or getattr(args, "dump_config", None):
            dump_path = getattr(args, "dump_config", None) or cfg.get("dump_config")
            dumpable = {k: v for k, v in cfg.items() if k != "dump_config"}
            with open(dump_path, "w", encoding="utf-8") as fh:
                json.dump(dumpable, fh, indent=2, sort_keys=True)
                fh.write("\n")
        return _COMMANDS[args.command](cfg)
    except ConvergenceError as exc:
        print(f"convergence error: {exc}", file=sys.stderr)
        return EXIT_CONVERGENCE
    except CvcatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    raise SystemExit(main())
