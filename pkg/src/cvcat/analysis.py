"""Fidelity, dB conversion, efficiency score, and the figure-data sweeps."""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import CvcatError, DomainError
from .gate import apply_gate
from .phase_space import suggest_wigner_bounds, wigner_log_negativity, \
    wigner_transform
from .states import CatParams, GateParams, GridSpec, WaveFunction, \
    cat_params_from_gate, default_grid, make_ideal_cat, make_squeezed_vacuum

__all__ = [
    "fidelity",
    "phase_aligned_l2",
    "resample",
    "db_to_s",
    "efficiency_score",
    "SweepSpec",
    "SweepRow",
    "run_sweep",
    "rows_to_csv",
    "log_inverse_s_values",
]


def resample(wf: WaveFunction, grid: GridSpec) -> WaveFunction:
    """Band-limited (sinc) interpolation of a wavefunction onto a new grid.

    The states here are Gaussian-enveloped, hence effectively band-limited;
    linear interpolation would bias overlap integrals at the 1e-4 level.
    """
    kernel = np.sinc((grid.x[:, None] - wf.x[None, :]) / wf.dx)
    amp = kernel @ wf.amplitudes
    return WaveFunction(grid.x_min, grid.x_max, grid.n_points, amp,
                        label=wf.label)


def fidelity(a: WaveFunction, b: WaveFunction) -> float:
    """|<a|b>|^2 by trapezoidal overlap; mismatched grids are reconciled by
    sinc-resampling the coarser state onto the finer grid."""
    for wf in (a, b):
        if abs(wf.norm_squared() - 1.0) > 1e-6:
            raise DomainError("fidelity requires normalized states")
    if (a.x_min, a.x_max, a.n_points) != (b.x_min, b.x_max, b.n_points):
        if a.dx <= b.dx:
            b = resample(b, a.grid)
        else:
            a = resample(a, b.grid)
    ov = np.trapezoid(np.conj(a.amplitudes) * b.amplitudes, dx=a.dx)
    return float(abs(ov) ** 2)


def phase_aligned_l2(a: WaveFunction, b: WaveFunction) -> float:
    """L2 distance between a and b after aligning b's global phase."""
    if (a.x_min, a.x_max, a.n_points) != (b.x_min, b.x_max, b.n_points):
        raise DomainError("phase_aligned_l2 requires a common grid")
    ov = complex(np.trapezoid(np.conj(a.amplitudes) * b.amplitudes, dx=a.dx))
    # ov = <a|b> carries b's phase relative to a; undo it
    phase = np.conj(ov) / abs(ov) if ov != 0 else 1.0
    diff = a.amplitudes - phase * b.amplitudes
    return float(math.sqrt(np.trapezoid(np.abs(diff) ** 2, dx=a.dx)))


def db_to_s(db: float) -> float:
    """Squeezing in dB to the momentum squeeze factor: s = 10^(-dB/20)."""
    if db < 0:
        raise DomainError("squeezing in dB must be >= 0")
    return 10.0 ** (-db / 20.0)


def efficiency_score(f_cat: float, probability_density: float) -> float:
    """Probability-weighted quality: f_cat * P(y_m).

    One admissible weighting of output quality by the success probability;
    the product form is a choice of this artifact, not a published formula.
    """
    if not (-1e-9 <= f_cat <= 1.0 + 1e-9):
        raise DomainError("f_cat must lie in [0, 1]")
    if probability_density < 0:
        raise DomainError("probability_density must be >= 0")
    return f_cat * probability_density


def log_inverse_s_values(n: int = 60, lo: float = 1.0, hi: float = 10.0):
    """Logarithmically spaced stretching factors 1/s (resolves knee and plateau)."""
    return tuple(float(v) for v in np.geomspace(lo, hi, n))


@dataclass(frozen=True)
class SweepSpec:
    """Declarative description of a parameter scan."""

    variable: str                      # "inverse_s" | "y_m"
    values: tuple
    fixed: GateParams
    gamma_rule: str = "fixed"          # "fixed" | "proportional_y_m_over_30"
    outputs: frozenset = frozenset({"infidelity", "probability"})
    n_grid_points: int = 2048
    optimize_cat: bool = False         # local (p_plus, theta) refinement;
    #                                    goes beyond the published recipe

    def __post_init__(self):
        if self.variable not in ("inverse_s", "y_m"):
            raise DomainError(f"unknown sweep variable {self.variable!r}")
        if self.gamma_rule not in ("fixed", "proportional_y_m_over_30"):
            raise DomainError(f"unknown gamma_rule {self.gamma_rule!r}")
        vals = tuple(float(v) for v in self.values)
        if not vals:
            raise DomainError("sweep values must be nonempty")
        if any(b <= a for a, b in zip(vals, vals[1:])):
            raise DomainError("sweep values must be strictly increasing")
        bad = set(self.outputs) - {"infidelity", "probability", "wln", "efficiency"}
        if bad:
            raise DomainError(f"unknown outputs {sorted(bad)}")
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "outputs", frozenset(self.outputs))


@dataclass(frozen=True)
class SweepRow:
    """One scan point; NaN marks outputs that were not requested."""

    variable_value: float
    infidelity: float = math.nan
    probability_density: float = math.nan
    wln: float = math.nan
    efficiency: float = math.nan
    error: str = ""


def _row_params(spec: SweepSpec, value: float) -> GateParams:
    if spec.variable == "inverse_s":
        s = 1.0 / value
        y_m = spec.fixed.y_m
    else:
        s = spec.fixed.s
        y_m = value
    if spec.gamma_rule == "proportional_y_m_over_30":
        gamma = y_m / 30.0
    else:
        gamma = spec.fixed.gamma
    return GateParams(gamma=gamma, s=s, y_m=y_m)


def _refine_cat(out_state: WaveFunction, cat: CatParams, grid: GridSpec) -> float:
    """Local coordinate-descent refinement of (p_plus, theta); returns best F."""
    best = fidelity(out_state, make_ideal_cat(cat, grid))
    p, th = cat.p_plus, cat.theta
    step_p, step_t = 0.05 * max(p, 1.0), 0.05
    for _ in range(40):
        improved = False
        for dp, dt in ((step_p, 0), (-step_p, 0), (0, step_t), (0, -step_t)):
            cand_p, cand_t = p + dp, th + dt
            if cand_p < 0:
                continue
            f = fidelity(out_state,
                         make_ideal_cat(CatParams(cand_p, cand_t), grid))
            if f > best:
                best, p, th, improved = f, cand_p, cand_t, True
        if not improved:
            step_p *= 0.5
            step_t *= 0.5
            if step_p < 1e-6 and step_t < 1e-6:
                break
    return best


def _evaluate_row(spec: SweepSpec, value: float) -> SweepRow:
    try:
        params = _row_params(spec, value)
        cat = cat_params_from_gate(params)
        grid = default_grid(cat.p_plus, spec.n_grid_points)
        vacuum = make_squeezed_vacuum(1.0, grid)
        out = apply_gate(vacuum, params)
        fields = {}
        f_cat = math.nan
        if {"infidelity", "efficiency"} & spec.outputs:
            if spec.optimize_cat:
                f_cat = _refine_cat(out.state, cat, grid)
            else:
                f_cat = fidelity(out.state, make_ideal_cat(cat, grid))
        if "infidelity" in spec.outputs:
            fields["infidelity"] = 1.0 - f_cat
        if "probability" in spec.outputs or "efficiency" in spec.outputs:
            fields["probability_density"] = out.probability_density
        if "efficiency" in spec.outputs:
            fields["efficiency"] = efficiency_score(f_cat, out.probability_density)
        if "wln" in spec.outputs:
            bounds = suggest_wigner_bounds(out.state)
            n_p = max(256, int((bounds[3] - bounds[2]) / 0.08))
            w = wigner_transform(out.state, bounds, 256, n_p)
            fields["wln"] = wigner_log_negativity(w)
        return SweepRow(variable_value=value, **fields)
    except CvcatError as exc:
        return SweepRow(variable_value=value, error=f"{type(exc).__name__}: {exc}")


def _max_workers() -> int:
    raw = os.environ.get("CVCAT_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def run_sweep(spec: SweepSpec) -> list[SweepRow]:
    """Evaluate every scan point; per-row failures are recorded in-row.

    Rows are independent pure computations, so the output is deterministic
    and ordered by input index regardless of the CVCAT_THREADS setting.
    """
    workers = min(_max_workers(), len(spec.values))
    if workers == 1:
        return [_evaluate_row(spec, v) for v in spec.values]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda v: _evaluate_row(spec, v), spec.values))


def rows_to_csv(rows) -> str:
    """Header: variable_value,infidelity,probability_density,wln,efficiency,error"""
    lines = ["variable_value,infidelity,probability_density,wln,efficiency,error"]
    for r in rows:
        def fmt(v):
            return "" if (isinstance(v, float) and math.isnan(v)) else f"{v:.17g}"
        lines.append(",".join([
            fmt(r.variable_value), fmt(r.infidelity), fmt(r.probability_density),
            fmt(r.wln), fmt(r.efficiency), r.error.replace(",", ";"),
        ]))
    return "\n".join(lines) + "\n"
