"""Wavefunction constructors: squeezed vacuum, cubic phase state, ideal cat.

All states live on uniform coordinate grids as immutable ``WaveFunction``
values. Canonical units, hbar = 1; the vacuum has Var(x) = Var(p) = 1/2.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import DegenerateSuperpositionError, DomainError

__all__ = [
    "GridSpec",
    "WaveFunction",
    "GateParams",
    "CatParams",
    "default_grid",
    "make_squeezed_vacuum",
    "make_cubic_phase_state",
    "make_ideal_cat",
    "cat_params_from_gate",
    "wavefunction_to_json",
    "wavefunction_from_json",
]

_EDGE_ENVELOPE = 1e-12


@dataclass(frozen=True)
class GridSpec:
    """Uniform coordinate grid, endpoints inclusive."""

    x_min: float
    x_max: float
    n_points: int = 2048

    def __post_init__(self):
        if not self.x_min < self.x_max:
            raise DomainError("grid requires x_min < x_max")
        if self.n_points < 16:
            raise DomainError("grid requires n_points >= 16")

    @property
    def x(self) -> np.ndarray:
        return np.linspace(self.x_min, self.x_max, self.n_points)

    @property
    def dx(self) -> float:
        return (self.x_max - self.x_min) / (self.n_points - 1)


def default_grid(p_plus: float = 0.0, n_points: int = 2048) -> GridSpec:
    """Grid covering the cat lobes plus 8 vacuum widths."""
    half = abs(p_plus) + 8.0
    return GridSpec(-half, half, n_points)


@dataclass(frozen=True)
class WaveFunction:
    """Complex amplitude samples over a uniform coordinate grid."""

    x_min: float
    x_max: float
    n_points: int
    amplitudes: np.ndarray
    label: str = ""
    normalized: bool = False

    def __post_init__(self):
        if not self.x_min < self.x_max:
            raise DomainError("x_min must be below x_max")
        if self.n_points < 16:
            raise DomainError("n_points must be >= 16")
        amp = np.ascontiguousarray(self.amplitudes, dtype=complex)
        if amp.shape != (self.n_points,):
            raise DomainError("amplitudes length must equal n_points")
        if not np.all(np.isfinite(amp.view(float))):
            raise DomainError("amplitudes must be finite")
        amp.setflags(write=False)
        object.__setattr__(self, "amplitudes", amp)
        n2 = self.norm_squared()
        if not math.isfinite(n2):
            raise DomainError("norm^2 must be finite")
        if self.normalized and abs(n2 - 1.0) > 1e-6:
            raise DomainError(f"normalized flag set but norm^2 = {n2}")

    @property
    def x(self) -> np.ndarray:
        return np.linspace(self.x_min, self.x_max, self.n_points)

    @property
    def dx(self) -> float:
        return (self.x_max - self.x_min) / (self.n_points - 1)

    @property
    def grid(self) -> GridSpec:
        return GridSpec(self.x_min, self.x_max, self.n_points)

    def norm_squared(self) -> float:
        return float(np.trapezoid(np.abs(self.amplitudes) ** 2, dx=self.dx))

    def density(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2


@dataclass(frozen=True)
class GateParams:
    """The gate knobs: cubic coefficient, momentum squeeze, measured outcome."""

    gamma: float
    s: float
    y_m: float

    def __post_init__(self):
        if not self.s > 0:
            raise DomainError("squeeze factor s must be positive")
        if self.gamma < 0:
            raise DomainError("cubic coefficient gamma must be >= 0")


@dataclass(frozen=True)
class CatParams:
    """Ideal two-coherent-state superposition target."""

    p_plus: float
    theta: float
    alpha: complex = field(init=False)

    def __post_init__(self):
        if self.p_plus < 0:
            raise DomainError("p_plus must be >= 0")
        object.__setattr__(self, "alpha", 1j * self.p_plus)


def _check_grid_covers(grid: GridSpec, s: float):
    """The Gaussian envelope must have decayed to <= 1e-12 at both edges."""
    env = max(math.exp(-0.5 * (s * grid.x_min) ** 2),
              math.exp(-0.5 * (s * grid.x_max) ** 2))
    if grid.x_min > 0 or grid.x_max < 0:
        env = 1.0
    if env > _EDGE_ENVELOPE:
        raise DomainError(
            f"grid too narrow for s={s}: edge envelope {env:.3e} > {_EDGE_ENVELOPE}")


def make_squeezed_vacuum(s: float, grid: GridSpec | None = None) -> WaveFunction:
    """Momentum-squeezed vacuum: (sqrt(s)/pi^(1/4)) exp(-(s x)^2 / 2)."""
    if not s > 0:
        raise DomainError("squeeze factor s must be positive")
    if grid is None:
        grid = GridSpec(-10.0 / s, 10.0 / s)
    _check_grid_covers(grid, s)
    x = grid.x
    with np.errstate(under="ignore"):
        amp = (math.sqrt(s) / math.pi ** 0.25) * np.exp(-0.5 * (s * x) ** 2)
    return WaveFunction(grid.x_min, grid.x_max, grid.n_points,
                        amp.astype(complex), label=f"squeezed_vacuum(s={s})",
                        normalized=True)


def make_cubic_phase_state(gamma: float, s: float,
                           grid: GridSpec | None = None) -> WaveFunction:
    """Squeezed vacuum with the pure cubic phase exp(i gamma x^3) imprinted."""
    base = make_squeezed_vacuum(s, grid)
    amp = base.amplitudes * np.exp(1j * gamma * base.x ** 3)
    return replace(base, amplitudes=amp,
                   label=f"cubic_phase(gamma={gamma}, s={s})")


def make_ideal_cat(cat: CatParams, grid: GridSpec | None = None,
                   convention: str = "momentum") -> WaveFunction:
    """Normalized superposition of |alpha> and |-alpha| with alpha = i p_plus.

    ``convention="momentum"`` reads alpha = i p_plus as a vacuum displaced by
    p_plus along momentum: psi_alpha(x) = pi^(-1/4) exp(-x^2/2 + i p_plus x).
    ``convention="sqrt2"`` uses the sqrt(2)-quadrature coherent state, whose
    momentum displacement is sqrt(2) p_plus instead. The momentum reading is
    the one validated against the gate output.
    """
    if convention == "momentum":
        p_shift = cat.p_plus
    elif convention == "sqrt2":
        p_shift = math.sqrt(2.0) * cat.p_plus
    else:
        raise DomainError(f"unknown coherent-state convention {convention!r}")
    if grid is None:
        grid = default_grid(cat.p_plus)
    _check_grid_covers(grid, 1.0)
    # <component_+|component_-> for a momentum displacement of +-p_shift;
    # equals exp(-2|alpha|^2) in whichever convention defined alpha
    overlap = math.exp(-cat.p_plus ** 2 if convention == "momentum"
                       else -2.0 * cat.p_plus ** 2)
    denom = 2.0 * (1.0 + math.cos(2.0 * cat.theta) * overlap)
    if denom < 1e-15:
        raise DegenerateSuperpositionError(
            "cat normalization denominator vanishes (alpha=0, theta=pi/2)")
    x = grid.x
    with np.errstate(under="ignore"):
        envelope = math.pi ** (-0.25) * np.exp(-0.5 * x ** 2)
    plus = envelope * np.exp(1j * p_shift * x)
    minus = envelope * np.exp(-1j * p_shift * x)
    amp = (np.exp(1j * cat.theta) * plus + np.exp(-1j * cat.theta) * minus) / math.sqrt(denom)
    return WaveFunction(grid.x_min, grid.x_max, grid.n_points, amp,
                        label=f"ideal_cat(p_plus={cat.p_plus}, theta={cat.theta})",
                        normalized=True)


def cat_params_from_gate(params: GateParams) -> CatParams:
    """Target cat parameters for a gate setting.

    p_plus = sqrt(y_m / 3 gamma) and
    theta = pi/4 - (2 / (3 sqrt(3 gamma))) y_m^(3/2), reduced to (-pi, pi].

    Note: with gamma = y_m/30 this gives p_plus = sqrt(10) = 3.162 for every
    y_m, so the lobe spacing is 2 p_plus = 6.32. Published figure captions
    quote the spacing as 3.16, which matches p_plus itself; the formula is
    implemented literally.
    """
    if params.y_m < 0:
        raise DomainError("y_m must be >= 0 to derive cat parameters")
    if not params.gamma > 0:
        raise DomainError("gamma must be positive to derive cat parameters")
    p_plus = math.sqrt(params.y_m / (3.0 * params.gamma))
    theta = math.pi / 4.0 - (2.0 / (3.0 * math.sqrt(3.0 * params.gamma))) * params.y_m ** 1.5
    theta = math.remainder(theta, 2.0 * math.pi)
    if theta <= -math.pi:
        theta = math.pi
    return CatParams(p_plus=p_plus, theta=theta)


def wavefunction_to_json(wf: WaveFunction) -> str:
    """JSON record {x_min, x_max, n_points, re[], im[], label}."""
    return json.dumps({
        "x_min": wf.x_min,
        "x_max": wf.x_max,
        "n_points": wf.n_points,
        "re": wf.amplitudes.real.tolist(),
        "im": wf.amplitudes.imag.tolist(),
        "label": wf.label,
    })


def wavefunction_from_json(text: str) -> WaveFunction:
    rec = json.loads(text)
    amp = np.asarray(rec["re"], dtype=float) + 1j * np.asarray(rec["im"], dtype=float)
    return WaveFunction(rec["x_min"], rec["x_max"], rec["n_points"], amp,
                        label=rec.get("label", ""))
