"""Brute-force cross-checks for the closed-form gate path.

Nothing here shares code with the Airy evaluation: the added factor is
recomputed by direct oscillatory quadrature, and the whole protocol is
re-simulated on a two-mode coordinate grid (entangle, then project on the
measured ancilla momentum). Test fixture quality, not a production path.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, ZeroProbabilityOutcomeError
from .gate import ConditionalOutput
from .special_numerics import QuadratureSpec, default_oscillatory_spec, \
    integrate_oscillatory_gaussian
from .states import GateParams, GridSpec, WaveFunction

__all__ = [
    "TwoModeGrid",
    "ancilla_grid_for",
    "build_two_mode_grid",
    "oracle_added_factor",
    "oracle_two_mode",
]

_MAX_ENTRIES = 2 ** 26      # quadratic-memory cap: desk-scale validation only
_PHASE_STEP_LIMIT = 0.5     # rad of entangling/cubic phase per ancilla step


def oracle_added_factor(x: float, params: GateParams,
                        spec: QuadratureSpec | None = None) -> complex:
    """Added factor by direct quadrature of its defining integral."""
    if not params.gamma > 0:
        raise DomainError("oracle_added_factor needs gamma > 0")
    if spec is None:
        spec = default_oscillatory_spec(params.s)
    integral = integrate_oscillatory_gaussian(x - params.y_m, params.gamma,
                                              params.s, spec)
    return math.sqrt(params.s) / (math.pi ** 0.75 * math.sqrt(2.0)) * integral


def ancilla_grid_for(params: GateParams, n_target: int,
                     half_width: float | None = None) -> GridSpec:
    """Ancilla grid satisfying the edge phase-step rule within the entry cap.

    The cubic phase oscillates fastest at the grid edge, so the step must
    satisfy (|y_m| + 3 gamma w^2) dx <= 0.5 there. If the resulting point
    count would blow the n_target * n_ancilla <= 2^26 budget, the half-width
    is shrunk (the Gaussian envelope makes the far wings negligible) as long
    as the edge density stays below 1e-10.
    """
    s = params.s
    w = 12.0 / s if half_width is None else half_width
    budget = _MAX_ENTRIES // n_target

    def n_for(width: float) -> int:
        rate = abs(params.y_m) + 3.0 * params.gamma * width ** 2
        dx = _PHASE_STEP_LIMIT / max(rate, s)
        return int(math.ceil(2.0 * width / dx)) + 1

    while n_for(w) > budget:
        w *= 0.95
        if math.exp(-((s * w) ** 2)) > 1e-10:
            raise DomainError(
                "cannot satisfy both the phase-step rule and the 2^26 entry cap "
                f"for gamma={params.gamma}, s={s}: reduce the target grid size")
    n2 = n_for(w)
    assert (abs(params.y_m) + 3.0 * params.gamma * w ** 2) * (2 * w / (n2 - 1)) \
        <= _PHASE_STEP_LIMIT * (1 + 1e-12)
    return GridSpec(-w, w, max(n2, 16))


@dataclass(frozen=True)
class TwoModeGrid:
    """Entangled target x ancilla amplitude matrix (n_1 x n_2)."""

    grid_1: GridSpec
    grid_2: GridSpec
    amplitudes: np.ndarray

    def __post_init__(self):
        if self.amplitudes.shape != (self.grid_1.n_points, self.grid_2.n_points):
            raise DomainError("amplitude matrix shape must be (n_1, n_2)")
        if self.grid_1.n_points * self.grid_2.n_points > _MAX_ENTRIES:
            raise DomainError("two-mode grid exceeds the 2^26 entry cap")

    def norm_squared(self) -> float:
        dens = np.abs(self.amplitudes) ** 2
        return float(np.trapezoid(np.trapezoid(dens, dx=self.grid_2.dx, axis=1),
                                  dx=self.grid_1.dx))


def build_two_mode_grid(input: WaveFunction, params: GateParams,
                        grid_2: GridSpec | None = None) -> TwoModeGrid:
    """psi(x1) * psi_sq(x2) * exp(i gamma x2^3) * exp(i x1 x2) as a matrix."""
    if grid_2 is None:
        grid_2 = ancilla_grid_for(params, input.n_points)
    if input.n_points * grid_2.n_points > _MAX_ENTRIES:
        raise DomainError("two-mode grid exceeds the 2^26 entry cap")
    x1 = input.x
    x2 = grid_2.x
    s = params.s
    with np.errstate(under="ignore"):
        sq = (math.sqrt(s) / math.pi ** 0.25) * np.exp(-0.5 * (s * x2) ** 2)
        row_phase = np.exp(1j * params.gamma * x2 ** 3) * sq
        amp = input.amplitudes[:, None] * row_phase[None, :] \
            * np.exp(1j * np.outer(x1, x2))
    return TwoModeGrid(grid_1=input.grid, grid_2=grid_2, amplitudes=amp)


def oracle_two_mode(input: WaveFunction, params: GateParams,
                    grid_2: GridSpec | None = None,
                    chunk_rows: int = 64) -> ConditionalOutput:
    """End-to-end grid simulation: entangle, project on y_m, normalize.

    Row-chunked so the full two-mode matrix never has to be materialized;
    values are identical to the TwoModeGrid route.
    """
    if abs(input.norm_squared() - 1.0) > 1e-6:
        raise DomainError("oracle_two_mode expects a normalized input state")
    if grid_2 is None:
        grid_2 = ancilla_grid_for(params, input.n_points)
    if input.n_points * grid_2.n_points > _MAX_ENTRIES:
        raise DomainError("two-mode grid exceeds the 2^26 entry cap")
    x2 = grid_2.x
    s = params.s
    edge_density = math.exp(-((s * max(abs(grid_2.x_min), abs(grid_2.x_max))) ** 2))
    if edge_density > 1e-10:
        raise DomainError("ancilla grid too narrow: edge density "
                          f"{edge_density:.3e} > 1e-10")
    with np.errstate(under="ignore"):
        sq = (math.sqrt(s) / math.pi ** 0.25) * np.exp(-0.5 * (s * x2) ** 2)
        # cubic resource phase and homodyne projection phase, fused per column
        column = sq * np.exp(1j * (params.gamma * x2 ** 3 - params.y_m * x2))
    x1 = input.x
    out = np.empty(input.n_points, dtype=complex)
    # trapezoid weights over x2; endpoints carry half weight
    w2 = np.full(grid_2.n_points, grid_2.dx)
    w2[0] *= 0.5
    w2[-1] *= 0.5
    weighted = column * w2
    for lo in range(0, input.n_points, chunk_rows):
        hi = min(lo + chunk_rows, input.n_points)
        phases = np.exp(1j * np.outer(x1[lo:hi], x2))
        out[lo:hi] = phases @ weighted
    out *= input.amplitudes / math.sqrt(2.0 * math.pi)
    prob = float(np.trapezoid(np.abs(out) ** 2, dx=input.dx))
    if prob < 1e-300:
        raise ZeroProbabilityOutcomeError(
            f"outcome y_m={params.y_m} has probability density {prob}")
    state = WaveFunction(input.x_min, input.x_max, input.n_points,
                         out / math.sqrt(prob),
                         label=f"oracle_output(gamma={params.gamma}, s={s}, "
                               f"y_m={params.y_m})",
                         normalized=True)
    return ConditionalOutput(state=state, probability_density=prob, params=params)
