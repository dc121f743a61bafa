"""The measurement-induced gate core.

The gate multiplies the target wavefunction by the Airy-form added factor,
yields the outcome probability density as the squared norm of the
unnormalized product, and normalizes to obtain the conditional output state.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, ZeroProbabilityOutcomeError
from .special_numerics import airy_ai, airy_ai_scaled
from .states import GateParams, WaveFunction

__all__ = [
    "ConditionalOutput",
    "added_factor",
    "added_factor_grid",
    "apply_gate",
    "outcome_probability_density",
]

_PROBABILITY_FLOOR = 1e-300


@dataclass(frozen=True)
class ConditionalOutput:
    """Normalized conditional state plus the density of its outcome."""

    state: WaveFunction
    probability_density: float
    params: GateParams

    def __post_init__(self):
        if self.probability_density < 0:
            raise DomainError("probability_density must be >= 0")


def added_factor_grid(x: np.ndarray, params: GateParams) -> np.ndarray:
    """Airy-form multiplicative factor evaluated on an array of coordinates.

    Assembled in log space: log-prefactor, exponent argument, and the scaled
    Airy decay are summed before a single exponentiation, so the growing
    exponential never meets the decaying Ai at overflow scale. The plain Ai
    is used on the oscillatory side, where no scaling is needed.
    """
    gamma, s, y_m = params.gamma, params.s, params.y_m
    if not gamma > 0:
        raise DomainError("added_factor needs gamma > 0; "
                          "gamma = 0 is the Gaussian special case")
    x = np.asarray(x, dtype=float)
    delta = x - y_m
    log_pref = 0.5 * math.log(2.0 * s) + 0.25 * math.log(math.pi) \
        - (1.0 / 3.0) * math.log(3.0 * gamma)
    exp_arg = (s * s / (6.0 * gamma)) * (delta + s ** 4 / (18.0 * gamma))
    z = (3.0 * gamma) ** (-1.0 / 3.0) * (delta + s ** 4 / (12.0 * gamma))

    out = np.empty_like(z)
    pos = z > 0.0
    if np.any(pos):
        zp = z[pos]
        scaled = airy_ai_scaled(zp)
        with np.errstate(under="ignore"):
            out[pos] = np.exp(log_pref + exp_arg[pos]
                              - (2.0 / 3.0) * zp ** 1.5 + np.log(scaled))
    if np.any(~pos):
        zn = z[~pos]
        ai = np.asarray(airy_ai(zn))
        with np.errstate(under="ignore", divide="ignore"):
            mag = np.exp(log_pref + exp_arg[~pos] + np.log(np.abs(ai)))
        out[~pos] = np.where(ai == 0.0, 0.0, np.sign(ai) * mag)
    return out


def added_factor(x: float, params: GateParams) -> complex:
    """Scalar added factor; real-valued, returned as complex by contract."""
    return complex(float(added_factor_grid(np.asarray([x]), params)[0]))


def _gaussian_factor_grid(x: np.ndarray, params: GateParams) -> np.ndarray:
    """gamma = 0 limit of the added factor (Gaussian Fourier identity)."""
    s, y_m = params.s, params.y_m
    with np.errstate(under="ignore"):
        return math.pi ** (-0.25) / math.sqrt(s) * np.exp(-((x - y_m) ** 2) / (2.0 * s * s))


def _unnormalized_output(input: WaveFunction, params: GateParams) -> np.ndarray:
    if params.gamma > 0:
        factor = added_factor_grid(input.x, params)
    else:
        factor = _gaussian_factor_grid(input.x, params)
    return input.amplitudes * factor


def apply_gate(input: WaveFunction, params: GateParams) -> ConditionalOutput:
    """Condition the input on the ancilla momentum outcome params.y_m."""
    if abs(input.norm_squared() - 1.0) > 1e-6:
        raise DomainError("apply_gate expects a normalized input state")
    unnorm = _unnormalized_output(input, params)
    prob = float(np.trapezoid(np.abs(unnorm) ** 2, dx=input.dx))
    if prob < _PROBABILITY_FLOOR:
        raise ZeroProbabilityOutcomeError(
            f"outcome y_m={params.y_m} has probability density {prob}; "
            "the conditional state is undefined")
    state = WaveFunction(input.x_min, input.x_max, input.n_points,
                         unnorm / math.sqrt(prob),
                         label=f"gate_output(gamma={params.gamma}, s={params.s}, "
                               f"y_m={params.y_m})",
                         normalized=True)
    return ConditionalOutput(state=state, probability_density=prob, params=params)


def outcome_probability_density(input: WaveFunction, gamma: float, s: float,
                                y_m: float) -> float:
    """P(y_m): squared norm of the unnormalized conditional output."""
    if abs(input.norm_squared() - 1.0) > 1e-6:
        raise DomainError("outcome_probability_density expects a normalized input")
    unnorm = _unnormalized_output(input, GateParams(gamma=gamma, s=s, y_m=y_m))
    return float(np.trapezoid(np.abs(unnorm) ** 2, dx=input.dx))
