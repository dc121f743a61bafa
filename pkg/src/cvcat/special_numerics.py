"""Real-argument Airy function and the quadrature engines used everywhere else.

Ai(z) is assembled from three regimes:

* ``|z| <= 4``      -- Maclaurin series (cancellation stays below ~1e-14),
* ``|z| >= 9``      -- Poincare asymptotic expansions (first omitted term
                       below 1e-15 relative),
* ``4 < |z| < 9``   -- Taylor propagation of the ODE ``Ai'' = z Ai`` from
                       precomputed anchor nodes, themselves obtained by
                       stepping inward from the asymptotic region.

The bridge exists because neither expansion reaches full double accuracy on
the seam: the Maclaurin cancellation grows like exp((2/3)|z|^(3/2)) while the
asymptotic optimal-truncation error only decays like exp(-(4/3)|z|^(3/2)).
Matching both at |z| in [4, 6] bottoms out near 1e-9 absolute, which is not
enough for the gate's closed-form/quadrature cross-checks near Airy zeros.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Tuple

import numpy as np

from .errors import ConvergenceError, DomainError

__all__ = [
    "QuadratureSpec",
    "airy_ai",
    "airy_ai_scaled",
    "integrate_adaptive",
    "integrate_oscillatory_gaussian",
    "default_oscillatory_spec",
]

# Ai(0) = 3^(-2/3)/Gamma(2/3),  Ai'(0) = -3^(-1/3)/Gamma(1/3)
_AI0 = 3.0 ** (-2.0 / 3.0) / math.gamma(2.0 / 3.0)
_AIP0 = -(3.0 ** (-1.0 / 3.0)) / math.gamma(1.0 / 3.0)

_SERIES_EDGE = 4.0   # Maclaurin for |z| <= 4
_ASYMP_EDGE = 9.0    # asymptotic for |z| >= 9
_NODE_STEP = 0.25    # anchor spacing on the bridge
_TAYLOR_TERMS = 30


def _asymptotic_u(n_terms: int) -> np.ndarray:
    """Coefficients u_k of the Poincare expansion of Ai."""
    u = np.empty(n_terms)
    u[0] = 1.0
    for k in range(1, n_terms):
        u[k] = u[k - 1] * (3 * k - 0.5) * (3 * k - 1.5) * (3 * k - 2.5) / (54.0 * k * (k - 0.5))
    return u


_N_ASY = 20
_U = _asymptotic_u(_N_ASY)
# v_k enter the expansion of Ai'
_V = _U * (6.0 * np.arange(_N_ASY) + 1.0) / (1.0 - 6.0 * np.arange(_N_ASY))
_V[0] = 1.0


def _maclaurin_pair(z):
    """(Ai, Ai') by Maclaurin series; z scalar or array with |z| <= ~4.5."""
    z = np.asarray(z, dtype=float)
    z3 = z ** 3
    f = np.ones_like(z)
    fp = np.zeros_like(z)          # d/dz of f
    g = z.copy()
    gp = np.ones_like(z)
    tf = np.ones_like(z)
    tg = z.copy()
    for k in range(1, 60):
        tf = tf * z3 / (3 * k * (3 * k - 1))
        tg = tg * z3 / ((3 * k + 1) * (3 * k))
        f += tf
        g += tg
        # derivative terms: d/dz z^(3k) = 3k z^(3k-1) etc.
        with np.errstate(divide="ignore", invalid="ignore"):
            fp += np.where(z != 0.0, 3 * k * tf / z, 0.0)
        gp += (3 * k + 1) * tg / np.where(z != 0.0, z, 1.0) * np.where(z != 0.0, 1.0, 0.0)
        if np.all(np.abs(tf) + np.abs(tg) < 1e-18 * (np.abs(f) + np.abs(g) + 1.0)):
            break
    # z == 0 derivative of g is exactly 1 (handled by init), of f exactly 0
    ai = _AI0 * f + _AIP0 * g
    aip = _AI0 * fp + _AIP0 * gp
    return ai, aip


def _asymptotic_scaled_pos(z):
    """Scaled (Ai, Ai')*exp(zeta) for z >= ~9."""
    z = np.asarray(z, dtype=float)
    zeta = (2.0 / 3.0) * z ** 1.5
    s_ai = np.zeros_like(z)
    s_aip = np.zeros_like(z)
    term = np.ones_like(z)
    prev = np.full_like(z, np.inf)
    for k in range(_N_ASY):
        tk = term * _U[k]
        if np.any(np.abs(tk) > prev):  # divergence onset; stop before it
            break
        s_ai += ((-1) ** k) * tk
        s_aip += ((-1) ** k) * term * _V[k]
        prev = np.abs(tk)
        term = term / zeta
    ai = s_ai / (2.0 * math.sqrt(math.pi) * z ** 0.25)
    aip = -(z ** 0.25) * s_aip / (2.0 * math.sqrt(math.pi))
    return ai, aip


def _asymptotic_neg(z):
    """(Ai, Ai') for z <= ~-9 via the oscillatory expansion."""
    w = -np.asarray(z, dtype=float)
    zeta = (2.0 / 3.0) * w ** 1.5
    ph = zeta - 0.25 * math.pi
    pe = np.zeros_like(w)   # sum over even k of (-1)^(k/2) u_k / zeta^k
    po = np.zeros_like(w)
    ve = np.zeros_like(w)
    vo = np.zeros_like(w)
    zpow = np.ones_like(w)
    for k in range(_N_ASY):
        sgn = (-1) ** (k // 2)
        if k % 2 == 0:
            pe += sgn * _U[k] * zpow
            ve += sgn * _V[k] * zpow
        else:
            po += sgn * _U[k] * zpow
            vo += sgn * _V[k] * zpow
        zpow = zpow / zeta
    ai = (np.cos(ph) * pe + np.sin(ph) * po) / (math.sqrt(math.pi) * w ** 0.25)
    aip = (w ** 0.25) * (np.sin(ph) * ve - np.cos(ph) * vo) / math.sqrt(math.pi)
    return ai, aip


def _build_bridge_tables() -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Anchor nodes (z, Ai, Ai') across 4 < |z| < 9 by ODE Taylor stepping.

    Positive side is integrated downward from z = 9 (Ai is the growing
    solution in that direction, so the recessive Bi admixture decays);
    the oscillatory side has no exponential separation.
    """
    def step(z0, ai, aip, h):
        c = np.empty(_TAYLOR_TERMS)
        c[0], c[1] = ai, aip
        c[2] = z0 * c[0] / 2.0
        for n in range(1, _TAYLOR_TERMS - 2):
            c[n + 2] = (z0 * c[n] + c[n - 1]) / ((n + 1.0) * (n + 2.0))
        # Horner for value and derivative
        v = 0.0
        for n in range(_TAYLOR_TERMS - 1, -1, -1):
            v = v * h + c[n]
        d = 0.0
        for n in range(_TAYLOR_TERMS - 1, 0, -1):
            d = d * h + n * c[n]
        return v, d

    zs_pos = np.arange(_ASYMP_EDGE, _SERIES_EDGE - 1e-9, -_NODE_STEP)
    ai, aip = _asymptotic_scaled_pos(_ASYMP_EDGE)
    zeta9 = (2.0 / 3.0) * _ASYMP_EDGE ** 1.5
    ai, aip = float(ai) * math.exp(-zeta9), float(aip) * math.exp(-zeta9)
    pos = [(9.0, ai, aip)]
    for z0 in zs_pos[:-1]:
        ai, aip = step(z0, ai, aip, -_NODE_STEP)
        pos.append((z0 - _NODE_STEP, ai, aip))

    zs_neg = np.arange(-_ASYMP_EDGE, -_SERIES_EDGE + 1e-9, _NODE_STEP)
    ai_n, aip_n = _asymptotic_neg(-_ASYMP_EDGE)
    ai_n, aip_n = float(ai_n), float(aip_n)
    neg = [(-9.0, ai_n, aip_n)]
    for z0 in zs_neg[:-1]:
        ai_n, aip_n = step(z0, ai_n, aip_n, _NODE_STEP)
        neg.append((z0 + _NODE_STEP, ai_n, aip_n))

    nodes = np.array([p[0] for p in neg] + [p[0] for p in reversed(pos)])
    ais = np.array([p[1] for p in neg] + [p[1] for p in reversed(pos)])
    aips = np.array([p[2] for p in neg] + [p[2] for p in reversed(pos)])
    order = np.argsort(nodes)
    return nodes[order], ais[order], aips[order]


_BRIDGE_Z, _BRIDGE_AI, _BRIDGE_AIP = _build_bridge_tables()


def _bridge_pair(z):
    """(Ai, Ai') on the seam region via local Taylor around the nearest anchor."""
    z = np.asarray(z, dtype=float)
    hi = np.clip(np.searchsorted(_BRIDGE_Z, z), 1, len(_BRIDGE_Z) - 1)
    lo = hi - 1
    idx = np.where(np.abs(z - _BRIDGE_Z[lo]) <= np.abs(_BRIDGE_Z[hi] - z), lo, hi)
    z0 = _BRIDGE_Z[idx]
    h = z - z0
    c_prev2 = _BRIDGE_AI[idx]
    c_prev1 = _BRIDGE_AIP[idx]
    val = c_prev2 + c_prev1 * h
    dval = c_prev1.copy()
    hpow = h * h
    # c_n recurrence on arrays; n runs over Taylor order
    cs = [c_prev2, c_prev1]
    for n in range(0, _TAYLOR_TERMS - 2):
        c_nm1 = cs[n - 1] if n >= 1 else 0.0
        c_next = (z0 * cs[n] + c_nm1) / ((n + 1.0) * (n + 2.0))
        cs.append(c_next)
        val = val + c_next * hpow
        dval = dval + (n + 2.0) * c_next * hpow / np.where(h != 0.0, h, 1.0) * (h != 0.0)
        hpow = hpow * h
    return val, dval


def _airy_pair(z):
    """Vectorized (Ai(z), Ai'(z)) for finite real z."""
    z = np.asarray(z, dtype=float)
    ai = np.empty_like(z)
    aip = np.empty_like(z)
    m_ser = np.abs(z) <= _SERIES_EDGE
    m_pos = z >= _ASYMP_EDGE
    m_neg = z <= -_ASYMP_EDGE
    m_bri = ~(m_ser | m_pos | m_neg)
    if np.any(m_ser):
        ai[m_ser], aip[m_ser] = _maclaurin_pair(z[m_ser])
    if np.any(m_pos):
        zp = z[m_pos]
        a, d = _asymptotic_scaled_pos(zp)
        zeta = (2.0 / 3.0) * zp ** 1.5
        with np.errstate(under="ignore"):
            e = np.exp(-zeta)
        ai[m_pos] = a * e
        aip[m_pos] = d * e
    if np.any(m_neg):
        ai[m_neg], aip[m_neg] = _asymptotic_neg(z[m_neg])
    if np.any(m_bri):
        ai[m_bri], aip[m_bri] = _bridge_pair(z[m_bri])
    return ai, aip


def airy_ai(z):
    """Airy function Ai(z) for real z; scalar in, scalar out (arrays pass through).

    Underflows cleanly to 0 deep on the positive axis.
    """
    arr = np.asarray(z, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise DomainError("airy_ai requires finite input")
    ai, _ = _airy_pair(arr)
    if np.isscalar(z) or arr.ndim == 0:
        return float(ai)
    return ai


def airy_ai_scaled(z):
    """Ai(z)*exp((2/3) z^(3/2)) for z >= 0; stays order-unity-polynomial.

    The plain and scaled values satisfy the definitional identity exactly in
    the asymptotic region because one is computed from the other.
    """
    arr = np.asarray(z, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise DomainError("airy_ai_scaled requires finite input")
    if np.any(arr < 0.0):
        raise DomainError("airy_ai_scaled is undefined on the oscillatory branch (z < 0)")
    out = np.empty_like(arr)
    m_asy = arr >= _ASYMP_EDGE
    m_low = ~m_asy
    if np.any(m_asy):
        a, _ = _asymptotic_scaled_pos(arr[m_asy])
        out[m_asy] = a
    if np.any(m_low):
        zl = arr[m_low]
        ai, _ = _airy_pair(zl)
        out[m_low] = ai * np.exp((2.0 / 3.0) * zl ** 1.5)
    if np.isscalar(z) or arr.ndim == 0:
        return float(out)
    return out


# ---------------------------------------------------------------------------
# Quadrature
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class QuadratureSpec:
    """Tolerances and budgets for the quadrature engines."""

    abs_tol: float = 1e-12
    rel_tol: float = 1e-10
    max_subdivisions: int = 2_000_000
    truncation_radius: float = 10.0

    def __post_init__(self):
        if not (self.abs_tol > 0 and self.rel_tol > 0):
            raise DomainError("tolerances must be positive")
        if self.max_subdivisions < 1:
            raise DomainError("max_subdivisions must be >= 1")
        if not self.truncation_radius > 0:
            raise DomainError("truncation_radius must be positive")


def default_oscillatory_spec(s: float) -> QuadratureSpec:
    """Default spec for the Gaussian-damped oscillatory integral.

    Truncation at 10/s puts the envelope below 2e-22.
    """
    return QuadratureSpec(truncation_radius=10.0 / s)


# Gauss-Kronrod 7-15 abscissae/weights on [-1, 1].
_XGK = np.array([
    0.991455371120813, 0.949107912342759, 0.864864423359769,
    0.741531185599394, 0.586087235467691, 0.405845151377397,
    0.207784955007898, 0.0,
])
_WGK = np.array([
    0.022935322010529, 0.063092092629979, 0.104790010322250,
    0.140653259715525, 0.169004726639267, 0.190350578064785,
    0.204432940075298, 0.209482141084728,
])
_WG = np.array([
    0.129484966168870, 0.279705391489277,
    0.381830050505119, 0.417959183673469,
])


def _gk15(f: Callable, a: float, b: float):
    """One Gauss-Kronrod 7-15 panel: (kronrod value, error estimate)."""
    c = 0.5 * (a + b)
    h = 0.5 * (b - a)
    xs = np.concatenate((c - h * _XGK[:-1], [c], c + h * _XGK[-2::-1]))
    fv = np.asarray(f(xs), dtype=complex)
    # symmetric pairs ordered outermost-first to match the weight tables;
    # index 7 is the midpoint
    pairs = fv[:7] + fv[14:7:-1]
    k = h * (np.sum(pairs * _WGK[:-1]) + fv[7] * _WGK[-1])
    g = h * (np.sum(pairs[1::2] * _WG[:-1]) + fv[7] * _WG[-1])
    return k, abs(k - g)


def integrate_adaptive(f: Callable, a: float, b: float,
                       spec: QuadratureSpec = QuadratureSpec()):
    """Adaptive Gauss-Kronrod integration of a vectorized integrand on [a, b].

    Returns ``(value, err_estimate)`` with complex ``value``. Raises
    ConvergenceError (carrying the best estimate) once the subdivision budget
    is exhausted without meeting ``max(abs_tol, rel_tol*|value|)``.
    """
    if not a < b:
        raise DomainError("integrate_adaptive requires a < b")
    val, err = _gk15(f, a, b)
    intervals = [(err, a, b, val)]
    n_sub = 1
    while True:
        total = sum(iv[3] for iv in intervals)
        total_err = sum(iv[0] for iv in intervals)
        if total_err <= max(spec.abs_tol, spec.rel_tol * abs(total)):
            return total, total_err
        if n_sub >= spec.max_subdivisions:
            raise ConvergenceError(
                "subdivision budget exhausted without convergence",
                best_estimate=total, err_estimate=total_err)
        worst = max(range(len(intervals)), key=lambda i: intervals[i][0])
        _, wa, wb, _ = intervals.pop(worst)
        mid = 0.5 * (wa + wb)
        v1, e1 = _gk15(f, wa, mid)
        v2, e2 = _gk15(f, mid, wb)
        intervals.append((e1, wa, mid, v1))
        intervals.append((e2, mid, wb, v2))
        n_sub += 1


_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(8)


def integrate_oscillatory_gaussian(delta: float, gamma: float, s: float,
                                   spec: QuadratureSpec | None = None) -> complex:
    """Integral over x' of exp(i x'(delta + gamma x'^2)) exp(-(s x')^2 / 2).

    Composite Gauss panels sized so the local phase advance per panel stays
    below 0.5 rad (local angular frequency |delta + 3 gamma x'^2|, plus the
    envelope rate s), truncated at |x'| <= truncation_radius.
    """
    if not s > 0:
        raise DomainError("squeeze factor s must be positive")
    if gamma < 0:
        # integrand(delta, -gamma) = conj(integrand(delta, gamma))
        return np.conj(integrate_oscillatory_gaussian(delta, -gamma, s, spec))
    if spec is None:
        spec = default_oscillatory_spec(s)
    r = spec.truncation_radius
    # Panel density from the antiderivative of |delta| + s + 3 gamma x^2.
    g_total = (abs(delta) + s) * r + gamma * r ** 3
    n_panels_half = max(1, int(math.ceil(g_total / 0.5)))
    if 2 * n_panels_half > spec.max_subdivisions:
        raise ConvergenceError(
            "oscillatory panel count exceeds max_subdivisions",
            best_estimate=None, err_estimate=None)
    dense = np.linspace(0.0, r, 4 * n_panels_half + 1)
    g_dense = (abs(delta) + s) * dense + gamma * dense ** 3
    targets = np.linspace(0.0, g_total, n_panels_half + 1)
    edges = np.interp(targets, g_dense, dense)
    edges[0], edges[-1] = 0.0, r
    edges = np.concatenate((-edges[::-1], edges[1:]))
    centers = 0.5 * (edges[1:] + edges[:-1])
    halves = 0.5 * (edges[1:] - edges[:-1])
    x = (centers[:, None] + halves[:, None] * _GL_NODES[None, :]).ravel()
    with np.errstate(under="ignore"):
        fv = np.exp(1j * x * (delta + gamma * x * x)) * np.exp(-0.5 * (s * x) ** 2)
    w = (halves[:, None] * _GL_WEIGHTS[None, :]).ravel()
    return complex(np.sum(fv * w))
