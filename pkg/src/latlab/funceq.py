"""Ratio functional equations solved by exponential families.

The family F(t, w) = t^c exp(w^c t / h(w)) satisfies

    integral_0^inf F(w t, w) / F(t, w) dt = h(w) / (1 - w)

on the branches (0 < w < 1, h > 0) and (w > 1, h < 0), because the ratio
collapses to w^c exp((w^c/h)(w-1) t).  The c = 0, h = 1 case is the plain
exponential identity with target 1/(1-w).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DivergenceError, RangeError
from .quadrature import QuadratureConfig, DEFAULT_QUAD, integrate_panels, uniform_edges


@dataclass(frozen=True)
class SolutionParams:
    """Exponent c >= 0, ratio point w, and the caller-supplied h(w) value."""

    c: float
    w: float
    h_of_w: float

    def validate(self) -> None:
        if self.c < 0:
            raise RangeError("only c >= 0 is supported (ratio bounded at 0)")
        if self.w <= 0 or self.w == 1.0:
            raise RangeError("w must be positive and != 1")
        if 0 < self.w < 1 and self.h_of_w <= 0:
            raise DivergenceError(
                "0 < w < 1 requires h(w) > 0 for a decaying ratio")
        if self.w > 1 and self.h_of_w >= 0:
            raise DivergenceError("w > 1 requires h(w) < 0")


def decay_rate(p: SolutionParams) -> float:
    """lambda > 0 with ratio = w^c e^{-lambda t}."""
    return p.w ** p.c * (1.0 - p.w) / p.h_of_w


def ratio_integrand(t: float, p: SolutionParams):
    """F(w t, w)/F(t, w) = w^c exp((w^c/h)(w-1) t)."""
    p.validate()
    t = np.asarray(t, dtype=float)
    if np.any(t < 0):
        raise RangeError("t must be positive")
    return p.w ** p.c * np.exp(-decay_rate(p) * t)


def verify_theorem3(p: SolutionParams,
                    quad: QuadratureConfig = DEFAULT_QUAD) -> float:
    """|quadrature of the ratio over (0, horizon) - h/(1-w)| + tail bound."""
    p.validate()
    lam = decay_rate(p)
    if lam <= 0:
        raise DivergenceError("ratio integrand does not decay")
    horizon = quad.horizon_factor / lam
    edges = uniform_edges(0.0, horizon, 0.5 / lam)
    integral = integrate_panels(lambda t: ratio_integrand(t, p), edges,
                                max(quad.nodes_per_panel, 12))
    tail = p.w ** p.c * np.exp(-lam * horizon) / lam
    target = p.h_of_w / (1.0 - p.w)
    return float(abs(integral - target) + tail)


def hayman_check(w: float, quad: QuadratureConfig = DEFAULT_QUAD) -> float:
    """Residual of int_0^inf e^{(w-1)t} dt = 1/(1-w) for F = c e^t, 0 < w < 1."""
    if not 0.0 < w < 1.0:
        raise RangeError("Hayman identity needs 0 < w < 1")
    return verify_theorem3(SolutionParams(c=0.0, w=w, h_of_w=1.0), quad)


def theorem3_grid_report(params_grid, quad: QuadratureConfig = DEFAULT_QUAD):
    """Residual rows for a parameter grid; JSON-ready dicts."""
    rows = []
    for p in params_grid:
        lam = decay_rate(p)
        rows.append({
            "c": p.c, "w": p.w, "h": p.h_of_w,
            "target": p.h_of_w / (1.0 - p.w),
            "horizon": quad.horizon_factor / lam,
            "residual": verify_theorem3(p, quad),
        })
    return rows
