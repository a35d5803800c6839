"""Composite Gauss-Legendre panel quadrature for finite and semi-infinite integrals.

The semi-infinite helpers assume an exponentially decaying envelope
``|f(x)| <= envelope(x) * exp(-rate*x)`` and truncate at a horizon where the
discarded tail is provably below the working tolerance; the tail bound is
returned alongside the value rather than silently dropped.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .errors import QuadratureError


@dataclass(frozen=True)
class QuadratureConfig:
    """Panel scheme for the library's integrals.

    nodes_per_panel: Gauss-Legendre order used on each panel.
    horizon_factor:  semi-infinite integrals against exp(-x/T) are cut at
                     horizon_factor*T (tail factor e^-40 by default).
    max_panels:      hard cap guarding runaway refinement.
    """

    nodes_per_panel: int = 8
    horizon_factor: float = 40.0
    max_panels: int = 2_000_000

    def refined(self) -> "QuadratureConfig":
        return QuadratureConfig(self.nodes_per_panel + 4, self.horizon_factor,
                                self.max_panels)


DEFAULT_QUAD = QuadratureConfig()


@lru_cache(maxsize=64)
def _gl_nodes(n: int):
    x, w = np.polynomial.legendre.leggauss(n)
    return x, w


def panel_nodes(edges: np.ndarray, nodes_per_panel: int):
    """Gauss-Legendre nodes/weights for the panels defined by ``edges``.

    Returns flat arrays (x, w); summation order is panel-major, so results
    are bit-reproducible for a fixed edge array.
    """
    edges = np.asarray(edges, dtype=float)
    x01, w01 = _gl_nodes(nodes_per_panel)
    a = edges[:-1]
    h = np.diff(edges)
    x = (a[:, None] + (x01[None, :] + 1.0) * (h[:, None] / 2.0)).ravel()
    w = (w01[None, :] * (h[:, None] / 2.0)).ravel()
    return x, w


def integrate_panels(f, edges: np.ndarray, nodes_per_panel: int = 8):
    """Integrate a vectorized callable over the panels defined by ``edges``."""
    x, w = panel_nodes(edges, nodes_per_panel)
    total = np.dot(w, f(x))
    return complex(total) if np.iscomplexobj(total) else float(total)


def uniform_edges(a: float, b: float, width: float) -> np.ndarray:
    """Panel edges covering [a, b] with panels no wider than ``width``."""
    n = max(1, int(np.ceil((b - a) / width)))
    return np.linspace(a, b, n + 1)


def integrate_decaying(f, rate: float, *, width: float | None = None,
                       config: QuadratureConfig = DEFAULT_QUAD,
                       envelope: float = 1.0):
    """Integrate f over (0, inf) given decay |f(x)| <= envelope*exp(-rate*x).

    ``width`` is the panel width (default: one e-folding 1/rate, capped so the
    oscillation/variation scale of typical integrands is resolved).  Returns
    (value, tail_bound) where tail_bound covers the truncated [H, inf) part.
    """
    if rate <= 0.0:
        raise QuadratureError("decay rate must be positive")
    horizon = config.horizon_factor / rate
    if width is None:
        width = 1.0 / rate
    edges = uniform_edges(0.0, horizon, width)
    if len(edges) - 1 > config.max_panels:
        raise QuadratureError(
            f"panel count {len(edges) - 1} exceeds cap {config.max_panels}")
    value = integrate_panels(f, edges, config.nodes_per_panel)
    tail = envelope * np.exp(-rate * horizon) / rate
    return value, float(tail)


def integrate_adaptive(f, a: float, b: float, *, tol: float = 1e-10,
                       nodes: int = 12, max_depth: int = 30) -> float:
    """Globally adaptive Gauss-Legendre bisection on [a, b].

    Panel is accepted when the n-node and (n+6)-node estimates agree within
    the locally apportioned tolerance.  Used as the independent quadrature
    route when cross-checking closed forms.
    """
    stack = [(float(a), float(b), 0)]
    total = 0.0
    while stack:
        lo, hi, depth = stack.pop()
        coarse = integrate_panels(f, np.array([lo, hi]), nodes)
        fine = integrate_panels(f, np.array([lo, hi]), nodes + 6)
        if abs(fine - coarse) <= tol * max(1.0, (hi - lo) / (b - a)):
            total += fine
        elif depth >= max_depth:
            raise QuadratureError(
                f"adaptive quadrature stalled on [{lo}, {hi}]")
        else:
            mid = 0.5 * (lo + hi)
            stack.append((lo, mid, depth + 1))
            stack.append((mid, hi, depth + 1))
    return total


@dataclass
class RefinementReport:
    value: float
    previous: float
    change: float
    converged: bool
    extra: dict = field(default_factory=dict)


def refine_until_stable(evaluate, configs, tol: float) -> RefinementReport:
    """Run ``evaluate(config)`` over successively finer configs until stable.

    Raises QuadratureError when the final two estimates still disagree by
    more than ``tol``.
    """
    values = [evaluate(c) for c in configs]
    if len(values) < 2:
        return RefinementReport(values[-1], values[-1], 0.0, True)
    change = abs(values[-1] - values[-2])
    if change > tol:
        raise QuadratureError(
            f"refinement did not converge: last change {change:.3e} > {tol:.3e}")
    return RefinementReport(values[-1], values[-2], change, True)
