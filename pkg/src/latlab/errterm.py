"""Circle and divisor error terms P(x), Delta(x).

Direct route: sieve-backed summatory functions minus the smooth main terms.
Series route: truncated Bessel expansions (J1 for the circle term; K1 and Y1
for the divisor term) with an optional C^2 cosine taper on the top half of
the truncation range.  The raw series converge only boundedly, so tapering is
what turns a truncation point into a quantifiable error estimate.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import RangeError
from .quadrature import _gl_nodes
from .sieve import SieveTable, summatory_r, summatory_d
from .special import (EULER_GAMMA, bessel_j1, bessel_k1, bessel_y1,
                      DEFAULT_POLICY)


@dataclass
class ErrorTermSample:
    """One value of P(x) or Delta(x) with the method that produced it."""

    x: float
    value: float
    method: str               # "direct" or "series"
    terms_used: int = 0
    truncation_estimate: float = 0.0


def circle_main(x):
    return np.pi * np.asarray(x, dtype=float) - 1.0


def divisor_main(x):
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    pos = x > 0
    xp = x[pos]
    out[pos] = xp * (np.log(xp) + 2.0 * EULER_GAMMA - 1.0)
    return out + 0.25


def P_direct(x: float, table: SieveTable, *, x_is_integer: bool = False) -> ErrorTermSample:
    """P(x) = sum'_{n<=x} r(n) - pi*x + 1."""
    if x <= 0:
        raise RangeError("P(x) needs x > 0")
    value = summatory_r(x, table, x_is_integer=x_is_integer) - np.pi * x + 1.0
    return ErrorTermSample(x=float(x), value=float(value), method="direct")


def Delta_direct(x: float, table: SieveTable, *, x_is_integer: bool = False) -> ErrorTermSample:
    """Delta(x) = sum'_{n<=x} d(n) - x(log x + 2*gamma - 1) - 1/4."""
    if x <= 0:
        raise RangeError("Delta(x) needs x > 0")
    value = summatory_d(x, table, x_is_integer=x_is_integer) \
        - x * (np.log(x) + 2.0 * EULER_GAMMA - 1.0) - 0.25
    return ErrorTermSample(x=float(x), value=float(value), method="direct")


def taper_weights(n: np.ndarray, N: int) -> np.ndarray:
    """C^2 cosine taper: 1 on [1, N/2], smooth descent to 0 across (N/2, N].

    Built as the cubic smoothstep of the raised cosine, which zeroes the
    first two derivatives at both junctions.
    """
    u = (n - N / 2.0) / (N / 2.0)
    u = np.clip(u, 0.0, 1.0)
    f = 0.5 * (1.0 + np.cos(np.pi * u))
    return f * f * (3.0 - 2.0 * f)


def _series_sample(x, N, smoothing, table, weights_fn, summand_fn, prefactor):
    if x <= 0:
        raise RangeError("series evaluation needs x > 0")
    if N < 1 or N > table.limit:
        raise RangeError(f"N={N} outside sieve table (limit {table.limit})")
    if smoothing not in ("sharp", "smoothed"):
        raise ValueError(f"unknown smoothing mode {smoothing!r}")
    n = np.arange(1, N + 1, dtype=float)
    coeff = weights_fn(N)
    mask = coeff != 0
    terms = np.zeros(N)
    terms[mask] = coeff[mask] * summand_fn(n[mask], x)
    if smoothing == "smoothed":
        w = taper_weights(n, N)
        window = n > N / 2.0
        trunc = prefactor * float(np.sum(np.abs(w[window] * terms[window])))
        value = prefactor * float(np.dot(w, terms))
    else:
        window = n > N / 2.0
        trunc = prefactor * float(np.sum(np.abs(terms[window])))
        value = prefactor * float(np.sum(terms))
    return value, trunc


def P_hardy(x: float, N: int, smoothing: str, table: SieveTable,
            policy=DEFAULT_POLICY) -> ErrorTermSample:
    """Truncated series sqrt(x) sum r(n) n^{-1/2} J1(2 pi sqrt(x n))."""
    def summand(n, x0):
        return bessel_j1(2.0 * np.pi * np.sqrt(x0 * n), policy) / np.sqrt(n)

    value, trunc = _series_sample(
        x, N, smoothing, table,
        weights_fn=lambda N0: table.r_values[:N0].astype(float),
        summand_fn=summand, prefactor=np.sqrt(x))
    return ErrorTermSample(x=float(x), value=value, method="series",
                           terms_used=N, truncation_estimate=trunc)


def Delta_voronoi(x: float, N: int, smoothing: str, table: SieveTable,
                  policy=DEFAULT_POLICY) -> ErrorTermSample:
    """Truncated series -(2 sqrt(x)/pi) sum d(n) n^{-1/2} (K1 + pi/2 Y1)(4 pi sqrt(x n))."""
    def summand(n, x0):
        z = 4.0 * np.pi * np.sqrt(x0 * n)
        return (bessel_k1(z, policy)
                + 0.5 * np.pi * bessel_y1(z, policy)) / np.sqrt(n)

    value, trunc = _series_sample(
        x, N, smoothing, table,
        weights_fn=lambda N0: table.d_values[:N0].astype(float),
        summand_fn=summand, prefactor=2.0 * np.sqrt(x) / np.pi)
    return ErrorTermSample(x=float(x), value=-value, method="series",
                           terms_used=N, truncation_estimate=abs(trunc))


# ---------------------------------------------------------------------------
# mean values and mean squares over [0, T]

def _exact_piecewise_P_square(T: float, table: SieveTable) -> float:
    """integral_0^T P(x)^2 dx; P is linear on each [k, k+1)."""
    K = int(np.floor(T))
    # on [k, k+1): P(x) = A_k - pi x with A_k = R_k + 1
    A = np.concatenate([[1.0], table.r_cumsum[:K].astype(float) + 1.0])

    def antider(Avals, xs):
        return -(Avals - np.pi * xs) ** 3 / (3.0 * np.pi)

    k = np.arange(K + 1, dtype=float)
    lo = k
    hi = np.minimum(k + 1.0, T)
    hi[-1] = T
    return float(np.sum(antider(A, hi) - antider(A, lo)))


def _gl_unit_nodes(nodes: int):
    x01, w01 = _gl_nodes(nodes)
    return (x01 + 1.0) / 2.0, w01 / 2.0


def _delta_on_grid(xs: np.ndarray, table: SieveTable) -> np.ndarray:
    """Delta(x) vectorized for non-integer x."""
    k = np.floor(xs).astype(np.int64)
    D = np.where(k >= 1, table.d_cumsum[np.maximum(k - 1, 0)], 0.0)
    return D - divisor_main(xs)


def _P_on_grid(xs: np.ndarray, table: SieveTable) -> np.ndarray:
    k = np.floor(xs).astype(np.int64)
    R = np.where(k >= 1, table.r_cumsum[np.maximum(k - 1, 0)], 0.0)
    return R - circle_main(xs)


def mean_square_direct(T: float, which: str, table: SieveTable,
                       nodes: int = 8) -> float:
    """integral_0^T P^2 (exact piecewise) or Delta^2 (per-unit Gauss-Legendre)."""
    if T <= 0 or T > table.limit:
        raise RangeError(f"T={T} outside (0, {table.limit}]")
    if which == "P":
        return _exact_piecewise_P_square(T, table)
    if which != "Delta":
        raise ValueError(f"which must be 'P' or 'Delta', got {which!r}")
    u, w = _gl_unit_nodes(nodes)
    K = int(np.floor(T))
    starts = np.arange(0, K + 1, dtype=float)
    widths = np.minimum(starts + 1.0, T) - starts
    xs = starts[:, None] + widths[:, None] * u[None, :]
    vals = _delta_on_grid(xs.ravel(), table).reshape(xs.shape) ** 2
    return float(np.sum(widths[:, None] * w[None, :] * vals))


def mean_square_P_gl(T: float, table: SieveTable, nodes: int = 8) -> float:
    """Gauss-Legendre cross-check of the exact piecewise P^2 integral."""
    u, w = _gl_unit_nodes(nodes)
    K = int(np.floor(T))
    starts = np.arange(0, K + 1, dtype=float)
    widths = np.minimum(starts + 1.0, T) - starts
    xs = starts[:, None] + widths[:, None] * u[None, :]
    vals = _P_on_grid(xs.ravel(), table).reshape(xs.shape) ** 2
    return float(np.sum(widths[:, None] * w[None, :] * vals))


def mean_direct(T: float, which: str, table: SieveTable) -> float:
    """(1/T) integral_0^T of P or Delta, exact piecewise."""
    if T <= 0 or T > table.limit:
        raise RangeError(f"T={T} outside (0, {table.limit}]")
    K = int(np.floor(T))
    k = np.arange(K + 1, dtype=float)
    lo = k
    hi = np.minimum(k + 1.0, T)
    hi[-1] = T
    if which == "P":
        S = np.concatenate([[0.0], table.r_cumsum[:K].astype(float)])
        # integral of main pi x - 1 on [lo, hi]
        main = np.pi * (hi ** 2 - lo ** 2) / 2.0 - (hi - lo)
    elif which == "Delta":
        S = np.concatenate([[0.0], table.d_cumsum[:K].astype(float)])

        def F(x):
            # antiderivative of x(log x + 2 gamma - 1) + 1/4, with F(0) = 0
            out = np.zeros_like(x)
            p = x > 0
            xp = x[p]
            out[p] = (xp ** 2 / 2.0 * (np.log(xp) + 2.0 * EULER_GAMMA - 1.0)
                      - xp ** 2 / 4.0 + xp / 4.0)
            return out

        main = F(hi) - F(lo)
    else:
        raise ValueError(f"which must be 'P' or 'Delta', got {which!r}")
    return float((np.sum(S * (hi - lo)) - np.sum(main)) / T)


def samples_to_csv(path: str, samples: list) -> None:
    from .reports import write_csv
    rows = [(s.x, s.method, s.terms_used, s.value, s.truncation_estimate)
            for s in samples]
    write_csv(path, ["x", "method", "N", "value", "truncation_estimate"], rows)
