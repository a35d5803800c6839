"""Shift-correlation sums of r(n) and d(n) with their asymptotic main terms.

sum_{n<=x} r(n) r(n+h) carries the main term (-1)^h (8x/h) sum_{d|h} (-1)^d d;
sum_{n<=x} d(n) d(n+h) follows the quadratic-in-log model
x sum_i (log x)^i sum_j c_ij sum_{d|h} (log d)^j / d with c_22 = c_21 = 0 and
c_20 = 6/pi^2 fixed; the six remaining coefficients come from a frozen
calibration fit (see calibration.py) and are marked as fitted.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import RangeError
from .sieve import SieveTable

C20 = 6.0 / np.pi ** 2

#: mask of coefficients fixed a priori rather than fitted: (i, j) entries
PAPER_FIXED = {(2, 0), (2, 1), (2, 2)}


@dataclass
class CorrelationResult:
    x: float
    h: int
    exact_sum: float
    main_term: float
    residual: float
    in_uniform_range: bool  # h <= sqrt(x); outside it the formula is unproven


def divisors(h: int) -> np.ndarray:
    if h < 1:
        raise RangeError("shift h must be a positive integer")
    small = [d for d in range(1, int(np.sqrt(h)) + 1) if h % d == 0]
    ds = set(small) | {h // d for d in small}
    return np.array(sorted(ds), dtype=float)


def alternating_divisor_sum(h: int) -> float:
    """sum_{d|h} (-1)^d d."""
    ds = divisors(h)
    signs = np.where(ds.astype(int) % 2 == 0, 1.0, -1.0)
    return float(np.dot(signs, ds))


def log_divisor_sum(h: int, j: int) -> float:
    """S_j(h) = sum_{d|h} (log d)^j / d."""
    ds = divisors(h)
    return float(np.sum(np.log(ds) ** j / ds))


def _exact_correlation(values: np.ndarray, x: float, h: int) -> int:
    n_max = int(np.floor(x))
    if n_max + h > len(values):
        raise RangeError(
            f"correlation at x={x}, h={h} needs sieve limit >= {n_max + h}")
    a = values[:n_max].astype(np.int64)
    b = values[h:n_max + h].astype(np.int64)
    # int64 dot is exact here: products < 1e6 and n_max <= 2e8 keep the sum
    # far below 2^63
    return int(np.dot(a, b))


def correlation_r(x: float, h: int, table: SieveTable) -> CorrelationResult:
    """sum_{n<=x} r(n) r(n+h) against (-1)^h (8x/h) sum_{d|h} (-1)^d d."""
    if h < 1:
        raise RangeError("shift h must be >= 1")
    exact = _exact_correlation(table.r_values, x, h)
    main = (-1.0) ** h * (8.0 * x / h) * alternating_divisor_sum(h)
    return CorrelationResult(x=float(x), h=h, exact_sum=float(exact),
                             main_term=float(main),
                             residual=float(exact - main),
                             in_uniform_range=bool(h <= np.sqrt(x)))


def motohashi_main_term(x: float, h: int, c: np.ndarray) -> float:
    """x sum_{i<=2} (log x)^i sum_{j<=2} c[i,j] S_j(h)."""
    L = np.log(x)
    S = np.array([log_divisor_sum(h, j) for j in range(3)])
    return float(x * sum(L ** i * float(np.dot(c[i], S)) for i in range(3)))


def correlation_d(x: float, h: int, table: SieveTable,
                  coefficients: np.ndarray | None = None) -> CorrelationResult:
    """sum_{n<=x} d(n) d(n+h) against the quadratic-in-log main term."""
    if h < 1:
        raise RangeError("shift h must be >= 1")
    if coefficients is None:
        from .calibration import frozen_motohashi_coefficients
        coefficients = frozen_motohashi_coefficients()
    exact = _exact_correlation(table.d_values, x, h)
    main = motohashi_main_term(x, h, coefficients)
    return CorrelationResult(x=float(x), h=h, exact_sum=float(exact),
                             main_term=float(main),
                             residual=float(exact - main),
                             in_uniform_range=bool(h <= np.sqrt(x)))


def correlation_exact_grid(values: np.ndarray, x_grid, h: int) -> np.ndarray:
    """Exact correlation sums at several cutoffs in one pass (prefix sums)."""
    x_grid = np.asarray(sorted(float(x) for x in x_grid))
    n_max = int(np.floor(x_grid[-1]))
    if n_max + h > len(values):
        raise RangeError("x grid exceeds sieve table")
    prod = values[:n_max].astype(np.int64) * values[h:n_max + h].astype(np.int64)
    csum = np.cumsum(prod)
    idx = np.floor(x_grid).astype(int) - 1
    return csum[idx].astype(float)
