"""Sieved arithmetic tables: r(n) = #{(a,b): a^2+b^2 = n} and d(n) = #divisors.

r(n) is computed through the character identity r(n) = 4*sum_{d|n} chi4(d)
(chi4 the non-principal character mod 4), accumulated by a divisor sieve in
O(N log N); d(n) by the plain divisor-increment sieve.  Summatory functions
use the half-term convention: the term at n = x is weighted 1/2 when the
caller declares x an exact integer.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field

import numpy as np

from .errors import RangeError, SieveCapError

#: hard cap on table size; two uint32 arrays at the cap take ~1.6 GB
MAX_SIEVE_LIMIT = 200_000_000

CACHE_MAGIC = b"LATLAB01"
CACHE_ENV_VAR = "LATLAB_CACHE_DIR"


@dataclass
class SieveTable:
    """Immutable precomputed r(n), d(n) for 1 <= n <= limit.

    Arrays are 1-indexed conceptually; index [n-1] holds the value at n.
    """

    limit: int
    r_values: np.ndarray
    d_values: np.ndarray
    _r_cumsum: np.ndarray | None = field(default=None, repr=False)
    _d_cumsum: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self):
        self.r_values.setflags(write=False)
        self.d_values.setflags(write=False)

    def r(self, n: int) -> int:
        return int(self.r_values[n - 1])

    def d(self, n: int) -> int:
        return int(self.d_values[n - 1])

    @property
    def r_cumsum(self) -> np.ndarray:
        """Cumulative sums of r: entry [k-1] = sum_{n<=k} r(n), exact int64."""
        if self._r_cumsum is None:
            object.__setattr__(self, "_r_cumsum",
                               np.cumsum(self.r_values, dtype=np.int64))
        return self._r_cumsum

    @property
    def d_cumsum(self) -> np.ndarray:
        if self._d_cumsum is None:
            object.__setattr__(self, "_d_cumsum",
                               np.cumsum(self.d_values, dtype=np.int64))
        return self._d_cumsum


def build_sieve(N: int, *, cap: int = MAX_SIEVE_LIMIT) -> SieveTable:
    """Sieve r(n) and d(n) for n = 1..N in O(N log N)."""
    if N < 1:
        raise RangeError(f"sieve limit must be >= 1, got {N}")
    if N > cap:
        raise SieveCapError(f"sieve limit {N} exceeds cap {cap}")
    d = np.zeros(N, dtype=np.uint32)
    chi_acc = np.zeros(N, dtype=np.int32)
    for k in range(1, N + 1):
        d[k - 1::k] += 1
        m = k & 3
        if m == 1:
            chi_acc[k - 1::k] += 1
        elif m == 3:
            chi_acc[k - 1::k] -= 1
    r = (4 * chi_acc).astype(np.uint32)
    return SieveTable(limit=N, r_values=r, d_values=d)


def _summatory(x: float, values: np.ndarray, cumsum: np.ndarray,
               limit: int, x_is_integer: bool) -> float:
    if x < 0:
        raise RangeError(f"x={x} must be non-negative")
    if x_is_integer:
        n = int(round(x))
        if abs(x - n) > 0:
            raise RangeError(f"x={x!r} flagged integral but is not an integer")
        if n > limit:
            raise RangeError(f"x={x} beyond table limit {limit}")
        if n == 0:
            return 0.0
        return float(cumsum[n - 1]) - 0.5 * float(values[n - 1])
    n = int(np.floor(x))
    if n > limit:
        raise RangeError(f"floor(x)={n} beyond table limit {limit}")
    if n == 0:
        return 0.0
    return float(cumsum[n - 1])


def summatory_r(x: float, table: SieveTable, *, x_is_integer: bool = False) -> float:
    """sum_{n<=x} r(n), the n = x term halved when x_is_integer is set.

    Integrality is never inferred from floating-point proximity: the halving
    convention changes the value by r(x)/2 and must be exact, so callers pass
    the flag explicitly.
    """
    return _summatory(x, table.r_values, table.r_cumsum, table.limit, x_is_integer)


def summatory_d(x: float, table: SieveTable, *, x_is_integer: bool = False) -> float:
    """sum_{n<=x} d(n) with the same half-term convention as summatory_r."""
    return _summatory(x, table.d_values, table.d_cumsum, table.limit, x_is_integer)


# ---------------------------------------------------------------------------
# binary cache: magic "LATLAB01", N as 8-byte LE, then r and d as 4-byte LE


def cache_dir() -> str:
    env = os.environ.get(CACHE_ENV_VAR)
    if env:
        return env
    xdg = os.environ.get("XDG_CACHE_HOME") or os.path.join(
        os.path.expanduser("~"), ".cache")
    return os.path.join(xdg, "latlab")


def cache_path(N: int, directory: str | None = None) -> str:
    return os.path.join(directory or cache_dir(), f"sieve_{N}.bin")


def save_sieve(table: SieveTable, path: str) -> None:
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    with open(path, "wb") as fh:
        fh.write(CACHE_MAGIC)
        fh.write(np.uint64(table.limit).astype("<u8").tobytes())
        fh.write(table.r_values.astype("<u4").tobytes())
        fh.write(table.d_values.astype("<u4").tobytes())


def load_sieve(path: str) -> SieveTable:
    with open(path, "rb") as fh:
        magic = fh.read(8)
        if magic != CACHE_MAGIC:
            raise ValueError(f"bad sieve cache magic {magic!r} in {path}")
        N = int(np.frombuffer(fh.read(8), dtype="<u8")[0])
        r = np.frombuffer(fh.read(4 * N), dtype="<u4").astype(np.uint32)
        d = np.frombuffer(fh.read(4 * N), dtype="<u4").astype(np.uint32)
    if len(r) != N or len(d) != N:
        raise ValueError(f"truncated sieve cache {path}")
    return SieveTable(limit=N, r_values=r, d_values=d)


def cached_sieve(N: int, directory: str | None = None) -> tuple[SieveTable, bool]:
    """Load the cached table for N if present, else build and cache it.

    Returns (table, hit).
    """
    path = cache_path(N, directory)
    if os.path.exists(path):
        return load_sieve(path), True
    table = build_sieve(N)
    save_sieve(table, path)
    return table, False
