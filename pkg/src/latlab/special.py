"""Real Bessel functions J1, Y1, K1, I0, I1, complex Gamma, and chi(s).

Each Bessel function switches between its ascending power series and the
large-argument expansion in sines/cosines (J, Y), decaying exponential (K)
or growing exponential (I) with negative powers of the argument.  The switch
point and term count live in a SwitchPolicy so tests can pin either branch
and check agreement on the overlap window.

chi is the factor in the zeta functional equation zeta(s) = chi(s) zeta(1-s),
evaluated in log space so it stays usable at large |Im s|.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import PoleError, RangeError

EULER_GAMMA = 0.5772156649015328606

_FUNCS = ("j0", "j1", "y1", "k1", "i0", "i1")


@dataclass(frozen=True)
class SwitchPolicy:
    """Per-function series cutoff plus the asymptotic term count.

    Arguments at or below the cutoff use the power series; above it the
    asymptotic expansion.  Branches must agree to 1e-8 on the overlap
    window around each cutoff (enforced in the test suite).
    """

    # K1's log-bearing series cancels against 1/x + log(x/2) I1(x) like
    # e^{2x} * eps, so its switch point sits at 10; the others hold 18.
    series_cutoff: dict = field(
        default_factory=lambda: {"j0": 18.0, "j1": 18.0, "y1": 18.0,
                                 "k1": 10.0, "i0": 18.0, "i1": 18.0})
    asymptotic_terms: int = 14
    overlap_window: tuple = (15.0, 21.0)
    k1_overlap_window: tuple = (8.5, 11.5)


DEFAULT_POLICY = SwitchPolicy()

_SERIES_MAX_TERMS = 200


def _as_array(x, name: str, *, positive: bool = False):
    arr = np.asarray(x, dtype=float)
    if positive:
        if np.any(arr <= 0.0):
            raise RangeError(f"{name} requires strictly positive argument")
    elif np.any(arr < 0.0):
        raise RangeError(f"{name} requires non-negative argument")
    return arr


def _maybe_scalar(value, x):
    if np.isscalar(x) or np.asarray(x).ndim == 0:
        return float(value.reshape(())[()])
    return value


# -- ascending series -------------------------------------------------------

def _j0_series(x):
    q = -(x * x) / 4.0
    term = np.ones_like(x)
    total = term.copy()
    for k in range(_SERIES_MAX_TERMS):
        term = term * q / ((k + 1.0) * (k + 1.0))
        total += term
        if np.max(np.abs(term)) < 1e-18 * max(1.0, np.max(np.abs(total))):
            break
    return total


def _j1_series(x):
    # J1(x) = (x/2) sum_k (-x^2/4)^k / (k!(k+1)!)
    q = -(x * x) / 4.0
    term = np.ones_like(x)
    total = term.copy()
    for k in range(_SERIES_MAX_TERMS):
        term = term * q / ((k + 1.0) * (k + 2.0))
        total += term
        if np.max(np.abs(term)) < 1e-18 * max(1.0, np.max(np.abs(total))):
            break
    return 0.5 * x * total


def _i1_series(x):
    q = (x * x) / 4.0
    term = np.ones_like(x)
    total = term.copy()
    for k in range(_SERIES_MAX_TERMS):
        term = term * q / ((k + 1.0) * (k + 2.0))
        total += term
        if np.max(np.abs(term)) < 1e-18 * max(1.0, np.max(np.abs(total))):
            break
    return 0.5 * x * total


def _i0_series(x):
    q = (x * x) / 4.0
    term = np.ones_like(x)
    total = term.copy()
    for k in range(_SERIES_MAX_TERMS):
        term = term * q / ((k + 1.0) * (k + 1.0))
        total += term
        if np.max(np.abs(term)) < 1e-18 * max(1.0, np.max(np.abs(total))):
            break
    return total


def _digamma_pair_series(x, sign: float):
    """sum_k (psi(k+1)+psi(k+2)) (sign * x^2/4)^k / (k!(k+1)!)."""
    q = sign * (x * x) / 4.0
    base = np.ones_like(x)
    h = 0.0  # psi(k+1)+psi(k+2) = -2*gamma + H_k + H_{k+1}
    total = (-2.0 * EULER_GAMMA + 1.0) * base
    for k in range(_SERIES_MAX_TERMS):
        base = base * q / ((k + 1.0) * (k + 2.0))
        h_k = sum(1.0 / j for j in range(1, k + 2))
        coeff = -2.0 * EULER_GAMMA + 2.0 * h_k + 1.0 / (k + 2.0)
        term = coeff * base
        total += term
        if np.max(np.abs(term)) < 1e-18 * max(1.0, np.max(np.abs(total))):
            break
    return total


def _y1_series(x):
    # DLMF 10.8.1 with n = 1: the log term rides on J1, plus the -2/(pi x)
    # pole part and the digamma-weighted series.
    j1 = _j1_series(x)
    s = _digamma_pair_series(x, sign=-1.0)
    return (2.0 / np.pi) * np.log(x / 2.0) * j1 - 2.0 / (np.pi * x) \
        - (x / (2.0 * np.pi)) * s


def _k1_series(x):
    i1 = _i1_series(x)
    s = _digamma_pair_series(x, sign=+1.0)
    return 1.0 / x + np.log(x / 2.0) * i1 - (x / 4.0) * s


# -- asymptotic expansions --------------------------------------------------

def _hankel_coeffs(nu: int, terms: int):
    # a_k(nu) = (4nu^2-1)(4nu^2-9)...(4nu^2-(2k-1)^2) / (k! 8^k)
    a = [1.0]
    for k in range(1, terms + 1):
        a.append(a[-1] * (4.0 * nu * nu - (2 * k - 1) ** 2) / (8.0 * k))
    return np.array(a)


def _jy_asym(x, nu: int, terms: int):
    a = _hankel_coeffs(nu, terms)
    inv = 1.0 / x
    p = np.zeros_like(x)
    q = np.zeros_like(x)
    for k in range(0, terms + 1, 2):
        p += ((-1.0) ** (k // 2)) * a[k] * inv ** k
    for k in range(1, terms + 1, 2):
        q += ((-1.0) ** ((k - 1) // 2)) * a[k] * inv ** k
    omega = x - (0.5 * nu + 0.25) * np.pi
    amp = np.sqrt(2.0 / (np.pi * x))
    j = amp * (np.cos(omega) * p - np.sin(omega) * q)
    y = amp * (np.sin(omega) * p + np.cos(omega) * q)
    return j, y


def _k1_asym_scaled(x, terms: int):
    # e^x K1(x); all-plus Hankel series
    a = _hankel_coeffs(1, terms)
    inv = 1.0 / x
    s = np.zeros_like(x)
    for k in range(terms + 1):
        s += a[k] * inv ** k
    return np.sqrt(np.pi / (2.0 * x)) * s


def _i_asym_scaled(x, nu: int, terms: int):
    # e^-x I_nu(x); alternating Hankel series
    a = _hankel_coeffs(nu, terms)
    inv = 1.0 / x
    s = np.zeros_like(x)
    for k in range(terms + 1):
        s += ((-1.0) ** k) * a[k] * inv ** k
    return s / np.sqrt(2.0 * np.pi * x)


# -- public switched evaluations --------------------------------------------

def _switched(x, cutoff, series_fn, asym_fn):
    out = np.empty_like(x)
    lo = x <= cutoff
    with np.errstate(over="ignore"):  # unscaled I overflows past x ~ 709
        if np.any(lo):
            out[lo] = series_fn(x[lo])
        hi = ~lo
        if np.any(hi):
            out[hi] = asym_fn(x[hi])
    return out


def bessel_j0(x, policy: SwitchPolicy = DEFAULT_POLICY):
    arr = _as_array(x, "J0")
    res = _switched(arr, policy.series_cutoff["j0"], _j0_series,
                    lambda z: _jy_asym(z, 0, policy.asymptotic_terms)[0])
    return _maybe_scalar(res, x)


def bessel_j1(x, policy: SwitchPolicy = DEFAULT_POLICY):
    arr = _as_array(x, "J1")
    res = _switched(arr, policy.series_cutoff["j1"], _j1_series,
                    lambda z: _jy_asym(z, 1, policy.asymptotic_terms)[0])
    return _maybe_scalar(res, x)


def bessel_y1(x, policy: SwitchPolicy = DEFAULT_POLICY):
    arr = _as_array(x, "Y1", positive=True)
    res = _switched(arr, policy.series_cutoff["y1"], _y1_series,
                    lambda z: _jy_asym(z, 1, policy.asymptotic_terms)[1])
    return _maybe_scalar(res, x)


def bessel_k1(x, policy: SwitchPolicy = DEFAULT_POLICY):
    arr = _as_array(x, "K1", positive=True)
    res = _switched(arr, policy.series_cutoff["k1"], _k1_series,
                    lambda z: np.exp(-z) * _k1_asym_scaled(
                        z, policy.asymptotic_terms))
    return _maybe_scalar(res, x)


def bessel_i0(x, policy: SwitchPolicy = DEFAULT_POLICY):
    arr = _as_array(x, "I0")
    res = _switched(arr, policy.series_cutoff["i0"], _i0_series,
                    lambda z: np.exp(z) * _i_asym_scaled(
                        z, 0, policy.asymptotic_terms))
    return _maybe_scalar(res, x)


def bessel_i1(x, policy: SwitchPolicy = DEFAULT_POLICY):
    arr = _as_array(x, "I1")
    res = _switched(arr, policy.series_cutoff["i1"], _i1_series,
                    lambda z: np.exp(z) * _i_asym_scaled(
                        z, 1, policy.asymptotic_terms))
    return _maybe_scalar(res, x)


def bessel_i0_scaled(x, policy: SwitchPolicy = DEFAULT_POLICY):
    """e^-x I0(x); stays bounded for large x."""
    arr = _as_array(x, "I0")
    res = _switched(arr, policy.series_cutoff["i0"],
                    lambda z: np.exp(-z) * _i0_series(z),
                    lambda z: _i_asym_scaled(z, 0, policy.asymptotic_terms))
    return _maybe_scalar(res, x)


def bessel_i1_scaled(x, policy: SwitchPolicy = DEFAULT_POLICY):
    """e^-x I1(x)."""
    arr = _as_array(x, "I1")
    res = _switched(arr, policy.series_cutoff["i1"],
                    lambda z: np.exp(-z) * _i1_series(z),
                    lambda z: _i_asym_scaled(z, 1, policy.asymptotic_terms))
    return _maybe_scalar(res, x)


# -- complex gamma -----------------------------------------------------------

# B_{2n}/(2n(2n-1)) for the Stirling series, exact rationals
_STIRLING = [Fraction(1, 6), Fraction(-1, 30), Fraction(1, 42),
             Fraction(-1, 30), Fraction(5, 66), Fraction(-691, 2730),
             Fraction(7, 6), Fraction(-3617, 510), Fraction(43867, 798),
             Fraction(-174611, 330), Fraction(854513, 138),
             Fraction(-236364091, 2730)]
_STIRLING_COEFFS = np.array(
    [float(b / (2 * (n + 1) * (2 * (n + 1) - 1)))
     for n, b in enumerate(_STIRLING)])

_STIRLING_RADIUS = 16.0


def _log_sin(z):
    """log(sin z), stable for large |Im z| (branch not normalized).

    sin z = (i/2) e^{-iz} (1 - e^{2iz})   [|e^{2iz}| <= 1 for Im z >= 0]
          = -(i/2) e^{iz} (1 - e^{-2iz})  [Im z < 0]
    """
    z = np.asarray(z, dtype=complex)
    out = np.empty_like(z)
    up = z.imag >= 0.0
    zu = z[up]
    out[up] = -1j * zu + (-np.log(2.0) + 0.5j * np.pi) \
        + np.log1p(-np.exp(2j * zu))
    zd = z[~up]
    out[~up] = 1j * zd + (-np.log(2.0) - 0.5j * np.pi) \
        + np.log1p(-np.exp(-2j * zd))
    return out


def _loggamma_right(z):
    """Stirling series for Re z >= 0.5, with recurrence shift to |z| >= 16."""
    z = np.asarray(z, dtype=complex)
    shift = np.zeros_like(z)
    zs = z.copy()
    while True:
        small = np.abs(zs) < _STIRLING_RADIUS
        if not np.any(small):
            break
        shift[small] += np.log(zs[small])
        zs[small] += 1.0
    inv2 = 1.0 / (zs * zs)
    series = np.zeros_like(zs)
    power = 1.0 / zs
    for c in _STIRLING_COEFFS:
        series += c * power
        power *= inv2
    return ((zs - 0.5) * np.log(zs) - zs + 0.5 * np.log(2.0 * np.pi)
            + series - shift)


def _is_nonpositive_integer(s: complex) -> bool:
    return s.imag == 0.0 and s.real <= 0.0 and s.real == int(s.real)


def loggamma_complex(s):
    """log Gamma(s); branch chosen per-point (exp of it is always Gamma(s))."""
    z = np.asarray(s, dtype=complex)
    scalar = z.ndim == 0
    z = np.atleast_1d(z)
    for v in z[(z.imag == 0.0) & (z.real <= 0.0)]:
        if _is_nonpositive_integer(complex(v)):
            raise PoleError(f"Gamma pole at {v}")
    out = np.empty_like(z)
    right = z.real >= 0.5
    out[right] = _loggamma_right(z[right])
    zl = z[~right]
    if zl.size:
        # reflection: Gamma(z) Gamma(1-z) = pi / sin(pi z)
        out[~right] = (np.log(np.pi) - _log_sin(np.pi * zl)
                       - _loggamma_right(1.0 - zl))
    return out[0] if scalar else out


def gamma_complex(s):
    """Gamma(s) for complex s, relative error <= 1e-10 for |s| <= 100."""
    return np.exp(loggamma_complex(s))


# -- zeta functional-equation factor ----------------------------------------

def log_chi(s):
    """log of chi(s) = 2^s pi^(s-1) sin(pi s/2) Gamma(1-s), log-space."""
    z = np.asarray(s, dtype=complex)
    scalar = z.ndim == 0
    z = np.atleast_1d(z)
    out = (z * np.log(2.0) + (z - 1.0) * np.log(np.pi)
           + _log_sin(0.5 * np.pi * z))
    w = 1.0 - z
    right = w.real >= 0.5
    lg = np.empty_like(z)
    lg[right] = _loggamma_right(w[right])
    if np.any(~right):
        lg[~right] = (np.log(np.pi) - _log_sin(np.pi * w[~right])
                      - _loggamma_right(z[~right]))
    out = out + lg
    return out[0] if scalar else out


def chi(s):
    """chi(s) in zeta(s) = chi(s) zeta(1-s). |chi(1/2+it)| = 1."""
    out = np.exp(log_chi(s))
    if np.any(~np.isfinite(np.atleast_1d(out))):
        raise PoleError(f"chi(s) indeterminate/overflowed at s={s}")
    return out
