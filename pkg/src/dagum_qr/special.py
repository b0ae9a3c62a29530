"""Scalar special functions: Lambert W (both real branches) and log-gamma."""

from __future__ import annotations

import math

import numpy as np

__all__ = [
    "lambert_w0",
    "lambert_wm1",
    "lambert_w_log",
    "ln_gamma",
]

_INV_E = math.exp(-1.0)
# 1/e split into a double and its rounding remainder, so z + 1/e is exact-ish
_INV_E_HI = 0.36787944117144233
_INV_E_LO = -1.2428753672788363e-17
_TOL = 1e-14
_MAX_ITER = 50

# Lanczos approximation with g = 7, n = 9.  These are the widely published
# coefficients (Godfrey / Numerical Recipes lineage), good to roughly 15
# significant digits in double precision for Re(x) >= 0.5.
_LANCZOS_G = 7.0
_LANCZOS_COEF = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)
_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)
_LOG_PI = math.log(math.pi)


def _check_real(z: float, name: str = "z") -> float:
    z = float(z)
    if math.isnan(z):
        raise ValueError(f"{name} is NaN")
    return z


def _halley(w: float, z: float) -> float:
    for _ in range(_MAX_ITER):
        ew = math.exp(w)
        f = w * ew - z
        wp1 = w + 1.0
        if wp1 == 0.0:
            break
        dw = f / (ew * wp1 - (w + 2.0) * f / (2.0 * wp1))
        w -= dw
        if abs(dw) <= _TOL * (1.0 + abs(w)):
            break
    return w


def _branch_p(z: float, sign: float) -> float:
    # p = +-sqrt(2(ez + 1)); z + 1/e is formed without cancellation
    return sign * math.sqrt(max(2.0 * math.e * ((z + _INV_E_HI) + _INV_E_LO), 0.0))


def _branch_series(p: float) -> float:
    # expansion of W around the branch point z = -1/e in powers of p
    return -1.0 + p * (1.0 + p * (-1.0 / 3.0 + p * (11.0 / 72.0 + p * (-43.0 / 540.0 + p * 769.0 / 17280.0))))


def lambert_w0(z: float) -> float:
    """Principal branch W0 of the Lambert W function for real ``z >= -1/e``.

    Halley iteration started from a series guess near the branch point, a
    ``log1p`` guess on the middle range and the asymptotic ``ln z - ln ln z``
    guess beyond ``e``.
    """
    z = _check_real(z)
    if z < -_INV_E:
        # tolerate rounding of -1/e itself
        if z < -_INV_E - 1e-15:
            raise ValueError(f"lambert_w0 domain error: z={z!r} < -1/e")
        return -1.0
    if z == 0.0:
        return 0.0
    if math.isinf(z):
        return math.inf
    if z < -0.25:
        p = _branch_p(z, 1.0)
        if p < 1e-3:
            # Halley cannot beat the series this close to the singularity
            return _branch_series(p)
        w = _branch_series(p)
    elif z <= math.e:
        w = math.log1p(z)
    else:
        l1 = math.log(z)
        l2 = math.log(l1)
        w = l1 - l2 + l2 / l1
    w = _halley(w, z)
    return max(w, -1.0)


def lambert_wm1(z: float) -> float:
    """Lower real branch W_{-1} for ``-1/e <= z < 0``; returns values ``<= -1``."""
    z = _check_real(z)
    if z < -_INV_E:
        if z < -_INV_E - 1e-15:
            raise ValueError(f"lambert_wm1 domain error: z={z!r} < -1/e")
        return -1.0
    if z >= 0.0:
        raise ValueError(f"lambert_wm1 domain error: z={z!r} must be negative")
    if z < -0.25:
        p = _branch_p(z, -1.0)
        if p > -1e-3:
            return _branch_series(p)
        w = _branch_series(p)
    else:
        l1 = math.log(-z)
        l2 = math.log(-l1)
        w = l1 - l2 + l2 / l1
    w = _halley(w, z)
    return min(w, -1.0)


def lambert_w_log(log_abs_z: float, branch: int = 0) -> float:
    """Lambert W of ``z = +exp(log_abs_z)`` (branch 0) or ``z = -exp(log_abs_z)``
    (branch -1), without forming ``z``.

    Needed when ``z`` over- or underflows, e.g. ``z = c * exp(A)`` for large
    ``|A|``.  Solves ``w + ln|w| = log_abs_z`` by Newton's method.  Branch 0
    requires ``z > 0``, and branch -1 requires ``log_abs_z <= -1`` (that is,
    ``z >= -1/e``).
    """
    L = _check_real(log_abs_z, "log_abs_z")
    if branch == 0:
        if L < 1.0:
            return lambert_w0(math.exp(L))
        w = L - math.log(L)
    elif branch == -1:
        if L > -1.0:
            raise ValueError("lambert_wm1 domain error: z < -1/e")
        if L > -2.0:
            return lambert_wm1(-math.exp(L))
        w = L - math.log(-L)
    else:
        raise ValueError(f"unsupported branch {branch}")
    for _ in range(_MAX_ITER):
        f = w + math.log(abs(w)) - L
        dw = f / (1.0 + 1.0 / w)
        w -= dw
        if abs(dw) <= _TOL * abs(w):
            break
    return w


def ln_gamma(x):
    """Natural log of the gamma function for ``x > 0``.

    Accepts a scalar or an array; arrays are evaluated elementwise and
    returned as arrays.  Uses the Lanczos series for ``x >= 0.5`` and the
    reflection formula below that.
    """
    arr = np.asarray(x, dtype=float)
    if np.any(np.isnan(arr)) or np.any(arr <= 0.0):
        raise ValueError("ln_gamma domain error: x must be > 0")
    small = arr < 0.5
    y = np.where(small, 1.0 - arr, arr) - 1.0
    acc = np.full_like(y, _LANCZOS_COEF[0])
    for k, c in enumerate(_LANCZOS_COEF[1:], start=1):
        acc = acc + c / (y + k)
    t = y + _LANCZOS_G + 0.5
    big = _HALF_LOG_2PI + (y + 0.5) * np.log(t) - t + np.log(acc)
    if np.any(small):
        s = np.sin(np.pi * np.where(small, arr, 0.25))
        out = np.where(small, _LOG_PI - np.log(s) - big, big)
    else:
        out = big
    if out.ndim == 0:
        return float(out)
    return out
