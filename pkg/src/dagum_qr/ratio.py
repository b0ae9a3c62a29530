"""Quantile ratio ``Q(beta) / Q(alpha)`` of the Dagum model: point estimate,
asymptotic variance and the Lambert-W confidence interval."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from .dagum import DagumParams
from .special import lambert_w0, lambert_w_log, lambert_wm1

__all__ = [
    "QuantilePair",
    "RatioCI",
    "DegenerateRatioError",
    "QUINTILES",
    "true_ratio",
    "sample_ratio",
    "w2",
    "sigma2",
    "sigma2_order_statistics",
    "log_density_at_quantile",
    "confidence_interval",
    "normal_quantile",
    "normal_cdf",
    "v_from_ratio",
]


class DegenerateRatioError(ArithmeticError):
    """Raised when ``r* <= 1`` so the interval cannot be built."""


@dataclass(frozen=True)
class QuantilePair:
    alpha: float = 0.2
    beta: float = 0.8

    def __post_init__(self):
        if not (0.0 < self.alpha < self.beta < 1.0):
            raise ValueError(f"need 0 < alpha < beta < 1, got alpha={self.alpha}, beta={self.beta}")


QUINTILES = QuantilePair(0.2, 0.8)


@dataclass(frozen=True)
class RatioCI:
    estimate: float
    lower: float
    upper: float
    level: float
    n: int
    shape_used: float
    w: float
    sigma2: float

    @property
    def length(self) -> float:
        return self.upper - self.lower

    def covers(self, r: float) -> bool:
        return self.lower <= r <= self.upper

    def to_dict(self) -> dict:
        return asdict(self)


def _log_shape_term(a: float, q: float) -> float:
    # ln(q^{-1/a} - 1), computed without overflow for small a
    t = -math.log(q) / a
    if t > 30.0:
        return t + math.log1p(-math.exp(-t))
    return math.log(math.expm1(t))


def _log_quantile_spread(a: float, qp: QuantilePair) -> float:
    """``ln((alpha^{-1/a} - 1) / (beta^{-1/a} - 1))``, always positive."""
    return _log_shape_term(a, qp.alpha) - _log_shape_term(a, qp.beta)


def true_ratio(p: DagumParams, qp: QuantilePair = QUINTILES) -> float:
    """Population ratio ``Q(beta)/Q(alpha)``; does not depend on the scale."""
    return math.exp(_log_quantile_spread(p.a, qp) / p.v)


def v_from_ratio(a: float, r: float, qp: QuantilePair = QUINTILES) -> float:
    """The shape ``v`` for which the ``(alpha, beta)`` quantile ratio equals ``r``."""
    if a <= 0:
        raise ValueError("a must be positive")
    if not r > 1.0:
        raise ValueError(f"ratio must exceed 1, got {r}")
    return _log_quantile_spread(a, qp) / math.log(r)


def sample_ratio(sorted_sample, qp: QuantilePair = QUINTILES) -> float:
    """``X_{floor(n beta)+1:n} / X_{floor(n alpha)+1:n}`` of an ordered sample."""
    x = np.asarray(sorted_sample, dtype=float)
    n = x.size
    if n == 0:
        raise ValueError("empty sample")
    lo = math.floor(n * qp.alpha)
    hi = math.floor(n * qp.beta)
    if hi >= n:
        raise ValueError("sample too small for the requested upper quantile")
    return float(x[hi] / x[lo])


def _one_minus_root(q: float, a: float) -> float:
    # 1 - q^{1/a}
    return -math.expm1(math.log(q) / a)


def w2(a: float, qp: QuantilePair = QUINTILES) -> float:
    """Squared standard-deviation factor ``w(a)**2`` with ``sigma2 = (ln r)**2 w2``."""
    if not a > 0:
        raise ValueError("a must be positive")
    al, be = qp.alpha, qp.beta
    da = _one_minus_root(al, a)
    db = _one_minus_root(be, a)
    bracket = (
        (1 - be) / be / db**2
        + (1 - al) / al / da**2
        - 2 * (1 - be) / be / (da * db)
    )
    return bracket / (a * _log_quantile_spread(a, qp)) ** 2


def sigma2(p: DagumParams, qp: QuantilePair = QUINTILES) -> float:
    """Asymptotic variance of ``sqrt(n) ln r*`` in closed form."""
    return math.log(true_ratio(p, qp)) ** 2 * w2(p.a, qp)


def log_density_at_quantile(p: DagumParams, q: float) -> float:
    """Density of ``ln X`` at its ``q``-quantile, ``a v q (1 - q^{1/a})``."""
    return p.a * p.v * q * _one_minus_root(q, p.a)


def sigma2_order_statistics(p: DagumParams, qp: QuantilePair = QUINTILES) -> float:
    """Same variance from the bivariate normal limit of two log order statistics."""
    al, be = qp.alpha, qp.beta
    fa = log_density_at_quantile(p, al)
    fb = log_density_at_quantile(p, be)
    return be * (1 - be) / fb**2 + al * (1 - al) / fa**2 - 2 * al * (1 - be) / (fa * fb)


# --- standard normal ----------------------------------------------------------

# Acklam's rational approximation to the normal quantile (rel. error ~1e-9),
# refined below by one Newton step on the erfc-based CDF.
_A = (-3.969683028665376e01, 2.209460984245205e02, -2.759285104469687e02,
      1.383577518672690e02, -3.066479806614716e01, 2.506628277459239e00)
_B = (-5.447609879822406e01, 1.615858368580409e02, -1.556989798598866e02,
      6.680131188771972e01, -1.328068155288572e01)
_C = (-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e00,
      -2.549732539343734e00, 4.374664141464968e00, 2.938163982698783e00)
_D = (7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e00,
      3.754408661907416e00)
_P_LOW = 0.02425


def normal_cdf(x: float) -> float:
    return 0.5 * math.erfc(-x / math.sqrt(2.0))


def normal_quantile(q: float) -> float:
    """Standard normal quantile ``Phi^{-1}(q)``."""
    q = float(q)
    if not (0.0 < q < 1.0):
        raise ValueError(f"normal_quantile domain error: q={q!r} not in (0, 1)")
    if q < _P_LOW:
        t = math.sqrt(-2.0 * math.log(q))
        x = (((((_C[0] * t + _C[1]) * t + _C[2]) * t + _C[3]) * t + _C[4]) * t + _C[5]) / (
            (((_D[0] * t + _D[1]) * t + _D[2]) * t + _D[3]) * t + 1.0
        )
    elif q <= 1.0 - _P_LOW:
        s = q - 0.5
        t = s * s
        x = (((((_A[0] * t + _A[1]) * t + _A[2]) * t + _A[3]) * t + _A[4]) * t + _A[5]) * s / (
            ((((_B[0] * t + _B[1]) * t + _B[2]) * t + _B[3]) * t + _B[4]) * t + 1.0
        )
    else:
        t = math.sqrt(-2.0 * math.log1p(-q))
        x = -(((((_C[0] * t + _C[1]) * t + _C[2]) * t + _C[3]) * t + _C[4]) * t + _C[5]) / (
            (((_D[0] * t + _D[1]) * t + _D[2]) * t + _D[3]) * t + 1.0
        )
    # Newton refinement; the tail is evaluated on the side where it is small
    if q < 0.5:
        err = normal_cdf(x) - q
    else:
        err = -(0.5 * math.erfc(x / math.sqrt(2.0)) - (1.0 - q))
    pdf = math.exp(-0.5 * x * x) / math.sqrt(2.0 * math.pi)
    return x - err / pdf


# --- interval -----------------------------------------------------------------

_DIRECT_LIMIT = 600.0


def _interval_end(r_star: float, z: float) -> float:
    """Root ``r`` of ``z (r* - r) = r ln r``, i.e. ``r = r* z / W(r* z e^z)``.

    For ``z > 0`` the root lies below ``r*`` and comes from the principal
    branch.  For ``z < 0`` the argument is negative and the root above
    ``r*`` comes from the lower branch W_{-1}; W0 there gives a spurious
    far-away root.
    """
    if abs(z) < _DIRECT_LIMIT:
        arg = r_star * z * math.exp(z)
        if arg < -math.exp(-1.0):
            raise ValueError("lambert-domain: interval argument below -1/e")
        w = lambert_w0(arg) if z > 0 else lambert_wm1(arg)
    else:
        log_abs = math.log(r_star * abs(z)) + z
        if z < 0 and log_abs > -1.0:
            raise ValueError("lambert-domain: interval argument below -1/e")
        w = lambert_w_log(log_abs, 0 if z > 0 else -1)
    return r_star * z / w


def confidence_interval(
    r_star: float,
    n: int,
    a_hat: float,
    qp: QuantilePair = QUINTILES,
    level: float = 0.95,
) -> RatioCI:
    """Asymptotic confidence interval for the quantile ratio.

    The ends solve ``sqrt(n) (r* - r) / (w(a) r ln r) = -/+ u`` with ``u``
    the ``(1 + level)/2`` normal quantile, each in closed form through the
    Lambert W function.
    """
    if not r_star > 1.0:
        raise DegenerateRatioError(f"degenerate-ratio: r*={r_star} must exceed 1")
    if n < 2:
        raise ValueError("n must be at least 2")
    if not a_hat > 0:
        raise ValueError("shape estimate must be positive")
    if not (0.0 < level < 1.0):
        raise ValueError("level must lie in (0, 1)")
    ww2 = w2(a_hat, qp)
    w = math.sqrt(ww2)
    u = normal_quantile((1.0 + level) / 2.0)
    z = math.sqrt(n) / (u * w)
    ends = sorted((_interval_end(r_star, z), _interval_end(r_star, -z)))
    return RatioCI(
        estimate=r_star,
        lower=ends[0],
        upper=ends[1],
        level=level,
        n=n,
        shape_used=a_hat,
        w=w,
        sigma2=math.log(r_star) ** 2 * ww2,
    )
