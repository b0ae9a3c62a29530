"""The three-parameter Dagum income distribution."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .special import ln_gamma

__all__ = ["DagumParams", "log_expm1"]


def log_expm1(t):
    """``log(exp(t) - 1)`` for ``t > 0`` without overflow."""
    t = np.asarray(t, dtype=float)
    big = t > 30.0
    safe = np.where(big, 1.0, t)
    out = np.where(big, t + np.log1p(-np.exp(-np.where(big, t, 30.0))), np.log(np.expm1(safe)))
    return float(out) if out.ndim == 0 else out


def _as_output(x):
    return float(x) if np.ndim(x) == 0 else x


@dataclass(frozen=True)
class DagumParams:
    """Dagum distribution with shapes ``a``, ``v`` and scale ``lam``.

    CDF is ``(1 + (x/lam)**-v)**-a`` on ``x > 0``.
    """

    a: float
    v: float
    lam: float = 1.0

    def __post_init__(self):
        for name in ("a", "v", "lam"):
            val = getattr(self, name)
            if not (isinstance(val, (int, float, np.floating)) and math.isfinite(val) and val > 0):
                raise ValueError(f"Dagum parameter {name} must be a positive finite number, got {val!r}")

    # -- distribution functions ---------------------------------------------

    def cdf(self, x):
        x = np.asarray(x, dtype=float)
        pos = x > 0
        logz = np.log(np.where(pos, x, 1.0) / self.lam)
        # (1 + e^{-v ln z})^{-a}
        out = np.where(pos, np.exp(-self.a * np.logaddexp(0.0, -self.v * logz)), 0.0)
        return _as_output(out)

    def logpdf(self, x):
        x = np.asarray(x, dtype=float)
        pos = x > 0
        logz = np.log(np.where(pos, x, 1.0) / self.lam)
        a, v = self.a, self.v
        lp = math.log(a * v / self.lam) + (a * v - 1.0) * logz - (a + 1.0) * np.logaddexp(0.0, v * logz)
        return _as_output(np.where(pos, lp, -np.inf))

    def pdf(self, x):
        return _as_output(np.exp(self.logpdf(x)))

    def quantile(self, q):
        """Inverse CDF ``lam * (q**(-1/a) - 1)**(-1/v)`` for ``0 < q < 1``."""
        q = np.asarray(q, dtype=float)
        if np.any(~((q > 0) & (q < 1))):
            raise ValueError("quantile domain error: q must lie in (0, 1)")
        inner = log_expm1(-np.log(q) / self.a)
        return _as_output(self.lam * np.exp(-inner / self.v))

    def sample(self, rng, count: int):
        """Draw ``count`` variates by inverse transform from a numpy Generator
        (or anything ``np.random.default_rng`` accepts as a seed)."""
        if count < 0:
            raise ValueError("count must be non-negative")
        rng = np.random.default_rng(rng)
        u = rng.random(count)
        # Generator.random is on [0, 1); keep the draw strictly positive
        u = np.where(u > 0.0, u, np.nextafter(0.0, 1.0))
        return np.asarray(self.quantile(u), dtype=float).reshape(count)

    # -- moments --------------------------------------------------------------

    def _log_moment_ratio(self, m: int) -> float:
        # ln[Gamma(1 - m/v) Gamma(a + m/v) / Gamma(a)]
        a, v = self.a, self.v
        g = ln_gamma(np.array([1.0 - m / v, a + m / v, a]))
        return g[0] + g[1] - g[2]

    def raw_moment(self, m: int) -> float:
        """``E[X**m]``; exists only for ``m < v``."""
        if m < 1:
            raise ValueError("moment order must be a positive integer")
        if m >= self.v:
            raise ValueError(f"moment does not exist: order {m} >= v={self.v}")
        return math.exp(m * math.log(self.lam) + self._log_moment_ratio(m))

    def pwm(self, m: int) -> float:
        """Probability-weighted moment ``E[X F(X)**m]``; requires ``v > 1``."""
        if m < 0:
            raise ValueError("pwm order must be >= 0")
        if self.v <= 1.0:
            raise ValueError(f"mean does not exist: v={self.v} <= 1")
        a, v = self.a, self.v
        k = m + 1
        g = ln_gamma(np.array([k * a + 1.0 / v, 1.0 - 1.0 / v, k * a]))
        return self.lam * math.exp(g[0] + g[1] - g[2]) / k

    def mean(self) -> float:
        return self.raw_moment(1)

    def mode(self) -> float | None:
        """Mode when ``a*v > 1``; ``None`` when the density has no interior mode."""
        av = self.a * self.v
        if av <= 1.0:
            return None
        return self.lam * ((av - 1.0) / (self.v + 1.0)) ** (1.0 / self.v)

    def _standardized_terms(self, order: int):
        # moments of X/lam relative to the first one, mu_m / mu_1^m, in log space
        logs = [self._log_moment_ratio(m) for m in range(1, order + 1)]
        return [math.exp(logs[m - 1] - m * logs[0]) for m in range(1, order + 1)]

    def skewness(self) -> float:
        if self.v <= 3.0:
            raise ValueError(f"skewness does not exist: v={self.v} <= 3")
        _, r2, r3 = self._standardized_terms(3)
        var = r2 - 1.0
        return (r3 - 3.0 * r2 + 2.0) / var**1.5

    def kurtosis(self) -> float:
        """Kurtosis ``mu4 / sigma**4`` (not excess kurtosis)."""
        if self.v <= 4.0:
            raise ValueError(f"kurtosis does not exist: v={self.v} <= 4")
        _, r2, r3, r4 = self._standardized_terms(4)
        var = r2 - 1.0
        return (r4 - 4.0 * r3 + 6.0 * r2 - 3.0) / var**2

    def scaled(self, c: float) -> "DagumParams":
        return DagumParams(self.a, self.v, self.lam * c)
