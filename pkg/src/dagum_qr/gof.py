"""One-sample Kolmogorov-Smirnov check of a fitted distribution.

The p-value is the asymptotic Kolmogorov tail.  When the parameters were
estimated from the same sample (the usual workflow here) that p-value is
conservative; it is reported as is, without a Lilliefors-type correction.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

__all__ = ["KsResult", "ks_statistic", "kolmogorov_sf", "ks_test"]


@dataclass(frozen=True)
class KsResult:
    d_stat: float
    p_value: float
    n: int

    def to_dict(self) -> dict:
        return asdict(self)


def kolmogorov_sf(t: float) -> float:
    """``P(K > t)`` for the Kolmogorov distribution, ``2 sum (-1)^{k-1} exp(-2 k^2 t^2)``."""
    if t <= 0.0:
        return 1.0
    if t < 0.2:
        # series converges too slowly here and the tail is 1 to double precision
        return 1.0
    total = 0.0
    k = 1
    while True:
        term = math.exp(-2.0 * k * k * t * t)
        total += term if k % 2 else -term
        if term < 1e-12:
            break
        k += 1
    return min(1.0, max(0.0, 2.0 * total))


def ks_statistic(sorted_sample, cdf) -> float:
    """Sup distance between the empirical CDF of a sorted sample and ``cdf``."""
    x = np.asarray(sorted_sample, dtype=float)
    n = x.size
    if n == 0:
        raise ValueError("empty sample")
    F = np.asarray(cdf(x), dtype=float)
    i = np.arange(1, n + 1)
    return float(max(np.max(i / n - F), np.max(F - (i - 1) / n)))


def ks_test(sorted_sample, params) -> KsResult:
    """K-S test of a sorted sample against a distribution with a ``cdf`` method."""
    x = np.asarray(sorted_sample, dtype=float)
    d = ks_statistic(x, params.cdf)
    return KsResult(d_stat=d, p_value=kolmogorov_sf(math.sqrt(x.size) * d), n=int(x.size))
