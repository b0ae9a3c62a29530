"""Method-of-moments and probability-weighted-moments fitting of the Dagum model.

Both estimators eliminate the scale analytically from their first equation,
leaving a 2x2 system in the shapes ``(a, v)``.  That system is solved by a
damped Newton iteration on ``(ln a, ln(v - v_min))`` with a central-difference
Jacobian; ``v_min`` is 3 for MM (third moment must exist) and 1 for PWM (the
mean must exist).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .dagum import DagumParams
from .special import ln_gamma

__all__ = [
    "Method",
    "SampleSummary",
    "FitResult",
    "EstimationError",
    "summarize",
    "fit",
    "fit_mm",
    "fit_pwm",
]

TOLERANCE = 1e-10
MAX_ITER = 200
_FD_STEP = 1e-6
# multi-start grid, in (ln a, ln(v - v_min))
_GRID_LOG_A = np.linspace(math.log(0.03), math.log(20.0), 8)
_GRID_LOG_V = np.linspace(math.log(0.05), math.log(200.0), 8)
_LOG_BOUND = 25.0
_HALVINGS = 30
_STALL_WINDOW = 20


class Method(str, enum.Enum):
    MM = "mm"
    PWM = "pwm"


class EstimationError(ArithmeticError):
    """The estimating equations have no admissible solution (``no-solution``)."""

    def __init__(self, message: str, best_residual: float = math.inf):
        super().__init__(message)
        self.best_residual = best_residual


@dataclass(frozen=True)
class SampleSummary:
    """Sorted sample plus the statistics the moment estimators match.

    ``raw_moments[m-1]`` is the sample mean of ``x**m`` for m = 1, 2, 3 and
    ``epwm[m]`` is the unbiased order-statistic estimator of ``E[X F(X)**m]``
    for m = 0, 1, 2.
    """

    sorted: np.ndarray = field(repr=False)
    n: int
    raw_moments: tuple[float, float, float]
    epwm: tuple[float, float, float]


def summarize(data) -> SampleSummary:
    x = np.asarray(data, dtype=float).ravel()
    if x.size < 3:
        raise ValueError(f"too few observations: need at least 3, got {x.size}")
    if np.any(np.isnan(x)):
        raise ValueError("sample contains NaN")
    if np.any(~np.isfinite(x)) or np.any(x <= 0):
        raise ValueError("sample values must be positive and finite")
    x = np.sort(x, kind="stable")
    n = x.size
    i = np.arange(n, dtype=float)  # i - 1 for 1-based ranks
    raw = tuple(float(np.mean(x**m)) for m in (1, 2, 3))
    b0 = float(np.mean(x))
    b1 = float(np.sum(i * x) / (n * (n - 1.0)))
    b2 = float(np.sum(i * (i - 1.0) * x) / (n * (n - 1.0) * (n - 2.0)))
    x.setflags(write=False)
    return SampleSummary(sorted=x, n=n, raw_moments=raw, epwm=(b0, b1, b2))


@dataclass(frozen=True)
class FitResult:
    params: DagumParams
    method: Method
    residual_norm: float
    iterations: int

    def to_dict(self) -> dict:
        return {
            "a": self.params.a,
            "v": self.params.v,
            "lambda": self.params.lam,
            "method": self.method.value,
            "residual_norm": self.residual_norm,
            "iterations": self.iterations,
        }


# --- model-side statistics, vectorized over arrays of (a, v) -----------------


def _mm_log_stats(a, v):
    """ln of E[(X/lam)^m] for m = 1, 2, 3; shape (3, ...)."""
    a = np.asarray(a, dtype=float)
    v = np.asarray(v, dtype=float)
    m = np.arange(1, 4).reshape((3,) + (1,) * a.ndim)
    g = ln_gamma(np.stack(np.broadcast_arrays(1.0 - m / v, a + m / v, a + 0.0 * m)))
    return g[0] + g[1] - g[2]


def _pwm_log_stats(a, v):
    """ln of E[(X/lam) F^m] for m = 0, 1, 2, dropping the common Gamma(1 - 1/v)."""
    a = np.asarray(a, dtype=float)
    v = np.asarray(v, dtype=float)
    k = np.arange(1, 4).reshape((3,) + (1,) * a.ndim)
    g = ln_gamma(np.stack(np.broadcast_arrays(k * a + 1.0 / v, k * a)))
    return g[0] - g[1] - np.log(k + 0.0 * a)


class _System:
    """Scale-free 2x2 system in theta = (ln a, ln(v - v_min))."""

    def __init__(self, method: Method, s: SampleSummary):
        self.method = method
        if method is Method.MM:
            self.v_min = 3.0
            stats = np.asarray(s.raw_moments)
            logs = np.log(stats)
            # ln(M_m / M_1^m), m = 2, 3
            self.target = np.array([logs[1] - 2 * logs[0], logs[2] - 3 * logs[0]])
        else:
            self.v_min = 1.0
            stats = np.asarray(s.epwm)
            if np.any(stats <= 0):
                raise EstimationError("empirical probability-weighted moments must be positive")
            logs = np.log(stats)
            self.target = np.array([logs[1] - logs[0], logs[2] - logs[0]])
        self.stats = stats

    def shapes(self, theta):
        theta = np.asarray(theta, dtype=float)
        return np.exp(theta[0]), self.v_min + np.exp(theta[1])

    def residual(self, theta):
        """Residuals for an array of points, theta shape (2, ...)."""
        a, v = self.shapes(theta)
        if self.method is Method.MM:
            ls = _mm_log_stats(a, v)
            model = np.stack([ls[1] - 2 * ls[0], ls[2] - 3 * ls[0]])
        else:
            ls = _pwm_log_stats(a, v)
            model = np.stack([ls[1] - ls[0], ls[2] - ls[0]])
        return model - self.target.reshape((2,) + (1,) * (np.ndim(theta) - 1))

    def params(self, theta) -> DagumParams:
        a, v = (float(t) for t in self.shapes(theta))
        if self.method is Method.MM:
            lam = self.stats[0] / math.exp(float(_mm_log_stats(a, v)[0]))
        else:
            g = ln_gamma(np.array([a + 1.0 / v, 1.0 - 1.0 / v, a]))
            lam = self.stats[0] / math.exp(g[0] + g[1] - g[2])
        return DagumParams(a, v, float(lam))

    def relative_residual(self, p: DagumParams) -> float:
        if self.method is Method.MM:
            model = np.array([p.raw_moment(m) for m in (1, 2, 3)])
        else:
            model = np.array([p.pwm(m) for m in (0, 1, 2)])
        return float(np.max(np.abs(model / self.stats - 1.0)))


def _newton(system: _System, theta0, tol=TOLERANCE, max_iter=MAX_ITER):
    """Damped Newton run from K starts at once; theta0 has shape (2, K).

    Returns final points, their max-abs residuals and the iteration count.
    Starts that diverge, stall or leave the admissible box are frozen with a
    residual of ``inf`` (or their last finite residual if they stalled).
    """
    theta = np.array(theta0, dtype=float)
    k = theta.shape[1]
    h = _FD_STEP
    offsets = np.array([[0, h, -h, 0, 0], [0, 0, 0, h, -h]])[:, :, None]
    shrink = 0.5 ** np.arange(_HALVINGS)[None, :, None]
    norm = np.full(k, np.inf)
    active = np.ones(k, dtype=bool)
    history = []
    it = 0
    for it in range(1, max_iter + 1):
        idx = np.flatnonzero(active)
        th = theta[:, idx]
        with np.errstate(all="ignore"):
            F = system.residual(th[:, None, :] + offsets)  # (2, 5, K')
        f0 = F[:, 0, :]
        nrm = np.max(np.abs(f0), axis=0)
        nrm = np.where(np.isfinite(nrm), nrm, np.inf)
        norm[idx] = nrm
        done = ~np.isfinite(nrm) | (nrm <= tol)
        J = np.empty((len(idx), 2, 2))
        J[:, :, 0] = ((F[:, 1, :] - F[:, 2, :]) / (2 * h)).T
        J[:, :, 1] = ((F[:, 3, :] - F[:, 4, :]) / (2 * h)).T
        det = J[:, 0, 0] * J[:, 1, 1] - J[:, 0, 1] * J[:, 1, 0]
        with np.errstate(all="ignore"):
            step = np.stack([
                -(J[:, 1, 1] * f0[0] - J[:, 0, 1] * f0[1]) / det,
                -(-J[:, 1, 0] * f0[0] + J[:, 0, 0] * f0[1]) / det,
            ])
        bad = ~np.all(np.isfinite(step), axis=0)
        step[:, bad] = 0.0
        done |= bad
        # cap the step so a poor Jacobian cannot throw a start far off
        big = np.max(np.abs(step), axis=0)
        step *= np.where(big > 2.0, 2.0 / np.maximum(big, 1e-300), 1.0)
        cand = th[:, None, :] + shrink * step[:, None, :]  # (2, H, K')
        with np.errstate(all="ignore"):
            fc = np.max(np.abs(system.residual(cand)), axis=0)  # (H, K')
        better = np.isfinite(fc) & (fc < nrm[None, :])
        first = np.argmax(better, axis=0)
        moved = better[first, np.arange(len(idx))] & ~done
        pick = cand[:, first, np.arange(len(idx))]
        theta[:, idx[moved]] = pick[:, moved]
        norm[idx[moved]] = fc[first, np.arange(len(idx))][moved]
        out = np.any(np.abs(theta[:, idx]) > _LOG_BOUND, axis=0)
        converged = norm[idx] <= tol
        stop = done | ~moved | out | converged
        history.append(norm.copy())
        if it > _STALL_WINDOW:
            # sliding along a valley toward the boundary without real progress
            stalled = norm[idx] > 0.5 * history[-1 - _STALL_WINDOW][idx]
            stop |= stalled
        active[idx[stop]] = False
        norm[idx[out & ~converged]] = np.inf
        if not active.any():
            break
    return theta, norm, it


def _starts() -> np.ndarray:
    la, lv = np.meshgrid(_GRID_LOG_A, _GRID_LOG_V, indexing="ij")
    return np.vstack([la.ravel(), lv.ravel()])


def fit(s: SampleSummary, method: Method | str = Method.PWM, tol: float = TOLERANCE) -> FitResult:
    """Solve the MM or PWM estimating equations for ``s``.

    A single start at ``a = 1, v = v_min + 2`` is tried first, then the
    8x8 grid of starts.  Among converged starts the smallest residual wins
    (ties go to the lower start index).  Raises ``EstimationError`` when
    nothing converges inside the admissible region; ``best_residual`` on
    the exception carries the smallest residual seen.
    """
    method = Method(method)
    system = _System(method, s)
    total_iter = 0
    best = math.inf
    for starts in (np.array([[0.0], [math.log(2.0)]]), _starts()):
        theta, norm, its = _newton(system, starts, tol=tol)
        total_iter += its
        ok = (norm <= tol) & np.all(np.abs(theta) <= _LOG_BOUND, axis=0)
        if ok.any():
            j = int(np.argmin(np.where(ok, norm, np.inf)))
            p = system.params(theta[:, j])
            return FitResult(p, method, system.relative_residual(p), total_iter)
        best = min(best, float(np.min(norm)))
    raise EstimationError(
        f"no-solution: {method.value.upper()} equations did not converge to an admissible point",
        best_residual=best,
    )


def fit_mm(s: SampleSummary, tol: float = TOLERANCE) -> FitResult:
    return fit(s, Method.MM, tol)


def fit_pwm(s: SampleSummary, tol: float = TOLERANCE) -> FitResult:
    return fit(s, Method.PWM, tol)
