"""Scaling-law fits: eigenvalue growth, entropy exponent and the four-parameter profile model."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
from scipy.optimize import minimize

from .errors import InsufficientData, InvalidArgument
from .observables import ObservableProfile
from .spectrum import SpectralSystem

MIN_EIGENVALUE = 1e-12
MIN_FIT_POINTS = 10


@dataclass(frozen=True)
class PowerLawFit:
    alpha: float
    window: tuple[int, int]
    r_squared: float
    intercept: float
    points_used: int

    @property
    def ds_from_alpha(self) -> float:
        return 2.0 / self.alpha if self.alpha != 0 else math.inf


@dataclass(frozen=True)
class EntropyExponentFit:
    beta: float
    t_window: tuple[float, float]
    r_squared: float
    points_used: int


@dataclass(frozen=True)
class PcpFit:
    amplitude: float
    alpha: float
    beta: float
    tau: float
    r_squared_log: float
    converged: bool
    starts_tried: int
    residual: float
    start_residuals: tuple = field(default=(), repr=False)

    def as_dict(self) -> dict:
        return {"A": self.amplitude, "alpha": self.alpha, "beta": self.beta, "tau": self.tau,
                "r2log": self.r_squared_log, "converged": self.converged}


def _r_squared(y: np.ndarray, ss_res: float) -> float:
    centred = y - y.mean()
    ss_tot = float(np.dot(centred, centred))
    # data flat to rounding: nothing to explain
    if ss_tot <= (1e-12 * max(1.0, float(np.max(np.abs(y))))) ** 2 * y.size:
        return 0.0
    return 1.0 - ss_res / ss_tot


def _ols(x: np.ndarray, y: np.ndarray) -> tuple[float, float, float]:
    """Slope, intercept and r^2 of ``y ~ a + b x``."""
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (intercept + slope * x)
    return float(slope), float(intercept), _r_squared(y, float(np.dot(resid, resid)))


def fit_eigenvalue_growth(s, window: Optional[tuple[int, int]] = None) -> PowerLawFit:
    """Least-squares slope of ``log lambda_k`` on ``log k``.

    ``window`` is a 1-based inclusive index range; the default is the
    middle half ``[ceil(n/4), floor(3n/4)]``. Eigenvalues below 1e-12 are
    dropped before fitting.
    """
    eigs = s.eigenvalues if isinstance(s, SpectralSystem) else np.asarray(s, dtype=float)
    n = eigs.size
    if window is None:
        window = (max(1, math.ceil(n / 4)), (3 * n) // 4)
    lo, hi = int(window[0]), int(window[1])
    if lo < 1 or hi > n or lo > hi:
        raise InsufficientData(f"window {window} outside [1, {n}]")
    k = np.arange(lo, hi + 1, dtype=float)
    lam = eigs[lo - 1 : hi]
    keep = lam >= MIN_EIGENVALUE
    if keep.sum() < MIN_FIT_POINTS:
        raise InsufficientData(f"only {int(keep.sum())} usable eigenvalues in window {window}")
    slope, intercept, r2 = _ols(np.log(k[keep]), np.log(lam[keep]))
    return PowerLawFit(slope, (lo, hi), r2, intercept, int(keep.sum()))


def fit_entropy_exponent(profile: ObservableProfile, t_window: tuple[float, float] = (1e-4, 1e-1)) -> EntropyExponentFit:
    """Slope of ``log S`` on ``log log(1/t)`` over ``t_lo <= t <= t_hi``."""
    t_lo, t_hi = float(t_window[0]), float(t_window[1])
    if not (0 < t_lo < t_hi < 1):
        raise InsufficientData(f"entropy window must satisfy 0 < t_lo < t_hi < 1, got {t_window}")
    t = np.asarray(profile.t)
    # relative slack so grid endpoints produced by logspace are not lost to rounding
    inside = (t >= t_lo * (1 - 1e-12)) & (t <= t_hi * (1 + 1e-12))
    if inside.sum() < MIN_FIT_POINTS:
        raise InsufficientData(f"only {int(inside.sum())} grid points inside {t_window}")
    entropy = np.asarray(profile.entropy)[inside]
    if np.any(entropy <= 0):
        raise InsufficientData("entropy must be positive across the fit window")
    slope, _, r2 = _ols(np.log(np.log(1.0 / t[inside])), np.log(entropy))
    return EntropyExponentFit(slope, (t_lo, t_hi), r2, int(inside.sum()))


def pcp_model(t, amplitude: float, alpha: float, beta: float, tau: float) -> np.ndarray:
    """``A (t/tau)^alpha exp(-(t/tau)^beta)``."""
    x = np.asarray(t, dtype=float) / tau
    return amplitude * x**alpha * np.exp(-(x**beta))


def _log_pcp(log_params: np.ndarray, log_t: np.ndarray) -> np.ndarray:
    log_a, log_alpha, log_beta, log_tau = log_params
    log_x = log_t - log_tau
    return log_a + math.exp(log_alpha) * log_x - np.exp(math.exp(log_beta) * log_x)


PCP_AMPLITUDE_STARTS = (0.1, 1.0, 10.0)
PCP_ALPHA_STARTS = (1.0, 3.0)
PCP_BETA_STARTS = (1.0, 2.0)
PCP_MAX_ITER = 2000
PCP_XATOL = 1e-10
# parameters outside this band (in absolute value) count as having run to a boundary
PCP_PARAM_BOUNDS = (1e-8, 1e8)
PCP_SUPPORT_FLOOR = 1e-6
PCP_MIN_SUPPORT = 20


def fit_pcp(profile, ds: Optional[Sequence[float]] = None) -> PcpFit:
    """Fit ``A (t/tau)^alpha exp(-(t/tau)^beta)`` to a spectral-dimension profile.

    Residuals are taken in log space over points with ``d_s > 1e-6``.
    Parameters are optimised as logarithms with Nelder-Mead from a fixed
    grid of starts; ``tau`` always starts at the profile's peak.

    ``profile`` is an :class:`ObservableProfile`, or an array of ``t`` when
    ``ds`` is passed separately.
    """
    if ds is None:
        t = np.asarray(profile.t, dtype=float)
        ds = np.asarray(profile.ds, dtype=float)
    else:
        t = np.asarray(profile, dtype=float)
        ds = np.asarray(ds, dtype=float)
    if t.shape != ds.shape:
        raise InvalidArgument("t and d_s must have the same shape")
    support = ds > PCP_SUPPORT_FLOOR
    if support.sum() < PCP_MIN_SUPPORT:
        raise InsufficientData(f"only {int(support.sum())} points with d_s > {PCP_SUPPORT_FLOOR:g}")
    log_t = np.log(t[support])
    y = np.log(ds[support])
    tau0 = float(t[int(np.argmax(ds))])

    def objective(p):
        r = y - _log_pcp(p, log_t)
        val = float(np.dot(r, r))
        return val if math.isfinite(val) else math.inf

    best = None
    start_residuals = []
    for a0, al0, b0 in itertools.product(PCP_AMPLITUDE_STARTS, PCP_ALPHA_STARTS, PCP_BETA_STARTS):
        x0 = np.log([a0, al0, b0, tau0])
        start_residuals.append(objective(x0))
        res = minimize(objective, x0, method="Nelder-Mead",
                       options={"xatol": PCP_XATOL, "fatol": math.inf, "maxiter": PCP_MAX_ITER,
                                "maxfev": 4 * PCP_MAX_ITER})
        if best is None or res.fun < best.fun:
            best = res

    params = np.exp(best.x)
    lo, hi = PCP_PARAM_BOUNDS
    in_bounds = bool(np.all((params > lo) & (params < hi)))
    r2 = _r_squared(y, best.fun)
    return PcpFit(
        amplitude=float(params[0]), alpha=float(params[1]), beta=float(params[2]), tau=float(params[3]),
        r_squared_log=float(r2), converged=bool(best.success) and in_bounds and math.isfinite(best.fun),
        starts_tried=len(start_residuals), residual=float(best.fun), start_residuals=tuple(start_residuals),
    )
