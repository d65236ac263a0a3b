"""Heat trace, spectral dimension and Gibbs entropy of a spectrum.

Everything is evaluated from eigenvalues alone. Sums use weights
``exp(-t (lambda_k - lambda_min))`` so nothing underflows at large ``t``;
the shift cancels exactly in the Gibbs mean and the entropy and is added
back in the log of the heat trace.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidArgument
from .io import atomic_write_text
from .spectrum import SpectralSystem

# above this many eigenvalues, sums go through math.fsum
COMPENSATED_SUM_THRESHOLD = 1000


@dataclass(frozen=True)
class TimeGrid:
    """Log-spaced sample points ``t_min .. t_max`` (inclusive)."""

    t_min: float = 1e-4
    t_max: float = 1e4
    count: int = 200

    def __post_init__(self):
        if not (self.t_min > 0 and self.t_max > self.t_min):
            raise InvalidArgument(f"need 0 < t_min < t_max, got ({self.t_min!r}, {self.t_max!r})")
        if int(self.count) != self.count or self.count < 2:
            raise InvalidArgument(f"grid count must be an integer >= 2, got {self.count!r}")

    @property
    def points(self) -> np.ndarray:
        return np.logspace(math.log10(self.t_min), math.log10(self.t_max), int(self.count))


DEFAULT_GRID = TimeGrid()


def _as_eigs(s) -> np.ndarray:
    if isinstance(s, SpectralSystem):
        return s.eigenvalues
    return np.asarray(s, dtype=float)


def _check_t(t: float) -> float:
    if not t > 0:
        raise InvalidArgument(f"t must be positive, got {t!r}")
    return float(t)


def _sum(x: np.ndarray) -> float:
    if x.size > COMPENSATED_SUM_THRESHOLD:
        return math.fsum(x.tolist())
    return float(np.sum(x))


def _gibbs(eigs: np.ndarray, t: float) -> tuple[float, float, float]:
    """``(log Z, lambda_min, <lambda - lambda_min>_t)`` with ``Z = sum exp(-t (lambda - lambda_min))``."""
    if eigs.size == 0:
        raise InvalidArgument("empty spectrum")
    lam_min = float(eigs.min())
    shifted = eigs - lam_min
    w = np.exp(-t * shifted)
    z = _sum(w)
    return math.log(z), lam_min, _sum(w * shifted) / z


def gibbs_moments(eigs, t: float) -> tuple[float, float]:
    """Return ``(log Theta(t), <lambda>_t)`` for one ``t``."""
    log_z, lam_min, mean_shift = _gibbs(np.asarray(eigs, dtype=float), t)
    return log_z - t * lam_min, lam_min + mean_shift


def heat_trace(s, t: float) -> float:
    """``Theta(t) = sum_k exp(-t lambda_k)``."""
    t = _check_t(t)
    log_theta, _ = gibbs_moments(_as_eigs(s), t)
    return math.exp(log_theta)


def heat_trace_deficit(s, t: float) -> float:
    """``N - Theta(t)`` summed as ``-expm1(-t lambda)`` terms, accurate when ``t lambda`` is tiny."""
    t = _check_t(t)
    return -math.fsum(np.expm1(-t * _as_eigs(s)).tolist())


def spectral_dimension_exact(s, t: float) -> float:
    """``d_s(t) = -2 dlog Theta / dlog t = 2 t <lambda>_t``, with no differencing."""
    t = _check_t(t)
    _, mean = gibbs_moments(_as_eigs(s), t)
    return 2.0 * t * mean


def gibbs_entropy(s, t: float) -> float:
    """Von Neumann entropy of ``exp(-tH) / Theta(t)``, as ``log Theta + t <lambda>_t``."""
    t = _check_t(t)
    log_z, _, mean_shift = _gibbs(_as_eigs(s), t)
    return log_z + t * mean_shift


def spectral_dimension_fd(t, theta=None, *, log_theta=None) -> np.ndarray:
    """Finite-difference ``-2 dlog Theta / dlog t`` over sampled points.

    Central differences in the interior, one-sided at the two ends. Pass
    either ``theta`` or, to avoid underflow, ``log_theta``.
    """
    t = np.asarray(t, dtype=float)
    if log_theta is None:
        if theta is None:
            raise InvalidArgument("need theta or log_theta")
        log_theta = np.log(np.asarray(theta, dtype=float))
    log_theta = np.asarray(log_theta, dtype=float)
    if t.size < 3 or log_theta.shape != t.shape:
        raise InvalidArgument("finite differences need at least 3 matching samples")
    return -2.0 * np.gradient(log_theta, np.log(t))


@dataclass(frozen=True)
class ObservableProfile:
    t: np.ndarray
    log_theta: np.ndarray
    ds: np.ndarray
    ds_fd: np.ndarray
    entropy: np.ndarray
    n: int
    provenance: dict = field(default_factory=dict)

    @property
    def theta(self) -> np.ndarray:
        return np.exp(self.log_theta)

    def rows(self):
        return list(zip(self.t, self.theta, self.ds, self.ds_fd, self.entropy))

    def to_csv(self) -> str:
        out = ["t,theta,ds_exact,ds_fd,entropy"]
        for row in self.rows():
            out.append(",".join(f"{float(v):.17g}" for v in row))
        return "\n".join(out) + "\n"

    def write_csv(self, path) -> None:
        atomic_write_text(path, self.to_csv())

    def peak(self) -> tuple[float, float]:
        """``(t, d_s)`` at the largest sampled spectral dimension."""
        i = int(np.argmax(self.ds))
        return float(self.t[i]), float(self.ds[i])


def profile(s, grid: TimeGrid = DEFAULT_GRID) -> ObservableProfile:
    """Sample ``Theta``, exact ``d_s`` and entropy on every grid point."""
    eigs = _as_eigs(s)
    if eigs.size == 0:
        raise InvalidArgument("empty spectrum")
    t = grid.points if isinstance(grid, TimeGrid) else np.asarray(grid, dtype=float)
    if t.size < 3 or np.any(t <= 0) or np.any(np.diff(t) <= 0):
        raise InvalidArgument("profile grid must hold at least 3 increasing positive points")
    log_theta = np.empty_like(t)
    ds = np.empty_like(t)
    entropy = np.empty_like(t)
    for i, ti in enumerate(t):
        log_z, lam_min, mean_shift = _gibbs(eigs, float(ti))
        log_theta[i] = log_z - ti * lam_min
        ds[i] = 2.0 * ti * (lam_min + mean_shift)
        entropy[i] = log_z + ti * mean_shift
    ds_fd = spectral_dimension_fd(t, log_theta=log_theta)
    prov = dict(s.provenance) if isinstance(s, SpectralSystem) else {}
    arrays = [np.array(a) for a in (t, log_theta, ds, ds_fd, entropy)]
    for a in arrays:
        a.setflags(write=False)
    return ObservableProfile(*arrays, n=int(eigs.size), provenance=prov)
