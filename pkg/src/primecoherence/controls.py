"""Non-arithmetic controls: GUE-induced divergences, the 1-D bi-Laplacian, spacing statistics."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
from scipy import stats
from scipy.linalg import eigvalsh_tridiagonal
from scipy.special import erf

from .divergence import DivergenceKind, DivergenceMatrix, DivergenceModel, divergence_matrix
from .errors import InsufficientData, InvalidArgument, NumericalFailure
from .operators import Normalization, OperatorSpec, Order
from .spectrum import SpectralSystem


def make_rng(seed: int) -> np.random.Generator:
    """Counter-based Philox stream; the same seed always yields the same draws."""
    return np.random.Generator(np.random.Philox(int(seed) & 0xFFFF_FFFF_FFFF_FFFF))


def bulk_mean_spacing(levels: np.ndarray, fraction: float = 0.5) -> float:
    """Mean consecutive spacing over the central ``fraction`` of an ascending list."""
    n = levels.size
    cut = int(round(n * (1.0 - fraction) / 2.0))
    central = levels[cut : n - cut]
    if central.size < 2:
        central = levels
    return float(np.mean(np.diff(central)))


@dataclass(frozen=True)
class GueDraw:
    eigenvalues: np.ndarray
    seed: int
    delta_bulk: float

    @property
    def n(self) -> int:
        return int(self.eigenvalues.shape[0])


def gue_matrix(n: int, rng: np.random.Generator) -> np.ndarray:
    """Hermitian matrix with N(0,1) diagonal and off-diagonal real/imag parts of variance 1/2."""
    a = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return (a + a.conj().T) / 2.0


def gue_eigenvalues(n: int, seed: int) -> GueDraw:
    if int(n) != n or n < 2:
        raise InvalidArgument(f"GUE draw needs n >= 2, got {n!r}")
    h = gue_matrix(int(n), make_rng(seed))
    try:
        eigs = np.linalg.eigvalsh(h)
    except np.linalg.LinAlgError as exc:
        raise NumericalFailure(f"GUE eigensolver failed: {exc}", {"model": "gue", "n": n, "seed": seed}) from exc
    eigs.setflags(write=False)
    return GueDraw(eigs, int(seed), bulk_mean_spacing(eigs))


def gue_divergence(draw: GueDraw) -> DivergenceMatrix:
    """``((gamma_i - gamma_j) / Delta)**2`` with ``Delta`` the bulk mean spacing."""
    model = DivergenceModel(DivergenceKind.EXTERNAL, external_values=tuple(draw.eigenvalues),
                            spacing=draw.delta_bulk)
    return divergence_matrix(None, model)


def bilaplacian_control(n: int, verify: bool = True) -> SpectralSystem:
    """Spectrum of the squared Dirichlet path Laplacian on ``n`` sites.

    ``lambda_k = (2 - 2 cos(k pi / (n + 1)))**2``. With ``verify`` the
    closed form is checked against a tridiagonal eigensolve.
    """
    if int(n) != n or n < 2:
        raise InvalidArgument(f"bi-Laplacian control needs n >= 2, got {n!r}")
    n = int(n)
    k = np.arange(1, n + 1, dtype=float)
    generator = 2.0 - 2.0 * np.cos(k * np.pi / (n + 1))
    if verify:
        dense = eigvalsh_tridiagonal(np.full(n, 2.0), np.full(n - 1, -1.0))
        if np.max(np.abs(np.sort(generator) - dense)) > 1e-10:
            raise NumericalFailure("bi-Laplacian closed form disagrees with eigensolve", {"model": "bilaplacian"})
    lam = np.sort(generator**2)
    return SpectralSystem(lam, OperatorSpec(Normalization.COMBINATORIAL, Order.FOUR),
                          {"model": "bilaplacian", "n": n})


def rescale_eigenvalues(s, n: int) -> np.ndarray:
    """Multiply every eigenvalue by ``2 pi / log n``."""
    if int(n) != n or n < 2:
        raise InvalidArgument(f"rescaling needs n >= 2, got {n!r}")
    eigs = s.eigenvalues if isinstance(s, SpectralSystem) else np.asarray(s, dtype=float)
    return eigs * (2.0 * math.pi / math.log(n))


class Unfolding(str, enum.Enum):
    GLOBAL_MEAN = "global-mean"
    LOCAL_WINDOW = "local-window"


@dataclass(frozen=True)
class SpacingSample:
    spacings: np.ndarray
    unfolding: Unfolding

    @property
    def size(self) -> int:
        return int(self.spacings.shape[0])


MIN_SPACING_LEVELS = 50


def _moving_average(x: np.ndarray, width: int) -> np.ndarray:
    """Centred moving average; windows are truncated (not padded) at the ends."""
    csum = np.concatenate(([0.0], np.cumsum(x)))
    half_lo = (width - 1) // 2
    half_hi = width - 1 - half_lo
    idx = np.arange(x.size)
    lo = np.clip(idx - half_lo, 0, x.size)
    hi = np.clip(idx + half_hi + 1, 0, x.size)
    return (csum[hi] - csum[lo]) / (hi - lo)


def nn_spacings(eigs, unfolding: Unfolding | str = Unfolding.LOCAL_WINDOW, window: float = 0.5) -> SpacingSample:
    """Nearest-neighbour spacings of the central ``window`` fraction of a spectrum, unfolded to unit mean.

    ``global-mean`` divides by the mean spacing of the retained stretch;
    ``local-window`` divides each spacing by a moving average over
    ``ceil(n/20)`` neighbouring spacings.
    """
    unfolding = Unfolding(unfolding)
    levels = np.sort(np.asarray(eigs.eigenvalues if isinstance(eigs, SpectralSystem) else eigs, dtype=float))
    n = levels.size
    if n < MIN_SPACING_LEVELS:
        raise InsufficientData(f"spacing statistics need at least {MIN_SPACING_LEVELS} levels, got {n}")
    if not 0 < window <= 1:
        raise InvalidArgument(f"window must be in (0, 1], got {window!r}")
    gaps = np.diff(levels)
    cut = int(round(n * (1.0 - window) / 2.0))
    sl = slice(cut, gaps.size - cut)
    if unfolding is Unfolding.GLOBAL_MEAN:
        central = gaps[sl]
        scale = central.mean()
        if not scale > 0:
            raise InsufficientData("all retained spacings are zero")
        out = central / scale
    else:
        local = _moving_average(gaps, math.ceil(n / 20))[sl]
        if np.any(local <= 0):
            raise InsufficientData("local mean spacing vanishes inside the window")
        out = gaps[sl] / local
    out.setflags(write=False)
    return SpacingSample(out, unfolding)


def wigner_surmise_pdf(s) -> np.ndarray:
    """GUE surmise density ``(32/pi^2) s^2 exp(-4 s^2 / pi)``."""
    s = np.asarray(s, dtype=float)
    return 32.0 / math.pi**2 * s * s * np.exp(-4.0 * s * s / math.pi)


def wigner_surmise_cdf(s) -> np.ndarray:
    """``erf(2s/sqrt(pi)) - (4s/pi) exp(-4 s^2/pi)``, zero for ``s <= 0``."""
    s = np.maximum(np.asarray(s, dtype=float), 0.0)
    return erf(2.0 * s / math.sqrt(math.pi)) - 4.0 * s / math.pi * np.exp(-4.0 * s * s / math.pi)


@dataclass(frozen=True)
class KsResult:
    d_statistic: float
    sample_size: int


def ks_distance_wigner(sample) -> KsResult:
    """Sup distance between a spacing sample's empirical CDF and the GUE surmise."""
    values = np.asarray(sample.spacings if isinstance(sample, SpacingSample) else sample, dtype=float)
    if values.size == 0:
        raise InsufficientData("KS distance needs a non-empty sample")
    res = stats.kstest(values, wigner_surmise_cdf)
    return KsResult(float(res.statistic), int(values.size))
