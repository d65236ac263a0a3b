"""Pairwise divergences over the primes and the coherence kernels built from them.

All matrices are dense float64. Divergences are assembled on the upper
triangle and mirrored, so ``delta[i, j] == delta[j, i]`` holds bit for bit.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import InvalidArgument
from .io import atomic_write_text
from .primes import PrimeSet, first_n_primes


class DivergenceKind(str, enum.Enum):
    LOG_PRODUCT = "log-product"
    LOG_RATIO_SQUARED = "log-ratio-squared"
    ENTROPIC = "entropic"
    INDEX_POWER = "index-power"
    EXTERNAL = "external"


@dataclass(frozen=True)
class DivergenceModel:
    """Selects one of the divergence families.

    ``gamma`` is read only by ``index-power``. ``external_values`` and
    ``spacing`` are read only by ``external``, which builds
    ``((x_i - x_j) / spacing)**2`` from caller-supplied levels (for example
    GUE eigenvalues).

    ``literal_diagonal`` applies to ``log-product`` only: when set, the
    diagonal keeps the literal value ``log(p_i**2)`` instead of being forced
    to zero, which makes the kernel exactly rank one.
    """

    kind: DivergenceKind
    gamma: float = 1.0
    external_values: Optional[tuple] = None
    spacing: float = 1.0
    literal_diagonal: bool = False

    def __post_init__(self):
        try:
            object.__setattr__(self, "kind", DivergenceKind(self.kind))
        except ValueError:
            raise InvalidArgument(f"unknown divergence kind {self.kind!r}") from None
        if self.kind is DivergenceKind.INDEX_POWER and not self.gamma > 0:
            raise InvalidArgument(f"index-power needs gamma > 0, got {self.gamma!r}")
        if self.kind is DivergenceKind.EXTERNAL:
            if self.external_values is None:
                raise InvalidArgument("external divergence needs external_values")
            if not self.spacing > 0:
                raise InvalidArgument(f"external divergence needs spacing > 0, got {self.spacing!r}")
            object.__setattr__(self, "external_values", tuple(float(v) for v in self.external_values))
        elif self.external_values is not None:
            raise InvalidArgument("external_values is only valid for the external kind")
        if self.literal_diagonal and self.kind is not DivergenceKind.LOG_PRODUCT:
            raise InvalidArgument("literal_diagonal is only valid for log-product")

    @property
    def model_id(self) -> str:
        if self.kind is DivergenceKind.INDEX_POWER:
            return f"index-power(gamma={self.gamma:g})"
        if self.kind is DivergenceKind.LOG_PRODUCT and self.literal_diagonal:
            return "log-product(literal-diagonal)"
        return self.kind.value


@dataclass(frozen=True)
class DivergenceMatrix:
    delta: np.ndarray
    model: DivergenceModel

    @property
    def n(self) -> int:
        return int(self.delta.shape[0])


@dataclass(frozen=True)
class KernelMatrix:
    """``k[i, j] = exp(-delta[i, j] / delta0)``.

    Off-diagonal entries lie in ``[0, 1]``; they can underflow to exactly
    zero when a divergence is several hundred coherence lengths wide.
    """

    k: np.ndarray
    delta0: float
    provenance: dict = field(default_factory=dict)

    @property
    def n(self) -> int:
        return int(self.k.shape[0])


def _mirror_upper(upper: np.ndarray) -> np.ndarray:
    upper = np.triu(upper, k=1)
    return upper + upper.T


def _pairwise(x: np.ndarray, fn) -> np.ndarray:
    iu = np.triu_indices(x.shape[0], k=1)
    out = np.zeros((x.shape[0], x.shape[0]))
    out[iu] = fn(x[iu[0]], x[iu[1]])
    return _mirror_upper(out)


def divergence_matrix(primes: Optional[PrimeSet], model: DivergenceModel) -> DivergenceMatrix:
    """Evaluate the divergence selected by ``model`` over ``primes``.

    For ``external`` the levels come from the model and ``primes`` may be
    ``None``; if both are given their sizes must agree.
    """
    kind = model.kind
    if kind is DivergenceKind.EXTERNAL:
        x = np.asarray(model.external_values, dtype=float)
        if x.size == 0:
            raise InvalidArgument("external divergence needs at least one level")
        if primes is not None and primes.n != x.size:
            raise InvalidArgument(f"external levels ({x.size}) do not match prime count ({primes.n})")
        spacing = model.spacing
        delta = _pairwise(x, lambda a, b: ((a - b) / spacing) ** 2)
        return _frozen(delta, model)

    if primes is None or primes.n < 1:
        raise InvalidArgument("divergence needs a non-empty prime set")
    logp = primes.logs()

    if kind is DivergenceKind.LOG_PRODUCT:
        delta = _pairwise(logp, lambda a, b: a + b)
        if model.literal_diagonal:
            delta[np.diag_indices_from(delta)] = 2.0 * logp
    elif kind is DivergenceKind.LOG_RATIO_SQUARED:
        delta = _pairwise(logp, lambda a, b: (a - b) ** 2)
    elif kind is DivergenceKind.ENTROPIC:
        # (p+q)/(2 sqrt(pq)) = cosh(u/2) with u = log(p/q); log1p(2 sinh^2(u/4))
        # keeps full precision for neighbouring primes where the ratio is ~1.
        delta = _pairwise(logp, lambda a, b: np.log1p(2.0 * np.sinh((a - b) / 4.0) ** 2))
    elif kind is DivergenceKind.INDEX_POWER:
        logi = np.log(np.arange(1, primes.n + 1, dtype=float))
        gamma = model.gamma
        delta = _pairwise(logi, lambda a, b: np.abs(a - b) ** gamma)
    else:  # pragma: no cover - enum is closed
        raise InvalidArgument(f"unhandled divergence kind {kind}")
    return _frozen(delta, model)


def _frozen(delta: np.ndarray, model: DivergenceModel) -> DivergenceMatrix:
    delta.setflags(write=False)
    return DivergenceMatrix(delta, model)


def coherence_kernel(delta: DivergenceMatrix, delta0: float = 1.0) -> KernelMatrix:
    if not delta0 > 0:
        raise InvalidArgument(f"delta0 must be positive, got {delta0!r}")
    k = np.exp(-delta.delta / delta0)
    k.setflags(write=False)
    provenance = {"model": delta.model.model_id, "delta0": float(delta0)}
    if delta.model.kind is DivergenceKind.INDEX_POWER:
        provenance["gamma"] = float(delta.model.gamma)
    return KernelMatrix(k, float(delta0), provenance)


def prime_kernel(n: int, model: DivergenceModel, delta0: float = 1.0) -> KernelMatrix:
    """Shortcut: first ``n`` primes -> divergence -> kernel."""
    return coherence_kernel(divergence_matrix(first_n_primes(n), model), delta0)


def write_matrix_csv(path, matrix: np.ndarray) -> None:
    """Write a full matrix as headerless row-major CSV (17 significant digits)."""
    lines = [",".join(f"{v:.17g}" for v in row) for row in np.asarray(matrix)]
    atomic_write_text(path, "\n".join(lines) + "\n")

