"""Dense symmetric eigendecomposition and the eigenvalue counting function."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import InvalidArgument, NumericalFailure
from .io import atomic_write_text
from .operators import OperatorMatrix, OperatorSpec

SYMMETRY_RTOL = 1e-10
NEGATIVE_TOL = 1e-9
RESIDUAL_RTOL = 1e-8
RESIDUAL_SAMPLES = 5


@dataclass(frozen=True)
class SpectralSystem:
    """Ascending eigenvalues of a Hamiltonian plus where they came from."""

    eigenvalues: np.ndarray
    spec: Optional[OperatorSpec] = None
    provenance: dict = field(default_factory=dict)

    def __post_init__(self):
        ev = np.array(self.eigenvalues, dtype=float)
        if ev.ndim != 1:
            raise InvalidArgument("eigenvalues must be a 1-d sequence")
        if ev.size > 1 and np.any(np.diff(ev) < 0):
            raise InvalidArgument("eigenvalues must be sorted ascending")
        ev.setflags(write=False)
        object.__setattr__(self, "eigenvalues", ev)

    @classmethod
    def from_values(cls, values, spec=None, provenance=None) -> "SpectralSystem":
        return cls(np.sort(np.asarray(values, dtype=float)), spec, dict(provenance or {}))

    @property
    def n(self) -> int:
        return int(self.eigenvalues.shape[0])


def symmetric_eigenvalues(m: OperatorMatrix, negative_tol: float = NEGATIVE_TOL) -> SpectralSystem:
    """Eigenvalues of a symmetric PSD operator, ascending.

    A handful of eigenpairs are checked against ``||Mv - lambda v||``; the
    eigenvectors are dropped afterwards. Values in ``[-negative_tol, 0)`` are
    rounding noise and clamp to zero; anything more negative is an error.
    """
    h = np.asarray(m.h, dtype=float)
    if h.ndim != 2 or h.shape[0] != h.shape[1]:
        raise InvalidArgument(f"expected a square matrix, got shape {h.shape}")
    scale = float(np.max(np.abs(h))) if h.size else 0.0
    asym = float(np.max(np.abs(h - h.T))) if h.size else 0.0
    if asym > SYMMETRY_RTOL * max(scale, np.finfo(float).tiny):
        raise InvalidArgument(f"matrix is not symmetric (max |M - M^T| = {asym:.3e})")

    try:
        values, vectors = np.linalg.eigh(h)
    except np.linalg.LinAlgError as exc:
        raise NumericalFailure(f"eigensolver did not converge: {exc}", m.provenance) from exc
    if not np.all(np.isfinite(values)):
        raise NumericalFailure("eigensolver returned non-finite eigenvalues", m.provenance)

    n = values.size
    if n:
        norm = float(np.max(np.abs(values)))  # spectral norm of a symmetric matrix
        picks = np.unique(np.linspace(0, n - 1, min(RESIDUAL_SAMPLES, n)).round().astype(int))
        for i in picks:
            v = vectors[:, i]
            res = float(np.linalg.norm(h @ v - values[i] * v))
            if res > RESIDUAL_RTOL * norm:
                raise NumericalFailure(f"eigenpair {i} residual {res:.3e} exceeds tolerance", m.provenance)
    del vectors

    if n and values[0] < -negative_tol:
        raise NumericalFailure(f"operator is not positive semidefinite (min eigenvalue {values[0]:.3e})",
                               m.provenance)
    values = np.where(values < 0.0, 0.0, values)
    return SpectralSystem(values, m.spec, dict(m.provenance))


def counting_function(s: SpectralSystem, lam: float) -> int:
    """``#{k : lambda_k <= lam}``."""
    return int(np.searchsorted(s.eigenvalues, lam, side="right"))


def write_eigenvalues_csv(path, s: SpectralSystem) -> None:
    atomic_write_text(path, "".join(f"{v:.17g}\n" for v in s.eigenvalues))
