"""Degree matrices, Laplacian generators and the order-2 / order-4 Hamiltonians."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import InvalidArgument
from .divergence import KernelMatrix


class Normalization(str, enum.Enum):
    SYMMETRIC = "symmetric-normalized"
    COMBINATORIAL = "combinatorial"


class Order(str, enum.Enum):
    TWO = "two"
    FOUR = "four"


@dataclass(frozen=True)
class OperatorSpec:
    normalization: Normalization
    order: Order

    def __post_init__(self):
        object.__setattr__(self, "normalization", Normalization(self.normalization))
        object.__setattr__(self, "order", Order(self.order))


@dataclass(frozen=True)
class OperatorMatrix:
    h: np.ndarray
    spec: OperatorSpec
    provenance: dict = field(default_factory=dict)

    @property
    def n(self) -> int:
        return int(self.h.shape[0])

    @property
    def trace(self) -> float:
        return float(np.trace(self.h))


def _freeze(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


def _symmetrize(a: np.ndarray) -> np.ndarray:
    return 0.5 * (a + a.T)


def degree_vector(kernel: KernelMatrix) -> np.ndarray:
    """Row sums ``d_i = sum_j K_ij``; strictly positive because ``K_ii = 1``."""
    return kernel.k.sum(axis=1)


def symmetric_normalization(kernel: KernelMatrix) -> np.ndarray:
    """``S = D^{-1/2} K D^{-1/2}``."""
    inv_sqrt = 1.0 / np.sqrt(degree_vector(kernel))
    return _symmetrize(kernel.k * inv_sqrt[:, None] * inv_sqrt[None, :])


def normalized_generator(kernel: KernelMatrix) -> OperatorMatrix:
    """``L = I - S``; spectrum in ``[0, 2]``."""
    s = symmetric_normalization(kernel)
    lap = _symmetrize(np.eye(kernel.n) - s)
    return OperatorMatrix(_freeze(lap), OperatorSpec(Normalization.SYMMETRIC, Order.TWO),
                          dict(kernel.provenance))


def combinatorial_laplacian(kernel: KernelMatrix) -> OperatorMatrix:
    """``L_c = D - K``.

    The diagonal is assembled as the sum of off-diagonal kernel entries so
    that each row sums to zero up to a single rounding step.
    """
    k = np.array(kernel.k, dtype=float)
    np.fill_diagonal(k, 0.0)
    lap = -k
    lap[np.diag_indices_from(lap)] = k.sum(axis=1)
    return OperatorMatrix(_freeze(_symmetrize(lap)), OperatorSpec(Normalization.COMBINATORIAL, Order.TWO),
                          dict(kernel.provenance))


def hamiltonian(generator: OperatorMatrix, order: Order | str = Order.FOUR) -> OperatorMatrix:
    """Return ``H = L`` (order two) or ``H = L @ L`` (order four)."""
    order = Order(order)
    if generator.spec.order is not Order.TWO:
        raise InvalidArgument("hamiltonian() expects an order-two generator")
    if order is Order.TWO:
        return generator
    h = _symmetrize(generator.h @ generator.h)
    return OperatorMatrix(_freeze(h), replace(generator.spec, order=Order.FOUR), dict(generator.provenance))


def build_operator(kernel: KernelMatrix, normalization: Normalization | str = Normalization.SYMMETRIC,
                   order: Order | str = Order.FOUR) -> OperatorMatrix:
    normalization = Normalization(normalization)
    if normalization is Normalization.SYMMETRIC:
        gen = normalized_generator(kernel)
    else:
        gen = combinatorial_laplacian(kernel)
    return hamiltonian(gen, order)


def quadratic_form(kernel: KernelMatrix, x: np.ndarray) -> float:
    """``1/2 sum_ij K_ij (x_i/sqrt(d_i) - x_j/sqrt(d_j))**2``, evaluated entrywise.

    Equals ``x @ L @ x`` for the normalized generator; kept as an independent
    route for checking it.
    """
    y = np.asarray(x, dtype=float) / np.sqrt(degree_vector(kernel))
    diff = y[:, None] - y[None, :]
    return 0.5 * float(np.sum(kernel.k * diff * diff))
