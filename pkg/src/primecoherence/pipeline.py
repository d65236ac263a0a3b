"""End-to-end construction: model -> divergence -> kernel -> operator -> spectrum."""

from __future__ import annotations

from typing import Optional

from .controls import bilaplacian_control, gue_divergence, gue_eigenvalues
from .divergence import DivergenceKind, DivergenceModel, KernelMatrix, coherence_kernel, divergence_matrix
from .operators import Normalization, Order, build_operator
from .primes import first_n_primes
from .spectrum import SpectralSystem, symmetric_eigenvalues


def build_kernel(model: str | DivergenceModel, n: int, delta0: float = 1.0, *, gamma: float = 1.0,
                 literal_diagonal: bool = False, seed: Optional[int] = None) -> KernelMatrix:
    """Kernel for a prime model or, with ``model="gue"``, for a seeded GUE draw of size ``n``."""
    if model == "gue":
        draw = gue_eigenvalues(n, 0 if seed is None else seed)
        kernel = coherence_kernel(gue_divergence(draw), delta0)
        kernel.provenance.update(model="gue", seed=draw.seed, delta_bulk=draw.delta_bulk)
        return kernel
    if not isinstance(model, DivergenceModel):
        kind = DivergenceKind(model)
        model = DivergenceModel(kind, gamma=gamma if kind is DivergenceKind.INDEX_POWER else 1.0,
                                literal_diagonal=literal_diagonal)
    return coherence_kernel(divergence_matrix(first_n_primes(n), model), delta0)


def spectrum_for(model: str | DivergenceModel, n: int, delta0: float = 1.0, *,
                 normalization: Normalization | str = Normalization.SYMMETRIC,
                 order: Order | str = Order.FOUR, gamma: float = 1.0, literal_diagonal: bool = False,
                 seed: Optional[int] = None) -> SpectralSystem:
    """Ascending Hamiltonian spectrum for one configuration.

    ``model="bilaplacian"`` returns the analytic 1-D bi-Laplacian control
    and ignores the kernel arguments.
    """
    if model == "bilaplacian":
        return bilaplacian_control(n)
    kernel = build_kernel(model, n, delta0, gamma=gamma, literal_diagonal=literal_diagonal, seed=seed)
    op = build_operator(kernel, normalization, order)
    op.provenance.update(n=int(n), normalization=Normalization(normalization).value, order=Order(order).value)
    return symmetric_eigenvalues(op)
