"""Spectral observables of divergence-kernel Hamiltonians on the primes."""

__version__ = "0.1.0"

from .controls import (
    bilaplacian_control,
    gue_divergence,
    gue_eigenvalues,
    ks_distance_wigner,
    nn_spacings,
    rescale_eigenvalues,
)
from .divergence import DivergenceKind, DivergenceModel, coherence_kernel, divergence_matrix
from .errors import InsufficientData, InvalidArgument, NumericalFailure
from .fits import fit_eigenvalue_growth, fit_entropy_exponent, fit_pcp
from .observables import TimeGrid, gibbs_entropy, heat_trace, heat_trace_deficit, profile, spectral_dimension_exact
from .operators import combinatorial_laplacian, degree_vector, hamiltonian, normalized_generator
from .pipeline import spectrum_for
from .primes import first_n_primes
from .spectrum import SpectralSystem, counting_function, symmetric_eigenvalues

__all__ = [
    "DivergenceKind", "DivergenceModel", "InsufficientData", "InvalidArgument", "NumericalFailure",
    "SpectralSystem", "TimeGrid", "bilaplacian_control", "coherence_kernel", "combinatorial_laplacian",
    "counting_function", "degree_vector", "divergence_matrix", "first_n_primes", "fit_eigenvalue_growth",
    "fit_entropy_exponent", "fit_pcp", "gibbs_entropy", "gue_divergence", "gue_eigenvalues", "hamiltonian",
    "heat_trace", "heat_trace_deficit", "ks_distance_wigner", "nn_spacings", "normalized_generator", "profile",
    "rescale_eigenvalues", "spectral_dimension_exact", "spectrum_for", "symmetric_eigenvalues",
]
