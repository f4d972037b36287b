"""Shared helpers for the test suite."""

import numpy as np

from qrobust import sample_state
from qrobust.states import SIGMA_YY


def ginibre_corpus(n, base=0):
    """The standard seeded corpus: one generator per index, seeds base..base+n-1."""
    return [sample_state("ginibre", base + i) for i in range(n)]


def random_hermitian(rng):
    g = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    return g + g.conj().T


def random_symmetric(rng):
    g = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    return g + g.T


def concurrence_by_spectrum(matrix):
    """Independent concurrence route: eigenvalues of rho rho~ via LAPACK."""
    flipped = SIGMA_YY @ np.conj(matrix) @ SIGMA_YY
    ev = np.linalg.eigvals(matrix @ flipped)
    lam = np.sort(np.sqrt(np.abs(ev.real)))[::-1]
    return max(0.0, lam[0] - lam[1] - lam[2] - lam[3])
