"""Special decomposition of two-qubit states and the quantities derived from it.

A state rho always admits a decomposition rho = sum_i |x_i><x_i| whose
subnormalized vectors satisfy <x_i|~x_j> = lambda_i delta_ij, where ~ is the
spin flip and the lambda_i are the descending square roots of the eigenvalues
of rho rho~.  The construction here: spectrally decompose rho into
subnormalized eigenvectors |v_i>, form the complex symmetric Gram matrix
tau_ij = <v_i|~v_j>, find a unitary U with U tau U^T = diag(lambda) via the
Takagi kernel, and set |x_i> = sum_j conj(U_ij) |v_j>.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import numerics, states
from .numerics import NumericalFailure
from .states import DensityMatrix
from .tolerances import DEFAULT, Tolerances


@dataclass(frozen=True)
class WoottersDecomposition:
    """Decomposition data for one state.

    Attributes
    ----------
    lambdas : descending nonnegative weights; lambdas**2 are the eigenvalues
        of rho rho~.
    x : 4x4 complex array whose columns are the subnormalized vectors |x_i>;
        columns at positions >= rank are exactly zero.
    k_norm : K_i = <x'_i|x'_i> with |x'_i> = |x_i>/sqrt(lambda_i); NaN where
        the rank cuts off.
    p_coord : tetrahedron coordinates P_i = <x_i|x_i> = lambda_i K_i.
    concurrence : max(0, lambda_1 - lambda_2 - lambda_3 - lambda_4).
    rank : number of lambdas above the relative rank threshold.
    """

    lambdas: np.ndarray
    x: np.ndarray
    k_norm: np.ndarray
    p_coord: np.ndarray
    concurrence: float
    rank: int

    def x_prime(self) -> np.ndarray:
        """Columns |x'_i> = |x_i>/sqrt(lambda_i); zero beyond the rank."""
        xp = np.zeros_like(self.x)
        for i in range(self.rank):
            xp[:, i] = self.x[:, i] / math.sqrt(self.lambdas[i])
        return xp

    def to_report(self) -> dict:
        return {
            "lambdas": [float(v) for v in self.lambdas],
            "k_norm": [None if math.isnan(v) else float(v) for v in self.k_norm],
            "p_coord": [float(v) for v in self.p_coord],
            "concurrence": float(self.concurrence),
            "rank": int(self.rank),
            "vectors": [
                {"re": [float(c.real) for c in self.x[:, i]],
                 "im": [float(c.imag) for c in self.x[:, i]]}
                for i in range(4)
            ],
        }


def decompose(rho: DensityMatrix, tol: Tolerances = DEFAULT) -> WoottersDecomposition:
    """Construct the tilde-orthogonal decomposition of ``rho``.

    Raises
    ------
    NumericalFailure
        If the Takagi residual of the Gram matrix exceeds the failure gate.
    """
    mu, vecs = numerics.hermitian_eig(rho.matrix, tol)
    sub = vecs * np.sqrt(np.clip(mu, 0.0, None))[None, :]
    tau = np.conj(sub.T @ states.SIGMA_YY @ sub)  # tau_ij = <v_i|~v_j>, complex symmetric
    u, lambdas = numerics.takagi(tau, tol)
    residual = np.max(np.abs(u @ tau @ u.T - np.diag(lambdas)))
    if residual > tol.decompose_failure:
        raise NumericalFailure(f"factorization residual {residual:.3e} exceeds {tol.decompose_failure:.3e}")

    x = sub @ u.conj().T
    eps_rank = tol.rank_threshold * max(lambdas[0], 1e-30)
    rank = int(np.sum(lambdas > eps_rank))
    x[:, rank:] = 0.0
    p_coord = np.sum(np.abs(x) ** 2, axis=0)
    k_norm = np.full(4, np.nan)
    k_norm[:rank] = p_coord[:rank] / lambdas[:rank]
    conc = max(0.0, lambdas[0] - lambdas[1] - lambdas[2] - lambdas[3])
    for arr in (lambdas, x, k_norm, p_coord):
        arr.setflags(write=False)
    return WoottersDecomposition(
        lambdas=lambdas, x=x, k_norm=k_norm, p_coord=p_coord,
        concurrence=float(conc), rank=rank,
    )


def concurrence(rho: DensityMatrix, tol: Tolerances = DEFAULT) -> float:
    """Entanglement monotone in [0, 1]; invariant under local unitaries."""
    return decompose(rho, tol).concurrence


def tilde_norm(matrix: np.ndarray, tol: Tolerances = DEFAULT) -> float:
    """sqrt |tr(M M~)| for a Hermitian 4x4 matrix.

    Invariant under simultaneous local-unitary conjugation of M.  The
    absolute value keeps the result real for indefinite M.
    """
    m = numerics._as_matrix(matrix)
    return math.sqrt(abs(np.trace(m @ states.tilde_matrix(m)).real))


def tilde_distance(a: DensityMatrix, b: DensityMatrix, tol: Tolerances = DEFAULT) -> float:
    """Distance sqrt |tr((a-b)(a~-b~))|; zero iff a = b, locally invariant."""
    return tilde_norm(a.matrix - b.matrix, tol)
