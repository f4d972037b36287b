"""Fixed-size complex matrix kernel: Hermitian eigensolver and Takagi factorization.

Both routines use cyclic Jacobi rotations, so identical input bits always
produce identical output bits, and the ordering/orientation conventions below
make every downstream report reproducible:

* eigenvalues and singular values are sorted in descending order with a
  stable tie-break;
* each eigenvector is rotated by a global phase so its largest-magnitude
  component is real and positive.
"""

from __future__ import annotations

import numpy as np

from .tolerances import DEFAULT, Tolerances


class NonHermitianInput(ValueError):
    """Input matrix deviates from M = M^dag beyond the accepted tolerance."""


class NonSymmetricInput(ValueError):
    """Input matrix deviates from S = S^T beyond the accepted tolerance."""


class NumericalFailure(RuntimeError):
    """A factorization did not reach its required residual."""


def _as_matrix(matrix, size: int = 4) -> np.ndarray:
    m = np.array(matrix, dtype=complex)
    if m.shape != (size, size):
        raise ValueError(f"expected a {size}x{size} matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m.real)) or not np.all(np.isfinite(m.imag)):
        raise ValueError("matrix entries must be finite")
    return m


def _jacobi_hermitian(matrix: np.ndarray, convergence: float, max_sweeps: int = 60):
    """Cyclic Jacobi diagonalization of a Hermitian matrix of any small size."""
    n = matrix.shape[0]
    a = matrix.copy()
    v = np.eye(n, dtype=complex)
    norm = np.linalg.norm(a, "fro")
    if norm == 0.0:
        return np.zeros(n), v
    for _ in range(max_sweeps):
        off = np.sqrt(np.sum(np.abs(a - np.diag(np.diag(a))) ** 2))
        if off <= convergence * norm:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                b = abs(a[p, q])
                if b <= 1e-18 * norm:
                    continue
                u = a[p, q] / b
                tau = (a[q, q].real - a[p, p].real) / (2.0 * b)
                # stable smaller root of t^2 + 2 tau t - 1 = 0
                if abs(tau) > 1e8:
                    t = 1.0 / (2.0 * tau)
                elif tau >= 0.0:
                    t = 1.0 / (tau + np.sqrt(1.0 + tau * tau))
                else:
                    t = -1.0 / (-tau + np.sqrt(1.0 + tau * tau))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                rot = np.array([[c, s], [-s * np.conj(u), c * np.conj(u)]])
                a[:, [p, q]] = a[:, [p, q]] @ rot
                a[[p, q], :] = rot.conj().T @ a[[p, q], :]
                v[:, [p, q]] = v[:, [p, q]] @ rot
    else:
        raise NumericalFailure("Jacobi sweep limit reached without convergence")
    evals = np.diag(a).real.copy()
    order = np.argsort(-evals, kind="stable")
    evals = evals[order]
    v = v[:, order]
    for i in range(n):
        j = int(np.argmax(np.abs(v[:, i])))
        pivot = v[j, i]
        if abs(pivot) > 0.0:
            v[:, i] *= np.conj(pivot) / abs(pivot)
    return evals, v


def hermitian_eig(matrix, tol: Tolerances = DEFAULT):
    """Eigendecomposition of a 4x4 Hermitian matrix.

    Returns ``(eigenvalues, eigenvectors)`` with eigenvalues descending and
    eigenvectors as orthonormal columns, deterministically oriented.

    Raises
    ------
    NonHermitianInput
        If ``max |M - M^dag|`` exceeds the hermiticity tolerance.
    """
    m = _as_matrix(matrix)
    dev = np.max(np.abs(m - m.conj().T))
    if dev > tol.hermiticity:
        raise NonHermitianInput(f"max |M - M^dag| = {dev:.3e} exceeds {tol.hermiticity:.3e}")
    h = 0.5 * (m + m.conj().T)
    return _jacobi_hermitian(h, tol.jacobi_convergence)


def _takagi_unitary_small(t: np.ndarray, convergence: float) -> np.ndarray:
    """Takagi vectors of a small complex symmetric block.

    Uses the real embedding [[Re T, Im T], [Im T, -Re T]]: eigenvectors with
    eigenvalue +d map to complex vectors w with T conj(w) = d w, and the top-k
    block of eigenvectors yields a unitary k x k factor.
    """
    k = t.shape[0]
    embedding = np.block([[t.real, t.imag], [t.imag, -t.real]]).astype(complex)
    _, g = _jacobi_hermitian(embedding, convergence)
    return g[:k, :k].real + 1j * g[k:, :k].real


def takagi(matrix, tol: Tolerances = DEFAULT):
    """Takagi factorization of a 4x4 complex symmetric matrix.

    Returns ``(w, d)`` with ``w`` unitary, ``d`` nonnegative and descending,
    and ``w @ S @ w.T = diag(d)``; the ``d`` equal the singular values of S.

    The route: diagonalize the Hermitian product S conj(S), fix one phase per
    column, and re-factor the symmetric restriction of S on any cluster of
    (near-)degenerate singular values, where single-column phases are not
    well defined.

    Raises
    ------
    NonSymmetricInput
        If ``max |S - S^T|`` exceeds the symmetry tolerance.
    """
    m = _as_matrix(matrix)
    dev = np.max(np.abs(m - m.T))
    if dev > tol.symmetry:
        raise NonSymmetricInput(f"max |S - S^T| = {dev:.3e} exceeds {tol.symmetry:.3e}")
    s = 0.5 * (m + m.T)
    n = s.shape[0]

    gram = s @ np.conj(s)
    evals, v = _jacobi_hermitian(gram, tol.jacobi_convergence)
    d = np.sqrt(np.clip(evals, 0.0, None))
    scale = max(d[0], 1.0)
    cluster_gap = tol.takagi_cluster * scale
    zero_level = tol.takagi_zero * scale

    clusters = []
    start = 0
    for i in range(1, n):
        if d[i - 1] - d[i] > cluster_gap:
            clusters.append(range(start, i))
            start = i
    clusters.append(range(start, n))
    for idx in clusters:
        idx = list(idx)
        if len(idx) < 2 or d[idx].mean() <= zero_level:
            continue
        vc = v[:, idx]
        restriction = vc.conj().T @ s @ np.conj(vc)
        v[:, idx] = vc @ _takagi_unitary_small(restriction, tol.jacobi_convergence)

    # phase polish per column; |diagonal| refines d near the zero level
    refined = np.zeros(n)
    for i in range(n):
        c = v[:, i].conj() @ s @ np.conj(v[:, i])
        if abs(c) > zero_level * 1e-3:
            v[:, i] *= np.exp(0.5j * np.angle(c))
        refined[i] = abs(c)
    order = np.argsort(-refined, kind="stable")
    return v[:, order].conj().T, refined[order]
