"""Independent numerical verification of the closed-form robustness.

Separability of a two-qubit state is decided exactly by positivity of the
partial transpose, so the relative robustness along any separable direction
can be located by bisection, and an upper bound on the absolute robustness
can be searched over explicit product-state mixtures.  Nothing here reuses
the closed form except as a candidate direction, which keeps the two routes
independent.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import robustness as robustness_mod
from .robustness import RankDeficient, RobustnessCertificate
from .states import DensityMatrix, is_separable_ppt, partial_transpose_matrix, ppt_min_eig
from .tolerances import DEFAULT, Tolerances


class NotSeparableDirection(ValueError):
    """The proposed mixing direction is itself entangled."""


class ImproperDirection(RuntimeError):
    """No bracket found: mixing never becomes separable (cannot happen for interior directions)."""


_BRACKET_CAP = 2.0 ** 16


@dataclass(frozen=True)
class ProductMixture:
    """Convex mixture of product pure states |a_n> x |b_n>.

    ``bloch_angles`` has one row (theta_a, phi_a, theta_b, phi_b) per term;
    each single-qubit factor is cos(theta/2)|u> + e^{i phi} sin(theta/2)|d>.
    Separable by construction.
    """

    weights: np.ndarray
    bloch_angles: np.ndarray

    def __post_init__(self):
        w = np.array(self.weights, dtype=float)
        ang = np.array(self.bloch_angles, dtype=float)
        if w.ndim != 1 or np.any(w < 0.0) or w.sum() <= 0.0:
            raise ValueError("weights must be nonnegative with positive sum")
        if ang.shape != (w.shape[0], 4):
            raise ValueError(f"bloch_angles must have shape ({w.shape[0]}, 4)")
        w = w / w.sum()
        w.setflags(write=False)
        ang.setflags(write=False)
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "bloch_angles", ang)

    def matrix(self) -> np.ndarray:
        kets = _product_kets(self.bloch_angles)
        return np.einsum("n,ni,nj->ij", self.weights, kets, kets.conj())

    def to_density(self) -> DensityMatrix:
        return DensityMatrix(self.matrix())


@dataclass(frozen=True)
class OracleResult:
    """Outcome of the absolute-robustness search.

    ``s_direction`` is the bisection value along the reference direction (the
    certificate vertex when available, otherwise the maximally mixed state);
    ``s_best`` is the smallest value found over every direction evaluated and
    is always an upper bound on the absolute robustness.  ``gap_to_formula``
    is s_formula - s_best (NaN when no closed form exists for the state); a
    clearly positive gap means the search found a strictly better separable
    direction than the closed-form vertex.
    """

    s_direction: float
    s_best: float
    best_direction: DensityMatrix
    evaluations: int
    converged: bool
    gap_to_formula: float

    def minimality_flag(self, threshold: float = DEFAULT.oracle_flag) -> bool:
        """True when the search beat the closed form by more than ``threshold``."""
        return bool(self.gap_to_formula > threshold)


def _product_kets(angles: np.ndarray) -> np.ndarray:
    tha, pha, thb, phb = angles.T
    a = np.stack([np.cos(tha / 2.0), np.exp(1j * pha) * np.sin(tha / 2.0)], axis=1)
    b = np.stack([np.cos(thb / 2.0), np.exp(1j * phb) * np.sin(thb / 2.0)], axis=1)
    return np.einsum("ni,nj->nij", a, b).reshape(-1, 4)


def bisect_relative_robustness(rho: DensityMatrix, rho_s: DensityMatrix,
                               tol: float = DEFAULT.bisect_default, *,
                               tolerances: Tolerances = DEFAULT) -> float:
    """Minimal s >= 0 such that (rho + s rho_s)/(1+s) is separable.

    The separable set is convex, so the PPT status along the ray is monotone
    and bisection is exact.  The returned s gives a PPT mixture while
    s - tol*(1+s) gives a non-PPT one (or s = 0).

    Raises
    ------
    NotSeparableDirection
        If ``rho_s`` itself fails the PPT test.
    ImproperDirection
        If no finite bracket exists (impossible for full-rank directions).
    """
    if tol < 1e-12:
        raise ValueError("bisection tolerance must be at least 1e-12")
    flag, min_eig = is_separable_ppt(rho_s, tolerances)
    if not flag:
        raise NotSeparableDirection(f"direction has PT eigenvalue {min_eig:.3e}")
    cut = -tolerances.ppt

    def ppt_at(s: float) -> bool:
        mix = (rho.matrix + s * rho_s.matrix) / (1.0 + s)
        return ppt_min_eig(mix) >= cut

    if ppt_at(0.0):
        return 0.0
    lo, hi = 0.0, 1.0
    while not ppt_at(hi):
        lo, hi = hi, 2.0 * hi
        if hi > _BRACKET_CAP:
            raise ImproperDirection(f"no separable mixture up to s = {_BRACKET_CAP}")
    while hi - lo > tol * (1.0 + hi):
        mid = 0.5 * (lo + hi)
        if ppt_at(mid):
            hi = mid
        else:
            lo = mid
    return hi


def _exact_relative_robustness(rho_pt: np.ndarray, direction_pt: np.ndarray) -> float:
    """min s >= 0 with rho_pt + s * direction_pt >= 0, via a regularized pencil.

    The tiny identity shift keeps the Cholesky factor well conditioned; it is
    equivalent to mixing the direction with an O(1e-10) amount of the
    maximally mixed state, which is still separable.
    """
    eps = 1e-10 * max(1.0, abs(np.trace(direction_pt).real))
    chol = np.linalg.cholesky(direction_pt + eps * np.eye(4))
    inv = np.linalg.inv(chol)
    pencil = inv @ rho_pt @ inv.conj().T
    return max(0.0, -float(np.linalg.eigvalsh(pencil)[0]))


def _coordinate_descent(rho_pt: np.ndarray, rng: np.random.Generator, *,
                        n_terms: int, sweeps: int, weight_step: float,
                        angle_step: float, counter: list):
    """Derivative-free refinement of a random product mixture.

    One parameter at a time, trying +step then -step, with both step sizes
    halved after each sweep.
    """
    weights = rng.dirichlet(np.ones(n_terms))
    angles = np.stack([
        np.arccos(rng.uniform(-1.0, 1.0, n_terms)),
        rng.uniform(0.0, 2.0 * np.pi, n_terms),
        np.arccos(rng.uniform(-1.0, 1.0, n_terms)),
        rng.uniform(0.0, 2.0 * np.pi, n_terms),
    ], axis=1)

    def evaluate(w, ang) -> float:
        counter[0] += 1
        kets = _product_kets(ang)
        direction = np.einsum("n,ni,nj->ij", w / w.sum(), kets, kets.conj())
        try:
            return _exact_relative_robustness(rho_pt, partial_transpose_matrix(direction))
        except np.linalg.LinAlgError:
            return math.inf

    best = evaluate(weights, angles)
    w_step, a_step = weight_step, angle_step
    for _ in range(sweeps):
        for n in range(n_terms):
            for delta in (w_step, -w_step):
                trial = weights.copy()
                trial[n] = max(0.0, trial[n] + delta)
                if trial.sum() <= 0.0:
                    continue
                value = evaluate(trial, angles)
                if value < best:
                    best, weights = value, trial
                    break
            for axis in range(4):
                for delta in (a_step, -a_step):
                    trial = angles.copy()
                    trial[n, axis] += delta
                    value = evaluate(weights, trial)
                    if value < best:
                        best, angles = value, trial
                        break
        w_step *= 0.5
        a_step *= 0.5
    return best, ProductMixture(weights, angles)


def minimize_absolute_robustness(rho: DensityMatrix, budget: int, seed: int, *,
                                 n_terms: int = 16, sweeps: int = 8,
                                 tolerances: Tolerances = DEFAULT) -> OracleResult:
    """Search for the cheapest separable direction washing out the entanglement.

    Initializes with the certificate vertex (when the closed form applies)
    and the maximally mixed state, then runs ``budget`` random-restart
    product mixtures refined by coordinate descent.  Restart r uses its own
    generator seeded with ``seed + r``, so results are reproducible and
    restarts are order independent.  The final winner is re-certified by a
    plain PPT bisection.
    """
    evaluations = 0
    if is_separable_ppt(rho, tolerances)[0]:
        return OracleResult(s_direction=0.0, s_best=0.0, best_direction=rho,
                            evaluations=1, converged=True, gap_to_formula=0.0)

    s_formula = math.nan
    candidates = []
    try:
        cert = robustness_mod.robustness(rho, tolerances)
        s_formula = cert.s
        reference = cert.rho_pp
    except RankDeficient:
        reference = DensityMatrix(np.eye(4) / 4.0)
    s_direction = bisect_relative_robustness(rho, reference, tolerances=tolerances)
    evaluations += 1
    candidates.append((s_direction, reference))

    mixed = DensityMatrix(np.eye(4) / 4.0)
    candidates.append((bisect_relative_robustness(rho, mixed, tolerances=tolerances), mixed))
    evaluations += 1

    rho_pt = partial_transpose_matrix(rho.matrix)
    counter = [0]
    for restart in range(budget):
        rng = np.random.default_rng(seed + restart)
        value, mixture = _coordinate_descent(
            rho_pt, rng, n_terms=n_terms, sweeps=sweeps,
            weight_step=0.1, angle_step=0.3, counter=counter,
        )
        if math.isfinite(value):
            candidates.append((value, mixture.to_density()))
    evaluations += counter[0]

    best_value, best_direction = min(candidates, key=lambda item: item[0])
    s_best = bisect_relative_robustness(rho, best_direction, tolerances=tolerances)
    evaluations += 1
    gap = s_formula - s_best if math.isfinite(s_formula) else math.nan
    return OracleResult(
        s_direction=float(s_direction),
        s_best=float(s_best),
        best_direction=best_direction,
        evaluations=int(evaluations),
        converged=True,
        gap_to_formula=float(gap),
    )


def verify_certificate(rho: DensityMatrix, certificate: RobustnessCertificate, *,
                       oracle_budget: int = 0, seed: int = 0,
                       tolerances: Tolerances = DEFAULT) -> dict:
    """Machine-readable check bundle for one certificate.

    Recomputes every certificate invariant, bisects along the witness vertex,
    and optionally runs the absolute-robustness search; the ``checks`` block
    holds one boolean per requirement and ``passed`` is their conjunction
    (the minimality probe is reported but never failed on).
    """
    s = certificate.s
    pseudo = float(np.max(np.abs(
        rho.matrix - (1.0 + s) * certificate.rho_p.matrix + s * certificate.rho_pp.matrix)))
    lam_p = certificate.rho_p_coords
    plane = float(abs(lam_p[0] - lam_p[1] - lam_p[2] - lam_p[3])) if s > 0.0 else 0.0
    flag_p, min_eig_p = is_separable_ppt(certificate.rho_p, tolerances)
    flag_pp, min_eig_pp = is_separable_ppt(certificate.rho_pp, tolerances)
    s_bisection = bisect_relative_robustness(rho, certificate.rho_pp, tolerances=tolerances)
    deviation = abs(s_bisection - s)

    checks = {
        "pseudomixture": pseudo <= tolerances.pseudomixture,
        "plane": plane <= tolerances.plane,
        "rho_p_separable": flag_p,
        "rho_pp_separable": flag_pp,
        "bisection_matches_formula": deviation <= tolerances.bisect_formula,
    }
    report = {
        "s_formula": float(s),
        "s_bisection": float(s_bisection),
        "bisection_formula_gap": float(deviation),
        "pseudomixture_residual": pseudo,
        "plane_residual": plane,
        "ppt_min_eig_rho_p": float(min_eig_p),
        "ppt_min_eig_rho_pp": float(min_eig_pp),
        "checks": checks,
        "passed": all(checks.values()),
    }
    if oracle_budget > 0:
        result = minimize_absolute_robustness(rho, oracle_budget, seed, tolerances=tolerances)
        report["oracle"] = {
            "s_best": result.s_best,
            "s_direction": result.s_direction,
            "gap_to_formula": result.gap_to_formula,
            "evaluations": result.evaluations,
            "minimality_flag": result.minimality_flag(tolerances.oracle_flag),
        }
    return report
